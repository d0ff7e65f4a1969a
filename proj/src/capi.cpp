#include "pencil_resolvent.h"

#include "pencilres/document.hpp"
#include "pencilres/runner.hpp"

#include <json.hpp>

#include <cstdlib>
#include <cstring>

using namespace pencilres;

namespace {

thread_local std::string g_last_error;

pr_status status_from(Errc c) {
  switch (c) {
    case Errc::invalid_shape: return PR_ERR_INVALID_SHAPE;
    case Errc::invalid_params: return PR_ERR_INVALID_PARAMS;
    case Errc::empty_window: return PR_ERR_EMPTY_WINDOW;
    case Errc::missing_coefficient: return PR_ERR_MISSING_COEFFICIENT;
    case Errc::singular_shift: return PR_ERR_SINGULAR_SHIFT;
    case Errc::blocked: return PR_ERR_BLOCKED;
    case Errc::empty_subspace: return PR_ERR_EMPTY_SUBSPACE;
    case Errc::not_complementary: return PR_ERR_NOT_COMPLEMENTARY;
    case Errc::not_invertible_on_subspace: return PR_ERR_NOT_INVERTIBLE_ON_SUBSPACE;
    case Errc::singular_node: return PR_ERR_SINGULAR_NODE;
    case Errc::outside_annulus: return PR_ERR_OUTSIDE_ANNULUS;
    case Errc::resample_limit: return PR_ERR_RESAMPLE_LIMIT;
    case Errc::no_reference: return PR_ERR_NO_REFERENCE;
    case Errc::parse_error: return PR_ERR_PARSE;
    case Errc::io_error: return PR_ERR_IO;
    case Errc::internal: return PR_ERR_INTERNAL;
  }
  return PR_ERR_INTERNAL;
}

template <typename Fn>
pr_status guarded(Fn&& fn) {
  try {
    fn();
    return PR_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PR_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return PR_ERR_INTERNAL;
  }
}

Tolerances to_tol(const pr_tolerances* tol) {
  if (!tol) return Tolerances{};
  Tolerances t{tol->rank_rel, tol->residual_abs, tol->angle_tol};
  t.validate();
  return t;
}

Annulus to_annulus(pr_annulus a) {
  Annulus out{a.inner, a.outer};
  out.validate();
  return out;
}

void copy_out(const Mat& m, double* out) {
  Index n = m.rows();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      out[2 * (i * m.cols() + j)] = m(i, j).real();
      out[2 * (i * m.cols() + j) + 1] = m(i, j).imag();
    }
}

Mat copy_in(int32_t n, const double* data, const char* label) {
  if (n <= 0) fail(Errc::invalid_shape, "dimension must be positive");
  if (!data) fail(Errc::invalid_params, std::string(label) + " buffer is null");
  Mat m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      m(i, j) = Complex(data[2 * (i * n + j)], data[2 * (i * n + j) + 1]);
  ensure_finite(m, label);
  return m;
}

FamilySpec spec_from_json(const char* family, const char* pencil_json) {
  if (!family) fail(Errc::invalid_params, "family name is null");
  nlohmann::json pencil =
      pencil_json ? nlohmann::json::parse(pencil_json, nullptr, false) : nlohmann::json::object();
  if (pencil.is_discarded()) fail(Errc::parse_error, "pencil_json is not valid JSON");
  pencil["family"] = family;
  nlohmann::json doc;
  doc["pencil"] = pencil;
  PencilDocument parsed = parse_document(doc.dump());
  if (!parsed.family) fail(Errc::parse_error, "family spec did not parse");
  return *parsed.family;
}

}  // namespace

struct pr_pencil {
  OperatorPencil value;
};
struct pr_decomposition {
  SpectralDecomposition value;
};
struct pr_basic_solution {
  BasicSolution value;
};
struct pr_expansion {
  LaurentExpansion value;
};

extern "C" {

const char* pr_status_name(pr_status status) {
  switch (status) {
    case PR_OK: return "OK";
    case PR_ERR_INVALID_SHAPE: return errc_name(Errc::invalid_shape);
    case PR_ERR_INVALID_PARAMS: return errc_name(Errc::invalid_params);
    case PR_ERR_EMPTY_WINDOW: return errc_name(Errc::empty_window);
    case PR_ERR_MISSING_COEFFICIENT: return errc_name(Errc::missing_coefficient);
    case PR_ERR_SINGULAR_SHIFT: return errc_name(Errc::singular_shift);
    case PR_ERR_BLOCKED: return errc_name(Errc::blocked);
    case PR_ERR_EMPTY_SUBSPACE: return errc_name(Errc::empty_subspace);
    case PR_ERR_NOT_COMPLEMENTARY: return errc_name(Errc::not_complementary);
    case PR_ERR_NOT_INVERTIBLE_ON_SUBSPACE:
      return errc_name(Errc::not_invertible_on_subspace);
    case PR_ERR_SINGULAR_NODE: return errc_name(Errc::singular_node);
    case PR_ERR_OUTSIDE_ANNULUS: return errc_name(Errc::outside_annulus);
    case PR_ERR_RESAMPLE_LIMIT: return errc_name(Errc::resample_limit);
    case PR_ERR_NO_REFERENCE: return errc_name(Errc::no_reference);
    case PR_ERR_PARSE: return errc_name(Errc::parse_error);
    case PR_ERR_IO: return errc_name(Errc::io_error);
    case PR_ERR_INTERNAL: return errc_name(Errc::internal);
  }
  return "Unknown";
}

int32_t pr_status_exit_code(pr_status status) {
  if (status == PR_OK) return 0;
  switch (status) {
    case PR_ERR_PARSE: return exit_code_for(Errc::parse_error);
    case PR_ERR_INVALID_PARAMS: return exit_code_for(Errc::invalid_params);
    case PR_ERR_INVALID_SHAPE: return exit_code_for(Errc::invalid_shape);
    case PR_ERR_NOT_COMPLEMENTARY: return exit_code_for(Errc::not_complementary);
    case PR_ERR_SINGULAR_NODE: return exit_code_for(Errc::singular_node);
    case PR_ERR_OUTSIDE_ANNULUS: return exit_code_for(Errc::outside_annulus);
    case PR_ERR_BLOCKED: return exit_code_for(Errc::blocked);
    case PR_ERR_NOT_INVERTIBLE_ON_SUBSPACE:
      return exit_code_for(Errc::not_invertible_on_subspace);
    case PR_ERR_RESAMPLE_LIMIT: return exit_code_for(Errc::resample_limit);
    case PR_ERR_NO_REFERENCE: return exit_code_for(Errc::no_reference);
    case PR_ERR_IO: return exit_code_for(Errc::io_error);
    case PR_ERR_SINGULAR_SHIFT: return exit_code_for(Errc::singular_shift);
    default: return 1;
  }
}

const char* pr_last_error(void) { return g_last_error.c_str(); }

void pr_tolerances_default(pr_tolerances* out) {
  if (!out) return;
  Tolerances t;
  out->rank_rel = t.rank_rel;
  out->residual_abs = t.residual_abs;
  out->angle_tol = t.angle_tol;
}

pr_status pr_pencil_create(int32_t n, const double* a0, const double* a1, pr_pencil** out) {
  return guarded([&] {
    if (!out) fail(Errc::invalid_params, "out is null");
    OperatorPencil p{copy_in(n, a0, "a0"), copy_in(n, a1, "a1"), std::nullopt};
    p.validate();
    *out = new pr_pencil{std::move(p)};
  });
}

pr_status pr_pencil_from_family(const char* family, const char* pencil_json, pr_pencil** out) {
  return guarded([&] {
    if (!out) fail(Errc::invalid_params, "out is null");
    *out = new pr_pencil{build(spec_from_json(family, pencil_json))};
  });
}

void pr_pencil_free(pr_pencil* p) { delete p; }

int32_t pr_pencil_dim(const pr_pencil* p) {
  return p ? static_cast<int32_t>(p->value.dim()) : 0;
}

pr_status pr_pencil_matrix(const pr_pencil* p, int32_t which, double* out) {
  return guarded([&] {
    if (!p || !out) fail(Errc::invalid_params, "null argument");
    if (which != 0 && which != 1) fail(Errc::invalid_params, "which must be 0 or 1");
    copy_out(which == 0 ? p->value.a0 : p->value.a1, out);
  });
}

pr_status pr_pencil_eval(const pr_pencil* p, double re, double im, double* out) {
  return guarded([&] {
    if (!p || !out) fail(Errc::invalid_params, "null argument");
    copy_out(eval_pencil(p->value, Complex(re, im)), out);
  });
}

pr_status pr_pencil_flip(const pr_pencil* p, pr_pencil** out) {
  return guarded([&] {
    if (!p || !out) fail(Errc::invalid_params, "null argument");
    *out = new pr_pencil{flip_pencil(p->value)};
  });
}

pr_status pr_ascent_descent(const pr_pencil* p, int32_t probe_limit, const pr_tolerances* tol,
                            int32_t* ascent, int32_t* descent) {
  return guarded([&] {
    if (!p || !ascent || !descent) fail(Errc::invalid_params, "null argument");
    AscentDescentReport rep = ascent_descent(p->value, probe_limit, to_tol(tol));
    *ascent = rep.ascent ? static_cast<int32_t>(*rep.ascent) : -1;
    *descent = rep.descent ? static_cast<int32_t>(*rep.descent) : -1;
  });
}

pr_status pr_generating_subspace(const pr_pencil* p, int32_t kind, int32_t depth,
                                 double rate_threshold, const pr_tolerances* tol,
                                 int32_t* dim_out, double* basis_out, int32_t basis_capacity) {
  return guarded([&] {
    if (!p || !dim_out) fail(Errc::invalid_params, "null argument");
    if (kind != 0 && kind != 1) fail(Errc::invalid_params, "kind must be 0 or 1");
    Subspace s = generating_subspace(p->value,
                                     kind == 0 ? JordanKind::singular : JordanKind::regular,
                                     depth, rate_threshold, to_tol(tol));
    *dim_out = static_cast<int32_t>(s.dim());
    if (basis_out) {
      if (basis_capacity < s.dim())
        fail(Errc::invalid_params, "basis buffer holds fewer columns than the subspace");
      for (Index c = 0; c < s.dim(); ++c)
        for (Index r = 0; r < s.ambient_dim; ++r) {
          basis_out[2 * (c * s.ambient_dim + r)] = s.basis(r, c).real();
          basis_out[2 * (c * s.ambient_dim + r) + 1] = s.basis(r, c).imag();
        }
    }
  });
}

pr_status pr_decompose(const pr_pencil* p, pr_annulus target, int32_t depth,
                       const pr_tolerances* tol, pr_decomposition** out) {
  return guarded([&] {
    if (!p || !out) fail(Errc::invalid_params, "null argument");
    Tolerances t = to_tol(tol);
    Annulus a = to_annulus(target);
    Subspace xs = generating_subspace(p->value, JordanKind::singular, depth,
                                      singular_rate_threshold(a), t);
    Subspace xr = generating_subspace(p->value, JordanKind::regular, depth,
                                      regular_rate_threshold(a), t);
    *out = new pr_decomposition{make_decomposition(p->value, xs, xr, t)};
  });
}

void pr_decomposition_free(pr_decomposition* d) { delete d; }

pr_status pr_decomposition_dims(const pr_decomposition* d, int32_t* dim_xs, int32_t* dim_xr) {
  return guarded([&] {
    if (!d || !dim_xs || !dim_xr) fail(Errc::invalid_params, "null argument");
    *dim_xs = static_cast<int32_t>(d->value.xs.dim());
    *dim_xr = static_cast<int32_t>(d->value.xr.dim());
  });
}

pr_status pr_decomposition_matrix(const pr_decomposition* d, int32_t which, double* out) {
  return guarded([&] {
    if (!d || !out) fail(Errc::invalid_params, "null argument");
    switch (which) {
      case 0: copy_out(d->value.p, out); break;
      case 1: copy_out(d->value.pc, out); break;
      case 2: copy_out(d->value.q, out); break;
      case 3: copy_out(d->value.qc, out); break;
      default: fail(Errc::invalid_params, "which must be in 0..3");
    }
  });
}

pr_status pr_theorem2_deviation(const pr_pencil* p, const pr_decomposition* d,
                                double* max_deviation) {
  return guarded([&] {
    if (!p || !d || !max_deviation) fail(Errc::invalid_params, "null argument");
    *max_deviation = verify_theorem2(p->value, d->value, Tolerances{}).max_deviation();
  });
}

pr_status pr_solve_basic(const pr_pencil* p, const pr_decomposition* d,
                         const pr_tolerances* tol, pr_basic_solution** out) {
  return guarded([&] {
    if (!p || !d || !out) fail(Errc::invalid_params, "null argument");
    *out = new pr_basic_solution{solve_basic(p->value, d->value, to_tol(tol))};
  });
}

void pr_basic_solution_free(pr_basic_solution* b) { delete b; }

pr_status pr_basic_solution_matrix(const pr_basic_solution* b, int32_t which, double* out) {
  return guarded([&] {
    if (!b || !out) fail(Errc::invalid_params, "null argument");
    if (which != 0 && which != 1) fail(Errc::invalid_params, "which must be 0 or 1");
    copy_out(which == 0 ? b->value.r_m1 : b->value.r_0, out);
  });
}

pr_status pr_basic_solution_annulus(const pr_basic_solution* b, pr_annulus* out) {
  return guarded([&] {
    if (!b || !out) fail(Errc::invalid_params, "null argument");
    out->inner = b->value.annulus.inner;
    out->outer = b->value.annulus.outer;
  });
}

pr_status pr_closed_form_eval(const pr_basic_solution* b, const pr_pencil* p, double re,
                              double im, double* out) {
  return guarded([&] {
    if (!b || !p || !out) fail(Errc::invalid_params, "null argument");
    copy_out(closed_form_resolvent(b->value, p->value, Complex(re, im)), out);
  });
}

pr_status pr_laurent_coeffs(const pr_basic_solution* b, const pr_pencil* p, int32_t k_max,
                            int32_t l_max, pr_expansion** out) {
  return guarded([&] {
    if (!b || !p || !out) fail(Errc::invalid_params, "null argument");
    *out = new pr_expansion{laurent_coeffs(b->value, p->value, k_max, l_max)};
  });
}

pr_status pr_contour_oracle(const pr_pencil* p, double radius, int32_t nodes, int32_t j_min,
                            int32_t j_max, const pr_tolerances* tol, pr_expansion** out) {
  return guarded([&] {
    if (!p || !out) fail(Errc::invalid_params, "null argument");
    OracleConfig cfg{radius, nodes};
    *out = new pr_expansion{contour_oracle(p->value, cfg, j_min, j_max, to_tol(tol))};
  });
}

void pr_expansion_free(pr_expansion* e) { delete e; }

pr_status pr_expansion_range(const pr_expansion* e, int32_t* j_min, int32_t* j_max) {
  return guarded([&] {
    if (!e || !j_min || !j_max) fail(Errc::invalid_params, "null argument");
    *j_min = static_cast<int32_t>(-e->value.k_max);
    *j_max = static_cast<int32_t>(e->value.l_max);
  });
}

pr_status pr_expansion_coeff(const pr_expansion* e, int32_t j, double* out) {
  return guarded([&] {
    if (!e || !out) fail(Errc::invalid_params, "null argument");
    copy_out(e->value.at(j), out);
  });
}

pr_status pr_expansion_annulus(const pr_expansion* e, pr_annulus* out) {
  return guarded([&] {
    if (!e || !out) fail(Errc::invalid_params, "null argument");
    out->inner = e->value.annulus.inner;
    out->outer = e->value.annulus.outer;
  });
}

pr_status pr_expansion_eval(const pr_expansion* e, double re, double im, double* out,
                            double* tail_bound) {
  return guarded([&] {
    if (!e || !out) fail(Errc::invalid_params, "null argument");
    double tail = 0.0;
    Mat v = eval_laurent(e->value, Complex(re, im), &tail);
    copy_out(v, out);
    if (tail_bound) *tail_bound = tail;
  });
}

pr_status pr_fundamental_residuals(const pr_pencil* p, const pr_expansion* e,
                                   int32_t interior_margin, double* max_left,
                                   double* max_right) {
  return guarded([&] {
    if (!p || !e || !max_left || !max_right) fail(Errc::invalid_params, "null argument");
    ResidualReport rep = fundamental_residuals(p->value, e->value, interior_margin);
    *max_left = rep.max_left;
    *max_right = rep.max_right;
  });
}

pr_status pr_expansion_growth_csv(const pr_expansion* e, const char* path) {
  return guarded([&] {
    if (!e || !path) fail(Errc::invalid_params, "null argument");
    emit_growth_csv(e->value, path);
  });
}

pr_status pr_reference_matrix(const char* family, const char* pencil_json, int32_t region,
                              int32_t which, double* out) {
  return guarded([&] {
    if (!out) fail(Errc::invalid_params, "out is null");
    if (region != 0 && region != 1) fail(Errc::invalid_params, "region must be 0 or 1");
    ReferenceBundle ref = analytic_reference(spec_from_json(family, pencil_json),
                                             region == 0 ? Region::near_zero
                                                         : Region::near_infinity);
    switch (which) {
      case 0: copy_out(ref.p, out); break;
      case 1: copy_out(ref.pc, out); break;
      case 2: copy_out(ref.q, out); break;
      case 3: copy_out(ref.qc, out); break;
      case 4: copy_out(ref.r_m1, out); break;
      case 5: copy_out(ref.r_0, out); break;
      default: fail(Errc::invalid_params, "which must be in 0..5");
    }
  });
}

pr_status pr_run_command(const char* command, const char* document_json,
                         const char* options_json, char** report_out, int32_t* exit_code) {
  return guarded([&] {
    if (!command || !document_json || !report_out || !exit_code)
      fail(Errc::invalid_params, "null argument");
    PencilDocument doc = parse_document(document_json);
    RunOptions opt;
    opt.command = command;
    bool json_output = false;
    if (options_json) {
      nlohmann::json o = nlohmann::json::parse(options_json, nullptr, false);
      if (o.is_discarded()) fail(Errc::parse_error, "options_json is not valid JSON");
      if (o.contains("region")) {
        std::string r = o["region"].get<std::string>();
        if (r == "near-zero")
          opt.region = Region::near_zero;
        else if (r == "near-infinity")
          opt.region = Region::near_infinity;
        else
          fail(Errc::parse_error, "region must be near-zero or near-infinity");
      }
      opt.probe_limit = o.value("probe_limit", opt.probe_limit);
      opt.depth = o.value("depth", opt.depth);
      opt.k_max = o.value("k_max", opt.k_max);
      opt.l_max = o.value("l_max", opt.l_max);
      opt.nodes = o.value("nodes", opt.nodes);
      opt.out_path = o.value("out", opt.out_path);
      json_output = o.value("json", false);
    }
    Report rep = run_command(doc, opt);
    std::string text = json_output ? rep.render_json() : rep.render_text();
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) fail(Errc::internal, "out of memory");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *report_out = buf;
    *exit_code = rep.exit_code();
  });
}

void pr_string_free(char* s) { std::free(s); }

}  // extern "C"
