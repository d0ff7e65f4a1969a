#include "pencilres/runner.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pencilres {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

json dump_matrix(const Mat& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c)
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string annulus_str(const Annulus& a) {
  std::ostringstream os;
  os << "(" << a.inner << ", ";
  if (a.outer < kInf)
    os << a.outer;
  else
    os << "inf";
  os << ")";
  return os.str();
}

/// Region-aware annulus: explicit hint first, then the family's closed form,
/// then the maximal default.
Annulus resolve_annulus(const PencilDocument& doc, const RunOptions& opt) {
  if (doc.annulus_hint) return *doc.annulus_hint;
  if (doc.family) return family_annulus(*doc.family, opt.region.value_or(Region::near_zero));
  return Annulus{0.0, kInf};
}

OperatorPencil realize_with_env(const PencilDocument& doc) {
  if (doc.family && doc.family->family == Family::random_regular) {
    if (const char* env = std::getenv("PENCIL_RESOLVENT_SEED")) {
      FamilySpec spec = *doc.family;
      spec.seed = std::strtoull(env, nullptr, 10);
      return build(spec);
    }
  }
  return realize(doc);
}

void add_check(Report& rep, const std::string& name, double value, double bound) {
  rep.checks.push_back({name, value, bound, value <= bound});
}

void echo_defaults(Report& rep, const PencilDocument& doc, const RunOptions& opt,
                   const Annulus& annulus) {
  std::ostringstream os;
  os << "tolerances: rank_rel=" << doc.tolerances.rank_rel
     << " residual_abs=" << doc.tolerances.residual_abs
     << " angle_tol=" << doc.tolerances.angle_tol;
  rep.notes.push_back(os.str());
  std::ostringstream os2;
  os2 << "annulus=" << annulus_str(annulus) << " depth=" << opt.depth
      << " probe_limit=" << opt.probe_limit << " k_max=" << opt.k_max << " l_max=" << opt.l_max
      << " nodes=" << opt.nodes;
  rep.notes.push_back(os2.str());
}

std::vector<Complex> default_samples(const Annulus& a, int count = 5) {
  OracleConfig cfg = OracleConfig::for_annulus(a);
  std::vector<Complex> zs;
  for (int k = 0; k < count; ++k) {
    double theta = 0.37 + 2.0 * 3.14159265358979323846 * k / count;
    zs.push_back(cfg.radius * Complex(std::cos(theta), std::sin(theta)));
  }
  return zs;
}

std::string describe_pencil(const PencilDocument& doc, const OperatorPencil& p) {
  std::ostringstream os;
  if (doc.family) {
    os << family_name(doc.family->family) << " N=" << p.dim();
    if (p.provenance && !p.provenance->warning.empty())
      os << " [warning: " << p.provenance->warning << "]";
  } else {
    os << "inline " << p.dim() << "x" << p.dim();
  }
  return os.str();
}

void run_analyze(Report& rep, const OperatorPencil& p, const PencilDocument& doc,
                 const RunOptions& opt) {
  AscentDescentReport ad = ascent_descent(p, opt.probe_limit, doc.tolerances);
  auto show = [&](const std::optional<Index>& v) {
    return v ? std::to_string(*v) : ("exceeds " + std::to_string(opt.probe_limit));
  };
  rep.notes.push_back("ascent: " + show(ad.ascent));
  rep.notes.push_back("descent (sum form): " + show(ad.descent));
  rep.notes.push_back("descent (direct-sum form): " + show(ad.descent_direct));

  ChainFamily s = chain_family(p, ChainKind::S, opt.probe_limit, doc.tolerances);
  ChainFamily u = chain_family(p, ChainKind::U, opt.probe_limit, doc.tolerances);
  json dims;
  for (size_t m = 0; m < s.spaces.size(); ++m) {
    dims["S"].push_back(s.spaces[m].dim());
    dims["U"].push_back(u.spaces[m].dim());
  }
  double s_monotone = 0, u_monotone = 0;
  for (size_t m = 1; m < s.spaces.size(); ++m) {
    s_monotone = std::max<double>(s_monotone, s.spaces[m].dim() - s.spaces[m - 1].dim());
    u_monotone = std::max<double>(u_monotone, u.spaces[m - 1].dim() - u.spaces[m].dim());
  }
  add_check(rep, "S dims nonincreasing", s_monotone, 0.0);
  add_check(rep, "U dims nondecreasing", u_monotone, 0.0);

  json payload;
  payload["ascent"] = ad.ascent ? json(*ad.ascent) : json(nullptr);
  payload["descent"] = ad.descent ? json(*ad.descent) : json(nullptr);
  payload["descent_direct"] = ad.descent_direct ? json(*ad.descent_direct) : json(nullptr);
  payload["probe_limit"] = ad.probe_limit;
  payload["chain_dims"] = std::move(dims);
  json evidence = json::array();
  for (const auto& e : ad.evidence)
    evidence.push_back({{"m", e.m},
                        {"ker_cap_s_dim", e.ker_cap_s_dim},
                        {"sum_dim", e.sum_dim},
                        {"window_dim", e.window_dim}});
  payload["evidence"] = std::move(evidence);
  rep.payload_json = payload.dump(2);
}

void run_chains(Report& rep, const OperatorPencil& p, const PencilDocument& doc,
                const RunOptions& opt, const Annulus& annulus) {
  double rho_s = singular_rate_threshold(annulus);
  double rho_r = regular_rate_threshold(annulus);
  Subspace xs = generating_subspace(p, JordanKind::singular, opt.depth, rho_s, doc.tolerances);
  Subspace xr = generating_subspace(p, JordanKind::regular, opt.depth, rho_r, doc.tolerances);
  rep.notes.push_back("rate thresholds: singular " + std::to_string(rho_s) + ", regular " +
                      std::to_string(rho_r));
  rep.notes.push_back("dim X_s = " + std::to_string(xs.dim()) +
                      ", dim X_r = " + std::to_string(xr.dim()));
  add_check(rep, "X_s + X_r spans the space",
            std::abs(static_cast<double>(xs.dim() + xr.dim() - p.dim())), 0.0);

  json payload;
  payload["xs_basis"] = dump_matrix(xs.basis);
  payload["xr_basis"] = dump_matrix(xr.basis);
  json rates = json::array();
  for (Index c = 0; c < xs.dim(); ++c) {
    JordanChainRecord recd =
        extend_chain(p, JordanKind::singular, xs.basis.col(c), opt.depth, doc.tolerances);
    rates.push_back({{"kind", "singular"}, {"rate", recd.rate},
                     {"blocked", recd.blocked()}});
  }
  for (Index c = 0; c < xr.dim(); ++c) {
    JordanChainRecord recd =
        extend_chain(p, JordanKind::regular, xr.basis.col(c), opt.depth, doc.tolerances);
    rates.push_back({{"kind", "regular"}, {"rate", recd.rate}, {"blocked", recd.blocked()}});
  }
  payload["chain_rates"] = std::move(rates);
  rep.payload_json = payload.dump(2);
}

void run_project(Report& rep, const OperatorPencil& p, const PencilDocument& doc,
                 const RunOptions& opt, const Annulus& annulus) {
  PipelineOptions popt;
  popt.depth = opt.depth;
  popt.k_max = opt.k_max;
  popt.l_max = opt.l_max;
  popt.tol = doc.tolerances;
  PipelineResult res = run_pipeline(p, annulus, popt);
  Theorem2Report t2 = res.theorem2;
  double bound = doc.tolerances.residual_abs;
  add_check(rep, "P idempotent", t2.idem_p, bound);
  add_check(rep, "Q idempotent", t2.idem_q, bound);
  add_check(rep, "P + Pc = I", t2.compl_p, bound);
  add_check(rep, "Q + Qc = I", t2.compl_q, bound);
  add_check(rep, "A0 = Q A0 P + Qc A0 Pc", t2.split_a0, bound);
  add_check(rep, "A1 = Q A1 P + Qc A1 Pc", t2.split_a1, bound);
  add_check(rep, "Q A1 = A1 P", t2.q_a1_a1_p, bound);
  add_check(rep, "Qc A0 = A0 Pc", t2.qc_a0_a0_pc, bound);
  add_check(rep, "Q A0 = A0 P", t2.q_a0_a0_p, bound);
  add_check(rep, "Qc A1 = A1 Pc", t2.qc_a1_a1_pc, bound);
  add_check(rep, "separated systems reduce to identities", res.separated.max_deviation(), bound);
  rep.notes.push_back("dim X_s = " + std::to_string(res.xs.dim()) +
                      ", dim X_r = " + std::to_string(res.xr.dim()));

  json payload;
  payload["p"] = dump_matrix(res.dec.p);
  payload["pc"] = dump_matrix(res.dec.pc);
  payload["q"] = dump_matrix(res.dec.q);
  payload["qc"] = dump_matrix(res.dec.qc);
  payload["dim_xs"] = res.xs.dim();
  payload["dim_xr"] = res.xr.dim();
  rep.payload_json = payload.dump(2);
}

void run_solve(Report& rep, const OperatorPencil& p, const PencilDocument& doc,
               const RunOptions& opt, const Annulus& annulus) {
  PipelineOptions popt;
  popt.depth = opt.depth;
  popt.tol = doc.tolerances;
  PipelineResult res = run_pipeline(p, annulus, popt);
  const BasicSolution& b = res.basic;
  Index n = p.dim();
  Mat id = Mat::Identity(n, n);
  double bound = doc.tolerances.residual_abs;
  add_check(rep, "R_-1 A1 + R_0 A0 = I", (b.r_m1 * p.a1 + b.r_0 * p.a0 - id).norm(), bound);
  add_check(rep, "A1 R_-1 + A0 R_0 = I", (p.a1 * b.r_m1 + p.a0 * b.r_0 - id).norm(), bound);
  add_check(rep, "R_-1 A0 R_0 = 0", (b.r_m1 * p.a0 * b.r_0).norm(), bound);
  add_check(rep, "R_-1 A1 R_0 = 0", (b.r_m1 * p.a1 * b.r_0).norm(), bound);
  add_check(rep, "R_0 A0 R_-1 = 0", (b.r_0 * p.a0 * b.r_m1).norm(), bound);
  add_check(rep, "R_0 A1 R_-1 = 0", (b.r_0 * p.a1 * b.r_m1).norm(), bound);
  rep.notes.push_back("estimated annulus " + annulus_str(b.annulus));

  json payload;
  payload["r_m1"] = dump_matrix(b.r_m1);
  payload["r_0"] = dump_matrix(b.r_0);
  payload["annulus"] = {{"s", b.annulus.inner},
                        {"r", b.annulus.outer < kInf ? json(b.annulus.outer) : json("inf")}};
  rep.payload_json = payload.dump(2);
}

void run_laurent(Report& rep, const OperatorPencil& p, const PencilDocument& doc,
                 const RunOptions& opt, const Annulus& annulus) {
  PipelineOptions popt;
  popt.depth = opt.depth;
  popt.k_max = opt.k_max;
  popt.l_max = opt.l_max;
  popt.tol = doc.tolerances;
  PipelineResult res = run_pipeline(p, annulus, popt);
  ResidualReport fr = fundamental_residuals(p, res.laurent);
  add_check(rep, "left fundamental residuals", fr.max_left, doc.tolerances.residual_abs);
  add_check(rep, "right fundamental residuals", fr.max_right, doc.tolerances.residual_abs);
  rep.notes.push_back("fitted rates: |R_-k|^(1/k) -> " + std::to_string(res.laurent.rate_neg) +
                      ", |R_l|^(1/l) -> " + std::to_string(res.laurent.rate_pos));
  rep.notes.push_back("estimated annulus " + annulus_str(res.laurent.annulus));
  if (!opt.out_path.empty()) {
    emit_growth_csv(res.laurent, opt.out_path);
    rep.notes.push_back("growth CSV written to " + opt.out_path);
  }
  json payload;
  json table = json::array();
  for (Index j = -res.laurent.k_max; j <= res.laurent.l_max; ++j)
    table.push_back({{"j", j}, {"norm", res.laurent.at(j).norm()}});
  payload["coefficients"] = std::move(table);
  payload["rate_neg"] = res.laurent.rate_neg;
  payload["rate_pos"] = res.laurent.rate_pos;
  rep.payload_json = payload.dump(2);
}

void run_validate(Report& rep, const OperatorPencil& p, const PencilDocument& doc,
                  const RunOptions& opt, const Annulus& annulus) {
  PipelineOptions popt;
  popt.depth = opt.depth;
  popt.k_max = opt.k_max;
  popt.l_max = opt.l_max;
  popt.tol = doc.tolerances;
  PipelineResult res = run_pipeline(p, annulus, popt);
  std::vector<Complex> samples = doc.samples.empty() ? default_samples(annulus) : doc.samples;
  ValidationReport v = validate_resolvent(p, res.basic, res.laurent, samples, doc.tolerances);
  double bound = doc.tolerances.residual_abs;
  json payload;
  json rows = json::array();
  for (const auto& s : v.samples) {
    add_check(rep,
              "A(z) R(z) = I at z=(" + std::to_string(s.z.real()) + "," +
                  std::to_string(s.z.imag()) + ")",
              std::max({s.closed_left, s.closed_right, s.laurent_left, s.laurent_right}), bound);
    rows.push_back({{"z", {s.z.real(), s.z.imag()}},
                    {"closed_left", s.closed_left},
                    {"closed_right", s.closed_right},
                    {"laurent_left", s.laurent_left},
                    {"laurent_right", s.laurent_right},
                    {"tail_bound", s.laurent_tail_bound}});
  }
  add_check(rep, "fundamental residuals", std::max(v.fundamental.max_left, v.fundamental.max_right),
            bound);
  payload["samples"] = std::move(rows);
  rep.payload_json = payload.dump(2);
}

void run_reproduce(Report& rep, const OperatorPencil& p, const PencilDocument& doc,
                   const RunOptions& opt) {
  if (!doc.family) fail(Errc::no_reference, "reproduce needs a named family");
  Region region = opt.region.value_or(Region::near_zero);
  ReferenceBundle ref = analytic_reference(*doc.family, region);
  PipelineOptions popt;
  popt.depth = opt.depth;
  popt.tol = doc.tolerances;
  PipelineResult res = run_pipeline(p, ref.annulus, popt);
  Index w = p.interior_dim(2);
  auto dev = [&](const Mat& got, const Mat& want) {
    return (got - want).topLeftCorner(w, w).cwiseAbs().maxCoeff();
  };
  double bound = 1e-8;
  add_check(rep, "P matches the closed form", dev(res.dec.p, ref.p), bound);
  add_check(rep, "Pc matches the closed form", dev(res.dec.pc, ref.pc), bound);
  add_check(rep, "Q matches the closed form", dev(res.dec.q, ref.q), bound);
  add_check(rep, "Qc matches the closed form", dev(res.dec.qc, ref.qc), bound);
  add_check(rep, "R_-1 matches the closed form", dev(res.basic.r_m1, ref.r_m1), bound);
  add_check(rep, "R_0 matches the closed form", dev(res.basic.r_0, ref.r_0), bound);
  rep.notes.push_back("interior block: " + std::to_string(w) + " of " + std::to_string(p.dim()));

  json payload;
  payload["interior_dim"] = w;
  payload["max_deviation"] = 0.0;
  for (const auto& c : rep.checks)
    payload["max_deviation"] = std::max(payload["max_deviation"].get<double>(), c.value);
  rep.payload_json = payload.dump(2);
}

}  // namespace

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string Report::render_text() const {
  std::ostringstream os;
  os << "pencil-resolvent " << command << ": " << pencil_summary << "\n";
  for (const auto& n : notes) os << "  # " << n << "\n";
  for (const auto& c : checks)
    os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << " (value " << c.value
       << ", bound " << c.bound << ")\n";
  os << (all_pass() ? "OK" : "FAILED") << "\n";
  return os.str();
}

std::string Report::render_json() const {
  json j;
  j["command"] = command;
  j["pencil"] = pencil_summary;
  j["notes"] = notes;
  json checks_json = json::array();
  for (const auto& c : checks)
    checks_json.push_back(
        {{"name", c.name}, {"value", c.value}, {"bound", c.bound}, {"pass", c.pass}});
  j["checks"] = std::move(checks_json);
  j["pass"] = all_pass();
  if (!payload_json.empty()) j["payload"] = json::parse(payload_json);
  return j.dump(2);
}

Report run_command(const PencilDocument& doc, const RunOptions& opt) {
  if (!doc.has_pencil()) fail(Errc::parse_error, "document has no pencil");
  OperatorPencil p = realize_with_env(doc);
  Annulus annulus = resolve_annulus(doc, opt);
  Report rep;
  rep.command = opt.command;
  rep.pencil_summary = describe_pencil(doc, p);
  echo_defaults(rep, doc, opt, annulus);

  if (opt.command == "analyze")
    run_analyze(rep, p, doc, opt);
  else if (opt.command == "chains")
    run_chains(rep, p, doc, opt, annulus);
  else if (opt.command == "project")
    run_project(rep, p, doc, opt, annulus);
  else if (opt.command == "solve")
    run_solve(rep, p, doc, opt, annulus);
  else if (opt.command == "laurent")
    run_laurent(rep, p, doc, opt, annulus);
  else if (opt.command == "validate")
    run_validate(rep, p, doc, opt, annulus);
  else if (opt.command == "reproduce")
    run_reproduce(rep, p, doc, opt);
  else
    fail(Errc::invalid_params, "unknown command '" + opt.command + "'");
  return rep;
}

void emit_growth_csv(const LaurentExpansion& exp, const std::string& path) {
  if (exp.coeffs.empty()) fail(Errc::invalid_shape, "empty expansion");
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) fail(Errc::io_error, "cannot open '" + path + "' for writing");
  out << "j,frob_norm,root_norm\n";
  for (Index j = -exp.k_max; j <= exp.l_max; ++j) {
    double norm = exp.at(j).norm();
    double root = (j == 0) ? norm : std::pow(norm, 1.0 / std::abs(static_cast<double>(j)));
    out << j << "," << fmt17(norm) << "," << fmt17(root) << "\n";
  }
  if (!out) fail(Errc::io_error, "write to '" + path + "' failed");
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::parse_error: return 2;
    case Errc::invalid_params:
    case Errc::invalid_shape: return 3;
    case Errc::not_complementary: return 4;
    case Errc::singular_node: return 5;
    case Errc::outside_annulus: return 6;
    case Errc::blocked: return 7;
    case Errc::not_invertible_on_subspace: return 8;
    case Errc::resample_limit: return 9;
    case Errc::no_reference: return 10;
    case Errc::io_error: return 11;
    case Errc::singular_shift: return 12;
    default: return 1;
  }
}

}  // namespace pencilres
