#include "pencilres/document.hpp"

#include <json.hpp>

namespace pencilres {

namespace {

using nlohmann::json;

Complex parse_complex(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(Errc::parse_error,
         std::string(what) + ": complex scalars must be [re, im] pairs, bare reals are not accepted");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json dump_complex(Complex z) { return json::array({z.real(), z.imag()}); }

Mat parse_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) fail(Errc::parse_error, std::string(what) + ": expected row array");
  Index rows = static_cast<Index>(j.size());
  Index cols = -1;
  Mat m;
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<size_t>(r)];
    if (!row.is_array() || row.empty())
      fail(Errc::parse_error, std::string(what) + ": row " + std::to_string(r) + " malformed");
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      m.resize(rows, cols);
    }
    if (static_cast<Index>(row.size()) != cols)
      fail(Errc::parse_error, std::string(what) + ": ragged rows");
    for (Index c = 0; c < cols; ++c)
      m(r, c) = parse_complex(row[static_cast<size_t>(c)], what);
  }
  ensure_finite(m, what);
  return m;
}

json dump_matrix(const Mat& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(dump_complex(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

SequenceRule parse_rule(const json& j) {
  SequenceRule rule;
  if (j.is_null()) return rule;
  std::string kind = j.value("kind", "factorial");
  if (kind == "factorial") {
    rule.kind = SequenceRule::Kind::factorial;
  } else if (kind == "gauss") {
    rule.kind = SequenceRule::Kind::gauss;
    rule.base = j.value("c", 0.5);
  } else if (kind == "geometric") {
    rule.kind = SequenceRule::Kind::geometric;
    rule.base = j.value("c", 1.0);
    rule.ratio = j.value("q", 0.5);
  } else if (kind == "explicit") {
    rule.kind = SequenceRule::Kind::explicit_values;
    rule.unchecked = j.value("unchecked", false);
    if (!j.contains("values") || !j["values"].is_array())
      fail(Errc::parse_error, "explicit rule needs a values array");
    for (const auto& v : j["values"]) rule.values.push_back(parse_complex(v, "rule.values"));
  } else {
    fail(Errc::parse_error, "unknown sequence rule kind '" + kind + "'");
  }
  return rule;
}

json dump_rule(const SequenceRule& rule) {
  json j;
  switch (rule.kind) {
    case SequenceRule::Kind::factorial: j["kind"] = "factorial"; break;
    case SequenceRule::Kind::gauss:
      j["kind"] = "gauss";
      j["c"] = rule.base;
      break;
    case SequenceRule::Kind::geometric:
      j["kind"] = "geometric";
      j["c"] = rule.base;
      j["q"] = rule.ratio;
      break;
    case SequenceRule::Kind::explicit_values: {
      j["kind"] = "explicit";
      j["unchecked"] = rule.unchecked;
      json vals = json::array();
      for (Complex v : rule.values) vals.push_back(dump_complex(v));
      j["values"] = std::move(vals);
      break;
    }
  }
  return j;
}

FamilySpec parse_family(const json& pencil) {
  FamilySpec spec;
  std::string name = pencil.at("family").get<std::string>();
  auto fam = family_from_name(name);
  if (!fam) fail(Errc::parse_error, "unknown family '" + name + "'");
  spec.family = *fam;
  spec.truncation = pencil.value("truncation", 12);
  const json params = pencil.value("params", json::object());
  if (params.contains("beta")) spec.beta = parse_complex(params["beta"], "params.beta");
  if (params.contains("rule")) spec.rule = parse_rule(params["rule"]);
  if (params.contains("pole_order")) spec.pole_order = params["pole_order"].get<Index>();
  if (params.contains("regular_dim")) spec.regular_dim = params["regular_dim"].get<Index>();
  if (params.contains("singular_dim")) spec.singular_dim = params["singular_dim"].get<Index>();
  if (params.contains("dim")) spec.dim = params["dim"].get<Index>();
  if (params.contains("seed")) spec.seed = params["seed"].get<uint64_t>();
  if (params.contains("contour_radius"))
    spec.contour_radius = params["contour_radius"].get<double>();
  return spec;
}

json dump_family(const FamilySpec& spec) {
  json pencil;
  pencil["family"] = family_name(spec.family);
  pencil["truncation"] = spec.truncation;
  json params;
  params["beta"] = dump_complex(spec.beta);
  params["rule"] = dump_rule(spec.rule);
  params["pole_order"] = spec.pole_order;
  params["regular_dim"] = spec.regular_dim;
  params["singular_dim"] = spec.singular_dim;
  params["dim"] = spec.dim;
  params["seed"] = spec.seed;
  params["contour_radius"] = spec.contour_radius;
  pencil["params"] = std::move(params);
  return pencil;
}

}  // namespace

PencilDocument parse_document(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(Errc::parse_error, e.what());
  }
  if (!j.is_object()) fail(Errc::parse_error, "document root must be an object");
  PencilDocument doc;
  if (!j.contains("pencil")) fail(Errc::parse_error, "document needs a 'pencil' key");
  const json& pencil = j["pencil"];
  if (pencil.contains("a0") || pencil.contains("a1")) {
    if (!pencil.contains("a0") || !pencil.contains("a1"))
      fail(Errc::parse_error, "inline pencil needs both a0 and a1");
    Mat a0 = parse_matrix(pencil["a0"], "a0");
    Mat a1 = parse_matrix(pencil["a1"], "a1");
    if (a0.rows() != a0.cols() || a1.rows() != a1.cols() || a0.rows() != a1.rows())
      fail(Errc::parse_error, "a0 and a1 must be square with equal dimension");
    doc.inline_pencil = std::make_pair(std::move(a0), std::move(a1));
  } else if (pencil.contains("family")) {
    doc.family = parse_family(pencil);
  } else {
    fail(Errc::parse_error, "pencil must give either {a0, a1} or {family, ...}");
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    doc.tolerances.rank_rel = t.value("rank_rel", doc.tolerances.rank_rel);
    doc.tolerances.residual_abs = t.value("residual_abs", doc.tolerances.residual_abs);
    doc.tolerances.angle_tol = t.value("angle_tol", doc.tolerances.angle_tol);
    doc.tolerances.validate();
  }
  if (j.contains("annulus_hint")) {
    const json& a = j["annulus_hint"];
    Annulus hint;
    hint.inner = a.value("s", 0.0);
    if (a.contains("r")) {
      if (a["r"].is_string()) {
        if (a["r"].get<std::string>() != "inf")
          fail(Errc::parse_error, "annulus_hint.r must be a number or \"inf\"");
        hint.outer = kInf;
      } else {
        hint.outer = a["r"].get<double>();
      }
    }
    hint.validate();
    doc.annulus_hint = hint;
  }
  if (j.contains("samples")) {
    for (const auto& s : j["samples"]) doc.samples.push_back(parse_complex(s, "samples"));
  }
  return doc;
}

std::string write_document(const PencilDocument& doc) {
  json j;
  json pencil;
  if (doc.inline_pencil) {
    pencil["a0"] = dump_matrix(doc.inline_pencil->first);
    pencil["a1"] = dump_matrix(doc.inline_pencil->second);
  } else if (doc.family) {
    pencil = dump_family(*doc.family);
  }
  j["pencil"] = std::move(pencil);
  j["tolerances"] = {{"rank_rel", doc.tolerances.rank_rel},
                     {"residual_abs", doc.tolerances.residual_abs},
                     {"angle_tol", doc.tolerances.angle_tol}};
  if (doc.annulus_hint) {
    json a;
    a["s"] = doc.annulus_hint->inner;
    if (doc.annulus_hint->outer < kInf)
      a["r"] = doc.annulus_hint->outer;
    else
      a["r"] = "inf";
    j["annulus_hint"] = std::move(a);
  }
  if (!doc.samples.empty()) {
    json s = json::array();
    for (Complex z : doc.samples) s.push_back(dump_complex(z));
    j["samples"] = std::move(s);
  }
  return j.dump(2);
}

PencilDocument document_from_pencil(const OperatorPencil& p) {
  PencilDocument doc;
  doc.inline_pencil = std::make_pair(p.a0, p.a1);
  return doc;
}

OperatorPencil realize(const PencilDocument& doc) {
  if (doc.inline_pencil) {
    OperatorPencil p{doc.inline_pencil->first, doc.inline_pencil->second, std::nullopt};
    p.validate();
    return p;
  }
  if (doc.family) return build(*doc.family);
  fail(Errc::parse_error, "document has no pencil");
}

}  // namespace pencilres
