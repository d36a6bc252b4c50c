#include "serialize.hpp"

#include <cmath>

#include "error.hpp"

namespace kgf {

using json = nlohmann::json;

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

json parse_document(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) throw ParseError("empty document");
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    // drop nlohmann's "[json.exception.parse_error.101] parse error at ...: " prefix
    const auto pos = what.find(": ", what.find("parse error"));
    if (pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError("malformed JSON at " + line_column(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + what);
  }
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + ": missing field '" + key + "'");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path + ": expected a number");
  return v.get<double>();
}

std::size_t positive_int(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 1) throw ParseError(path + ": expected a positive integer");
  return static_cast<std::size_t>(v.get<long long>());
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError(path + ": expected an array");
  return v;
}

cplx complex_value(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2) throw ParseError(path + ": expected [re, im]");
  return {number(v[0], index(path, 0)), number(v[1], index(path, 1))};
}

AlgebraDescriptor parse_algebra(const json& v, const std::string& path) {
  const auto& kind = field(v, "kind", path);
  if (!kind.is_string()) throw ParseError(join(path, "kind") + ": expected a string");
  const auto dim = positive_int(field(v, "dim", path), join(path, "dim"));
  const auto name = kind.get<std::string>();
  if (name == "diagonal") return AlgebraDescriptor::diagonal(dim);
  if (name == "matrix") return AlgebraDescriptor::matrix(dim);
  throw ConfigError(join(path, "kind") + ": unknown algebra kind '" + name + "'");
}

AlgebraElement parse_element(const json& v, const AlgebraDescriptor& alg, const std::string& path) {
  const auto& arr = array(v, path);
  std::vector<cplx> data;
  if (alg.kind == AlgebraKind::Diagonal) {
    if (arr.size() != alg.dim) {
      throw DimensionError(path + ": expected " + std::to_string(alg.dim) + " components, got " +
                           std::to_string(arr.size()));
    }
    for (std::size_t i = 0; i < arr.size(); ++i) data.push_back(complex_value(arr[i], index(path, i)));
  } else {
    if (arr.size() != alg.dim) {
      throw DimensionError(path + ": expected " + std::to_string(alg.dim) + " rows, got " + std::to_string(arr.size()));
    }
    for (std::size_t r = 0; r < arr.size(); ++r) {
      const auto& row = array(arr[r], index(path, r));
      if (row.size() != alg.dim) {
        throw DimensionError(index(path, r) + ": expected " + std::to_string(alg.dim) + " entries, got " +
                             std::to_string(row.size()));
      }
      for (std::size_t c = 0; c < row.size(); ++c) data.push_back(complex_value(row[c], index(index(path, r), c)));
    }
  }
  return AlgebraElement(alg, std::move(data));
}

// `what` names the operator in dimension errors (atom id or "K").
AdjointableOperator parse_op(const json& v, const ModuleSpace& domain, std::optional<std::size_t> codomain_rank,
                             const std::string& path, const std::string& what) {
  const auto m = positive_int(field(v, "domain_rank", path), join(path, "domain_rank"));
  const auto k = positive_int(field(v, "codomain_rank", path), join(path, "codomain_rank"));
  if (m != domain.rank) {
    throw DimensionError(what + ": domain_rank " + std::to_string(m) + " does not match module_rank " +
                         std::to_string(domain.rank) + " (" + path + ")");
  }
  if (codomain_rank && k != *codomain_rank) {
    throw DimensionError(what + ": codomain_rank " + std::to_string(k) + ", expected " +
                         std::to_string(*codomain_rank) + " (" + path + ")");
  }
  const auto cpath = join(path, "coeffs");
  const auto& rows = array(field(v, "coeffs", path), cpath);
  if (rows.size() != m) {
    throw DimensionError(what + ": coeffs has " + std::to_string(rows.size()) + " rows, expected " +
                         std::to_string(m) + " (" + cpath + ")");
  }
  std::vector<AlgebraElement> coeffs;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = array(rows[i], index(cpath, i));
    if (row.size() != k) {
      throw DimensionError(what + ": coeffs row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                           " entries, expected " + std::to_string(k) + " (" + index(cpath, i) + ")");
    }
    for (std::size_t j = 0; j < k; ++j) {
      try {
        coeffs.push_back(parse_element(row[j], domain.algebra, index(index(cpath, i), j)));
      } catch (const DimensionError& e) {
        throw DimensionError(what + ": " + e.what());
      }
    }
  }
  return AdjointableOperator(domain, ModuleSpace(domain.algebra, k), std::move(coeffs));
}

BoundsMode parse_mode(const json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError(path + ": expected a string");
  const auto s = v.get<std::string>();
  if (s == "algebra") return BoundsMode::AlgebraValued;
  if (s == "scalar") return BoundsMode::Scalar;
  throw ParseError(path + ": mode must be 'algebra' or 'scalar', got '" + s + "'");
}

ojson complex_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

ojson range_json(const SpectralRange& r) { return ojson{{"min_eig", r.min}, {"max_eig", r.max}}; }

}  // namespace

ProblemInstance parse_problem(std::string_view text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("document: expected an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "algebra" && key != "module_rank" && key != "measure" && key != "frame" && key != "K" &&
        key != "bounds" && key != "provenance") {
      throw ParseError("document: unknown field '" + key + "'");
    }
  }
  const auto alg = parse_algebra(field(doc, "algebra", ""), "algebra");
  const auto rank = positive_int(field(doc, "module_rank", ""), "module_rank");
  const ModuleSpace space(alg, rank);

  const auto& atoms_json = array(field(field(doc, "measure", ""), "atoms", "measure"), "measure.atoms");
  if (atoms_json.empty()) throw ParseError("measure.atoms: at least one atom is required");
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < atoms_json.size(); ++i) {
    const auto path = index("measure.atoms", i);
    const auto& id = field(atoms_json[i], "id", path);
    if (!id.is_string()) throw ParseError(join(path, "id") + ": expected a string");
    atoms.push_back({id.get<std::string>(), number(field(atoms_json[i], "weight", path), join(path, "weight"))});
  }
  MeasureSpace measure(std::move(atoms));

  const auto& frame_json = field(doc, "frame", "");
  if (!frame_json.is_object()) throw ParseError("frame: expected an object keyed by atom id");
  for (const auto& [key, _] : frame_json.items()) {
    if (!measure.index_of(key)) throw ParseError("frame." + key + ": no atom with this id");
  }
  std::vector<AdjointableOperator> ops;
  for (const auto& atom : measure.atoms()) {
    const auto it = frame_json.find(atom.id);
    if (it == frame_json.end()) throw ParseError("frame: missing operator for atom '" + atom.id + "'");
    ops.push_back(parse_op(*it, space, std::nullopt, "frame." + atom.id, "atom '" + atom.id + "'"));
  }
  FrameFamily frame(space, std::move(measure), std::move(ops));
  auto k = parse_op(field(doc, "K", ""), space, rank, "K", "K");

  std::optional<FrameBounds> bounds;
  if (const auto it = doc.find("bounds"); it != doc.end() && !it->is_null()) {
    bounds = FrameBounds{parse_element(field(*it, "A", "bounds"), alg, "bounds.A"),
                         parse_element(field(*it, "B", "bounds"), alg, "bounds.B"),
                         it->contains("mode") ? parse_mode((*it)["mode"], "bounds.mode") : BoundsMode::AlgebraValued};
  }
  return ProblemInstance(std::move(frame), std::move(k), std::move(bounds));
}

AdjointableOperator parse_operator(std::string_view text, const ModuleSpace& space) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("document: expected an object");
  if (const auto it = doc.find("algebra"); it != doc.end()) {
    if (!(parse_algebra(*it, "algebra") == space.algebra)) {
      throw DimensionError("operator: algebra does not match the problem's algebra");
    }
  }
  return parse_op(doc, space, space.rank, "operator", "operator");
}

ojson to_json(const AlgebraDescriptor& a) {
  return ojson{{"kind", a.kind == AlgebraKind::Diagonal ? "diagonal" : "matrix"}, {"dim", a.dim}};
}

ojson to_json(const AlgebraElement& a) {
  ojson out = ojson::array();
  const auto& d = a.descriptor();
  if (d.kind == AlgebraKind::Diagonal) {
    for (const auto& z : a.data()) out.push_back(complex_json(z));
    return out;
  }
  for (std::size_t r = 0; r < d.dim; ++r) {
    ojson row = ojson::array();
    for (std::size_t c = 0; c < d.dim; ++c) row.push_back(complex_json(a[r * d.dim + c]));
    out.push_back(std::move(row));
  }
  return out;
}

ojson to_json(const ModuleVector& x) {
  ojson out = ojson::array();
  for (const auto& c : x.coords()) out.push_back(to_json(c));
  return out;
}

ojson to_json(const AdjointableOperator& t) {
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < t.domain().rank; ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 0; j < t.codomain().rank; ++j) row.push_back(to_json(t.coeff(i, j)));
    rows.push_back(std::move(row));
  }
  return ojson{{"domain_rank", t.domain().rank}, {"codomain_rank", t.codomain().rank}, {"coeffs", std::move(rows)}};
}

ojson to_json(const FrameBounds& b) {
  return ojson{{"A", to_json(b.lower)}, {"B", to_json(b.upper)},
               {"mode", b.mode == BoundsMode::Scalar ? "scalar" : "algebra"}};
}

ojson to_json(const ProblemInstance& p) {
  ojson atoms = ojson::array();
  ojson frame = ojson::object();
  const auto& measure = p.frame.measure();
  for (std::size_t w = 0; w < measure.size(); ++w) {
    atoms.push_back(ojson{{"id", measure.atoms()[w].id}, {"weight", measure.atoms()[w].weight}});
    frame[measure.atoms()[w].id] = to_json(p.frame.operators()[w]);
  }
  ojson out{{"algebra", to_json(p.frame.domain().algebra)},
            {"module_rank", p.frame.domain().rank},
            {"measure", ojson{{"atoms", std::move(atoms)}}},
            {"frame", std::move(frame)},
            {"K", to_json(p.k)}};
  if (p.bounds) out["bounds"] = to_json(*p.bounds);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified:
      return "certified";
    case Verdict::Refuted:
      return "refuted";
    case Verdict::Inconclusive:
      break;
  }
  return "inconclusive";
}

std::string to_string(CertMethod m) { return m == CertMethod::ExactPSD ? "exact_psd" : "sampled"; }
std::string to_string(BoundsMode m) { return m == BoundsMode::Scalar ? "scalar" : "algebra"; }

ojson to_json(const CertificationReport& r) {
  ojson bounds{{"A", r.lower_element ? to_json(*r.lower_element) : ojson(nullptr)},
               {"B", to_json(r.upper_element)},
               {"mode", to_string(r.mode)}};
  ojson diagnostics = ojson::object();
  diagnostics["lower"] = r.lower ? range_json(*r.lower) : ojson(nullptr);
  diagnostics["upper"] = range_json(r.upper);
  ojson out{{"verdict", to_string(r.verdict)},
            {"method", to_string(r.method)},
            {"bounds", std::move(bounds)},
            {"diagnostics", std::move(diagnostics)},
            {"sample_count", r.sample_count},
            {"seed", r.seed},
            {"tol", r.tol}};
  if (r.witness) {
    out["witness"] = ojson{{"inequality", *r.violated == Inequality::Lower ? "lower" : "upper"},
                           {"gap", r.witness_gap},
                           {"slack", r.witness_slack},
                           {"vector", to_json(*r.witness)}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

}  // namespace kgf
