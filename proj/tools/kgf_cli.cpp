// kgf command-line tool. Links only the C API.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kgf/kgf.h"

using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitCertified = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitInternal = 4;

struct Settings {
  std::string mode = "exact";
  std::size_t samples = 1000;
  double tol = KGF_EPS_POS;
  std::uint64_t seed = 0;
  std::string out;
  bool deterministic = false;
};

// Carries a library status out of the command body.
struct Failure {
  kgf_status status;
  std::string message;
};

void check(kgf_status st) {
  if (st != KGF_OK) throw Failure{st, kgf_last_error()};
}

std::string take(char* s) {
  std::string out(s);
  kgf_string_free(s);
  return out;
}

std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct InputFile {
  std::string name;
  std::string bytes;

  ojson describe() const { return ojson{{"file", name}, {"fnv1a64", fnv1a64(bytes)}}; }
};

InputFile read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{KGF_ERR_INVALID_ARGUMENT, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return {std::filesystem::path(path).filename().string(), ss.str()};
}

// Owning wrappers over the C handles.
struct Problem {
  kgf_problem* p = nullptr;
  Problem() = default;
  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;
  ~Problem() { kgf_problem_free(p); }
};

struct Report {
  kgf_report* r = nullptr;
  ~Report() { kgf_report_free(r); }
};

struct Operator {
  kgf_operator* t = nullptr;
  ~Operator() { kgf_operator_free(t); }
};

void parse_problem(const InputFile& f, Problem& out) {
  check(kgf_problem_parse(f.bytes.data(), f.bytes.size(), &out.p));
}

ojson problem_json(const Problem& p) {
  char* s = nullptr;
  check(kgf_problem_to_json(p.p, &s));
  return ojson::parse(take(s));
}

ojson transform_summary_json(const kgf_transform_summary& s) {
  ojson out{{"t_invertible", s.t_invertible != 0},
            {"k_surjective", s.k_surjective != 0},
            {"t_norm", s.t_norm},
            {"t_lower_bound", s.t_lower},
            {"k_adjoint_lower_bound", s.k_adjoint_lower},
            {"bounds_transferred", s.has_transferred != 0},
            {"operator_residual", s.operator_residual}};
  if (s.has_inverse_residual) out["inverse_residual"] = s.inverse_residual;
  return out;
}

// Two-space indented JSON with arrays of scalars kept on one line, so
// complex numbers and element rows stay readable.
void write_pretty(std::string& out, const ojson& v, int depth) {
  const auto pad = [&](int d) { out.append(static_cast<std::size_t>(2 * d), ' '); };
  const auto flat = [](const ojson& a) {
    for (const auto& e : a)
      if (e.is_structured()) return false;
    return true;
  };
  if (v.is_object() && !v.empty()) {
    out += "{\n";
    std::size_t i = 0;
    for (const auto& [key, val] : v.items()) {
      pad(depth + 1);
      out += ojson(key).dump() + ": ";
      write_pretty(out, val, depth + 1);
      out += ++i < v.size() ? ",\n" : "\n";
    }
    pad(depth);
    out += "}";
  } else if (v.is_array() && !v.empty() && !flat(v)) {
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      pad(depth + 1);
      write_pretty(out, v[i], depth + 1);
      out += i + 1 < v.size() ? ",\n" : "\n";
    }
    pad(depth);
    out += "]";
  } else if (v.is_array()) {
    out += "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].dump();
    out += "]";
  } else {
    out += v.dump();
  }
}

std::string pretty(const ojson& v) {
  std::string out;
  write_pretty(out, v, 0);
  return out + "\n";
}

class Runner {
 public:
  explicit Runner(Settings s) : s_(std::move(s)) {}

  ojson envelope(const std::string& command, const ojson& input) const {
    ojson env{{"tool", "kgf"}, {"version", kgf_version()}, {"command", command}, {"input", input},
              {"settings", ojson{{"mode", s_.mode}, {"samples", s_.samples}, {"seed", s_.seed}, {"tol", s_.tol}}},
              {"tolerances", ojson{{"eps_pos", KGF_EPS_POS}, {"tau_alg", KGF_TAU_ALG}, {"tau_inv", KGF_TAU_INV}}}};
    if (!s_.deterministic) env["timestamp"] = utc_now();
    return env;
  }

  void emit(const ojson& doc) const {
    const std::string text = pretty(doc);
    if (s_.out.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(s_.out, std::ios::binary);
    if (!out) throw Failure{KGF_ERR_INVALID_ARGUMENT, "cannot write '" + s_.out + "'"};
    out << text;
  }

  int certify(const std::string& path) const {
    const auto f = read_input(path);
    Problem p;
    parse_problem(f, p);
    kgf_certify_options opts;
    kgf_certify_options_default(&opts);
    opts.mode = s_.mode == "sampled" ? KGF_MODE_SAMPLED : KGF_MODE_EXACT;
    opts.samples = s_.samples;
    opts.seed = s_.seed;
    opts.tol = s_.tol;
    Report r;
    check(kgf_certify(p.p, &opts, &r.r));
    char* s = nullptr;
    check(kgf_report_to_json(r.r, &s));
    auto env = envelope("certify", f.describe());
    env["result"] = ojson::parse(take(s));
    emit(env);
    const auto& res = env["result"];
    std::cerr << "certify: " << res["verdict"].get<std::string>() << " (" << res["method"].get<std::string>() << ")";
    if (!res["witness"].is_null()) std::cerr << ", " << res["witness"]["inequality"].get<std::string>() << " inequality violated";
    std::cerr << "\n";
    switch (kgf_report_verdict(r.r)) {
      case KGF_CERTIFIED: return kExitCertified;
      case KGF_REFUTED: return kExitRefuted;
      case KGF_INCONCLUSIVE: break;
    }
    return kExitInconclusive;
  }

  int bounds(const std::string& path) const {
    const auto f = read_input(path);
    Problem p;
    parse_problem(f, p);
    kgf_bounds_summary b{};
    check(kgf_bounds(p.p, &b));
    ojson res{{"a_opt", b.a_opt_unbounded ? ojson(nullptr) : ojson(b.a_opt)},
              {"a_opt_unbounded", b.a_opt_unbounded != 0},
              {"iterations", b.iterations},
              {"s_norm", b.s_norm}};
    if (b.has_sandwich) {
      res["sandwich"] = ojson{{"lo", b.sandwich_lo}, {"s_norm", b.s_norm}, {"hi", b.sandwich_hi}, {"ok", b.sandwich_ok != 0}};
    } else {
      res["sandwich"] = nullptr;
    }
    auto env = envelope("bounds", f.describe());
    env["result"] = std::move(res);
    emit(env);
    std::cerr << "bounds: a_opt=" << (b.a_opt_unbounded ? std::string("unbounded") : env["result"]["a_opt"].dump())
              << " s_norm=" << env["result"]["s_norm"].dump() << "\n";
    return 0;
  }

  int frame_op(const std::string& path) const {
    const auto f = read_input(path);
    Problem p;
    parse_problem(f, p);
    char* s = nullptr;
    check(kgf_frame_operator_json(p.p, &s));
    auto env = envelope("frame-op", f.describe());
    env["result"] = ojson{{"frame_operator", ojson::parse(take(s))}};
    emit(env);
    std::cerr << "frame-op: done\n";
    return 0;
  }

  int transform(const std::string& path, const std::string& with) const {
    const auto f = read_input(path);
    const auto g = read_input(with);
    Problem p;
    parse_problem(f, p);
    Operator t;
    check(kgf_operator_parse(p.p, g.bytes.data(), g.bytes.size(), &t.t));
    Problem q;
    kgf_transform_summary sum{};
    check(kgf_transform(p.p, t.t, &q.p, &sum));
    auto input = f.describe();
    input["with"] = g.describe();
    auto env = envelope("transform", input);
    auto res = transform_summary_json(sum);
    res["problem"] = problem_json(q);
    env["result"] = std::move(res);
    emit(env);
    std::cerr << "transform: residual " << env["result"]["operator_residual"].dump() << "\n";
    return 0;
  }

  int dual(const std::string& path) const {
    const auto f = read_input(path);
    Problem p;
    parse_problem(f, p);
    Problem q;
    kgf_transform_summary sum{};
    check(kgf_dual(p.p, &q.p, &sum));
    auto env = envelope("dual", f.describe());
    auto res = transform_summary_json(sum);
    res["problem"] = problem_json(q);
    env["result"] = std::move(res);
    emit(env);
    std::cerr << "dual: inverse residual " << env["result"]["inverse_residual"].dump() << "\n";
    return 0;
  }

  // Builders emit a problem document with the envelope under "provenance",
  // so the output can be fed straight back in.
  int emit_problem(const std::string& command, const ojson& params, const Problem& p) const {
    auto doc = problem_json(p);
    auto prov = envelope(command, nullptr);
    prov["parameters"] = params;
    doc["provenance"] = std::move(prov);
    emit(doc);
    std::cerr << command << ": " << doc["measure"]["atoms"].size() << " atoms\n";
    return 0;
  }

 private:
  Settings s_;
};

int report_failure(const Failure& f, const std::string& command, bool deterministic) {
  std::cerr << "error: " << kgf_status_name(f.status) << ": " << f.message << "\n";
  ojson doc{{"tool", "kgf"}, {"version", kgf_version()}, {"command", command},
            {"error", ojson{{"code", kgf_status_name(f.status)}, {"message", f.message}}}};
  if (!deterministic) doc["timestamp"] = utc_now();
  std::cout << pretty(doc);
  return f.status == KGF_ERR_INTERNAL ? kExitInternal : kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgf: continuous *-K-g-frame laboratory"};
  app.set_version_flag("--version", std::string(kgf_version()));
  app.require_subcommand(1);
  app.fallthrough();

  Settings s;
  app.add_option("--mode", s.mode, "Certification mode")->check(CLI::IsMember({"exact", "sampled"}));
  app.add_option("--samples", s.samples, "Random vectors in sampled mode")->check(CLI::PositiveNumber);
  app.add_option("--tol", s.tol, "Positivity tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", s.seed, "Seed for sampling and generators");
  app.add_option("--out", s.out, "Write the report to PATH instead of stdout");
  app.add_flag("--deterministic", s.deterministic, "Omit the timestamp");

  std::string input;
  std::string with;
  auto* certify = app.add_subcommand("certify", "Check both frame inequalities");
  certify->add_option("input", input, "Problem file")->required();
  auto* bounds = app.add_subcommand("bounds", "Optimal scalar lower bound, |S| and the norm sandwich");
  bounds->add_option("input", input, "Problem file")->required();
  auto* frame_op = app.add_subcommand("frame-op", "Print the frame operator S");
  frame_op->add_option("input", input, "Problem file")->required();
  auto* transform = app.add_subcommand("transform", "Apply T to every frame operator");
  transform->add_option("input", input, "Problem file")->required();
  transform->add_option("--with", with, "Operator file for T")->required();
  auto* dual = app.add_subcommand("dual", "Canonical transform by the inverse frame operator");
  dual->add_option("input", input, "Problem file")->required();

  auto* example = app.add_subcommand("example", "Build the diagonal example instance");
  std::string variant = "discrete";
  std::size_t dim = 3;
  std::size_t atoms_per_cell = 1;
  std::vector<double> weights;
  std::string normalization = "sqrt-cell";
  example->add_option("variant", variant, "discrete or continuous")->check(CLI::IsMember({"discrete", "continuous"}));
  example->add_option("--dim", dim, "Truncation dimension d")->check(CLI::PositiveNumber);
  example->add_option("--atoms-per-cell", atoms_per_cell, "Atoms per cell (continuous)")->check(CLI::PositiveNumber);
  example->add_option("--weights", weights, "Cell weights (continuous)")->delimiter(',');
  example->add_option("--normalization", normalization, "sqrt-cell or paper-literal")
      ->check(CLI::IsMember({"sqrt-cell", "paper-literal"}));

  auto* random = app.add_subcommand("random", "Build a seeded random instance");
  std::string algebra = "diagonal";
  std::size_t algebra_dim = 2;
  std::size_t rank = 2;
  std::size_t atoms = 4;
  std::string k_kind = "surjective";
  std::string bounds_kind = "scalar";
  random->add_option("--algebra", algebra, "diagonal or matrix")->check(CLI::IsMember({"diagonal", "matrix"}));
  random->add_option("--dim", algebra_dim, "Algebra dimension")->check(CLI::PositiveNumber);
  random->add_option("--rank", rank, "Module rank")->check(CLI::PositiveNumber);
  random->add_option("--atoms", atoms, "Number of atoms")->check(CLI::PositiveNumber);
  random->add_option("--k", k_kind, "identity, surjective, rank-deficient or zero")
      ->check(CLI::IsMember({"identity", "surjective", "rank-deficient", "zero"}));
  random->add_option("--bounds", bounds_kind, "none, scalar or algebra")
      ->check(CLI::IsMember({"none", "scalar", "algebra"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    const auto subs = app.get_subcommands();
    ojson doc{{"tool", "kgf"}, {"version", kgf_version()}, {"command", subs.empty() ? "" : subs.front()->get_name()},
              {"error", ojson{{"code", "usage_error"}, {"message", e.what()}}}};
    // parsing may stop before --deterministic is seen
    if (std::find(argv + 1, argv + argc, std::string("--deterministic")) == argv + argc) doc["timestamp"] = utc_now();
    std::cout << pretty(doc);
    return kExitInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Runner run(s);
  try {
    if (*certify) return run.certify(input);
    if (*bounds) return run.bounds(input);
    if (*frame_op) return run.frame_op(input);
    if (*transform) return run.transform(input, with);
    if (*dual) return run.dual(input);
    if (*example) {
      Problem p;
      ojson params{{"variant", variant}, {"dim", dim}};
      if (variant == "discrete") {
        check(kgf_problem_example_discrete(dim, &p.p));
      } else {
        kgf_example_config cfg{dim, atoms_per_cell, weights.empty() ? nullptr : weights.data(), weights.size(),
                               normalization == "paper-literal" ? 1 : 0};
        check(kgf_problem_example_continuous(&cfg, &p.p));
        params["atoms_per_cell"] = atoms_per_cell;
        params["weights"] = weights;
        params["normalization"] = normalization;
      }
      return run.emit_problem("example", params, p);
    }
    if (*random) {
      kgf_random_config cfg;
      kgf_random_config_default(&cfg);
      cfg.seed = s.seed;
      cfg.algebra = algebra == "matrix" ? KGF_ALGEBRA_MATRIX : KGF_ALGEBRA_DIAGONAL;
      cfg.algebra_dim = algebra_dim;
      cfg.module_rank = rank;
      cfg.atoms = atoms;
      cfg.k = k_kind == "identity"         ? KGF_K_IDENTITY
              : k_kind == "rank-deficient" ? KGF_K_RANK_DEFICIENT
              : k_kind == "zero"           ? KGF_K_ZERO
                                           : KGF_K_SURJECTIVE;
      cfg.bounds = bounds_kind == "none" ? KGF_BOUNDS_NONE : bounds_kind == "algebra" ? KGF_BOUNDS_ALGEBRA : KGF_BOUNDS_SCALAR;
      Problem p;
      check(kgf_problem_random(&cfg, &p.p));
      ojson params{{"algebra", algebra}, {"dim", algebra_dim}, {"rank", rank},
                   {"atoms", atoms},     {"k", k_kind},        {"bounds", bounds_kind}};
      return run.emit_problem("random", params, p);
    }
  } catch (const Failure& f) {
    return report_failure(f, command, s.deterministic);
  } catch (const std::exception& e) {
    return report_failure(Failure{KGF_ERR_INTERNAL, e.what()}, command, s.deterministic);
  }
  return kExitInternal;
}
