#pragma once

// JSON encoding of problems, operators and reports.
//
//   complex    [re, im]           (a bare number is read as a real scalar)
//   element    Diagonal: [z_1, ..., z_d]; Matrix: n x n row-major [[z, ...], ...]
//   operator   {"domain_rank": m, "codomain_rank": k, "coeffs": m x k elements}
//   problem    {"algebra": {"kind": "diagonal"|"matrix", "dim": n},
//               "module_rank": m,
//               "measure": {"atoms": [{"id": .., "weight": ..}, ...]},
//               "frame": {atom id: operator, ...},
//               "K": operator,
//               "bounds": {"A": element, "B": element, "mode": "algebra"|"scalar"}}
//
// "bounds" is optional. A top-level "provenance" value is accepted and ignored.
// Doubles are written in shortest round-trip form.

#include <string>
#include <string_view>

#include "examples_gen.hpp"
#include "frames.hpp"
#include "json.hpp"

namespace kgf {

using ojson = nlohmann::ordered_json;

// Errors: ParseError (syntax, with line and column; wrong types or missing
// fields, with the field path), DimensionError (shape mismatches, naming the
// atom), ConfigError (unknown algebra kind, bad measure).
ProblemInstance parse_problem(std::string_view text);
// Standalone operator document. An optional "algebra" key must match.
AdjointableOperator parse_operator(std::string_view text, const ModuleSpace& space);

ojson to_json(const AlgebraDescriptor& a);
ojson to_json(const AlgebraElement& a);
ojson to_json(const ModuleVector& x);
ojson to_json(const AdjointableOperator& t);
ojson to_json(const FrameBounds& b);
ojson to_json(const ProblemInstance& p);
ojson to_json(const CertificationReport& r);

std::string to_string(Verdict v);
std::string to_string(CertMethod m);
std::string to_string(BoundsMode m);

}  // namespace kgf
