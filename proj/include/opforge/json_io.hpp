#pragma once
// Wire format.  Complexes travel as {"dims": {"<deg>": n}, "diff": {"<deg>":
// [[row, col, "p/q"], ...]}, "labels": optional, "weights": optional}.  All
// rationals are strings in lowest terms; degrees are string keys since JSON
// objects cannot have integer keys.
#include "opforge/complex.hpp"
#include "opforge/symmod.hpp"

// single-header nlohmann, vendored
#include <json.hpp>

namespace opforge {

using Json = nlohmann::json;

Json complex_to_json(const ChainComplex& X);
ChainComplex complex_from_json(const Json& j);

Json matrix_to_json(const RationalMatrix& m);
RationalMatrix matrix_from_json(const Json& j, int rows, int cols);

// {"max_arity": k, "components": {"<n>": {"complex": ..., "generators":
// [per-degree matrices for s_0 .. s_{n-2}]}}}.  Reading reruns the full
// action validation (chain maps, Coxeter relations).
Json sym_module_to_json(const SymModule& M);
SymModule sym_module_from_json(const Json& j);

} // namespace opforge
