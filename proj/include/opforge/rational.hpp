#pragma once
// Exact scalars.  Everything downstream is linear algebra over Q; we keep GMP
// rationals behind short aliases plus parsing helpers for the "p/q" wire format.
#include <gmpxx.h>
#include <string>

#include "opforge/errors.hpp"

namespace opforge {

using Rat = mpq_class;
using Int = mpz_class;

// accepts "p", "-p", "p/q"; result in lowest terms; rejects zero denominators
Rat rat_parse(const std::string& s);
std::string rat_str(const Rat& q);

// bit length |z|; pivot quality measure for fraction-free elimination
size_t int_bits(const Int& z);

} // namespace opforge
