#pragma once

#include "mip/integer.hpp"

namespace mip::ntheory::detail {

// n odd composite, no factor below the trial-division bound, not a perfect
// power.  Returns a nontrivial factor.  Deterministic output: the polynomial
// seed sequence is fixed and the caller recurses on both parts, so the final
// prime multiset never depends on which factor surfaces first.
Int find_factor(const Int& n);

// Pollard p-1 stage one with fixed base.  Returns 0 when no factor found.
Int pollard_pm1(const Int& n, uint32_t b1);

}  // namespace mip::ntheory::detail
