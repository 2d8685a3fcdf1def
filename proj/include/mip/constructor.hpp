#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mip/minimality.hpp"

namespace mip::constructor {

struct ResiduePair {
    Int non_residue;  // b, not in Q_p
    Int residue;      // c, in Q_p
};

struct ConstructionParams {
    uint32_t n = 4;  // >= 4
    Int p1 = 3;
    Int p2 = 5;
    std::optional<ResiduePair> choice1;  // overrides for (b1, c1)
    std::optional<ResiduePair> choice2;  // overrides for (b2, c2)
    uint32_t offset = 0;                 // 0 = SMALLEST, k = OFFSET(k)
    uint64_t search_cap = 1000000;       // candidates scanned per step
    uint64_t witness_scan_bound = certifier::kDefaultWitnessScanBound;
};

class search_exhausted_error : public std::runtime_error {
  public:
    explicit search_exhausted_error(const std::string& what) : std::runtime_error(what) {}
};

struct StepTrace {
    uint32_t index;      // 1-based position in the family
    std::string method;  // "seed_product" | "search" | "rad_of_prefix"
    std::vector<ntheory::ResidueClass> targets;
    Int lower_bound = 0;
    std::optional<ntheory::ResidueClass> combined;  // CRT of targets
    uint64_t candidates_examined = 0;
    Int chosen;
};

struct ConstructionTrace {
    std::vector<StepTrace> steps;
};

struct ConstructionResult {
    QuadraticFamily family;
    ConstructionTrace trace;
    minimality::MinimalityReport report;
    uint32_t retries = 0;  // postcondition re-searches of a_n (expected 0)
};

// Smallest positive non-residue and smallest positive residue (always 1).
ResiduePair pick_residue_pair(const Int& p);

// Residue target at primes introduced after the seeds: smallest quadratic
// residue >= 2 that is not a perfect square, falling back to 1.
Int generic_residue(const Int& p);

// Smallest square-free natural number > lower_bound in the class under the
// SMALLEST policy, the (offset+1)-th such under OFFSET; 1 is never returned.
SquarefreeInt search_squarefree_in_ap(const ntheory::ResidueClass& cls, const Int& lower_bound,
                                      uint64_t cap, uint32_t offset = 0,
                                      uint64_t* candidates_examined = nullptr);

// Max over subset classes of the square-free part of the subset product;
// evaluated over the GF(2) row span, not all 2^i subsets.
Int lower_bound_for(std::span<const SquarefreeInt> members);

ConstructionResult construct(const ConstructionParams& params);

}  // namespace mip::constructor
