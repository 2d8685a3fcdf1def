#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "mip/family.hpp"
#include "mip/gf2.hpp"

namespace mip::certifier {

using gf2::SubsetWitness;

enum class Verdict { intersective, not_intersective };

enum class FailureKind { no_odd_square_subset, legendre_gap, no_mod8_member };

// Index i != j with (a_i / p) = +1, covering the pair (j in T, odd p | a_j).
struct LegendreWitness {
    uint32_t j;
    Int prime;
    uint32_t i;
    int symbol = 1;
    bool operator==(const LegendreWitness&) const = default;
};

// Prime power modulo which the polynomial provably has no root.
struct WitnessModulus {
    Int prime;
    unsigned exponent;
    Int modulus;
    bool verified_by_scan = false;
};

struct Failure {
    FailureKind kind;
    uint32_t j = 0;  // set for legendre_gap
    Int prime = 0;   // set for legendre_gap
};

// Self-contained: carries the member values it speaks about, so a verifier
// needs no other state.
struct IntersectivityCertificate {
    std::vector<Int> family;
    Verdict verdict;
    std::optional<SubsetWitness> subset_T;
    std::vector<LegendreWitness> legendre_witnesses;
    std::optional<uint32_t> mod8_index;
    std::optional<Failure> failure;
    std::optional<WitnessModulus> witness_modulus;
    bool prop1_only = false;  // refuted but no witness modulus found in bounds
};

inline constexpr uint64_t kDefaultWitnessScanBound = 100000;
inline constexpr uint64_t kScanVerifyLimit = 1000000;

std::optional<SubsetWitness> check_condition_1a(const QuadraticFamily& family);

struct Condition1bResult {
    std::vector<LegendreWitness> witnesses;
    std::optional<std::pair<uint32_t, Int>> gap;  // first failing (j, p) in scan order
};
Condition1bResult check_condition_1b(const QuadraticFamily& family, const SubsetWitness& T);

// Smallest index i with a_i = 1 (mod 8), a_i != 1.
std::optional<uint32_t> check_condition_2(const QuadraticFamily& family);

IntersectivityCertificate certify_intersective(const QuadraticFamily& family,
                                               uint64_t witness_scan_bound = kDefaultWitnessScanBound);

// Witness prime search: first the primes dividing 2*prod(a_i) ascending,
// then ascending primes with every Legendre symbol -1, up to scan_bound.
// nullopt = search exhausted.
std::optional<WitnessModulus> find_witness_modulus(const QuadraticFamily& family, uint64_t scan_bound);

// Independent decision path: solvable at every prime dividing 2*prod(a_i)
// plus an odd square subset covering all other primes.
Verdict decide_by_local_solvability(const QuadraticFamily& family);

}  // namespace mip::certifier
