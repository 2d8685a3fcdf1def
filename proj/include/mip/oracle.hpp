#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mip/minimality.hpp"

namespace mip::oracle {

struct SweepResult {
    uint64_t max_checked = 0;
    std::optional<uint64_t> first_failure;
    std::map<uint64_t, uint64_t> roots_sample;  // selected moduli -> one root
};

struct DensityEstimate {
    uint64_t qualifying_count = 0;
    uint64_t scan_limit = 0;
    double empirical = 0.0;       // count / limit
    double formula_value = 0.0;   // (6/pi^2) (1/a) prod_{p|a} (1 - 1/p^2)^{-1}
    double relative_gap = 0.0;
};

// All x in [0, m) with prod(x^2 - a_i) = 0 (mod m), by direct evaluation
// with per-factor reduction.  m up to 2^32.
std::vector<uint64_t> roots_mod(std::span<const Int> members, uint64_t m);
bool has_root_mod(std::span<const Int> members, uint64_t m);

// Checks every m in [2, max_m] directly.
SweepResult sweep_naive(std::span<const Int> members, uint64_t max_m);

// Prime-power decomposition shortcut: m fails iff some prime power dividing
// it fails, so the first failing modulus is the first failing prime power.
SweepResult sweep(std::span<const Int> members, uint64_t max_m);

// Square-free members of the class in (lower_bound, limit], counted with a
// sieve; the formula value uses the 1/a-normalized density.
DensityEstimate density_scan(const ntheory::ResidueClass& cls, uint64_t lower_bound, uint64_t limit);

// Byte flags [0..limit]: 1 = square-free.
std::vector<uint8_t> squarefree_sieve(uint64_t limit);

// Re-checks every claim in the certificate against ntheory primitives and
// root scans only; certifier internals are never consulted.
bool verify_certificate(const certifier::IntersectivityCertificate& cert);
bool verify_report(const minimality::MinimalityReport& report);

}  // namespace mip::oracle
