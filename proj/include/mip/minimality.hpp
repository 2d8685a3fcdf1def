#pragma once

#include <cstdint>
#include <vector>

#include "mip/certifier.hpp"

namespace mip::minimality {

enum class MinimalVerdict { minimal, not_minimal };

struct DivisorReport {
    uint32_t dropped_index;  // 1-based
    certifier::IntersectivityCertificate certificate;
};

// Every integer-coefficient proper divisor of prod(x^2 - a_i) divides one of
// the n drop-one divisors, and intersectivity passes to multiples, so the n
// maximal divisors decide all of them.
struct MinimalityReport {
    certifier::IntersectivityCertificate base;
    std::vector<DivisorReport> divisors;
    MinimalVerdict verdict;
    std::vector<uint32_t> offending;  // drop indices that stay intersective
};

class base_not_intersective_error : public std::runtime_error {
  public:
    explicit base_not_intersective_error(certifier::IntersectivityCertificate cert)
        : std::runtime_error("family is not intersective; minimality does not apply"),
          base(std::move(cert)) {}
    certifier::IntersectivityCertificate base;
};

class unsupported_divisor_size_error : public std::domain_error {
  public:
    unsupported_divisor_size_error()
        : std::domain_error("drop-one divisor would have fewer than 3 factors") {}
};

// Family without member r (1-based), order preserved.  Requires n >= 4.
QuadraticFamily drop_one(const QuadraticFamily& family, uint32_t r);

MinimalityReport certify_minimal(const QuadraticFamily& family,
                                 uint64_t witness_scan_bound = certifier::kDefaultWitnessScanBound);

}  // namespace mip::minimality
