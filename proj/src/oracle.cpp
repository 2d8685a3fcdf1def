#include "mip/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <set>

namespace mip::oracle {

namespace {

constexpr uint64_t kScanLimit = uint64_t(1) << 32;

std::vector<uint64_t> reduce_members(std::span<const Int> members, uint64_t m) {
    std::vector<uint64_t> out;
    out.reserve(members.size());
    for (const Int& a : members) out.push_back(mod_u64(a, m));
    return out;
}

bool has_root_reduced(const std::vector<uint64_t>& reduced, uint64_t m) {
    for (uint64_t x = 0; x < m; ++x) {
        uint64_t sq = mulmod_u64(x, x, m);
        uint64_t prod = 1;
        for (uint64_t a : reduced) {
            prod = mulmod_u64(prod, (sq + m - a) % m, m);
            if (prod == 0) break;
        }
        if (prod == 0) return true;
    }
    return false;
}

std::vector<uint64_t> sample_moduli(uint64_t max_m) {
    std::vector<uint64_t> out{2};
    for (uint64_t m = 10; m <= max_m && m <= 1000000000ull; m *= 10) out.push_back(m);
    if (max_m != 2 && (out.empty() || out.back() != max_m)) out.push_back(max_m);
    return out;
}

void fill_samples(SweepResult& result, std::span<const Int> members, uint64_t max_m) {
    for (uint64_t m : sample_moduli(max_m)) {
        if (result.first_failure && m >= *result.first_failure) continue;
        auto roots = roots_mod(members, m);
        if (!roots.empty()) result.roots_sample[m] = roots.front();
    }
}

bool family_values_valid(const std::vector<Int>& values) {
    if (values.size() < 3) return false;
    std::set<Int> seen;
    for (const Int& v : values) {
        if (v == 0 || v == 1) return false;
        if (!seen.insert(v).second) return false;
        if (!ntheory::is_squarefree(v)) return false;
    }
    return true;
}

bool product_is_positive_square(const std::vector<Int>& values, const std::vector<uint32_t>& indices) {
    Int prod = 1;
    for (uint32_t i : indices) {
        if (i < 1 || i > values.size()) return false;
        prod *= values[i - 1];
    }
    return sgn(prod) > 0 && mpz_perfect_square_p(prod.get_mpz_t());
}

// Exhaustive refutation of condition 1(a).
bool no_odd_square_subset_by_enumeration(const std::vector<Int>& values) {
    const size_t n = values.size();
    if (n > 24) throw std::domain_error("verify: family too large for subset enumeration");
    for (uint32_t mask = 1; mask < (uint32_t(1) << n); ++mask) {
        if (std::popcount(mask) % 2 == 0) continue;
        Int prod = 1;
        for (size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) prod *= values[i];
        if (sgn(prod) > 0 && mpz_perfect_square_p(prod.get_mpz_t())) return false;
    }
    return true;
}

}  // namespace

std::vector<uint64_t> roots_mod(std::span<const Int> members, uint64_t m) {
    if (m < 2) throw std::domain_error("roots_mod: modulus must be >= 2");
    if (m > kScanLimit) throw std::domain_error("roots_mod: modulus too large to scan");
    std::vector<uint64_t> reduced = reduce_members(members, m);
    std::vector<uint64_t> roots;
    for (uint64_t x = 0; x < m; ++x) {
        uint64_t sq = mulmod_u64(x, x, m);
        uint64_t prod = 1;
        for (uint64_t a : reduced) {
            prod = mulmod_u64(prod, (sq + m - a) % m, m);
            if (prod == 0) break;
        }
        if (prod == 0) roots.push_back(x);
    }
    return roots;
}

bool has_root_mod(std::span<const Int> members, uint64_t m) {
    if (m < 2) throw std::domain_error("has_root_mod: modulus must be >= 2");
    if (m > kScanLimit) throw std::domain_error("has_root_mod: modulus too large to scan");
    return has_root_reduced(reduce_members(members, m), m);
}

SweepResult sweep_naive(std::span<const Int> members, uint64_t max_m) {
    if (max_m < 2) throw std::domain_error("sweep: max_m must be >= 2");
    SweepResult result;
    result.max_checked = max_m;
    for (uint64_t m = 2; m <= max_m; ++m) {
        if (!has_root_mod(members, m)) {
            result.first_failure = m;
            break;
        }
    }
    fill_samples(result, members, max_m);
    return result;
}

SweepResult sweep(std::span<const Int> members, uint64_t max_m) {
    if (max_m < 2) throw std::domain_error("sweep: max_m must be >= 2");
    SweepResult result;
    result.max_checked = max_m;
    std::optional<uint64_t> failure;
    for (uint32_t p : ntheory::small_primes(static_cast<uint32_t>(std::min(max_m + 1, kScanLimit)))) {
        if (failure && p >= *failure) break;
        Int pz(p);
        auto exponent = ntheory::witness_exponent(members, pz);
        if (!exponent) continue;  // Hensel-liftable at p: every power has a root
        uint64_t pk = p;
        for (unsigned k = 1; pk <= max_m; ++k) {
            if (failure && pk >= *failure) break;
            if (!has_root_mod(members, pk)) {
                failure = pk;
                break;
            }
            if (pk > max_m / p) break;
            pk *= p;
        }
    }
    result.first_failure = failure;
    fill_samples(result, members, max_m);
    return result;
}

std::vector<uint8_t> squarefree_sieve(uint64_t limit) {
    if (limit > 100000000ull) throw std::domain_error("squarefree_sieve: limit too large");
    std::vector<uint8_t> flags(limit + 1, 1);
    flags[0] = 0;
    for (uint32_t p : ntheory::small_primes(static_cast<uint32_t>(std::sqrt(double(limit))) + 2)) {
        uint64_t q = uint64_t(p) * p;
        if (q > limit) break;
        for (uint64_t x = q; x <= limit; x += q) flags[x] = 0;
    }
    return flags;
}

DensityEstimate density_scan(const ntheory::ResidueClass& cls, uint64_t lower_bound, uint64_t limit) {
    if (cls.modulus < 2 || cls.residue < 0 || cls.residue >= cls.modulus)
        throw std::domain_error("density_scan: malformed residue class");
    if (limit <= lower_bound) throw std::domain_error("density_scan: limit must exceed lower_bound");
    DensityEstimate est;
    est.scan_limit = limit;

    std::vector<uint8_t> flags = squarefree_sieve(limit);
    Int x = cls.residue;
    while (x <= Int(static_cast<unsigned long>(lower_bound))) x += cls.modulus;
    while (x <= Int(static_cast<unsigned long>(limit))) {
        if (flags[to_u64(x)]) ++est.qualifying_count;
        x += cls.modulus;
    }
    est.empirical = double(est.qualifying_count) / double(limit);

    Int g = gcd(cls.residue, cls.modulus);
    if (g != 0 && ntheory::is_squarefree(g)) {
        long double value = 6.0L / (std::numbers::pi_v<long double> * std::numbers::pi_v<long double>);
        value /= mpz_get_d(cls.modulus.get_mpz_t());
        for (const auto& pp : ntheory::factorize(cls.modulus).factors) {
            long double p = mpz_get_d(pp.prime.get_mpz_t());
            value /= (1.0L - 1.0L / (p * p));
        }
        est.formula_value = double(value);
    } else {
        est.formula_value = 0.0;  // Prop-2 hypothesis violated: no square-free members at all
    }
    if (est.formula_value > 0)
        est.relative_gap = std::abs(est.empirical - est.formula_value) / est.formula_value;
    return est;
}

bool verify_certificate(const certifier::IntersectivityCertificate& cert) {
    const std::vector<Int>& values = cert.family;
    if (!family_values_valid(values)) return false;
    const uint32_t n = static_cast<uint32_t>(values.size());

    if (cert.verdict == certifier::Verdict::intersective) {
        if (cert.failure || cert.witness_modulus || cert.prop1_only) return false;
        // 1(a): odd-cardinality subset with a square product.
        if (!cert.subset_T) return false;
        const auto& T = cert.subset_T->indices;
        if (T.empty() || T.size() % 2 == 0) return false;
        if (!std::is_sorted(T.begin(), T.end()) || std::adjacent_find(T.begin(), T.end()) != T.end())
            return false;
        if (T.back() > n) return false;
        if (!product_is_positive_square(values, T)) return false;
        // 1(b): every (j in T, odd p | a_j) pair covered by a valid witness.
        for (const auto& w : cert.legendre_witnesses) {
            if (w.i < 1 || w.i > n || w.j < 1 || w.j > n || w.i == w.j) return false;
            if (w.symbol != 1) return false;
            if (ntheory::legendre(values[w.i - 1], w.prime) != 1) return false;
        }
        for (uint32_t j : T) {
            for (const auto& pp : ntheory::factorize(values[j - 1]).factors) {
                if (pp.prime == 2) continue;
                bool covered = false;
                for (const auto& w : cert.legendre_witnesses)
                    if (w.j == j && w.prime == pp.prime) covered = true;
                if (!covered) return false;
            }
        }
        // Condition 2.
        if (!cert.mod8_index) return false;
        if (*cert.mod8_index < 1 || *cert.mod8_index > n) return false;
        const Int& m8 = values[*cert.mod8_index - 1];
        return m8 != 1 && mpz_fdiv_ui(m8.get_mpz_t(), 8) == 1;
    }

    // NOT_INTERSECTIVE: the failure evidence must refute on its own.
    if (!cert.failure) return false;
    if (cert.subset_T) {
        // present when condition 1(a) held; still a claim, so re-check it
        const auto& T = cert.subset_T->indices;
        if (T.empty() || T.size() % 2 == 0 || !std::is_sorted(T.begin(), T.end())) return false;
        if (std::adjacent_find(T.begin(), T.end()) != T.end() || T.back() > n) return false;
        if (!product_is_positive_square(values, T)) return false;
    }
    switch (cert.failure->kind) {
        case certifier::FailureKind::no_odd_square_subset:
            if (!no_odd_square_subset_by_enumeration(values)) return false;
            break;
        case certifier::FailureKind::legendre_gap: {
            uint32_t j = cert.failure->j;
            const Int& p = cert.failure->prime;
            if (j < 1 || j > n) return false;
            if (p < 3 || mpz_even_p(p.get_mpz_t()) || !ntheory::is_prime(p)) return false;
            if (!mpz_divisible_p(values[j - 1].get_mpz_t(), p.get_mpz_t())) return false;
            for (uint32_t i = 1; i <= n; ++i)
                if (i != j && ntheory::legendre(values[i - 1], p) == 1) return false;
            break;
        }
        case certifier::FailureKind::no_mod8_member:
            for (const Int& v : values)
                if (v != 1 && mpz_fdiv_ui(v.get_mpz_t(), 8) == 1) return false;
            break;
        default:
            return false;
    }
    if (cert.witness_modulus) {
        if (cert.prop1_only) return false;
        const auto& w = *cert.witness_modulus;
        if (w.exponent < 1 || !ntheory::is_prime(w.prime)) return false;
        Int expected;
        mpz_pow_ui(expected.get_mpz_t(), w.prime.get_mpz_t(), w.exponent);
        if (expected != w.modulus) return false;
        auto e = ntheory::witness_exponent(values, w.prime);
        if (!e || *e > w.exponent) return false;
        if (w.verified_by_scan) {
            if (w.modulus > Int(static_cast<unsigned long>(certifier::kScanVerifyLimit))) return false;
            if (!roots_mod(values, to_u64(w.modulus)).empty()) return false;
        }
    }
    return true;
}

bool verify_report(const minimality::MinimalityReport& report) {
    if (report.base.verdict != certifier::Verdict::intersective) return false;
    if (!verify_certificate(report.base)) return false;
    const std::vector<Int>& values = report.base.family;
    const uint32_t n = static_cast<uint32_t>(values.size());
    if (n < 4 || report.divisors.size() != n) return false;

    std::vector<uint32_t> offending;
    for (uint32_t r = 1; r <= n; ++r) {
        const auto& entry = report.divisors[r - 1];
        if (entry.dropped_index != r) return false;
        std::vector<Int> expected;
        for (uint32_t i = 1; i <= n; ++i)
            if (i != r) expected.push_back(values[i - 1]);
        if (entry.certificate.family != expected) return false;
        if (!verify_certificate(entry.certificate)) return false;
        if (entry.certificate.verdict == certifier::Verdict::intersective) offending.push_back(r);
    }
    bool minimal = offending.empty();
    if (minimal != (report.verdict == minimality::MinimalVerdict::minimal)) return false;
    return report.offending == offending;
}

}  // namespace mip::oracle
