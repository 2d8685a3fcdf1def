#include "mip/certifier.hpp"

#include <algorithm>

namespace mip::certifier {

namespace {

// Local root scan used only to stamp verified_by_scan on emitted witnesses;
// the oracle keeps its own independent implementation.
bool scan_has_root(const std::vector<Int>& values, uint64_t m) {
    std::vector<uint64_t> reduced;
    reduced.reserve(values.size());
    for (const Int& a : values) reduced.push_back(mod_u64(a, m));
    for (uint64_t x = 0; x < m; ++x) {
        uint64_t sq = mulmod_u64(x, x, m);
        uint64_t prod = 1;
        for (uint64_t a : reduced) {
            prod = mulmod_u64(prod, (sq + m - a) % m, m);
            if (prod == 0) return true;
        }
    }
    return false;
}

}  // namespace

std::optional<SubsetWitness> check_condition_1a(const QuadraticFamily& family) {
    return gf2::odd_square_subset(gf2::exponent_matrix(family.members()));
}

Condition1bResult check_condition_1b(const QuadraticFamily& family, const SubsetWitness& T) {
    Condition1bResult out;
    for (uint32_t j : T.indices) {
        const SquarefreeInt& aj = family.member(j);
        for (const auto& pp : aj.factorization.factors) {
            if (pp.prime == 2) continue;
            bool covered = false;
            for (uint32_t i = 1; i <= family.size(); ++i) {
                if (i == j) continue;
                if (ntheory::legendre(family.member(i).value, pp.prime) == 1) {
                    out.witnesses.push_back({j, pp.prime, i, 1});
                    covered = true;
                    break;
                }
            }
            if (!covered) {
                out.gap = {j, pp.prime};
                return out;
            }
        }
    }
    return out;
}

std::optional<uint32_t> check_condition_2(const QuadraticFamily& family) {
    for (uint32_t i = 1; i <= family.size(); ++i) {
        const Int& v = family.member(i).value;
        if (v != 1 && mpz_fdiv_ui(v.get_mpz_t(), 8) == 1) return i;
    }
    return std::nullopt;
}

IntersectivityCertificate certify_intersective(const QuadraticFamily& family, uint64_t witness_scan_bound) {
    IntersectivityCertificate cert;
    cert.family = family.values();

    std::optional<SubsetWitness> T = check_condition_1a(family);
    if (!T) {
        cert.verdict = Verdict::not_intersective;
        cert.failure = Failure{FailureKind::no_odd_square_subset};
    } else {
        Condition1bResult cond1b = check_condition_1b(family, *T);
        if (cond1b.gap) {
            cert.verdict = Verdict::not_intersective;
            cert.subset_T = *T;
            cert.failure = Failure{FailureKind::legendre_gap, cond1b.gap->first, cond1b.gap->second};
        } else {
            std::optional<uint32_t> mod8 = check_condition_2(family);
            if (!mod8) {
                cert.verdict = Verdict::not_intersective;
                cert.subset_T = *T;
                cert.failure = Failure{FailureKind::no_mod8_member};
            } else {
                cert.verdict = Verdict::intersective;
                cert.subset_T = std::move(*T);
                cert.legendre_witnesses = std::move(cond1b.witnesses);
                cert.mod8_index = *mod8;
                return cert;
            }
        }
    }

    if (auto w = find_witness_modulus(family, witness_scan_bound))
        cert.witness_modulus = std::move(*w);
    else
        cert.prop1_only = true;
    return cert;
}

std::optional<WitnessModulus> find_witness_modulus(const QuadraticFamily& family, uint64_t scan_bound) {
    auto make_witness = [&](const Int& p, unsigned exponent) {
        WitnessModulus w;
        w.prime = p;
        w.exponent = exponent;
        mpz_pow_ui(w.modulus.get_mpz_t(), p.get_mpz_t(), exponent);
        if (w.modulus <= Int(static_cast<unsigned long>(kScanVerifyLimit))) {
            uint64_t m = to_u64(w.modulus);
            w.verified_by_scan = !scan_has_root(family.values(), m);
        }
        return w;
    };

    for (const Int& p : family.relevant_primes()) {
        auto e = ntheory::witness_exponent(family.values(), p);
        if (e) return make_witness(p, *e);
    }
    // Primes coprime to the family where every symbol is -1: the polynomial
    // has no root even modulo p.
    for (uint32_t p : ntheory::small_primes(static_cast<uint32_t>(std::min<uint64_t>(scan_bound, UINT32_MAX)))) {
        if (p == 2) continue;
        Int pz(p);
        bool all_negative = true;
        for (const Int& a : family.values()) {
            if (ntheory::legendre(a, pz) != -1) {
                all_negative = false;
                break;
            }
        }
        if (all_negative) return make_witness(pz, 1);
    }
    return std::nullopt;
}

Verdict decide_by_local_solvability(const QuadraticFamily& family) {
    for (const Int& p : family.relevant_primes()) {
        if (ntheory::witness_exponent(family.values(), p).has_value()) return Verdict::not_intersective;
    }
    if (!gf2::odd_square_subset(gf2::exponent_matrix(family.members()))) return Verdict::not_intersective;
    return Verdict::intersective;
}

}  // namespace mip::certifier
