#include "mip/constructor.hpp"

#include <bit>
#include <iostream>
#include <map>

namespace mip::constructor {

namespace {

void require_odd_prime_param(const Int& p, const char* name) {
    if (p < 3 || mpz_even_p(p.get_mpz_t()) || !ntheory::is_prime(p))
        throw std::domain_error(std::string(name) + " must be an odd prime, got " + to_decimal(p));
}

ResiduePair resolve_pair(const Int& p, const std::optional<ResiduePair>& override_pair) {
    if (!override_pair) return pick_residue_pair(p);
    const ResiduePair& rp = *override_pair;
    if (rp.non_residue <= 0 || rp.non_residue >= p || ntheory::legendre(rp.non_residue, p) != -1)
        throw std::domain_error("override b must be a non-residue in (0, p)");
    if (rp.residue <= 0 || rp.residue >= p || ntheory::legendre(rp.residue, p) != 1)
        throw std::domain_error("override c must be a residue in (0, p)");
    return rp;
}

SquarefreeInt rad_of_prefix(std::span<const SquarefreeInt> members, size_t count) {
    std::map<Int, unsigned> parity;
    for (size_t i = 0; i < count; ++i)
        for (const auto& pp : members[i].factorization.factors) parity[pp.prime] ^= (pp.exponent & 1);
    ntheory::Factored f;
    f.sign = 1;
    f.value = 1;
    for (const auto& [p, odd] : parity) {
        if (!odd) continue;
        f.value *= p;
        f.factors.push_back({p, 1});
    }
    return SquarefreeInt::from_factored(std::move(f));
}

}  // namespace

ResiduePair pick_residue_pair(const Int& p) {
    require_odd_prime_param(p, "p");
    Int b = 2;
    while (ntheory::legendre(b, p) != -1) ++b;
    return {b, Int(1)};
}

Int generic_residue(const Int& p) {
    for (Int c = 2; c < p; ++c) {
        if (mpz_perfect_square_p(c.get_mpz_t())) continue;
        if (ntheory::legendre(c, p) == 1) return c;
    }
    return 1;
}

SquarefreeInt search_squarefree_in_ap(const ntheory::ResidueClass& cls, const Int& lower_bound,
                                      uint64_t cap, uint32_t offset, uint64_t* candidates_examined) {
    if (cls.modulus < 2 || cls.residue < 0 || cls.residue >= cls.modulus)
        throw std::domain_error("search: malformed residue class");
    Int g = gcd(cls.residue, cls.modulus);
    if (!ntheory::is_squarefree(g))
        throw std::domain_error("search: gcd(residue, modulus) must be square-free");

    Int x = cls.residue;
    if (x <= lower_bound) {
        Int k = (lower_bound - x) / cls.modulus + 1;
        x += k * cls.modulus;
    }
    while (x < 2) x += cls.modulus;

    uint64_t examined = 0;
    uint32_t skipped = 0;
    while (examined < cap) {
        ++examined;
        if (auto f = ntheory::try_squarefree_factorize(x)) {
            if (skipped == offset) {
                if (candidates_examined) *candidates_examined += examined;
                return SquarefreeInt::from_factored(std::move(*f));
            }
            ++skipped;
        }
        x += cls.modulus;
    }
    throw search_exhausted_error("no square-free candidate within " + std::to_string(cap) +
                                 " steps of class " + to_decimal(cls.residue) + " mod " +
                                 to_decimal(cls.modulus));
}

Int lower_bound_for(std::span<const SquarefreeInt> members) {
    if (members.empty()) return 1;
    gf2::ExponentMatrix matrix = gf2::exponent_matrix(members);
    const size_t words = matrix.rows[0].size();
    // Row basis of the exponent matrix; every subset's rad corresponds to a
    // span element.
    std::vector<std::vector<uint64_t>> basis;
    for (const auto& r : matrix.rows) {
        std::vector<uint64_t> row = r;
        for (const auto& b : basis) {
            size_t lead = 0;
            for (size_t w = 0; w < words; ++w)
                if (b[w] != 0) {
                    lead = w * 64 + static_cast<size_t>(std::countr_zero(b[w]));
                    break;
                }
            if ((row[lead / 64] >> (lead % 64)) & 1)
                for (size_t w = 0; w < words; ++w) row[w] ^= b[w];
        }
        bool zero = true;
        for (uint64_t w : row) zero &= (w == 0);
        if (!zero) basis.push_back(std::move(row));
    }
    if (basis.size() > 26) throw std::domain_error("lower_bound_for: rank too large");
    Int best = 1;
    for (uint64_t combo = 0; combo < (uint64_t(1) << basis.size()); ++combo) {
        std::vector<uint64_t> acc(words, 0);
        for (size_t j = 0; j < basis.size(); ++j)
            if ((combo >> j) & 1)
                for (size_t w = 0; w < words; ++w) acc[w] ^= basis[j][w];
        Int prod = 1;
        for (size_t c = 0; c < matrix.column_primes.size(); ++c)
            if ((acc[c / 64] >> (c % 64)) & 1) prod *= matrix.column_primes[c];
        if (prod > best) best = prod;
    }
    return best;
}

ConstructionResult construct(const ConstructionParams& params) {
    if (params.n < 4) throw std::domain_error("construct: n must be >= 4");
    require_odd_prime_param(params.p1, "p1");
    require_odd_prime_param(params.p2, "p2");
    if (params.p1 == params.p2) throw std::domain_error("construct: p1 and p2 must differ");
    ResiduePair pair1 = resolve_pair(params.p1, params.choice1);
    ResiduePair pair2 = resolve_pair(params.p2, params.choice2);
    const uint32_t n = params.n;
    const bool even = (n % 2 == 0);

    std::vector<SquarefreeInt> members;
    ConstructionTrace trace;

    auto record = [&trace](StepTrace step) { trace.steps.push_back(std::move(step)); };

    // a1 = p1 * p2
    {
        StepTrace st;
        st.index = 1;
        st.method = "seed_product";
        st.chosen = params.p1 * params.p2;
        ntheory::Factored f;
        f.value = st.chosen;
        f.sign = 1;
        f.factors = {{std::min(params.p1, params.p2), 1}, {std::max(params.p1, params.p2), 1}};
        members.push_back(SquarefreeInt::from_factored(std::move(f)));
        record(std::move(st));
    }

    auto search_step = [&](uint32_t index, std::vector<ntheory::ResidueClass> targets,
                           uint32_t extra_offset) {
        StepTrace st;
        st.index = index;
        st.method = "search";
        st.targets = targets;
        st.lower_bound = lower_bound_for(members);
        st.combined = ntheory::crt(targets);
        SquarefreeInt found = search_squarefree_in_ap(*st.combined, st.lower_bound, params.search_cap,
                                                      params.offset + extra_offset,
                                                      &st.candidates_examined);
        st.chosen = found.value;
        members.push_back(std::move(found));
        record(std::move(st));
    };

    // a_2 .. a_{n-3}: non-residue targets at both seeds.
    for (uint32_t i = 2; i + 3 <= n; ++i)
        search_step(i, {{pair1.non_residue, params.p1}, {pair2.non_residue, params.p2}}, 0);

    // a_{n-2}: parity-dependent target at p1.
    search_step(n - 2,
                {{even ? pair1.non_residue : pair1.residue, params.p1},
                 {pair2.non_residue, params.p2}},
                0);

    // a_{n-1}: square-free part of the designated prefix product.
    {
        StepTrace st;
        st.index = n - 1;
        st.method = "rad_of_prefix";
        size_t count = even ? n - 2 : n - 3;
        members.push_back(rad_of_prefix(members, count));
        st.chosen = members.back().value;
        record(std::move(st));
    }

    // a_n: residue targets at every odd prime seen so far, plus 1 mod 8.
    std::vector<ntheory::ResidueClass> final_targets;
    {
        std::map<Int, bool> seen;
        for (const auto& m : members)
            for (const auto& pp : m.factorization.factors)
                if (pp.prime != 2) seen.emplace(pp.prime, true);
        final_targets.push_back({even ? pair1.residue : pair1.non_residue, params.p1});
        final_targets.push_back({pair2.residue, params.p2});
        for (const auto& [p, unused] : seen) {
            if (p == params.p1 || p == params.p2) continue;
            final_targets.push_back({generic_residue(p), p});
        }
        final_targets.push_back({Int(1), Int(8)});
    }

    constexpr uint32_t kMaxRetries = 16;
    for (uint32_t attempt = 0;; ++attempt) {
        search_step(n, final_targets, attempt);
        QuadraticFamily family = QuadraticFamily::from_members(members);
        try {
            auto report = minimality::certify_minimal(family, params.witness_scan_bound);
            if (report.verdict == minimality::MinimalVerdict::minimal) {
                return ConstructionResult{std::move(family), std::move(trace), std::move(report), attempt};
            }
            std::cerr << "construct: candidate a_n = " << to_decimal(members.back().value)
                      << " fails minimality, retrying\n";
        } catch (const minimality::base_not_intersective_error&) {
            std::cerr << "construct: candidate a_n = " << to_decimal(members.back().value)
                      << " fails intersectivity, retrying\n";
        }
        members.pop_back();
        trace.steps.pop_back();
        if (attempt + 1 >= kMaxRetries)
            throw search_exhausted_error("no candidate a_n passed the minimality postcondition");
    }
}

}  // namespace mip::constructor
