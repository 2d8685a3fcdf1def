#include <doctest.h>

#include <random>

#include "mip/certifier.hpp"
#include "mip/oracle.hpp"

using namespace mip;
using namespace mip::certifier;

namespace {

QuadraticFamily fam(const std::vector<long>& values) {
    std::vector<Int> raw;
    for (long v : values) raw.push_back(Int(v));
    return QuadraticFamily::validate(raw);
}

const std::vector<long> kF4{15, 17, 255, 2161};
const std::vector<long> kF5{15, 17, 557, 255, 871711};

}  // namespace

TEST_CASE("family validation errors carry distinct codes") {
    CHECK_NOTHROW(fam(kF4));
    CHECK_NOTHROW(fam({-7, 10, 15}));

    auto code_of = [](const std::vector<long>& values) {
        std::vector<Int> raw;
        for (long v : values) raw.push_back(Int(v));
        try {
            QuadraticFamily::validate(raw);
        } catch (const family_error& e) {
            return e.code();
        }
        throw std::logic_error("expected validation failure");
    };
    CHECK(code_of({15, 17}) == FamilyError::too_few_members);
    CHECK(code_of({15, 17, 17}) == FamilyError::duplicate_member);
    CHECK(code_of({12, 17, 255}) == FamilyError::member_not_squarefree);
    CHECK(code_of({0, 17, 255}) == FamilyError::member_zero_or_one);
    CHECK(code_of({1, 17, 255}) == FamilyError::member_zero_or_one);
}

TEST_CASE("condition 1a") {
    CHECK(check_condition_1a(fam(kF4)).value().indices == std::vector<uint32_t>{1, 2, 3});
    CHECK(check_condition_1a(fam(kF5)).value().indices == std::vector<uint32_t>{1, 2, 4});
    CHECK_FALSE(check_condition_1a(fam({17, 255, 2161})).has_value());
}

TEST_CASE("condition 1b witnesses use the smallest index") {
    QuadraticFamily f4 = fam(kF4);
    auto result = check_condition_1b(f4, *check_condition_1a(f4));
    REQUIRE_FALSE(result.gap.has_value());
    // (15/17) = +1, so pairs at p = 17 are witnessed by index 1, the rest by 2161.
    std::vector<LegendreWitness> expected{
        {1, Int(3), 4, 1}, {1, Int(5), 4, 1}, {2, Int(17), 1, 1},
        {3, Int(3), 4, 1}, {3, Int(5), 4, 1}, {3, Int(17), 1, 1},
    };
    CHECK(result.witnesses == expected);
}

TEST_CASE("condition 1b gap") {
    QuadraticFamily f = fam({15, 17, 255});
    auto result = check_condition_1b(f, *check_condition_1a(f));
    REQUIRE(result.gap.has_value());
    CHECK(result.gap->first == 1);
    CHECK(result.gap->second == 3);
}

TEST_CASE("condition 2") {
    CHECK(check_condition_2(fam(kF4)) == 2);  // 17 = 8*2 + 1
    CHECK(check_condition_2(fam(kF5)) == 2);
    CHECK_FALSE(check_condition_2(fam({15, 255, 557})).has_value());  // 7, 7, 5 mod 8
    CHECK(check_condition_2(fam({-7, 10, 15})) == 1);                 // -7 = 1 (mod 8)
}

TEST_CASE("certify f4 intersective") {
    auto cert = certify_intersective(fam(kF4));
    CHECK(cert.verdict == Verdict::intersective);
    CHECK(cert.subset_T->indices == std::vector<uint32_t>{1, 2, 3});
    CHECK(cert.mod8_index == 2);
    CHECK(cert.legendre_witnesses.size() == 6);
    CHECK_FALSE(cert.witness_modulus.has_value());
    CHECK(oracle::verify_certificate(cert));
}

TEST_CASE("certify f5 intersective") {
    auto cert = certify_intersective(fam(kF5));
    CHECK(cert.verdict == Verdict::intersective);
    CHECK(cert.subset_T->indices == std::vector<uint32_t>{1, 2, 4});
    CHECK(cert.mod8_index == 2);
    CHECK(oracle::verify_certificate(cert));
}

TEST_CASE("certify (15,17,255) not intersective with scan-verified witness 27") {
    auto cert = certify_intersective(fam({15, 17, 255}));
    CHECK(cert.verdict == Verdict::not_intersective);
    REQUIRE(cert.failure.has_value());
    CHECK(cert.failure->kind == FailureKind::legendre_gap);
    CHECK(cert.failure->j == 1);
    CHECK(cert.failure->prime == 3);
    REQUIRE(cert.witness_modulus.has_value());
    CHECK(cert.witness_modulus->prime == 3);
    CHECK(cert.witness_modulus->exponent == 3);
    CHECK(cert.witness_modulus->modulus == 27);
    CHECK(cert.witness_modulus->verified_by_scan);
    CHECK_FALSE(cert.prop1_only);
    CHECK(oracle::verify_certificate(cert));
}

TEST_CASE("find_witness_modulus prefers family primes in ascending order") {
    // profiles at 3: (1, 0, 0, 1) -> exponent 3, modulus 27 (5 would also work)
    auto w = find_witness_modulus(fam({15, 17, 557, 255}), kDefaultWitnessScanBound);
    REQUIRE(w.has_value());
    CHECK(w->prime == 3);
    CHECK(w->exponent == 3);
    CHECK(w->modulus == 27);
    CHECK(w->verified_by_scan);
}

TEST_CASE("find_witness_modulus falls back to all-nonresidue primes") {
    // (17,255,2161) has no odd square subset; smallest prime with all
    // symbols -1 is the witness
    auto w = find_witness_modulus(fam({17, 255, 2161}), kDefaultWitnessScanBound);
    REQUIRE(w.has_value());
    CHECK(w->prime == 7);
    CHECK(w->exponent == 1);
    CHECK(w->modulus == 7);
    CHECK(ntheory::legendre(Int(17), Int(7)) == -1);
    CHECK(ntheory::legendre(Int(255), Int(7)) == -1);
    CHECK(ntheory::legendre(Int(2161), Int(7)) == -1);
    // and the scan bound can exhaust
    CHECK_FALSE(find_witness_modulus(fam({17, 255, 2161}), 5).has_value());
}

TEST_CASE("prop1_only flag when witness search exhausts") {
    auto cert = certify_intersective(fam({17, 255, 2161}), 5);
    CHECK(cert.verdict == Verdict::not_intersective);
    CHECK(cert.prop1_only);
    CHECK_FALSE(cert.witness_modulus.has_value());
    CHECK(oracle::verify_certificate(cert));
}

TEST_CASE("decide_by_local_solvability on the worked families") {
    CHECK(decide_by_local_solvability(fam(kF4)) == Verdict::intersective);
    CHECK(decide_by_local_solvability(fam(kF5)) == Verdict::intersective);
    CHECK(decide_by_local_solvability(fam({15, 17, 255})) == Verdict::not_intersective);
    CHECK(decide_by_local_solvability(fam({15, 17, 2161})) == Verdict::not_intersective);
}

TEST_CASE("certify agrees with local solvability on random families") {
    std::mt19937_64 rng(424243);
    std::vector<long> pool, small_pool;
    for (long v = 2; v <= 10000; ++v)
        if (ntheory::is_squarefree(Int(v))) {
            pool.push_back(v);
            if (v <= 100) small_pool.push_back(v);
        }
    int positives = 0;
    for (int trial = 0; trial < 120; ++trial) {
        size_t n = 3 + rng() % 6;
        std::vector<Int> values;
        if (trial % 3 == 0) {
            // plant {x, y, rad(xy)}: its product is always a perfect square,
            // so condition 1(a) holds and the later conditions decide
            Int x(small_pool[rng() % small_pool.size()]);
            Int y(small_pool[rng() % small_pool.size()]);
            Int r = ntheory::rad(x * y);
            if (x != y && r != 1 && r != x && r != y) values = {x, y, r};
        }
        while (values.size() < n) {
            Int v(pool[rng() % pool.size()]);
            if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
        }
        QuadraticFamily family = QuadraticFamily::validate(values);
        auto cert = certify_intersective(family);
        auto direct = decide_by_local_solvability(family);
        REQUIRE(cert.verdict == direct);
        REQUIRE(oracle::verify_certificate(cert));
        if (cert.verdict == Verdict::intersective) {
            ++positives;
            // soundness against brute force: roots exist everywhere below 5000
            REQUIRE_FALSE(oracle::sweep(family.values(), 5000).first_failure.has_value());
        }
    }
    CHECK(positives > 0);  // the planted dependencies must surface some positives
}

TEST_CASE("intersective family has a +1 member at generic primes") {
    QuadraticFamily f4 = fam(kF4);
    std::mt19937_64 rng(7);
    auto primes = ntheory::small_primes(2000000);
    int tested = 0;
    while (tested < 100) {
        uint32_t p = primes[rng() % primes.size()];
        if (p == 2 || p == 3 || p == 5 || p == 17 || p == 2161) continue;
        bool some_positive = false;
        for (const Int& a : f4.values())
            if (ntheory::legendre(a, Int(p)) == 1) some_positive = true;
        REQUIRE(some_positive);
        ++tested;
    }
}
