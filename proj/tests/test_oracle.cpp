#include <doctest.h>

#include <random>

#include "mip/oracle.hpp"

using namespace mip;
using namespace mip::oracle;

namespace {

QuadraticFamily fam(const std::vector<long>& values) {
    std::vector<Int> raw;
    for (long v : values) raw.push_back(Int(v));
    return QuadraticFamily::validate(raw);
}

const std::vector<long> kF4{15, 17, 255, 2161};

}  // namespace

TEST_CASE("roots_mod") {
    QuadraticFamily f4 = fam(kF4);
    CHECK(roots_mod(fam({15, 17, 255}).values(), 27).empty());
    auto mod8 = roots_mod(f4.values(), 8);
    CHECK(mod8 == std::vector<uint64_t>{1, 3, 5, 7});  // x^2 = 1 = 2161 (mod 8)
    auto mod9 = roots_mod(fam({15, 17, 255}).values(), 9);
    CHECK(mod9 == std::vector<uint64_t>{0, 3, 6});
    CHECK_FALSE(roots_mod(f4.values(), 2).empty());
    CHECK_THROWS_AS(roots_mod(f4.values(), 1), std::domain_error);
}

TEST_CASE("sweep finds the first failing modulus") {
    auto result = sweep(fam({15, 17, 255}).values(), 30);
    REQUIRE(result.first_failure.has_value());
    CHECK(*result.first_failure == 27);
    auto naive = sweep_naive(fam({15, 17, 255}).values(), 30);
    REQUIRE(naive.first_failure.has_value());
    CHECK(*naive.first_failure == 27);
}

TEST_CASE("sweep f4 to 10^4 is clean") {
    auto result = sweep(fam(kF4).values(), 10000);
    CHECK_FALSE(result.first_failure.has_value());
    CHECK(result.max_checked == 10000);
    // samples contain genuine roots
    for (const auto& [m, root] : result.roots_sample) {
        auto roots = roots_mod(fam(kF4).values(), m);
        CHECK(std::find(roots.begin(), roots.end(), root) != roots.end());
    }
}

TEST_CASE("shortcut sweep equals naive sweep on random families") {
    std::mt19937_64 rng(991188);
    std::vector<long> pool;
    for (long v = 2; v <= 400; ++v)
        if (ntheory::is_squarefree(Int(v))) pool.push_back(v);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Int> values;
        size_t n = 3 + rng() % 4;
        while (values.size() < n) {
            Int v(pool[rng() % pool.size()]);
            if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
        }
        auto fast = sweep(values, 1000);
        auto slow = sweep_naive(values, 1000);
        REQUIRE(fast.first_failure == slow.first_failure);
    }
}

TEST_CASE("density: the f4 progression") {
    auto est = density_scan({Int(121), Int(2040)}, 255, 1000000);
    CHECK(est.qualifying_count == 461);
    CHECK(est.empirical == doctest::Approx(4.61e-4));
    CHECK(est.formula_value == doctest::Approx(4.6725e-4).epsilon(1e-3));
    CHECK(est.relative_gap < 0.10);
}

TEST_CASE("density: odd square-free control case") {
    auto est = density_scan({Int(1), Int(2)}, 0, 1000000);
    CHECK(est.qualifying_count == 405286);
    double expected = (6.0 / (3.14159265358979323846 * 3.14159265358979323846)) * 0.5 * (4.0 / 3.0);
    CHECK(est.formula_value == doctest::Approx(expected).epsilon(1e-9));
    CHECK(est.relative_gap < 0.01);
}

TEST_CASE("density: class with square gcd counts nothing") {
    auto est = density_scan({Int(0), Int(4)}, 0, 10000);
    CHECK(est.qualifying_count == 0);
    CHECK(est.empirical == 0.0);
    CHECK(est.formula_value == 0.0);
}

TEST_CASE("density stability between 10^5 and 10^6") {
    auto small = density_scan({Int(121), Int(2040)}, 255, 100000);
    auto large = density_scan({Int(121), Int(2040)}, 255, 1000000);
    CHECK(std::abs(small.empirical - large.empirical) / large.empirical < 0.10);
}

TEST_CASE("verify accepts emitted certificates and rejects tampering") {
    auto cert = certifier::certify_intersective(fam(kF4));
    REQUIRE(verify_certificate(cert));

    auto tampered = cert;
    tampered.subset_T->indices = {1, 2};  // parity broken
    CHECK_FALSE(verify_certificate(tampered));

    tampered = cert;
    tampered.mod8_index = 1;  // 15 != 1 (mod 8)
    CHECK_FALSE(verify_certificate(tampered));

    auto neg = certifier::certify_intersective(fam({15, 17, 255}));
    REQUIRE(verify_certificate(neg));
    auto bad_witness = neg;
    bad_witness.witness_modulus->modulus = 9;  // roots exist mod 9
    bad_witness.witness_modulus->exponent = 2;
    CHECK_FALSE(verify_certificate(bad_witness));
}

TEST_CASE("verify rejects a verdict flip") {
    auto cert = certifier::certify_intersective(fam({15, 17, 255}));
    cert.verdict = certifier::Verdict::intersective;
    cert.subset_T = gf2::SubsetWitness{{1, 2, 3}};
    cert.failure.reset();
    cert.witness_modulus.reset();
    cert.mod8_index = 2;  // 17 = 1 (mod 8), but 1(b) cannot be evidenced
    CHECK_FALSE(verify_certificate(cert));
}

TEST_CASE("verify_report on minimality output") {
    auto report = minimality::certify_minimal(fam(kF4));
    CHECK(verify_report(report));
    auto broken = report;
    broken.verdict = minimality::MinimalVerdict::not_minimal;
    broken.offending = {4};
    CHECK_FALSE(verify_report(broken));
}
