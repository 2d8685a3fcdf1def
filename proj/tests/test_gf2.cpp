#include <doctest.h>

#include <algorithm>
#include <bit>
#include <random>

#include "mip/gf2.hpp"

using namespace mip;
using namespace mip::gf2;

namespace {

std::vector<SquarefreeInt> make_members(const std::vector<long>& values) {
    std::vector<SquarefreeInt> out;
    for (long v : values) out.push_back(SquarefreeInt::make(Int(v)));
    return out;
}

bool product_is_square(const std::vector<long>& values, uint32_t mask) {
    Int prod = 1;
    for (size_t i = 0; i < values.size(); ++i)
        if ((mask >> i) & 1) prod *= values[i];
    return sgn(prod) > 0 && mpz_perfect_square_p(prod.get_mpz_t());
}

uint32_t witness_mask(const SubsetWitness& w) {
    uint32_t m = 0;
    for (uint32_t i : w.indices) m |= uint32_t(1) << (i - 1);
    return m;
}

// Membership of mask in the GF(2) span of basis masks.  Kernel basis masks
// are echelon in their highest bit (the dependent row's index).
bool in_span(uint32_t mask, const std::vector<uint32_t>& basis) {
    for (uint32_t b : basis) {
        uint32_t high = uint32_t(1) << (31 - std::countl_zero(b));
        if (mask & high) mask ^= b;
    }
    return mask == 0;
}

}  // namespace

TEST_CASE("exponent matrix for the n=4 family") {
    auto members = make_members({15, 17, 255, 2161});
    ExponentMatrix m = exponent_matrix(members);
    REQUIRE(m.column_primes == std::vector<Int>{Int(3), Int(5), Int(17), Int(2161)});
    // rows: 15 -> {3,5}; 17 -> {17}; 255 -> {3,5,17}; 2161 -> {2161}
    CHECK(m.bit(0, 0));
    CHECK(m.bit(0, 1));
    CHECK_FALSE(m.bit(0, 2));
    CHECK_FALSE(m.bit(0, 3));
    CHECK(m.bit(1, 2));
    CHECK(m.bit(2, 0));
    CHECK(m.bit(2, 1));
    CHECK(m.bit(2, 2));
    CHECK(m.bit(3, 3));
    for (size_t r = 0; r < 4; ++r) CHECK_FALSE(m.bit(r, m.sign_column()));
    // XOR of rows 1,2,3 vanishes: 15*17*255 = 255^2
    CHECK(subset_is_square(m, {1, 2, 3}));
    CHECK_FALSE(subset_is_square(m, {1, 2}));
}

TEST_CASE("sign column") {
    auto members = make_members({-1, 2, 3});
    ExponentMatrix m = exponent_matrix(members);
    CHECK(m.bit(0, m.sign_column()));
    CHECK_FALSE(m.bit(1, m.sign_column()));
    // (-1)*(-1) would be square, but a single -1 is not
    CHECK_FALSE(subset_is_square(m, {1}));
    auto members2 = make_members({-2, -3, 6});
    ExponentMatrix m2 = exponent_matrix(members2);
    CHECK(subset_is_square(m2, {1, 2, 3}));  // (-2)(-3)(6) = 36
    CHECK(odd_square_subset(m2).value().indices == std::vector<uint32_t>{1, 2, 3});
}

TEST_CASE("kernel basis examples") {
    auto basis = square_subsets_basis(exponent_matrix(make_members({15, 17, 255, 2161})));
    REQUIRE(basis.size() == 1);
    CHECK(basis[0].indices == std::vector<uint32_t>{1, 2, 3});

    CHECK(square_subsets_basis(exponent_matrix(make_members({17, 255, 2161}))).empty());
}

TEST_CASE("odd_square_subset examples") {
    CHECK(odd_square_subset(exponent_matrix(make_members({15, 17, 255, 2161}))).value().indices ==
          std::vector<uint32_t>{1, 2, 3});
    CHECK(odd_square_subset(exponent_matrix(make_members({15, 17, 557, 255, 871711}))).value().indices ==
          std::vector<uint32_t>{1, 2, 4});
    CHECK_FALSE(odd_square_subset(exponent_matrix(make_members({15, 17, 2161}))).has_value());
    CHECK(odd_square_subset(exponent_matrix(make_members({2, 3, 6}))).value().indices ==
          std::vector<uint32_t>{1, 2, 3});
    // {2, 3, 5, 30}: only square subset is all four (even cardinality) -> none
    CHECK_FALSE(odd_square_subset(exponent_matrix(make_members({2, 3, 5, 30}))).has_value());
}

TEST_CASE("kernel agrees with exhaustive enumeration on random families") {
    std::mt19937_64 rng(20260809);
    // pool of square-free values (both signs), small enough to enumerate
    std::vector<long> pool;
    for (long v = 2; v <= 600; ++v)
        if (ntheory::is_squarefree(Int(v))) {
            pool.push_back(v);
            pool.push_back(-v);
        }
    for (int trial = 0; trial < 100; ++trial) {
        size_t n = 3 + rng() % 10;  // up to 12
        std::vector<long> values;
        while (values.size() < n) {
            long v = pool[rng() % pool.size()];
            if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
        }
        ExponentMatrix m = exponent_matrix(make_members(values));
        auto basis = square_subsets_basis(m);
        std::vector<uint32_t> basis_masks;
        for (const auto& b : basis) basis_masks.push_back(witness_mask(b));
        bool any_odd_enumerated = false;
        std::vector<uint32_t> minimal_odd_indices;
        for (uint32_t mask = 1; mask < (uint32_t(1) << n); ++mask) {
            bool square = product_is_square(values, mask);
            REQUIRE(square == in_span(mask, basis_masks));
            std::vector<uint32_t> idx;
            for (size_t i = 0; i < n; ++i)
                if ((mask >> i) & 1) idx.push_back(static_cast<uint32_t>(i + 1));
            REQUIRE(square == subset_is_square(m, idx));
            if (square && idx.size() % 2 == 1) {
                any_odd_enumerated = true;
                if (minimal_odd_indices.empty() || idx.size() < minimal_odd_indices.size() ||
                    (idx.size() == minimal_odd_indices.size() && idx < minimal_odd_indices)) {
                    minimal_odd_indices = idx;
                }
            }
        }
        auto chosen = odd_square_subset(m);
        REQUIRE(chosen.has_value() == any_odd_enumerated);
        if (chosen) {
            REQUIRE(chosen->indices == minimal_odd_indices);
            REQUIRE(product_is_square(values, witness_mask(*chosen)));
        }
        // parity is linear on the kernel: odd subset exists iff some basis vector is odd
        bool basis_odd = false;
        for (uint32_t b : basis_masks) basis_odd |= (std::popcount(b) % 2 == 1);
        REQUIRE(basis_odd == any_odd_enumerated);
    }
}
