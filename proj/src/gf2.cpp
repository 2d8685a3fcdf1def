#include "mip/gf2.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace mip::gf2 {

namespace {

size_t words_for(size_t bits) { return (bits + 63) / 64; }

std::vector<uint32_t> mask_to_indices(uint64_t mask) {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; mask; ++i, mask >>= 1)
        if (mask & 1) out.push_back(i + 1);
    return out;
}

// Subset masks (bit i = member i) whose row-XOR vanishes, in elimination
// order over rows.
std::vector<uint64_t> kernel_masks(const ExponentMatrix& matrix) {
    const size_t n = matrix.rows.size();
    if (n > 64) throw std::domain_error("gf2 kernel: more than 64 members unsupported");
    const size_t words = matrix.rows.empty() ? 1 : matrix.rows[0].size();
    struct Pivot {
        std::vector<uint64_t> row;
        uint64_t mask;
        size_t lead;
    };
    std::vector<Pivot> pivots;
    std::vector<uint64_t> kernel;
    for (size_t i = 0; i < n; ++i) {
        std::vector<uint64_t> row = matrix.rows[i];
        uint64_t mask = uint64_t(1) << i;
        for (const Pivot& p : pivots) {
            if ((row[p.lead / 64] >> (p.lead % 64)) & 1) {
                for (size_t w = 0; w < words; ++w) row[w] ^= p.row[w];
                mask ^= p.mask;
            }
        }
        size_t lead = words * 64;
        for (size_t w = 0; w < words && lead == words * 64; ++w)
            if (row[w] != 0) lead = w * 64 + std::countr_zero(row[w]);
        if (lead == words * 64)
            kernel.push_back(mask);
        else
            pivots.push_back({std::move(row), mask, lead});
    }
    return kernel;
}

}  // namespace

ExponentMatrix exponent_matrix(std::span<const SquarefreeInt> members) {
    std::map<Int, size_t> column_of;
    for (const auto& m : members)
        for (const auto& pp : m.factorization.factors) column_of.emplace(pp.prime, 0);
    ExponentMatrix matrix;
    matrix.column_primes.reserve(column_of.size());
    for (auto& [p, idx] : column_of) {
        idx = matrix.column_primes.size();
        matrix.column_primes.push_back(p);
    }
    const size_t words = words_for(matrix.columns());
    for (const auto& m : members) {
        std::vector<uint64_t> row(words, 0);
        for (const auto& pp : m.factorization.factors) {
            size_t c = column_of[pp.prime];
            row[c / 64] |= uint64_t(1) << (c % 64);
        }
        if (m.factorization.sign < 0) {
            size_t c = matrix.sign_column();
            row[c / 64] |= uint64_t(1) << (c % 64);
        }
        matrix.rows.push_back(std::move(row));
    }
    return matrix;
}

std::vector<SubsetWitness> square_subsets_basis(const ExponentMatrix& matrix) {
    std::vector<SubsetWitness> out;
    for (uint64_t mask : kernel_masks(matrix)) out.push_back({mask_to_indices(mask)});
    return out;
}

std::optional<SubsetWitness> odd_square_subset(const ExponentMatrix& matrix) {
    std::vector<uint64_t> basis = kernel_masks(matrix);
    bool any_odd = false;
    for (uint64_t b : basis) any_odd |= (std::popcount(b) % 2 == 1);
    if (!any_odd) return std::nullopt;
    if (basis.size() > 24) throw std::domain_error("gf2 kernel: span too large to canonicalize");
    // Full span walk: popcount first, then lexicographic index order.
    uint64_t best = 0;
    std::vector<uint32_t> best_idx;
    for (uint64_t combo = 1; combo < (uint64_t(1) << basis.size()); ++combo) {
        uint64_t mask = 0;
        for (size_t j = 0; j < basis.size(); ++j)
            if ((combo >> j) & 1) mask ^= basis[j];
        if (mask == 0 || std::popcount(mask) % 2 == 0) continue;
        std::vector<uint32_t> idx = mask_to_indices(mask);
        if (best == 0 || idx.size() < best_idx.size() ||
            (idx.size() == best_idx.size() && idx < best_idx)) {
            best = mask;
            best_idx = std::move(idx);
        }
    }
    if (best == 0) return std::nullopt;
    return SubsetWitness{std::move(best_idx)};
}

bool subset_is_square(const ExponentMatrix& matrix, const std::vector<uint32_t>& indices) {
    if (matrix.rows.empty()) return false;
    const size_t words = matrix.rows[0].size();
    std::vector<uint64_t> acc(words, 0);
    for (uint32_t i : indices) {
        if (i < 1 || i > matrix.rows.size()) throw std::domain_error("subset index out of range");
        for (size_t w = 0; w < words; ++w) acc[w] ^= matrix.rows[i - 1][w];
    }
    for (uint64_t w : acc)
        if (w != 0) return false;
    return true;
}

}  // namespace mip::gf2
