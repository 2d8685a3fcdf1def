#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mip/family.hpp"

namespace mip::gf2 {

// Row i has bit c set iff column_primes[c] divides member i; the final
// (implicit) column is the sign bit.  A row subset XORs to zero exactly when
// the corresponding product is a perfect square.
struct ExponentMatrix {
    std::vector<Int> column_primes;          // ascending, across all members
    std::vector<std::vector<uint64_t>> rows; // bit rows, width columns()
    size_t columns() const { return column_primes.size() + 1; }
    size_t sign_column() const { return column_primes.size(); }
    bool bit(size_t row, size_t col) const { return (rows[row][col / 64] >> (col % 64)) & 1; }
};

struct SubsetWitness {
    std::vector<uint32_t> indices;  // 1-based, ascending, nonempty
    bool operator==(const SubsetWitness&) const = default;
};

ExponentMatrix exponent_matrix(std::span<const SquarefreeInt> members);

// Basis of the nullspace of the row-subset XOR map, in deterministic
// elimination order.  Empty list: only the empty subset is square.
std::vector<SubsetWitness> square_subsets_basis(const ExponentMatrix& matrix);

// Canonical odd-cardinality square subset: minimal cardinality, then
// lexicographically smallest index list, over the whole kernel span.
std::optional<SubsetWitness> odd_square_subset(const ExponentMatrix& matrix);

// True iff the row subset (1-based indices) XORs to zero.
bool subset_is_square(const ExponentMatrix& matrix, const std::vector<uint32_t>& indices);

}  // namespace mip::gf2
