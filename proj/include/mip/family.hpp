#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mip/integer.hpp"
#include "mip/ntheory.hpp"

namespace mip {

// Validated square-free integer, never 0 or 1, negatives allowed; carries
// its factorization.
struct SquarefreeInt {
    Int value;
    ntheory::Factored factorization;

    static SquarefreeInt make(const Int& v);
    static SquarefreeInt from_factored(ntheory::Factored f);
};

enum class FamilyError {
    too_few_members,
    duplicate_member,
    member_zero_or_one,
    member_not_squarefree,
};

class family_error : public std::runtime_error {
  public:
    family_error(FamilyError code, const std::string& what) : std::runtime_error(what), code_(code) {}
    FamilyError code() const { return code_; }

  private:
    FamilyError code_;
};

const char* to_string(FamilyError code);

// Ordered members a_1..a_n of prod(x^2 - a_i), n >= 3, pairwise distinct
// square-free integers, none 0 or 1.  No member is a perfect square, so the
// polynomial has no rational root.
class QuadraticFamily {
  public:
    static QuadraticFamily validate(const std::vector<Int>& raw);
    static QuadraticFamily from_members(std::vector<SquarefreeInt> members);

    size_t size() const { return members_.size(); }
    const std::vector<SquarefreeInt>& members() const { return members_; }
    const SquarefreeInt& member(uint32_t index1) const { return members_.at(index1 - 1); }
    const std::vector<Int>& values() const { return values_; }

    // Ascending odd primes dividing some member.
    std::vector<Int> odd_primes() const;
    // Ascending primes dividing 2 * prod a_i (always includes 2).
    std::vector<Int> relevant_primes() const;

  private:
    QuadraticFamily() = default;
    std::vector<SquarefreeInt> members_;
    std::vector<Int> values_;
};

}  // namespace mip
