#include "mip/family.hpp"

#include <algorithm>
#include <set>

namespace mip {

SquarefreeInt SquarefreeInt::make(const Int& v) {
    if (v == 0 || v == 1) throw family_error(FamilyError::member_zero_or_one, "member must not be 0 or 1");
    auto f = ntheory::try_squarefree_factorize(v);
    if (!f)
        throw family_error(FamilyError::member_not_squarefree,
                           "member " + to_decimal(v) + " is not square-free");
    return SquarefreeInt{v, std::move(*f)};
}

SquarefreeInt SquarefreeInt::from_factored(ntheory::Factored f) {
    Int v = f.value;
    if (v == 0 || v == 1) throw family_error(FamilyError::member_zero_or_one, "member must not be 0 or 1");
    if (!f.squarefree())
        throw family_error(FamilyError::member_not_squarefree,
                           "member " + to_decimal(v) + " is not square-free");
    return SquarefreeInt{std::move(v), std::move(f)};
}

const char* to_string(FamilyError code) {
    switch (code) {
        case FamilyError::too_few_members: return "TOO_FEW_MEMBERS";
        case FamilyError::duplicate_member: return "DUPLICATE_MEMBER";
        case FamilyError::member_zero_or_one: return "MEMBER_ZERO_OR_ONE";
        case FamilyError::member_not_squarefree: return "MEMBER_NOT_SQUAREFREE";
    }
    return "UNKNOWN";
}

QuadraticFamily QuadraticFamily::validate(const std::vector<Int>& raw) {
    if (raw.size() < 3)
        throw family_error(FamilyError::too_few_members, "family needs at least 3 members");
    std::set<Int> seen;
    for (const Int& v : raw)
        if (!seen.insert(v).second)
            throw family_error(FamilyError::duplicate_member, "duplicate member " + to_decimal(v));
    std::vector<SquarefreeInt> members;
    members.reserve(raw.size());
    for (const Int& v : raw) members.push_back(SquarefreeInt::make(v));
    return from_members(std::move(members));
}

QuadraticFamily QuadraticFamily::from_members(std::vector<SquarefreeInt> members) {
    if (members.size() < 3)
        throw family_error(FamilyError::too_few_members, "family needs at least 3 members");
    std::set<Int> seen;
    for (const auto& m : members)
        if (!seen.insert(m.value).second)
            throw family_error(FamilyError::duplicate_member, "duplicate member " + to_decimal(m.value));
    QuadraticFamily fam;
    fam.members_ = std::move(members);
    fam.values_.reserve(fam.members_.size());
    for (const auto& m : fam.members_) fam.values_.push_back(m.value);
    return fam;
}

std::vector<Int> QuadraticFamily::odd_primes() const {
    std::set<Int> primes;
    for (const auto& m : members_)
        for (const auto& pp : m.factorization.factors)
            if (pp.prime != 2) primes.insert(pp.prime);
    return {primes.begin(), primes.end()};
}

std::vector<Int> QuadraticFamily::relevant_primes() const {
    std::vector<Int> out = odd_primes();
    out.insert(out.begin(), Int(2));
    return out;
}

}  // namespace mip
