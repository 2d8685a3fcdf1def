#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mip/integer.hpp"

namespace mip::ntheory {

struct PrimePower {
    Int prime;
    unsigned exponent;
    bool operator==(const PrimePower&) const = default;
};

// Exact signed factorization: sign * prod(p^e) == value, primes strictly
// ascending, every prime certified by is_prime.
struct Factored {
    Int value;
    int sign = 1;
    std::vector<PrimePower> factors;

    Int abs_value() const { return sign < 0 ? Int(-value) : value; }
    bool squarefree() const {
        for (const auto& f : factors)
            if (f.exponent != 1) return false;
        return true;
    }
};

struct ResidueClass {
    Int residue;  // 0 <= residue < modulus
    Int modulus;  // >= 2
    bool operator==(const ResidueClass&) const = default;
};

// Largest k with x^2 = a (mod p^k) solvable; nullopt means every k works
// (the Hensel-liftable case).
struct SolvabilityProfile {
    Int prime;
    std::optional<unsigned> max_exponent;
    bool infinite() const { return !max_exponent.has_value(); }
};

// Deterministic Miller-Rabin: the fixed 13-prime witness set is exact below
// kDeterministicPrimalityBound; above it the extended fixed witness set is a
// strong-pseudoprime test (threshold recorded in emitted documents).
extern const char* const kDeterministicPrimalityBound;
bool is_prime(const Int& n);

// Trial division + Pollard p-1 + Brent rho.  n != 0.
Factored factorize(const Int& n);

// Full factorization that bails out as soon as a repeated prime factor is
// certain; nullopt means not square-free.
std::optional<Factored> try_squarefree_factorize(const Int& n);

bool is_squarefree(const Int& n);

// Square-free part of |n|: product of primes dividing |n| to an odd power.
// This is the square-free kernel, not the radical: rad(12) = 3, rad(255^2) = 1.
Int rad(const Int& n);

// Legendre symbol via Euler's criterion; requires odd prime p.
int legendre(const Int& a, const Int& p);

// Tonelli-Shanks; requires legendre(a, p) == +1.  Returns the canonical root
// r with 0 <= r <= (p-1)/2.
Int sqrt_mod_prime(const Int& a, const Int& p);

// Pairwise coprime moduli only.
ResidueClass crt(const std::vector<ResidueClass>& classes);

// Exact solvability of x^2 = a (mod p^k) for square-free a.
bool quad_solvable_mod_pk(const Int& a, const Int& p, unsigned k);

SolvabilityProfile solvability_profile(const Int& a, const Int& p);

// nullopt = solvable modulo every power of p.  Otherwise returns
// E = 1 + sum of member profiles: prod(x^2 - a_i) = 0 (mod p^E) has no
// solution, because v_p(x^2 - a_i) never exceeds the member's profile.
std::optional<unsigned> witness_exponent(std::span<const Int> members, const Int& p);

// Primes below limit, ascending (cached, grow-only).
std::span<const uint32_t> small_primes(uint32_t limit);

}  // namespace mip::ntheory
