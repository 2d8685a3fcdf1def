#include "mip/ntheory.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "factor_detail.hpp"

namespace mip::ntheory {

namespace {

constexpr uint32_t kTrialBound = 100000;

// Known-deterministic witness sets: 7 bases for anything below 2^64
// (Sinclair set), the first 13 primes below the published bound used for
// kDeterministicPrimalityBound, and an extended fixed set above it.
constexpr uint64_t kU64Witnesses[] = {2, 325, 9375, 28178, 450775, 9780504, 1795265022};
constexpr unsigned kSmallPrimeWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
constexpr unsigned kExtraWitnesses[] = {43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

bool miller_rabin_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (uint64_t a : kU64Witnesses) {
        uint64_t x = powmod_u64(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool strong_probable_prime(const Int& n, const Int& a) {
    if (mpz_divisible_p(n.get_mpz_t(), a.get_mpz_t())) return n == a;
    Int d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        x = x * x % n;
        if (x == n - 1) return true;
    }
    return false;
}

// Trial-divides m (positive) in place; appends found prime powers.
void trial_divide(Int& m, std::map<Int, unsigned>& out, bool* repeated) {
    for (uint32_t p : small_primes(kTrialBound)) {
        if (mpz_cmp_ui(m.get_mpz_t(), static_cast<unsigned long>(p) * p) < 0) break;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            unsigned e = 0;
            do {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++e;
            } while (mpz_divisible_ui_p(m.get_mpz_t(), p));
            out[Int(p)] += e;
            if (repeated && e > 1) {
                *repeated = true;
                return;
            }
        }
    }
    if (m > 1 && mpz_cmp_ui(m.get_mpz_t(), uint64_t(kTrialBound) * kTrialBound) < 0) {
        // Cofactor below the square of the trial bound is prime.
        out[m] += 1;
        m = 1;
    }
}

// Fully factor a cofactor free of small primes.  With early_stop, bail out
// as soon as a repeated prime is certain.
void factor_rough(const Int& c, std::map<Int, unsigned>& out, unsigned mult, bool* repeated) {
    if (c == 1) return;
    if (is_prime(c)) {
        unsigned& e = out[c];
        e += mult;
        if (repeated && e > 1) *repeated = true;
        return;
    }
    if (mpz_perfect_power_p(c.get_mpz_t())) {
        for (unsigned long e = 2; e <= mpz_sizeinbase(c.get_mpz_t(), 2); ++e) {
            Int r;
            if (mpz_root(r.get_mpz_t(), c.get_mpz_t(), e)) {
                if (repeated) {
                    *repeated = true;
                    return;
                }
                factor_rough(r, out, mult * e, repeated);
                return;
            }
        }
    }
    Int f = detail::find_factor(c);
    factor_rough(f, out, mult, repeated);
    if (repeated && *repeated) return;
    factor_rough(Int(c / f), out, mult, repeated);
}

// Shared factorization core.  When squarefree_only, returns nullopt the
// moment a repeated prime factor is known.
std::optional<Factored> factorize_impl(const Int& n, bool squarefree_only) {
    if (n == 0) throw std::domain_error("factorize: zero has no factorization");
    Factored result;
    result.value = n;
    result.sign = sgn(n) < 0 ? -1 : 1;
    Int m = abs(n);
    std::map<Int, unsigned> factors;
    bool repeated = false;
    trial_divide(m, factors, squarefree_only ? &repeated : nullptr);
    if (repeated) return std::nullopt;
    if (m > 1) {
        factor_rough(m, factors, 1, squarefree_only ? &repeated : nullptr);
        if (repeated) return std::nullopt;
    }
    result.factors.reserve(factors.size());
    for (const auto& [p, e] : factors) {
        if (squarefree_only && e > 1) return std::nullopt;
        result.factors.push_back({p, e});
    }
    return result;
}

}  // namespace

const char* const kDeterministicPrimalityBound = "3317044064679887385961981";

bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (fits_u64(n)) return miller_rabin_u64(to_u64(n));
    static const Int kBound(kDeterministicPrimalityBound);
    for (unsigned a : kSmallPrimeWitnesses)
        if (!strong_probable_prime(n, Int(a))) return false;
    if (n < kBound) return true;
    for (unsigned a : kExtraWitnesses)
        if (!strong_probable_prime(n, Int(a))) return false;
    return true;
}

Factored factorize(const Int& n) { return *factorize_impl(n, false); }

std::optional<Factored> try_squarefree_factorize(const Int& n) { return factorize_impl(n, true); }

bool is_squarefree(const Int& n) {
    if (n == 0) throw std::domain_error("is_squarefree: undefined at 0");
    return factorize_impl(n, true).has_value();
}

Int rad(const Int& n) {
    if (n == 0) throw std::domain_error("rad: undefined at 0");
    Factored f = factorize(n);
    Int r = 1;
    for (const auto& pp : f.factors)
        if (pp.exponent % 2 == 1) r *= pp.prime;
    return r;
}

namespace {
// legendre() is called in tight per-prime loops; remember the last validated
// modulus so the primality check amortizes away.
thread_local Int last_checked_prime = 0;

void require_odd_prime(const Int& p) {
    if (p == last_checked_prime) return;
    if (p < 3 || mpz_even_p(p.get_mpz_t()) || !is_prime(p))
        throw std::domain_error("expected an odd prime, got " + to_decimal(p));
    last_checked_prime = p;
}
}  // namespace

int legendre(const Int& a, const Int& p) {
    require_odd_prime(p);
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

Int sqrt_mod_prime(const Int& a, const Int& p) {
    require_odd_prime(p);
    if (legendre(a, p) != 1)
        throw std::domain_error("sqrt_mod_prime: " + to_decimal(a) + " is not a residue mod " + to_decimal(p));
    Int av = a % p;
    if (av < 0) av += p;
    Int r;
    if (mpz_tstbit(p.get_mpz_t(), 1)) {  // p = 3 (mod 4)
        Int e = (p + 1) / 4;
        mpz_powm(r.get_mpz_t(), av.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    } else {
        // Tonelli-Shanks with the smallest non-residue, so roots are stable.
        Int q = p - 1;
        unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
        mpz_tdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), s);
        Int z = 2;
        while (legendre(z, p) != -1) ++z;
        Int c;
        mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
        Int t;
        mpz_powm(t.get_mpz_t(), av.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
        Int e = (q + 1) / 2;
        mpz_powm(r.get_mpz_t(), av.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
        unsigned long m = s;
        while (t != 1) {
            Int t2 = t;
            unsigned long i = 0;
            while (t2 != 1) {
                t2 = t2 * t2 % p;
                ++i;
            }
            Int b = c;
            for (unsigned long k = 0; k + i + 1 < m; ++k) b = b * b % p;
            r = r * b % p;
            c = b * b % p;
            t = t * c % p;
            m = i;
        }
    }
    Int other = p - r;
    return std::min(r, other);
}

ResidueClass crt(const std::vector<ResidueClass>& classes) {
    if (classes.empty()) throw std::domain_error("crt: empty system");
    for (const auto& c : classes) {
        if (c.modulus < 2) throw std::domain_error("crt: modulus must be >= 2");
        if (c.residue < 0 || c.residue >= c.modulus)
            throw std::domain_error("crt: residue out of range");
    }
    Int r = classes[0].residue, m = classes[0].modulus;
    for (size_t i = 1; i < classes.size(); ++i) {
        const Int& r2 = classes[i].residue;
        const Int& m2 = classes[i].modulus;
        Int inv;
        if (!mpz_invert(inv.get_mpz_t(), m.get_mpz_t(), m2.get_mpz_t()))
            throw std::domain_error("crt: moduli not pairwise coprime");
        Int t = (r2 - r) * inv % m2;
        if (t < 0) t += m2;
        r += m * t;
        m *= m2;
    }
    return {r, m};
}

bool quad_solvable_mod_pk(const Int& a, const Int& p, unsigned k) {
    if (k == 0) throw std::domain_error("quad_solvable_mod_pk: k must be >= 1");
    if (p == 2) {
        if (mpz_odd_p(a.get_mpz_t())) {
            unsigned long a8 = mpz_fdiv_ui(a.get_mpz_t(), 8);
            if (k == 1) return true;
            if (k == 2) return a8 % 4 == 1;
            return a8 == 1;
        }
        if (mpz_divisible_ui_p(a.get_mpz_t(), 4))
            throw std::domain_error("quad_solvable_mod_pk: member not square-free");
        return k == 1;
    }
    require_odd_prime(p);
    if (mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t())) {
        Int p2 = p * p;
        if (mpz_divisible_p(a.get_mpz_t(), p2.get_mpz_t()))
            throw std::domain_error("quad_solvable_mod_pk: member not square-free");
        return k == 1;  // x = 0 works mod p; never mod p^2
    }
    return legendre(a, p) == 1;
}

SolvabilityProfile solvability_profile(const Int& a, const Int& p) {
    SolvabilityProfile out{p, std::nullopt};
    if (p == 2) {
        if (mpz_even_p(a.get_mpz_t())) {
            out.max_exponent = 1;
        } else {
            unsigned long a8 = mpz_fdiv_ui(a.get_mpz_t(), 8);
            if (a8 == 1)
                out.max_exponent = std::nullopt;
            else if (a8 == 5)
                out.max_exponent = 2;
            else
                out.max_exponent = 1;
        }
        return out;
    }
    require_odd_prime(p);
    if (mpz_divisible_p(a.get_mpz_t(), p.get_mpz_t())) {
        out.max_exponent = 1;
    } else if (legendre(a, p) == 1) {
        out.max_exponent = std::nullopt;
    } else {
        out.max_exponent = 0;
    }
    return out;
}

std::optional<unsigned> witness_exponent(std::span<const Int> members, const Int& p) {
    unsigned total = 1;
    for (const Int& a : members) {
        SolvabilityProfile pr = solvability_profile(a, p);
        if (pr.infinite()) return std::nullopt;
        total += *pr.max_exponent;
    }
    return total;
}

std::span<const uint32_t> small_primes(uint32_t limit) {
    static std::mutex mu;
    static std::vector<std::unique_ptr<std::vector<uint32_t>>> generations;
    std::lock_guard<std::mutex> lk(mu);
    if (!generations.empty()) {
        auto& last = *generations.back();
        if (!last.empty() && last.back() >= limit) {
            auto end = std::lower_bound(last.begin(), last.end(), limit);
            return {last.data(), static_cast<size_t>(end - last.begin())};
        }
    }
    uint32_t n = std::max(limit, 2000000u);
    std::vector<uint8_t> comp(n, 0);
    auto gen = std::make_unique<std::vector<uint32_t>>();
    for (uint64_t i = 2; i < n; ++i) {
        if (comp[i]) continue;
        gen->push_back(static_cast<uint32_t>(i));
        for (uint64_t j = i * i; j < n; j += i) comp[j] = 1;
    }
    generations.push_back(std::move(gen));
    auto& last = *generations.back();
    auto end = std::lower_bound(last.begin(), last.end(), limit);
    return {last.data(), static_cast<size_t>(end - last.begin())};
}

}  // namespace mip::ntheory
