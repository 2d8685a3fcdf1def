#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mip {

// All exact arithmetic runs on GMP integers; family members exceed 64 bits
// well before n = 8.
using Int = mpz_class;

inline Int int_from_decimal(const std::string& s) {
    Int v;
    if (s.empty() || mpz_set_str(v.get_mpz_t(), s.c_str(), 10) != 0) {
        throw std::invalid_argument("not a decimal integer: '" + s + "'");
    }
    return v;
}

inline std::string to_decimal(const Int& v) { return v.get_str(); }

inline bool fits_u64(const Int& v) {
    return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

inline uint64_t to_u64(const Int& v) {
    if (!fits_u64(v)) throw std::domain_error("value does not fit in uint64");
    uint64_t lo = mpz_getlimbn(v.get_mpz_t(), 0);
    return lo;
}

// Nonnegative remainder of a modulo m, m < 2^64.
inline uint64_t mod_u64(const Int& a, uint64_t m) {
    Int r = a % Int(static_cast<unsigned long>(m));
    if (sgn(r) < 0) r += static_cast<unsigned long>(m);
    return to_u64(r);
}

inline uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
    if (m == 1) return 0;
    uint64_t r = 1;
    b %= m;
    while (e > 0) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

}  // namespace mip
