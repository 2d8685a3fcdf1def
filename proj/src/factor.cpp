#include "factor_detail.hpp"

#include <atomic>
#include <cstring>
#include <mutex>
#include <thread>
#include <vector>

#include "mip/ntheory.hpp"

namespace mip::ntheory::detail {
namespace {

constexpr int kMaxLimbs = 8;  // 512 bits; larger inputs take the mpz path

struct Mont {
    int nl = 0;
    mp_limb_t n[kMaxLimbs];
    mp_limb_t inv;  // -n^{-1} mod 2^64

    explicit Mont(const Int& m) {
        nl = static_cast<int>(mpz_size(m.get_mpz_t()));
        for (int i = 0; i < nl; ++i) n[i] = mpz_getlimbn(m.get_mpz_t(), i);
        // Newton iteration for the limb inverse; n odd.
        mp_limb_t x = n[0];
        mp_limb_t y = x;  // correct mod 2^3
        for (int i = 0; i < 5; ++i) y *= 2 - x * y;
        inv = ~y + 1;
    }
};

using Limbs = mp_limb_t[kMaxLimbs];

inline void mont_mul(mp_limb_t* res, const mp_limb_t* a, const mp_limb_t* b, const Mont& M) {
    mp_limb_t t[2 * kMaxLimbs + 1];
    mpn_mul_n(t, a, b, M.nl);
    t[2 * M.nl] = 0;
    for (int i = 0; i < M.nl; ++i) {
        mp_limb_t m = t[i] * M.inv;
        mp_limb_t cy = mpn_addmul_1(t + i, M.n, M.nl, m);
        mpn_add_1(t + i + M.nl, t + i + M.nl, M.nl - i + 1, cy);
    }
    if (t[2 * M.nl] != 0 || mpn_cmp(t + M.nl, M.n, M.nl) >= 0)
        mpn_sub_n(res, t + M.nl, M.n, M.nl);
    else
        mpn_copyi(res, t + M.nl, M.nl);
}

inline void add_small(mp_limb_t* x, mp_limb_t c, const Mont& M) {
    mp_limb_t cy = mpn_add_1(x, x, M.nl, c);
    if (cy || mpn_cmp(x, M.n, M.nl) >= 0) mpn_sub_n(x, x, M.n, M.nl);
}

inline void sub_abs(mp_limb_t* d, const mp_limb_t* a, const mp_limb_t* b, int nl) {
    if (mpn_cmp(a, b, nl) >= 0)
        mpn_sub_n(d, a, b, nl);
    else
        mpn_sub_n(d, b, a, nl);
}

Int limbs_to_int(const mp_limb_t* x, int nl) {
    Int z;
    mpz_import(z.get_mpz_t(), nl, -1, sizeof(mp_limb_t), 0, 0, x);
    return z;
}

// Brent's cycle variant of Pollard rho with x -> mont_sqr(x) + c.  The
// Montgomery factor is a unit modulo every prime divisor, so the iteration
// behaves like an ordinary quadratic map for cycle-finding purposes.
Int rho_brent_fixed(const Int& n, unsigned long c, uint64_t max_iters, const std::atomic<bool>* stop) {
    Mont M(n);
    const int nl = M.nl;
    Limbs y, x, ys, q, d;
    mpn_zero(y, nl);
    y[0] = 2;
    mpn_zero(q, nl);
    q[0] = 1;
    Int g = 1;
    uint64_t r = 1, iters = 0;
    constexpr uint64_t kBatch = 128;
    while (g == 1) {
        mpn_copyi(x, y, nl);
        for (uint64_t i = 0; i < r; ++i) {
            mont_mul(y, y, y, M);
            add_small(y, c, M);
        }
        uint64_t k = 0;
        while (k < r && g == 1) {
            mpn_copyi(ys, y, nl);
            uint64_t lim = std::min(kBatch, r - k);
            for (uint64_t i = 0; i < lim; ++i) {
                mont_mul(y, y, y, M);
                add_small(y, c, M);
                sub_abs(d, x, y, nl);
                mont_mul(q, q, d, M);
            }
            g = gcd(limbs_to_int(q, nl), n);
            k += lim;
            iters += lim;
            if (iters > max_iters) return Int(0);
            if (stop && stop->load(std::memory_order_relaxed)) return Int(0);
        }
        r *= 2;
    }
    if (g == n) {
        // Batch collapsed; redo the last stretch one gcd at a time.
        g = 1;
        while (g == 1) {
            mont_mul(ys, ys, ys, M);
            add_small(ys, c, M);
            sub_abs(d, x, ys, nl);
            g = gcd(limbs_to_int(d, nl), n);
        }
    }
    if (g == n) return Int(0);
    return g;
}

// mpz fallback for inputs beyond kMaxLimbs.
Int rho_brent_mpz(const Int& n, unsigned long c, uint64_t max_iters) {
    Int y = 2, x, ys, q = 1, g = 1;
    uint64_t r = 1, iters = 0;
    constexpr uint64_t kBatch = 128;
    auto step = [&](Int& v) { v = (v * v + c) % n; };
    while (g == 1) {
        x = y;
        for (uint64_t i = 0; i < r; ++i) step(y);
        uint64_t k = 0;
        while (k < r && g == 1) {
            ys = y;
            uint64_t lim = std::min(kBatch, r - k);
            for (uint64_t i = 0; i < lim; ++i) {
                step(y);
                q = q * abs(x - y) % n;
            }
            g = gcd(q, n);
            k += lim;
            iters += lim;
            if (iters > max_iters) return Int(0);
        }
        r *= 2;
    }
    if (g == n) {
        g = 1;
        while (g == 1) {
            step(ys);
            g = gcd(abs(x - ys), n);
        }
    }
    if (g == n) return Int(0);
    return g;
}

}  // namespace

Int pollard_pm1(const Int& n, uint32_t b1) {
    Int a = 2;
    for (uint32_t p : small_primes(b1)) {
        unsigned long pe = p;
        while (pe <= b1 / p) pe *= p;
        mpz_powm_ui(a.get_mpz_t(), a.get_mpz_t(), pe, n.get_mpz_t());
    }
    Int g = gcd(Int(a - 1), n);
    if (g > 1 && g < n) return g;
    return Int(0);
}

Int find_factor(const Int& n) {
    if (Int g = pollard_pm1(n, 100000); g != 0) return g;

    if (mpz_size(n.get_mpz_t()) > kMaxLimbs) {
        for (unsigned long c = 1;; ++c) {
            Int g = rho_brent_mpz(n, c, UINT64_MAX);
            if (g != 0) return g;
        }
    }

    unsigned tcount = std::min(std::thread::hardware_concurrency(), 4u);
    if (tcount < 2) {
        for (unsigned long c = 1;; ++c) {
            Int g = rho_brent_fixed(n, c, UINT64_MAX, nullptr);
            if (g != 0) return g;
        }
    }

    // Each worker walks its own fixed seed sequence; first hit wins.  Any
    // nontrivial factor yields the same final factorization.
    std::atomic<bool> done{false};
    std::mutex mu;
    Int found = 0;
    auto worker = [&](unsigned tid) {
        for (unsigned long c = 1 + tid;; c += tcount) {
            Int g = rho_brent_fixed(n, c, UINT64_MAX, &done);
            if (done.load()) return;
            if (g != 0) {
                std::lock_guard<std::mutex> lk(mu);
                if (found == 0) found = g;
                done.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < tcount; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
    return found;
}

}  // namespace mip::ntheory::detail
