#pragma once

// Brute-force reference implementations. They share no code with the
// library: plain machine integers, exhaustive loops.

#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using i64 = std::int64_t;

inline std::vector<u64> primes_below(u64 limit) {
    std::vector<bool> composite(limit, false);
    std::vector<u64> out;
    for (u64 n = 2; n < limit; ++n) {
        if (composite[n]) {
            continue;
        }
        out.push_back(n);
        for (u64 m = n * n; m < limit; m += n) {
            composite[m] = true;
        }
    }
    return out;
}

inline u64 reduce(i64 a, u64 m) {
    const i64 r = a % static_cast<i64>(m);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

inline u64 cube_mod(u64 x, u64 m) {
    return static_cast<u64>(static_cast<unsigned __int128>(x) * x % m * x % m);
}

inline std::set<u64> cubes_mod(u64 m) {
    std::set<u64> out;
    for (u64 x = 0; x < m; ++x) {
        out.insert(cube_mod(x, m));
    }
    return out;
}

inline std::set<u64> unit_cubes_mod(u64 m) {
    std::set<u64> out;
    for (u64 x = 1; x < m; ++x) {
        if (std::gcd(x, m) == 1) {
            out.insert(cube_mod(x, m));
        }
    }
    return out;
}

inline std::vector<u64> cube_roots_mod(u64 c, u64 m) {
    std::vector<u64> out;
    for (u64 x = 0; x < m; ++x) {
        if (cube_mod(x, m) == c % m) {
            out.push_back(x);
        }
    }
    return out;
}

/// Linear search for a^{-1} mod m.
inline u64 inverse_by_search(u64 a, u64 m) {
    for (u64 x = 1; x < m; ++x) {
        if (static_cast<unsigned __int128>(a % m) * x % m == 1) {
            return x;
        }
    }
    return 0;
}

/// Exponent of p in n != 0 by repeated division.
inline int valuation(i64 n, i64 p) {
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

/// a x^3 + b y^3 has no zero on (Z/p)^2 minus the origin.
inline bool anisotropic_by_scan(i64 a, i64 b, u64 p) {
    for (u64 x = 0; x < p; ++x) {
        for (u64 y = 0; y < p; ++y) {
            if (x == 0 && y == 0) {
                continue;
            }
            const u64 value = (reduce(a, p) * cube_mod(x, p) + reduce(b, p) * cube_mod(y, p)) % p;
            if (value == 0) {
                return false;
            }
        }
    }
    return true;
}

} // namespace oracle
