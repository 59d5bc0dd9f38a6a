#include "qlab/residue.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace qlab {

namespace {

constexpr unsigned long kExhaustiveRootLimit = 10'000;

void require_unit(const Integer& c, const Integer& p) {
    if (mpz_divisible_p(c.get_mpz_t(), p.get_mpz_t()) != 0) {
        throw InvalidInput(c.get_str() + " is divisible by " + p.get_str() + "; strip powers of p first");
    }
}

long val(const Integer& n, const Integer& p) {
    Integer rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

Integer cube(const Integer& x) { return x * x * x; }

ResidueSet enumerate_cubes(std::uint64_t m, std::uint64_t oracle_bound, bool units_only) {
    if (m < 2) {
        throw InvalidInput("cubic residue oracle needs modulus >= 2");
    }
    if (m > oracle_bound) {
        throw ResourceLimit("modulus " + std::to_string(m) + " exceeds the oracle bound " +
                            std::to_string(oracle_bound));
    }
    ResidueSet out(m);
    for (std::uint64_t x = 0; x < m; ++x) {
        if (units_only && std::gcd(x, m) != 1) {
            continue;
        }
        const auto sq = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * x) % m);
        out.insert(static_cast<std::uint64_t>((static_cast<unsigned __int128>(sq) * x) % m));
    }
    return out;
}

// g of order 3^s; returns e in [0, 3^s) with g^e = h (h in <g>).
Integer sylow3_log(const Integer& h, const Integer& g, unsigned long s, const Integer& p) {
    const Integer three = 3;
    const Integer gamma = power_mod(g, power(three, s - 1), p); // order 3
    const Integer g_inv = inverse_mod(g, p);
    Integer e = 0;
    for (unsigned long i = 0; i < s; ++i) {
        const Integer reduced = mod(h * power_mod(g_inv, e, p), p);
        const Integer probe = power_mod(reduced, power(three, s - 1 - i), p);
        int digit = -1;
        Integer acc = 1;
        for (int d = 0; d < 3; ++d) {
            if (acc == probe) {
                digit = d;
                break;
            }
            acc = mod(acc * gamma, p);
        }
        if (digit < 0) {
            throw ConstructionFailure("element outside the Sylow-3 subgroup");
        }
        e += digit * power(three, i);
    }
    return e;
}

} // namespace

HenselExponent::HenselExponent(int alpha) : alpha_(alpha) {
    if (alpha < 1) {
        throw InvalidInput("Hensel exponent must be positive");
    }
}

HenselExponent hensel_exponent(const Integer& p) {
    require_prime(p);
    return HenselExponent(p == 3 ? 2 : 1);
}

std::size_t ResidueSet::size() const { return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), true)); }

std::vector<std::uint64_t> ResidueSet::values() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t r = 0; r < modulus_; ++r) {
        if (member_[r]) {
            out.push_back(r);
        }
    }
    return out;
}

ResidueSet cubic_residues_mod(std::uint64_t m, std::uint64_t oracle_bound) {
    return enumerate_cubes(m, oracle_bound, false);
}

ResidueSet cubic_unit_residues_mod(std::uint64_t m, std::uint64_t oracle_bound) {
    return enumerate_cubes(m, oracle_bound, true);
}

bool is_cubic_residue(const Integer& c, const Integer& p, HenselExponent alpha) {
    require_prime(p);
    require_unit(c, p);
    if (p == 2) {
        // Cubing permutes (Z/2^n)^* since the group has 2-power order.
        return true;
    }
    if (p == 3) {
        if (alpha.value() == 1) {
            return true;
        }
        const Integer r = mod(c, 9);
        return r == 1 || r == 8;
    }
    const Integer three = 3;
    if (mod(p, three) == 2) {
        return true;
    }
    // Unit cubes mod p^alpha are exactly lifts of cubes mod p.
    return power_mod(c, Integer((p - 1) / 3), p) == 1;
}

bool is_cubic_residue(const Integer& c, const Integer& p) { return is_cubic_residue(c, p, hensel_exponent(p)); }

std::optional<Integer> smallest_cubic_non_residue(const Integer& p, HenselExponent alpha) {
    require_prime(p);
    if (p == 2 || (p != 3 && mod(p, Integer(3)) == 2) || (p == 3 && alpha.value() == 1)) {
        return std::nullopt;
    }
    for (Integer n = 2;; ++n) {
        if (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()) != 0) {
            continue;
        }
        if (!is_cubic_residue(n, p, alpha)) {
            return n;
        }
    }
}

Integer cube_root_mod_prime_amm(const Integer& c, const Integer& p) {
    require_prime(p);
    if (mod(p, Integer(3)) != 1) {
        throw InvalidInput("Adleman-Manders-Miller cube root needs p = 1 (mod 3)");
    }
    const Integer a = mod(c, p);
    require_unit(a, p);
    if (!is_cubic_residue(a, p, HenselExponent(1))) {
        throw InvalidInput(a.get_str() + " is not a cube modulo " + p.get_str());
    }

    // p - 1 = 3^s * t with 3 not dividing t.
    Integer t = p - 1;
    unsigned long s = 0;
    while (mpz_divisible_ui_p(t.get_mpz_t(), 3) != 0) {
        t /= 3;
        ++s;
    }

    Integer rho = 2;
    while (is_cubic_residue(rho, p, HenselExponent(1))) {
        ++rho;
    }
    const Integer g = power_mod(rho, t, p); // order exactly 3^s

    // x0 = a^m with 3m = 1 + j t, so x0^3 = a * (a^t)^j.
    Integer m = (t == 1) ? Integer(1) : inverse_mod(Integer(3), t);
    if (m == 0) {
        m = t;
    }
    const Integer j = (3 * m - 1) / t;
    const Integer x0 = power_mod(a, m, p);

    // a^t = g^e with 3 | e since a is a cube; correct by g^{-e j / 3}.
    const Integer e = sylow3_log(power_mod(a, t, p), g, s, p);
    const Integer order = power(Integer(3), s);
    const Integer shift = mod(Integer(-(e * j) / 3), order);
    return mod(x0 * power_mod(g, shift, p), p);
}

Integer cube_root_mod_prime(const Integer& c, const Integer& p) {
    require_prime(p);
    if (p == 3) {
        throw InvalidInput("cube roots modulo 3 are lifted from modulus 27");
    }
    const Integer a = mod(c, p);
    require_unit(a, p);
    if (p == 2) {
        return 1;
    }
    if (mod(p, Integer(3)) == 2) {
        // Cubing is a bijection on units; (2p-1)/3 inverts the exponent 3.
        return power_mod(a, Integer((2 * p - 1) / 3), p);
    }
    if (!is_cubic_residue(a, p, HenselExponent(1))) {
        throw InvalidInput(a.get_str() + " is not a cube modulo " + p.get_str());
    }
    if (p < kExhaustiveRootLimit) {
        for (Integer x = 1; x < p; ++x) {
            if (mod(cube(x), p) == a) {
                return x;
            }
        }
        throw ConstructionFailure("exhaustive cube-root search found nothing");
    }
    // The three roots are r, r*w, r*w^2 for a primitive cube root of unity w.
    const Integer r = cube_root_mod_prime_amm(a, p);
    Integer rho = 2;
    while (is_cubic_residue(rho, p, HenselExponent(1))) {
        ++rho;
    }
    const Integer w = power_mod(rho, Integer((p - 1) / 3), p);
    const Integer r1 = mod(r * w, p);
    const Integer r2 = mod(r1 * w, p);
    return std::min({r, r1, r2});
}

std::optional<CubeRoot> cube_root_mod_prime_power(const Integer& c, const Integer& p, long exponent) {
    require_prime(p);
    if (exponent < 1) {
        throw InvalidInput("cube root modulus exponent must be at least 1");
    }
    require_unit(c, p);
    const Integer modulus = power(p, static_cast<unsigned long>(exponent));
    const Integer target = mod(c, modulus);
    // Residuosity is decided mod p^alpha, which can exceed p^N when p = 3.
    if (!is_cubic_residue(c, p)) {
        return std::nullopt;
    }

    Integer start;
    if (p == 3) {
        // v_3(3x^2) = 1, so Newton needs v_3(x^3 - c) >= 3 to start.
        const Integer c27 = mod(c, 27);
        bool found = false;
        for (long x = 1; x < 27 && !found; ++x) {
            if (x % 3 != 0 && mod(cube(Integer(x)), 27) == c27) {
                start = x;
                found = true;
            }
        }
        if (!found) {
            return std::nullopt;
        }
    } else {
        start = cube_root_mod_prime(target, p);
    }

    const CubicPolynomial f{Integer(-target), 0, 0, 1};
    std::optional<Integer> root;
    if (p == 3 && exponent <= 3) {
        root = mod(start, modulus);
    } else {
        root = hensel_lift(f, start, p, exponent);
    }
    if (!root) {
        throw ConstructionFailure("Hensel start condition failed for a cubic residue");
    }
    return CubeRoot{p, exponent, *root, target};
}

Integer CubicPolynomial::operator()(const Integer& x) const { return ((c3 * x + c2) * x + c1) * x + c0; }

Integer CubicPolynomial::derivative(const Integer& x) const { return (3 * c3 * x + 2 * c2) * x + c1; }

std::optional<Integer> hensel_lift(const CubicPolynomial& f, const Integer& start, const Integer& p, long exponent) {
    const Integer modulus = power(p, static_cast<unsigned long>(exponent));
    Integer x = start;
    bool first = true;
    // Correct digits at least double per step once the start condition holds.
    for (long iter = 0; iter < 2 * exponent + 64; ++iter) {
        const Integer fx = f(x);
        if (fx == 0) {
            return mod(x, modulus);
        }
        const long e = val(fx, p);
        if (e >= exponent) {
            return mod(x, modulus);
        }
        const Integer dfx = f.derivative(x);
        if (dfx == 0) {
            return std::nullopt;
        }
        const long d = val(dfx, p);
        if (first && e <= 2 * d) {
            return std::nullopt;
        }
        first = false;
        const Integer pd = power(p, static_cast<unsigned long>(d));
        Integer num, den;
        mpz_divexact(num.get_mpz_t(), fx.get_mpz_t(), pd.get_mpz_t());
        mpz_divexact(den.get_mpz_t(), dfx.get_mpz_t(), pd.get_mpz_t());
        const Integer step = mod(num * inverse_mod(mod(den, modulus), modulus), modulus);
        x = mod(x - step, modulus);
    }
    throw ConstructionFailure("Newton iteration did not converge");
}

} // namespace qlab
