#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qlab/padic.hpp"

namespace qlab {

/// Exponent alpha = 1 + v_p(3) at which a unit's cubic-residue status mod
/// p^alpha decides whether it is a cube in Z_p.
class HenselExponent {
public:
    explicit HenselExponent(int alpha);
    int value() const { return alpha_; }
    friend bool operator==(HenselExponent, HenselExponent) = default;

private:
    int alpha_;
};

HenselExponent hensel_exponent(const Integer& p);

/// Membership table for residues modulo a small modulus.
class ResidueSet {
public:
    explicit ResidueSet(std::uint64_t modulus) : modulus_(modulus), member_(modulus, false) {}

    std::uint64_t modulus() const { return modulus_; }
    bool contains(std::uint64_t r) const { return r < modulus_ && member_[r]; }
    void insert(std::uint64_t r) { member_[r % modulus_] = true; }
    std::size_t size() const;
    std::vector<std::uint64_t> values() const;

private:
    std::uint64_t modulus_;
    std::vector<bool> member_;
};

inline constexpr std::uint64_t kDefaultOracleBound = 10'000'000;

/// { x^3 mod m : 0 <= x < m } by enumeration.
ResidueSet cubic_residues_mod(std::uint64_t m, std::uint64_t oracle_bound = kDefaultOracleBound);
/// Same, restricted to x coprime to m.
ResidueSet cubic_unit_residues_mod(std::uint64_t m, std::uint64_t oracle_bound = kDefaultOracleBound);

/// True iff x^3 = c (mod p^alpha) is solvable. c must be coprime to p.
bool is_cubic_residue(const Integer& c, const Integer& p, HenselExponent alpha);
bool is_cubic_residue(const Integer& c, const Integer& p);

/// Smallest positive unit that is not a cube mod p^alpha, if any exists.
std::optional<Integer> smallest_cubic_non_residue(const Integer& p, HenselExponent alpha);

struct CubeRoot {
    Integer prime;
    long modulus_exponent = 0;
    Integer root;
    Integer target;
};

/// x with x^3 = c (mod p^N), lifted from the smallest root at the base
/// modulus (p, or 27 when p = 3). Returns nullopt when c is not a cube.
std::optional<CubeRoot> cube_root_mod_prime_power(const Integer& c, const Integer& p, long exponent);

/// Smallest cube root of a cubic residue c modulo a prime p != 3.
Integer cube_root_mod_prime(const Integer& c, const Integer& p);

/// Some cube root of c mod p for p = 1 (mod 3), by the Adleman-Manders-Miller
/// method (Sylow-3 discrete log). Not necessarily the smallest.
Integer cube_root_mod_prime_amm(const Integer& c, const Integer& p);

/// Dense integer cubic c3 x^3 + c2 x^2 + c1 x + c0.
struct CubicPolynomial {
    Integer c0, c1, c2, c3;

    Integer operator()(const Integer& x) const;
    Integer derivative(const Integer& x) const;
};

/// Newton iteration from `start` to a root modulo p^N. Requires
/// v_p(f(start)) > 2 v_p(f'(start)); returns nullopt when that fails.
std::optional<Integer> hensel_lift(const CubicPolynomial& f, const Integer& start, const Integer& p, long exponent);

} // namespace qlab
