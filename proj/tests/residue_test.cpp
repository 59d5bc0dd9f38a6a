#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "qlab/residue.hpp"

using namespace qlab;

namespace {

std::set<std::uint64_t> as_set(const ResidueSet& s) {
    const auto v = s.values();
    return {v.begin(), v.end()};
}

} // namespace

TEST(HenselExponentTest, Examples) {
    EXPECT_EQ(hensel_exponent(Integer(3)).value(), 2);
    EXPECT_EQ(hensel_exponent(Integer(7)).value(), 1);
    EXPECT_EQ(hensel_exponent(Integer(2)).value(), 1);
}

TEST(CubicResidues, Examples) {
    EXPECT_EQ(as_set(cubic_residues_mod(7)), (std::set<std::uint64_t>{0, 1, 6}));
    EXPECT_EQ(as_set(cubic_unit_residues_mod(9)), (std::set<std::uint64_t>{1, 8}));
    EXPECT_EQ(as_set(cubic_unit_residues_mod(13)), (std::set<std::uint64_t>{1, 5, 8, 12}));
    EXPECT_THROW(cubic_residues_mod(kDefaultOracleBound + 1), ResourceLimit);
    EXPECT_THROW(cubic_residues_mod(1000, 999), ResourceLimit);
}

TEST(CubicResidues, MatchesOracle) {
    for (std::uint64_t m = 2; m < 200; ++m) {
        EXPECT_EQ(as_set(cubic_residues_mod(m)), oracle::cubes_mod(m)) << m;
        EXPECT_EQ(as_set(cubic_unit_residues_mod(m)), oracle::unit_cubes_mod(m)) << m;
    }
}

TEST(IsCubicResidue, Examples) {
    EXPECT_FALSE(is_cubic_residue(Integer(2), Integer(7), HenselExponent(1)));
    EXPECT_TRUE(is_cubic_residue(Integer(8), Integer(3), HenselExponent(2)));
    EXPECT_TRUE(is_cubic_residue(Integer(5), Integer(13), HenselExponent(1)));
    EXPECT_TRUE(is_cubic_residue(Integer(5), Integer(2), HenselExponent(1)));
    EXPECT_THROW(is_cubic_residue(Integer(14), Integer(7)), InvalidInput);
    EXPECT_TRUE(is_cubic_residue(Integer(-1), Integer(7)));
}

TEST(IsCubicResidue, OracleEquivalenceSmallPrimes) {
    for (const auto p : oracle::primes_below(200)) {
        const auto alpha = hensel_exponent(Integer(p));
        std::uint64_t m = 1;
        for (int i = 0; i < alpha.value(); ++i) {
            m *= p;
        }
        const auto cubes = oracle::unit_cubes_mod(m);
        for (std::uint64_t c = 1; c < m; ++c) {
            if (c % p == 0) {
                continue;
            }
            EXPECT_EQ(is_cubic_residue(Integer(c), Integer(p), alpha), cubes.count(c) == 1) << c << " mod " << p;
        }
    }
}

TEST(IsCubicResidue, AlwaysTrueWhenCubingPermutesUnits) {
    for (const auto p : oracle::primes_below(500)) {
        if (p % 3 != 2) {
            continue;
        }
        for (std::uint64_t c = 1; c < p; ++c) {
            ASSERT_TRUE(is_cubic_residue(Integer(c), Integer(p))) << c << " mod " << p;
        }
    }
}

TEST(IsCubicResidue, ScalingAndInverseStability) {
    for (const auto p : oracle::primes_below(80)) {
        const Integer P(p);
        const auto alpha = hensel_exponent(P);
        const Integer m = power(P, alpha.value());
        for (std::uint64_t c = 1; c < m.get_ui(); ++c) {
            if (c % p == 0) {
                continue;
            }
            const bool base = is_cubic_residue(Integer(c), P, alpha);
            EXPECT_EQ(is_cubic_residue(inverse_mod(Integer(c), m), P, alpha), base);
            for (std::uint64_t s = 1; s < std::min<std::uint64_t>(m.get_ui(), 12); ++s) {
                if (s % p == 0) {
                    continue;
                }
                const Integer scaled = mod(Integer(c) * Integer(s) * Integer(s) * Integer(s), m);
                EXPECT_EQ(is_cubic_residue(scaled, P, alpha), base);
            }
        }
    }
}

TEST(SmallestNonResidue, Examples) {
    EXPECT_EQ(smallest_cubic_non_residue(Integer(7), HenselExponent(1)), Integer(2));
    EXPECT_EQ(smallest_cubic_non_residue(Integer(13), HenselExponent(1)), Integer(2));
    EXPECT_EQ(smallest_cubic_non_residue(Integer(3), HenselExponent(2)), Integer(2));
    EXPECT_FALSE(smallest_cubic_non_residue(Integer(5), HenselExponent(1)).has_value());
    EXPECT_FALSE(smallest_cubic_non_residue(Integer(2), HenselExponent(1)).has_value());
}

TEST(CubeRoot, Examples) {
    EXPECT_EQ(cube_root_mod_prime_power(Integer(6), Integer(5), 3)->root, 111);
    EXPECT_EQ(cube_root_mod_prime_power(Integer(1), Integer(7), 2)->root, 1);
    EXPECT_EQ(cube_root_mod_prime_power(Integer(10), Integer(3), 3)->root, 4);
    EXPECT_FALSE(cube_root_mod_prime_power(Integer(2), Integer(7), 5).has_value());
    EXPECT_THROW(cube_root_mod_prime_power(Integer(7), Integer(7), 2), InvalidInput);
}

TEST(CubeRoot, CubesBackUpToSixty) {
    std::mt19937_64 rng(7);
    for (const auto p : oracle::primes_below(60)) {
        const Integer P(p);
        for (const long n : {1L, 2L, 5L, 17L, 60L}) {
            const Integer m = power(P, static_cast<unsigned long>(n));
            for (int i = 0; i < 20; ++i) {
                const Integer c(static_cast<unsigned long>(rng() % 100000 + 1));
                if (c % P == 0) {
                    continue;
                }
                const auto r = cube_root_mod_prime_power(c, P, n);
                EXPECT_EQ(r.has_value(), is_cubic_residue(c, P));
                if (r) {
                    EXPECT_EQ(power_mod(r->root, 3, m), mod(c, m)) << c << " p=" << p << " N=" << n;
                    EXPECT_LT(r->root, m);
                    EXPECT_GE(r->root, 0);
                }
            }
        }
    }
}

TEST(CubeRoot, SmallestRootAtBaseModulus) {
    for (const auto p : oracle::primes_below(60)) {
        if (p == 3) {
            continue;
        }
        for (std::uint64_t c = 1; c < p; ++c) {
            const auto roots = oracle::cube_roots_mod(c, p);
            const auto r = cube_root_mod_prime_power(Integer(c), Integer(p), 1);
            ASSERT_EQ(r.has_value(), !roots.empty());
            if (r) {
                EXPECT_EQ(r->root, roots.front());
            }
        }
    }
    for (std::uint64_t c = 1; c < 27; ++c) {
        if (c % 3 == 0) {
            continue;
        }
        const auto roots = oracle::cube_roots_mod(c, 27);
        const auto r = cube_root_mod_prime_power(Integer(c), Integer(3), 3);
        ASSERT_EQ(r.has_value(), !roots.empty()) << c;
        if (r) {
            EXPECT_EQ(r->root, roots.front());
        }
    }
}

TEST(CubeRoot, AdlemanMandersMillerAgreesWithSearch) {
    for (const auto p : oracle::primes_below(400)) {
        if (p % 3 != 1) {
            continue;
        }
        const auto cubes = oracle::unit_cubes_mod(p);
        for (const auto c : cubes) {
            const Integer r = cube_root_mod_prime_amm(Integer(c), Integer(p));
            EXPECT_EQ(power_mod(r, 3, Integer(p)), c);
            EXPECT_EQ(cube_root_mod_prime(Integer(c), Integer(p)), oracle::cube_roots_mod(c, p).front());
        }
    }
}

TEST(CubeRoot, LargePrimeUsesExponentiation) {
    Integer p = power(Integer(10), 30);
    do {
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    } while (mod(p, Integer(3)) != 1);
    const Integer c = mod(Integer(123456789) * Integer(123456789) * Integer(123456789), p);
    const auto r = cube_root_mod_prime_power(c, p, 3);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(power_mod(r->root, 3, power(p, 3)), mod(c, power(p, 3)));
}

TEST(HenselLift, RequiresStrengthenedCondition) {
    // x^3 - 10 at p = 3: from 1 the condition v(f) > 2 v(f') fails, from 4 it holds.
    const CubicPolynomial f{Integer(-10), Integer(0), Integer(0), Integer(1)};
    EXPECT_FALSE(hensel_lift(f, Integer(1), Integer(3), 10).has_value());
    const auto r = hensel_lift(f, Integer(4), Integer(3), 10);
    ASSERT_TRUE(r.has_value());
    EXPECT_EQ(mod(f(*r), power(Integer(3), 10)), 0);
}
