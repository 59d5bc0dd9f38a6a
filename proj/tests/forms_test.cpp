#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "oracles.hpp"
#include "qlab/forms.hpp"

using namespace qlab;

namespace {

DiagonalCubicForm ones(std::size_t r) { return DiagonalCubicForm(std::vector<Integer>(r, Integer(1))); }

IntegerPoint point(std::initializer_list<long> xs) {
    IntegerPoint out;
    for (const long x : xs) {
        out.emplace_back(x);
    }
    return out;
}

GeneralCubicForm mixed_form() {
    // x0^3 + 2 x0 x1 x2 - 3 x1^2 x2 + x2^3 + 5 x0^2 x3
    std::map<MonomialKey, Integer> m{
        {{0, 0, 0}, Integer(1)}, {{0, 1, 2}, Integer(2)}, {{1, 1, 2}, Integer(-3)},
        {{2, 2, 2}, Integer(1)}, {{0, 0, 3}, Integer(5)},
    };
    return GeneralCubicForm(4, m, false);
}

} // namespace

TEST(Evaluate, Examples) {
    EXPECT_EQ(evaluate(BinaryCubicForm(Integer(1), Integer(2)), point({1, 1})), 3);
    EXPECT_EQ(evaluate(BinaryCubicForm(Integer(1), Integer(1)), point({2, -1})), 7);
    IntegerPoint x(10, Integer(0));
    x[0] = 1;
    x[1] = 6;
    EXPECT_EQ(evaluate(ones(10), x), 217);
    EXPECT_EQ(evaluate(to_general(ones(10)), x), 217);
    EXPECT_THROW(evaluate(ones(3), point({1, 2})), InvalidInput);
}

TEST(Gradient, Examples) {
    EXPECT_EQ(gradient(BinaryCubicForm(Integer(1), Integer(2)), point({1, 1})), point({3, 6}));
    EXPECT_EQ(gradient(BinaryCubicForm(Integer(1), Integer(1)), point({0, 0})), point({0, 0}));
    const DiagonalCubicForm d({Integer(4), Integer(-5), Integer(7)});
    EXPECT_EQ(gradient(d, point({0, 1, 0})), point({0, -15, 0}));
    EXPECT_THROW(gradient(d, point({1})), InvalidInput);
}

TEST(Primitive, Examples) {
    EXPECT_TRUE(is_primitive(BinaryCubicForm(Integer(2), Integer(3))));
    EXPECT_FALSE(is_primitive(BinaryCubicForm(Integer(2), Integer(4))));
    EXPECT_FALSE(is_primitive(DiagonalCubicForm({Integer(3), Integer(6), Integer(9)})));
    EXPECT_TRUE(is_primitive(mixed_form()));
}

TEST(Construction, RejectsDegenerateInput) {
    EXPECT_THROW(BinaryCubicForm(Integer(0), Integer(1)), InvalidInput);
    EXPECT_THROW(DiagonalCubicForm({Integer(1)}), InvalidInput);
    EXPECT_THROW(DiagonalCubicForm({Integer(1), Integer(0)}), InvalidInput);
    EXPECT_THROW(GeneralCubicForm(2, {{{0, 0, 5}, Integer(1)}}, true), InvalidInput);
    EXPECT_THROW(GeneralCubicForm(2, {{{0, 0, 0}, Integer(0)}}, true), InvalidInput);
}

TEST(Construction, GeneralFormSortsIndices) {
    const GeneralCubicForm g(3, {{{2, 0, 1}, Integer(4)}, {{1, 2, 0}, Integer(1)}}, false);
    ASSERT_EQ(g.monomials().size(), 1u);
    EXPECT_EQ(g.monomials().begin()->first, (MonomialKey{0, 1, 2}));
    EXPECT_EQ(g.monomials().begin()->second, 5);
}

TEST(Anisotropy, Examples) {
    EXPECT_TRUE(is_anisotropic_mod_p(BinaryCubicForm(Integer(1), Integer(2)), Integer(7)));
    EXPECT_FALSE(is_anisotropic_mod_p(BinaryCubicForm(Integer(1), Integer(1)), Integer(7)));
    EXPECT_FALSE(is_anisotropic_mod_p(BinaryCubicForm(Integer(1), Integer(2)), Integer(2)));
}

TEST(Anisotropy, ThirteenAdicCounterexample) {
    // -5 = 8 = 2^3 (mod 13), so x^3 + 5 y^3 vanishes at (2, 1) mod 13.
    const BinaryCubicForm f{Integer(1), Integer(5)};
    EXPECT_FALSE(is_anisotropic_mod_p(f, Integer(13)));
    EXPECT_EQ(f(Integer(2), Integer(1)), 13);
    EXPECT_TRUE(valuation_spectrum(f, Integer(13), 2).count(1));
    EXPECT_TRUE(is_anisotropic_mod_p(BinaryCubicForm(Integer(1), Integer(4)), Integer(13)));
}

TEST(Anisotropy, AgreesWithExhaustiveScan) {
    for (const auto p : oracle::primes_below(100)) {
        for (long a = -10; a <= 10; ++a) {
            for (long b = -10; b <= 10; ++b) {
                if (a == 0 || b == 0) {
                    continue;
                }
                EXPECT_EQ(is_anisotropic_mod_p(BinaryCubicForm(Integer(a), Integer(b)), Integer(p)),
                          oracle::anisotropic_by_scan(a, b, p))
                    << a << "," << b << " p=" << p;
            }
        }
    }
}

TEST(Spectrum, Examples) {
    const auto aniso = valuation_spectrum(BinaryCubicForm(Integer(1), Integer(2)), Integer(7), 30);
    for (const long v : aniso) {
        EXPECT_EQ(v % 3, 0);
    }
    EXPECT_TRUE(valuation_spectrum(BinaryCubicForm(Integer(1), Integer(1)), Integer(7), 10).count(1));
    EXPECT_TRUE(valuation_spectrum(BinaryCubicForm(Integer(1), Integer(1)), Integer(7), 2).count(0));
}

TEST(Spectrum, AnisotropicValuationLaw) {
    for (const auto p : oracle::primes_below(30)) {
        for (long a = 1; a <= 6; ++a) {
            for (long b = 1; b <= 6; ++b) {
                const BinaryCubicForm f{Integer(a), Integer(b)};
                if (std::gcd(a, b) != 1 || !is_anisotropic_mod_p(f, Integer(p))) {
                    continue;
                }
                for (const long v : valuation_spectrum(f, Integer(p), 100)) {
                    EXPECT_EQ(v % 3, 0) << a << "," << b << " p=" << p;
                }
            }
        }
    }
}

TEST(Spectrum, MatchesDirectEnumeration) {
    const BinaryCubicForm f{Integer(3), Integer(-4)};
    std::set<long> expected;
    for (long x = -15; x <= 15; ++x) {
        for (long y = -15; y <= 15; ++y) {
            const long value = 3 * x * x * x - 4 * y * y * y;
            if (value != 0) {
                expected.insert(oracle::valuation(value, 2));
            }
        }
    }
    EXPECT_EQ(valuation_spectrum(f, Integer(2), 15), expected);
}

TEST(Box, ResourceLimit) { EXPECT_THROW(valuation_spectrum(ones(10), Integer(7), 10), ResourceLimit); }

class FormProperties : public ::testing::Test {
protected:
    std::mt19937_64 rng{99};

    IntegerPoint random_point(std::size_t n) {
        std::uniform_int_distribution<long> d(-1000, 1000);
        IntegerPoint x;
        for (std::size_t i = 0; i < n; ++i) {
            x.emplace_back(d(rng));
        }
        return x;
    }

    std::vector<CubicForm> forms() {
        return {BinaryCubicForm(Integer(686), Integer(-5)), DiagonalCubicForm({Integer(5), Integer(686), Integer(3)}),
                mixed_form(), to_general(ones(10))};
    }
};

TEST_F(FormProperties, Homogeneity) {
    std::uniform_int_distribution<long> scale(-50, 50);
    for (const auto& f : forms()) {
        for (int i = 0; i < 200; ++i) {
            const IntegerPoint x = random_point(nvars(f));
            const Integer m(scale(rng));
            IntegerPoint mx = x;
            for (auto& c : mx) {
                c *= m;
            }
            EXPECT_EQ(evaluate(f, mx), m * m * m * evaluate(f, x));
        }
    }
}

TEST_F(FormProperties, EulerIdentity) {
    for (const auto& f : forms()) {
        for (int i = 0; i < 200; ++i) {
            const IntegerPoint x = random_point(nvars(f));
            const auto g = gradient(f, x);
            Integer sum = 0;
            for (std::size_t k = 0; k < x.size(); ++k) {
                sum += x[k] * g[k];
            }
            EXPECT_EQ(sum, 3 * evaluate(f, x));
        }
    }
}

TEST_F(FormProperties, GeneralEmbeddingAgrees) {
    const DiagonalCubicForm d({Integer(5), Integer(686), Integer(3)});
    const GeneralCubicForm g = to_general(d);
    for (int i = 0; i < 100; ++i) {
        const IntegerPoint x = random_point(3);
        EXPECT_EQ(evaluate(g, x), evaluate(d, x));
        EXPECT_EQ(gradient(g, x), gradient(d, x));
    }
}

TEST_F(FormProperties, RestrictionMatchesEvaluation) {
    const GeneralCubicForm g = mixed_form();
    for (int i = 0; i < 100; ++i) {
        IntegerPoint x = random_point(4);
        const std::size_t pivot = static_cast<std::size_t>(i % 4);
        const CubicPolynomial f = restrict_to_coordinate(g, x, pivot);
        EXPECT_EQ(f(x[pivot]), evaluate(g, x));
        EXPECT_EQ(f.derivative(x[pivot]), gradient(g, x)[pivot]);
        x[pivot] += 17;
        EXPECT_EQ(f(x[pivot]), evaluate(g, x));
    }
}

TEST(Json, RoundTrip) {
    const std::vector<CubicForm> forms{BinaryCubicForm(Integer(686), Integer(5)),
                                       DiagonalCubicForm({Integer(1), Integer("123456789012345678901234567890")}),
                                       mixed_form()};
    for (const auto& f : forms) {
        const nlohmann::json j = form_to_json(f);
        EXPECT_EQ(form_from_json(j), f);
        EXPECT_EQ(form_to_json(form_from_json(nlohmann::json::parse(j.dump()))), j);
    }
    EXPECT_EQ(form_to_json(forms[0]).dump(), R"({"coeffs":[686,5],"kind":"binary"})");
}

TEST(Json, Errors) {
    EXPECT_THROW(form_from_json(nlohmann::json::parse(R"({"kind":"binary","coeffs":[1,2,3]})")), InvalidInput);
    EXPECT_THROW(form_from_json(nlohmann::json::parse(R"({"kind":"quartic","coeffs":[1,2]})")), InvalidInput);
    EXPECT_THROW(form_from_json(nlohmann::json::parse(R"({"coeffs":[1,2]})")), InvalidInput);
    EXPECT_THROW(form_from_json(nlohmann::json::parse(R"({"kind":"diagonal","coeffs":[1,"x"]})")), InvalidInput);
    EXPECT_THROW(form_from_json(nlohmann::json::parse(R"({"kind":"general","monomials":[[0,0,1]]})")),
                 InvalidInput);
}
