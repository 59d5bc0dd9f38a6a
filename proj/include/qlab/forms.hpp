#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qlab/padic.hpp"
#include "qlab/residue.hpp"

namespace qlab {

using IntegerPoint = std::vector<Integer>;

/// a x^3 + b y^3 with a, b nonzero.
class BinaryCubicForm {
public:
    BinaryCubicForm(Integer a, Integer b);

    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }
    std::size_t nvars() const { return 2; }

    /// b x^3 + a y^3; same value set.
    BinaryCubicForm swapped() const { return {b_, a_}; }

    Integer operator()(const Integer& x, const Integer& y) const { return a_ * x * x * x + b_ * y * y * y; }

    friend bool operator==(const BinaryCubicForm&, const BinaryCubicForm&) = default;

private:
    Integer a_;
    Integer b_;
};

/// a_1 x_1^3 + ... + a_r x_r^3 with r >= 2 and every a_i nonzero.
class DiagonalCubicForm {
public:
    explicit DiagonalCubicForm(std::vector<Integer> coefficients);

    const std::vector<Integer>& coefficients() const { return coefficients_; }
    std::size_t nvars() const { return coefficients_.size(); }

    friend bool operator==(const DiagonalCubicForm&, const DiagonalCubicForm&) = default;

private:
    std::vector<Integer> coefficients_;
};

/// Sorted variable indices i <= j <= k of a cubic monomial x_i x_j x_k.
using MonomialKey = std::array<std::size_t, 3>;

/// Sparse general cubic form sum c_{ijk} x_i x_j x_k.
///
/// Non-degeneracy (order equal to the number of variables) is not computed;
/// the caller asserts it.
class GeneralCubicForm {
public:
    GeneralCubicForm(std::size_t nvars, std::map<MonomialKey, Integer> monomials, bool nondegenerate_assertion);

    std::size_t nvars() const { return nvars_; }
    const std::map<MonomialKey, Integer>& monomials() const { return monomials_; }
    bool nondegenerate_assertion() const { return nondegenerate_; }

    friend bool operator==(const GeneralCubicForm&, const GeneralCubicForm&) = default;

private:
    std::size_t nvars_;
    std::map<MonomialKey, Integer> monomials_;
    bool nondegenerate_;
};

using CubicForm = std::variant<BinaryCubicForm, DiagonalCubicForm, GeneralCubicForm>;

DiagonalCubicForm to_diagonal(const BinaryCubicForm& form);
/// Diagonal forms with nonzero coefficients are non-degenerate, so the
/// assertion flag is set.
GeneralCubicForm to_general(const DiagonalCubicForm& form);
GeneralCubicForm to_general(const BinaryCubicForm& form);

std::size_t nvars(const CubicForm& form);
std::vector<Integer> coefficients(const CubicForm& form);

Integer evaluate(const CubicForm& form, const IntegerPoint& point);
std::vector<Integer> gradient(const CubicForm& form, const IntegerPoint& point);
bool is_primitive(const CubicForm& form);

/// Restriction t -> C(point with coordinate `pivot` replaced by t).
CubicPolynomial restrict_to_coordinate(const GeneralCubicForm& form, const IntegerPoint& point, std::size_t pivot);

/// True iff a x^3 + b y^3 has no nontrivial zero over Z/p.
bool is_anisotropic_mod_p(const BinaryCubicForm& form, const Integer& p);

inline constexpr unsigned long long kDefaultMaxPoints = 200'000'000ULL;

/// Calls visit(point, value) for every point of [-bound, bound]^r.
/// Throws ResourceLimit when the box has more than max_points points.
template <typename Visit>
void for_each_box_point(const CubicForm& form, long bound, Visit&& visit,
                        unsigned long long max_points = kDefaultMaxPoints);

/// Set of v_p(C(x)) over nonzero values with |x_i| <= bound.
std::set<long> valuation_spectrum(const CubicForm& form, const Integer& p, long bound,
                                  unsigned long long max_points = kDefaultMaxPoints);

nlohmann::json form_to_json(const CubicForm& form);
CubicForm form_from_json(const nlohmann::json& j);

/// Integers serialize as JSON numbers when they fit in 64 bits, else as
/// decimal strings; both spellings are accepted on input.
nlohmann::json integer_to_json(const Integer& n);
Integer integer_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------

namespace detail {
void check_box(std::size_t nvars, long bound, unsigned long long max_points);
}

template <typename Visit>
void for_each_box_point(const CubicForm& form, long bound, Visit&& visit, unsigned long long max_points) {
    const std::size_t r = nvars(form);
    detail::check_box(r, bound, max_points);
    IntegerPoint point(r, Integer(-bound));
    if (const auto* bin = std::get_if<BinaryCubicForm>(&form)) {
        std::vector<Integer> cubes;
        cubes.reserve(static_cast<std::size_t>(2 * bound + 1));
        for (long t = -bound; t <= bound; ++t) {
            cubes.emplace_back(Integer(t) * t * t);
        }
        Integer ax, value;
        for (long x = -bound; x <= bound; ++x) {
            ax = bin->a() * cubes[static_cast<std::size_t>(x + bound)];
            point[0] = x;
            for (long y = -bound; y <= bound; ++y) {
                point[1] = y;
                value = ax + bin->b() * cubes[static_cast<std::size_t>(y + bound)];
                visit(static_cast<const IntegerPoint&>(point), static_cast<const Integer&>(value));
            }
        }
        return;
    }
    while (true) {
        const Integer value = evaluate(form, point);
        visit(static_cast<const IntegerPoint&>(point), value);
        std::size_t i = 0;
        while (i < r && point[i] == bound) {
            point[i] = -bound;
            ++i;
        }
        if (i == r) {
            return;
        }
        ++point[i];
    }
}

} // namespace qlab
