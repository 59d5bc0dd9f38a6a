#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include <json.hpp>

#include "qlab/forms.hpp"
#include "qlab/padic.hpp"

namespace qlab {

enum class Status { Dense, NotDense, Unknown };

/// Which criterion produced a verdict.
enum class Basis {
    CoprimeCubeTest,   ///< p divides neither coefficient: cube test on b/a mod p^alpha.
    CubePowerScaling,  ///< a = p^k l with 3 | k: cube test on l/b after x -> p^{k/3} x.
    NonCubePower,      ///< a = p^k l with 3 not dividing k.
    AnisotropicModP,   ///< no nontrivial zero mod p, value valuations confined to 3Z.
    DiagonalPair,      ///< a unit coefficient paired with p^{3m} l.
    HighOrder,         ///< at least 10 variables, non-degenerate.
    SubformInclusion,  ///< a two-variable subform already has dense quotients.
};

std::string_view to_string(Status s);
std::string_view to_string(Basis b);

/// Which unit was shown to be a cube.
enum class CubeRelation {
    RatioBA,       ///< b * a^{-1}
    ScaledRatioLB, ///< b^{-1} * l where a = p^k l
    PairLA,        ///< a_i^{-1} * l where a_j = p^k l
};

std::string_view to_string(CubeRelation r);

struct CubeRootCertificate {
    Integer prime;
    long precision = 0; ///< K: the relation holds mod p^K.
    Integer root;
    Integer unit; ///< certified unit, reduced mod p^K
    CubeRelation relation = CubeRelation::RatioBA;
    Integer a; ///< normalized coefficients the relation refers to
    Integer b;
    long scale_exponent = 0; ///< v_p(a) for the scaled relations
    std::optional<std::pair<std::size_t, std::size_t>> pair; ///< diagonal indices (i, j)
};

enum class SeparationKind { ValuationClass, NonResidue };

std::string_view to_string(SeparationKind k);

/// No quotient lies strictly closer than `radius` to `target`.
struct SeparationCertificate {
    SeparationKind kind = SeparationKind::ValuationClass;
    Integer prime;
    Rational target;
    Rational radius;
    int valuation_residue = 0; ///< ValuationClass: every value valuation is = this (mod 3)
    Integer non_residue;       ///< NonResidue: n, not a cube mod p^alpha
    long exponent = 0;         ///< NonResidue: radius = p^{-exponent}
    bool extrapolated = false; ///< p = 3: the non-residue is taken mod 9
};

struct LiftedZero {
    Integer prime;
    long precision = 0;
    IntegerPoint point; ///< coordinate `pivot` holds the lifted root
    std::size_t pivot = 0;
    Integer root;
};

struct AssertionCertificate {
    std::size_t nvars = 0;
    bool nondegenerate_asserted = false;
    /// True when non-degeneracy rests on the caller's word.
    bool conditional = true;
    std::optional<LiftedZero> zero;
};

using Certificate = std::variant<CubeRootCertificate, SeparationCertificate, AssertionCertificate>;

struct Verdict {
    Status status = Status::Unknown;
    std::optional<Basis> basis;
    std::optional<Certificate> certificate;
    std::optional<std::string> caveat;
    bool normalized_swap = false;
};

inline constexpr std::uint64_t kDefaultSeed = 20211023;

struct ZeroSearchOptions {
    /// Attach an explicit lifted zero to high-order verdicts.
    bool constructive = false;
    unsigned long trials = 1000;
    std::uint64_t seed = kDefaultSeed;
    long precision = 20;
};

Verdict decide_binary(const BinaryCubicForm& form, const Integer& p);
Verdict decide_diagonal(const DiagonalCubicForm& form, const Integer& p, const ZeroSearchOptions& options = {});
Verdict decide_general(const GeneralCubicForm& form, const Integer& p, const ZeroSearchOptions& options = {});
Verdict decide(const CubicForm& form, const Integer& p, const ZeroSearchOptions& options = {});

struct ModularZero {
    IntegerPoint point; ///< coordinates in [0, p)
    std::size_t pivot = 0;
};

/// Seeded random search for x mod p with C(x) = 0 (mod p) that lifts along
/// one coordinate: either dC/dx_i != 0 (mod p), or (p = 3) some lift of x_i
/// mod 27 meets v(C) > 2 v(dC/dx_i).
std::optional<ModularZero> find_nonsingular_zero(const GeneralCubicForm& form, const Integer& p, unsigned long trials,
                                                 std::uint64_t seed);

/// Newton-lifts coordinate `pivot` (others frozen) to a root mod p^N.
/// Throws ConstructionFailure when no start satisfies the Hensel condition.
LiftedZero lift_zero_to_simple_root(const GeneralCubicForm& form, const Integer& p, const IntegerPoint& point,
                                    std::size_t pivot, long precision);

/// root^3 = unit (mod p^K) and K >= alpha.
bool check_cube_root_certificate(const CubeRootCertificate& cert);

nlohmann::json to_json(const Certificate& cert);
nlohmann::json to_json(const Verdict& verdict);

} // namespace qlab
