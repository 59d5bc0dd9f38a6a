#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include <json.hpp>

#include "qlab/decision.hpp"
#include "qlab/forms.hpp"
#include "qlab/padic.hpp"
#include "qlab/residue.hpp"

namespace qlab {

/// Ceilings for enumeration kernels. QLAB_MAX_BOUND overrides max_bound in
/// the command-line tool.
struct AuditLimits {
    std::uint64_t max_modulus = 10'000'000;
    long max_bound = 2000;
    std::uint64_t max_pairs = 1'000'000'000;
    unsigned long long max_points = kDefaultMaxPoints;
};

/// C(x, y) / C(z, w) approximating a target.
struct QuotientWitness {
    Integer x, y, z, w;
    Rational quotient;
    Rational achieved_distance; ///< exact ||quotient - target||_p
    Rational bound;             ///< p^{-k} ||target||_p
};

/// Quotient of two form values at explicit points.
struct PointWitness {
    IntegerPoint numerator;
    IntegerPoint denominator;
    Rational quotient;
    Rational achieved_distance;
    Rational bound;
};

/// Integers x, y, z, w with ||C(x,y)/C(z,w) - t||_p <= p^{-k} ||t||_p, checked
/// exactly before return. Throws InvalidInput unless the form is dense at p.
QuotientWitness witness_for_target(const BinaryCubicForm& form, const Integer& p, const Rational& target,
                                   long precision);

/// Diagonal forms: a witness on the certifying coefficient pair, other
/// coordinates zero.
PointWitness witness_for_target(const DiagonalCubicForm& form, const Integer& p, const Rational& target,
                                long precision);

/// Digit-by-digit search for a root of g modulo p^N, keeping at most
/// `frontier_cap` partial roots per level.
std::optional<Integer> lift_by_digits(const CubicPolynomial& g, const Integer& p, long exponent,
                                      std::size_t frontier_cap = 4096);

std::optional<SeparationCertificate> separation_certificate(const BinaryCubicForm& form, const Integer& p);

struct SeparationReport {
    bool verified = false;
    Rational min_distance;
    IntegerPoint numerator;
    IntegerPoint denominator;
    long bound = 0;
};

/// Exhaustive check over the box |coordinates| <= bound that no quotient is
/// strictly closer than cert.radius to cert.target.
SeparationReport verify_separation(const CubicForm& form, const Integer& p, const SeparationCertificate& cert,
                                   long bound, const AuditLimits& limits = {});

struct CoverageReport {
    Integer prime;
    long depth = 0;
    long bound = 0;
    long window = 0;
    Status verdict = Status::Unknown;
    std::vector<std::uint64_t> unit_classes_attained; ///< sorted residues mod p^depth
    std::uint64_t unit_classes_total = 0;             ///< phi(p^depth)
    std::set<long> valuations_attained;                ///< quotient valuations within [-window, window]
    std::set<int> valuation_residues_mod_3;            ///< of the values themselves
    bool zero_value_attained = false;                  ///< C vanishes at a nonzero point of the box
    bool discrepancy_flag = false;
    std::optional<std::string> discrepancy_reason;
    /// Unit classes never attained, offered as unverified separation targets
    /// when the verdict is NOT_DENSE without a certificate.
    std::vector<std::uint64_t> unverified_candidates;

    bool full_unit_coverage() const { return unit_classes_attained.size() == unit_classes_total; }
    bool full_valuation_coverage() const {
        return valuations_attained.size() == static_cast<std::size_t>(2 * window + 1);
    }
};

CoverageReport coverage_audit(const CubicForm& form, const Integer& p, long depth, long bound, long window,
                              const AuditLimits& limits = {});

nlohmann::json to_json(const QuotientWitness& w);
nlohmann::json to_json(const PointWitness& w);
nlohmann::json to_json(const SeparationReport& r);
nlohmann::json to_json(const CoverageReport& r);

} // namespace qlab
