#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "qlab/errors.hpp"

namespace qlab {

using Integer = mpz_class;
using Rational = mpq_class;

// ---------------------------------------------------------------------------
// Integer helpers
// ---------------------------------------------------------------------------

bool is_prime(const Integer& n);
/// Throws InvalidInput unless n is prime.
void require_prime(const Integer& n);

Integer power(const Integer& base, unsigned long exponent);
/// Least nonnegative residue of a modulo m (m > 0).
Integer mod(const Integer& a, const Integer& m);
/// a^{-1} mod m; throws InvalidInput when gcd(a, m) != 1.
Integer inverse_mod(const Integer& a, const Integer& m);
Integer power_mod(const Integer& base, const Integer& exponent, const Integer& m);

/// Hash over the limbs of an mpz value, for unordered containers.
struct IntegerHash {
    std::size_t operator()(const Integer& n) const noexcept;
};

Rational parse_rational(std::string_view text);

/// num / den in lowest terms with positive denominator.
Rational make_rational(const Integer& num, const Integer& den);
Integer parse_integer(std::string_view text);
/// "n/d" in lowest terms, or "n" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const Integer& n);

// ---------------------------------------------------------------------------
// Valuations and norms
// ---------------------------------------------------------------------------

/// p-adic valuation: an integer, or infinity for zero.
class Valuation {
public:
    static Valuation infinity() { return Valuation(); }
    explicit Valuation(long value) : finite_(true), value_(value) {}

    bool is_infinite() const { return !finite_; }
    /// Throws std::logic_error when infinite.
    long value() const;

    friend bool operator==(const Valuation&, const Valuation&) = default;

    std::string to_string() const;

private:
    Valuation() = default;

    bool finite_ = false;
    long value_ = 0;
};

Valuation valuation(const Integer& n, const Integer& p);
Valuation valuation(const Rational& q, const Integer& p);

/// ||q||_p = p^{-v_p(q)} as an exact rational, 0 for q = 0.
Rational padic_norm(const Rational& q, const Integer& p);

/// ||x - y||_p computed exactly.
Rational rational_distance(const Rational& x, const Rational& y, const Integer& p);

/// p^e for a possibly negative exponent.
Rational prime_power(const Integer& p, long exponent);

// ---------------------------------------------------------------------------
// Truncated p-adic numbers
// ---------------------------------------------------------------------------

/// A ball in Q_p with relative precision.
///
/// Nonzero: the set p^v * (u + p^k Z_p) with u a unit reduced mod p^k.
/// Zero: a value known only to satisfy |x|_p <= p^{-(v + k)}; for a zero
/// approximation only the absolute precision v + k is meaningful.
class PAdicApprox {
public:
    PAdicApprox(Integer prime, long valuation, Integer unit, long precision);

    /// Zero ball of radius p^{-absolute_precision}.
    static PAdicApprox zero(Integer prime, long absolute_precision, long precision = 1);

    const Integer& prime() const { return prime_; }
    bool is_zero() const { return is_zero_; }
    long valuation() const { return valuation_; }
    const Integer& unit() const { return unit_; }
    long precision() const { return precision_; }
    long absolute_precision() const { return valuation_ + precision_; }

    /// Exact norm for a nonzero ball, the norm bound for a zero ball.
    Rational norm_bound() const;
    /// p^v * u, or 0.
    Rational center() const;
    bool contains(const Rational& q) const;

    PAdicApprox operator-() const;
    friend PAdicApprox operator*(const PAdicApprox& x, const PAdicApprox& y);
    friend PAdicApprox operator-(const PAdicApprox& x, const PAdicApprox& y);
    friend PAdicApprox operator+(const PAdicApprox& x, const PAdicApprox& y);

    PAdicApprox inverse() const;

private:
    PAdicApprox() = default;

    Integer prime_;
    bool is_zero_ = false;
    long valuation_ = 0;
    Integer unit_;
    long precision_ = 1;
};

PAdicApprox approx_from_rational(const Rational& q, const Integer& p, long precision);

struct ApproxDistance {
    Rational value;
    /// False when the difference vanished at the available precision and
    /// `value` is only an upper bound.
    bool exact = true;
};

ApproxDistance approx_distance(const PAdicApprox& x, const PAdicApprox& y);

} // namespace qlab
