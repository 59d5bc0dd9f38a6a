#include "qlab/padic.hpp"

#include <algorithm>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace qlab {

bool is_prime(const Integer& n) {
    if (n < 2) {
        return false;
    }
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

void require_prime(const Integer& n) {
    if (!is_prime(n)) {
        throw InvalidInput("modulus " + n.get_str() + " is not prime");
    }
}

Integer power(const Integer& base, unsigned long exponent) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

Integer mod(const Integer& a, const Integer& m) {
    Integer r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Integer inverse_mod(const Integer& a, const Integer& m) {
    Integer r;
    if (m == 1) {
        return 0;
    }
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw InvalidInput(a.get_str() + " is not invertible modulo " + m.get_str());
    }
    return r;
}

Integer power_mod(const Integer& base, const Integer& exponent, const Integer& m) {
    Integer r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), m.get_mpz_t());
    return r;
}

std::size_t IntegerHash::operator()(const Integer& n) const noexcept {
    const mpz_srcptr z = n.get_mpz_t();
    const std::size_t limbs = mpz_size(z);
    const mp_limb_t* data = mpz_limbs_read(z);
    std::size_t h = std::hash<std::string_view>{}(
        std::string_view(reinterpret_cast<const char*>(data), limbs * sizeof(mp_limb_t)));
    return mpz_sgn(z) < 0 ? ~h : h;
}

Integer parse_integer(std::string_view text) {
    std::string s(text);
    if (s.empty()) {
        throw InvalidInput("empty integer literal");
    }
    if (s.front() == '+') {
        s.erase(0, 1);
    }
    Integer n;
    if (s.empty() || n.set_str(s, 10) != 0) {
        throw InvalidInput("malformed integer '" + std::string(text) + "'");
    }
    return n;
}

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(text));
    }
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) {
        throw InvalidInput("zero denominator in '" + std::string(text) + "'");
    }
    return make_rational(num, den);
}

Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) {
        throw InvalidInput("zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }
std::string to_string(const Integer& n) { return n.get_str(); }

long Valuation::value() const {
    if (!finite_) {
        throw std::logic_error("valuation of zero is infinite");
    }
    return value_;
}

std::string Valuation::to_string() const {
    return finite_ ? std::to_string(value_) : std::string("INFINITY");
}

namespace {

long strip(const Integer& n, const Integer& p) {
    if (n == 0) {
        return 0;
    }
    Integer rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

// Valuation without the primality check, for inner loops.
long raw_valuation(const Integer& n, const Integer& p) { return strip(n, p); }

} // namespace

Valuation valuation(const Integer& n, const Integer& p) {
    require_prime(p);
    if (n == 0) {
        return Valuation::infinity();
    }
    return Valuation(raw_valuation(n, p));
}

Valuation valuation(const Rational& q, const Integer& p) {
    require_prime(p);
    if (q == 0) {
        return Valuation::infinity();
    }
    return Valuation(raw_valuation(q.get_num(), p) - raw_valuation(q.get_den(), p));
}

Rational prime_power(const Integer& p, long exponent) {
    const Integer magnitude = power(p, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent >= 0) {
        return Rational(magnitude);
    }
    return Rational(Integer(1), magnitude);
}

Rational padic_norm(const Rational& q, const Integer& p) {
    const Valuation v = valuation(q, p);
    if (v.is_infinite()) {
        return 0;
    }
    return prime_power(p, -v.value());
}

Rational rational_distance(const Rational& x, const Rational& y, const Integer& p) {
    return padic_norm(Rational(x - y), p);
}

// ---------------------------------------------------------------------------

PAdicApprox::PAdicApprox(Integer prime, long valuation, Integer unit, long precision)
    : prime_(std::move(prime)), valuation_(valuation), precision_(precision) {
    if (precision_ < 1) {
        throw InvalidInput("p-adic precision must be at least 1");
    }
    unit_ = mod(unit, power(prime_, static_cast<unsigned long>(precision_)));
    if (mpz_divisible_p(unit_.get_mpz_t(), prime_.get_mpz_t()) != 0) {
        throw InvalidInput("p-adic unit part must be coprime to p");
    }
}

PAdicApprox PAdicApprox::zero(Integer prime, long absolute_precision, long precision) {
    PAdicApprox z;
    z.prime_ = std::move(prime);
    z.is_zero_ = true;
    z.precision_ = std::max(1L, precision);
    z.valuation_ = absolute_precision - z.precision_;
    z.unit_ = 0;
    return z;
}

Rational PAdicApprox::norm_bound() const {
    return prime_power(prime_, -(is_zero_ ? absolute_precision() : valuation_));
}

Rational PAdicApprox::center() const {
    if (is_zero_) {
        return 0;
    }
    return prime_power(prime_, valuation_) * Rational(unit_);
}

bool PAdicApprox::contains(const Rational& q) const {
    const Rational diff = q - center();
    if (diff == 0) {
        return true;
    }
    const long v = raw_valuation(diff.get_num(), prime_) - raw_valuation(diff.get_den(), prime_);
    return v >= absolute_precision();
}

PAdicApprox PAdicApprox::operator-() const {
    if (is_zero_) {
        return *this;
    }
    return PAdicApprox(prime_, valuation_, -unit_, precision_);
}

namespace {

void require_same_prime(const PAdicApprox& x, const PAdicApprox& y) {
    if (x.prime() != y.prime()) {
        throw InvalidInput("p-adic operands use different primes");
    }
}

} // namespace

PAdicApprox operator*(const PAdicApprox& x, const PAdicApprox& y) {
    require_same_prime(x, y);
    const long k = std::min(x.precision_, y.precision_);
    if (x.is_zero_ || y.is_zero_) {
        const long bx = x.is_zero_ ? x.absolute_precision() : x.valuation_;
        const long by = y.is_zero_ ? y.absolute_precision() : y.valuation_;
        return PAdicApprox::zero(x.prime_, bx + by, k);
    }
    return PAdicApprox(x.prime_, x.valuation_ + y.valuation_, Integer(x.unit_ * y.unit_), k);
}

PAdicApprox operator-(const PAdicApprox& x, const PAdicApprox& y) {
    require_same_prime(x, y);
    const Integer& p = x.prime_;
    const long abs = std::min(x.absolute_precision(), y.absolute_precision());
    const long k = std::min(x.precision_, y.precision_);

    struct Term {
        long v;
        Integer u;
    };
    std::vector<Term> terms;
    if (!x.is_zero_) {
        terms.push_back({x.valuation_, x.unit_});
    }
    if (!y.is_zero_) {
        terms.push_back({y.valuation_, Integer(-y.unit_)});
    }
    if (terms.empty()) {
        return PAdicApprox::zero(p, abs, k);
    }
    long lowest = terms.front().v;
    for (const Term& t : terms) {
        lowest = std::min(lowest, t.v);
    }
    if (lowest >= abs) {
        return PAdicApprox::zero(p, abs, k);
    }
    // Difference is p^lowest * (sum mod p^(abs - lowest)); digits beyond abs are unknown.
    const Integer modulus = power(p, static_cast<unsigned long>(abs - lowest));
    Integer sum = 0;
    for (const Term& t : terms) {
        sum += t.u * power(p, static_cast<unsigned long>(t.v - lowest));
    }
    sum = mod(sum, modulus);
    if (sum == 0) {
        return PAdicApprox::zero(p, abs, k);
    }
    const long shift = raw_valuation(sum, p);
    const long v = lowest + shift;
    Integer unit;
    mpz_divexact(unit.get_mpz_t(), sum.get_mpz_t(), power(p, static_cast<unsigned long>(shift)).get_mpz_t());
    return PAdicApprox(p, v, unit, abs - v);
}

PAdicApprox operator+(const PAdicApprox& x, const PAdicApprox& y) { return x - (-y); }

PAdicApprox PAdicApprox::inverse() const {
    if (is_zero_) {
        throw InvalidInput("cannot invert a p-adic approximation of zero");
    }
    const Integer modulus = power(prime_, static_cast<unsigned long>(precision_));
    return PAdicApprox(prime_, -valuation_, inverse_mod(unit_, modulus), precision_);
}

PAdicApprox approx_from_rational(const Rational& q, const Integer& p, long precision) {
    require_prime(p);
    if (precision < 1) {
        throw InvalidInput("p-adic precision must be at least 1");
    }
    if (q == 0) {
        return PAdicApprox::zero(p, precision, precision);
    }
    const long v = valuation(q, p).value();
    // q / p^v = num' / den' with both coprime to p.
    Integer num = q.get_num();
    Integer den = q.get_den();
    Integer stripped;
    mpz_remove(stripped.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
    num = stripped;
    mpz_remove(stripped.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
    den = stripped;
    const Integer modulus = power(p, static_cast<unsigned long>(precision));
    return PAdicApprox(p, v, Integer(num * inverse_mod(den, modulus)), precision);
}

ApproxDistance approx_distance(const PAdicApprox& x, const PAdicApprox& y) {
    const PAdicApprox d = x - y;
    return {d.norm_bound(), !d.is_zero()};
}

} // namespace qlab
