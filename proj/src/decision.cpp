#include "qlab/decision.hpp"

#include <algorithm>

#include "qlab/residue.hpp"

namespace qlab {

std::string_view to_string(Status s) {
    switch (s) {
    case Status::Dense: return "DENSE";
    case Status::NotDense: return "NOT_DENSE";
    case Status::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::string_view to_string(Basis b) {
    switch (b) {
    case Basis::CoprimeCubeTest: return "COPRIME_CUBE_TEST";
    case Basis::CubePowerScaling: return "CUBE_POWER_SCALING";
    case Basis::NonCubePower: return "NON_CUBE_POWER";
    case Basis::AnisotropicModP: return "ANISOTROPIC_MOD_P";
    case Basis::DiagonalPair: return "DIAGONAL_PAIR";
    case Basis::HighOrder: return "HIGH_ORDER";
    case Basis::SubformInclusion: return "SUBFORM_INCLUSION";
    }
    return "";
}

std::string_view to_string(CubeRelation r) {
    switch (r) {
    case CubeRelation::RatioBA: return "b/a";
    case CubeRelation::ScaledRatioLB: return "l/b";
    case CubeRelation::PairLA: return "l/a_i";
    }
    return "";
}

std::string_view to_string(SeparationKind k) {
    return k == SeparationKind::ValuationClass ? "VALUATION_CLASS" : "NON_RESIDUE";
}

namespace {

constexpr long kCertificatePrecision = 6;

bool divides(const Integer& p, const Integer& n) { return mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()) != 0; }

long val(const Integer& n, const Integer& p) {
    Integer rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

CubeRootCertificate cube_certificate(const Integer& unit_numerator, const Integer& unit_denominator, const Integer& p,
                                     CubeRelation relation, const BinaryCubicForm& normalized, long scale) {
    const long alpha = hensel_exponent(p).value();
    const long precision = std::max(alpha, kCertificatePrecision);
    const Integer modulus = power(p, static_cast<unsigned long>(precision));
    const Integer unit = mod(Integer(unit_numerator * inverse_mod(unit_denominator, modulus)), modulus);
    const auto root = cube_root_mod_prime_power(unit, p, precision);
    if (!root) {
        throw ConstructionFailure("cube test passed but no cube root was found");
    }
    CubeRootCertificate cert;
    cert.prime = p;
    cert.precision = precision;
    cert.root = root->root;
    cert.unit = unit;
    cert.relation = relation;
    cert.a = normalized.a();
    cert.b = normalized.b();
    cert.scale_exponent = scale;
    return cert;
}

SeparationCertificate valuation_class_certificate(const Integer& p) {
    SeparationCertificate cert;
    cert.kind = SeparationKind::ValuationClass;
    cert.prime = p;
    cert.target = Rational(p);
    cert.radius = Rational(Integer(1), p);
    cert.valuation_residue = 0;
    return cert;
}

const char* const kNoNonResidueCaveat =
    "every unit is a cube modulo p^alpha, so no cubic non-residue exists and no separation radius can be "
    "attached; bounded audits may contradict this verdict";

const char* const kExtrapolatedCaveat =
    "no cubic non-residue exists modulo 3; the attached non-residue is taken modulo 9 and the separation "
    "bound is an unproven extrapolation";

const char* const kNoRadiusCaveat =
    "no explicit separation radius is available for p = 3 in this case; only bounded audit evidence applies";

} // namespace

Verdict decide_binary(const BinaryCubicForm& form, const Integer& p) {
    require_prime(p);
    if (!is_primitive(form)) {
        throw InvalidInput("form not primitive");
    }
    if (divides(p, form.a()) && divides(p, form.b())) {
        throw InvalidInput("p divides both coefficients");
    }
    const HenselExponent alpha = hensel_exponent(p);
    const Integer alpha_modulus = power(p, static_cast<unsigned long>(alpha.value()));

    Verdict verdict;
    BinaryCubicForm f = form;
    if (divides(p, form.b())) {
        f = form.swapped();
        verdict.normalized_swap = true;
    }

    if (!divides(p, f.a())) {
        const Integer ratio = mod(Integer(f.b() * inverse_mod(f.a(), alpha_modulus)), alpha_modulus);
        if (is_cubic_residue(ratio, p, alpha)) {
            verdict.status = Status::Dense;
            verdict.basis = Basis::CoprimeCubeTest;
            verdict.certificate = cube_certificate(f.b(), f.a(), p, CubeRelation::RatioBA, f, 0);
            return verdict;
        }
        verdict.status = Status::NotDense;
        if (is_anisotropic_mod_p(f, p)) {
            verdict.basis = Basis::AnisotropicModP;
            verdict.certificate = valuation_class_certificate(p);
        } else {
            verdict.basis = Basis::CoprimeCubeTest;
            verdict.caveat = kNoRadiusCaveat;
        }
        return verdict;
    }

    const long k = val(f.a(), p);
    Integer ell;
    mpz_divexact(ell.get_mpz_t(), f.a().get_mpz_t(), power(p, static_cast<unsigned long>(k)).get_mpz_t());

    if (k % 3 == 0) {
        verdict.basis = Basis::CubePowerScaling;
        const Integer ratio = mod(Integer(ell * inverse_mod(f.b(), alpha_modulus)), alpha_modulus);
        if (is_cubic_residue(ratio, p, alpha)) {
            verdict.status = Status::Dense;
            verdict.certificate = cube_certificate(ell, f.b(), p, CubeRelation::ScaledRatioLB, f, k);
            return verdict;
        }
        verdict.status = Status::NotDense;
        // C(x, y) = l (p^{k/3} x)^3 + b y^3, so value valuations follow the
        // reduced form l X^3 + b Y^3.
        if (is_anisotropic_mod_p(BinaryCubicForm(ell, f.b()), p)) {
            verdict.certificate = valuation_class_certificate(p);
        } else {
            verdict.caveat = kNoRadiusCaveat;
        }
        return verdict;
    }

    verdict.status = Status::NotDense;
    verdict.basis = Basis::NonCubePower;
    const auto n = smallest_cubic_non_residue(p, alpha);
    if (!n) {
        verdict.caveat = kNoNonResidueCaveat;
        return verdict;
    }
    SeparationCertificate cert;
    cert.kind = SeparationKind::NonResidue;
    cert.prime = p;
    cert.target = Rational(*n);
    cert.radius = prime_power(p, -k);
    cert.non_residue = *n;
    cert.exponent = k;
    cert.extrapolated = (p == 3);
    verdict.certificate = cert;
    if (cert.extrapolated) {
        verdict.caveat = kExtrapolatedCaveat;
    }
    return verdict;
}

namespace {

std::optional<LiftedZero> try_constructive_zero(const GeneralCubicForm& form, const Integer& p,
                                                const ZeroSearchOptions& options) {
    const auto zero = find_nonsingular_zero(form, p, options.trials, options.seed);
    if (!zero) {
        return std::nullopt;
    }
    try {
        return lift_zero_to_simple_root(form, p, zero->point, zero->pivot, options.precision);
    } catch (const ConstructionFailure&) {
        return std::nullopt;
    }
}

Verdict high_order_verdict(const GeneralCubicForm& form, const Integer& p, bool conditional,
                           const ZeroSearchOptions& options) {
    Verdict verdict;
    verdict.status = Status::Dense;
    verdict.basis = Basis::HighOrder;
    AssertionCertificate cert;
    cert.nvars = form.nvars();
    cert.nondegenerate_asserted = form.nondegenerate_assertion();
    cert.conditional = conditional;
    if (options.constructive) {
        cert.zero = try_constructive_zero(form, p, options);
    }
    verdict.certificate = cert;
    if (conditional) {
        verdict.caveat = "conditional on the caller's assertion that the form is non-degenerate";
    }
    return verdict;
}

} // namespace

Verdict decide_diagonal(const DiagonalCubicForm& form, const Integer& p, const ZeroSearchOptions& options) {
    require_prime(p);
    if (!is_primitive(form)) {
        throw InvalidInput("form not primitive");
    }
    const auto& coeffs = form.coefficients();
    if (coeffs.size() == 2) {
        return decide_binary(BinaryCubicForm(coeffs[0], coeffs[1]), p);
    }
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        for (std::size_t j = i + 1; j < coeffs.size(); ++j) {
            // R(a x^3 + b y^3) is unchanged by dividing out gcd(a, b).
            Integer g;
            mpz_gcd(g.get_mpz_t(), coeffs[i].get_mpz_t(), coeffs[j].get_mpz_t());
            const Verdict pair = decide_binary(BinaryCubicForm(coeffs[i] / g, coeffs[j] / g), p);
            if (pair.status != Status::Dense) {
                continue;
            }
            Verdict verdict;
            verdict.status = Status::Dense;
            verdict.normalized_swap = pair.normalized_swap;
            auto cert = std::get<CubeRootCertificate>(*pair.certificate);
            cert.pair = pair.normalized_swap ? std::pair{j, i} : std::pair{i, j};
            if (pair.basis == Basis::CubePowerScaling) {
                verdict.basis = Basis::DiagonalPair;
                cert.relation = CubeRelation::PairLA;
            } else {
                verdict.basis = Basis::SubformInclusion;
            }
            verdict.certificate = cert;
            return verdict;
        }
    }
    if (coeffs.size() >= 10) {
        return high_order_verdict(to_general(form), p, false, options);
    }
    Verdict verdict;
    verdict.status = Status::Unknown;
    verdict.caveat = "no coefficient pair certifies density and the form has fewer than 10 variables";
    return verdict;
}

Verdict decide_general(const GeneralCubicForm& form, const Integer& p, const ZeroSearchOptions& options) {
    require_prime(p);
    if (!is_primitive(form)) {
        throw InvalidInput("form not primitive");
    }
    if (form.nvars() > 9 && form.nondegenerate_assertion()) {
        return high_order_verdict(form, p, true, options);
    }
    Verdict verdict;
    verdict.status = Status::Unknown;
    verdict.caveat = form.nvars() > 9 ? "form is not asserted non-degenerate"
                                      : "general forms need more than 9 variables";
    return verdict;
}

Verdict decide(const CubicForm& form, const Integer& p, const ZeroSearchOptions& options) {
    if (const auto* b = std::get_if<BinaryCubicForm>(&form)) {
        return decide_binary(*b, p);
    }
    if (const auto* d = std::get_if<DiagonalCubicForm>(&form)) {
        return decide_diagonal(*d, p, options);
    }
    return decide_general(std::get<GeneralCubicForm>(form), p, options);
}

// ---------------------------------------------------------------------------

namespace {

constexpr unsigned long kFullScanLimit = 1UL << 16;

// A start for Newton along `pivot` congruent to point[pivot] mod p, searched
// mod p^3, with v(f) > 2 v(f').
std::optional<Integer> hensel_start(const GeneralCubicForm& form, const Integer& p, const IntegerPoint& point,
                                    std::size_t pivot) {
    const CubicPolynomial f = restrict_to_coordinate(form, point, pivot);
    const auto good = [&](const Integer& x) {
        const Integer fx = f(x);
        const Integer dfx = f.derivative(x);
        if (dfx == 0) {
            return false;
        }
        return fx == 0 || val(fx, p) > 2 * val(dfx, p);
    };
    const Integer x0 = mod(point[pivot], p);
    if (good(x0)) {
        return x0;
    }
    const Integer p2 = p * p;
    if (p2 > kFullScanLimit) {
        return std::nullopt;
    }
    for (Integer j = 0; j < p2; ++j) {
        const Integer x = x0 + j * p;
        if (good(x)) {
            return x;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> lifting_pivot(const GeneralCubicForm& form, const Integer& p, const IntegerPoint& point,
                                         std::size_t preferred) {
    const std::vector<Integer> grad = gradient(form, point);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!divides(p, grad[i])) {
            return i;
        }
    }
    if (p != 3) {
        return std::nullopt;
    }
    // Over Z/3 the gradient of a diagonal form always vanishes; fall back to
    // the strengthened start condition mod 27.
    if (hensel_start(form, p, point, preferred)) {
        return preferred;
    }
    for (std::size_t i = 0; i < form.nvars(); ++i) {
        if (i != preferred && hensel_start(form, p, point, i)) {
            return i;
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<ModularZero> find_nonsingular_zero(const GeneralCubicForm& form, const Integer& p, unsigned long trials,
                                                 std::uint64_t seed) {
    require_prime(p);
    gmp_randclass rng(gmp_randinit_mt);
    rng.seed(static_cast<unsigned long>(seed));
    const std::size_t r = form.nvars();
    const bool full_scan = p <= kFullScanLimit;
    const unsigned long scan = full_scan ? p.get_ui() : kFullScanLimit;

    IntegerPoint point(r);
    for (unsigned long trial = 0; trial < trials; ++trial) {
        for (auto& coord : point) {
            coord = rng.get_z_range(p);
        }
        const auto pivot = static_cast<std::size_t>(Integer(rng.get_z_range(Integer(static_cast<unsigned long>(r)))).get_ui());
        for (unsigned long s = 0; s < scan; ++s) {
            point[pivot] = full_scan ? Integer(s) : Integer(rng.get_z_range(p));
            if (std::all_of(point.begin(), point.end(), [](const Integer& c) { return c == 0; })) {
                continue;
            }
            if (!divides(p, evaluate(form, point))) {
                continue;
            }
            if (const auto chosen = lifting_pivot(form, p, point, pivot)) {
                return ModularZero{point, *chosen};
            }
        }
    }
    return std::nullopt;
}

LiftedZero lift_zero_to_simple_root(const GeneralCubicForm& form, const Integer& p, const IntegerPoint& point,
                                    std::size_t pivot, long precision) {
    require_prime(p);
    if (precision < 1) {
        throw InvalidInput("lifting precision must be at least 1");
    }
    if (point.size() != form.nvars()) {
        throw InvalidInput("point dimension does not match the form");
    }
    if (pivot >= form.nvars()) {
        throw InvalidInput("pivot index out of range");
    }
    const auto start = hensel_start(form, p, point, pivot);
    if (!start) {
        throw ConstructionFailure("Hensel condition v(C) > 2 v(dC/dx_" + std::to_string(pivot) +
                                  ") cannot be met from this point");
    }
    const CubicPolynomial f = restrict_to_coordinate(form, point, pivot);
    const auto root = hensel_lift(f, *start, p, precision);
    if (!root) {
        throw ConstructionFailure("Newton lifting failed from a valid start");
    }
    LiftedZero out;
    out.prime = p;
    out.precision = precision;
    out.point = point;
    out.point[pivot] = *root;
    out.pivot = pivot;
    out.root = *root;
    return out;
}

bool check_cube_root_certificate(const CubeRootCertificate& cert) {
    if (cert.precision < hensel_exponent(cert.prime).value()) {
        return false;
    }
    const Integer modulus = power(cert.prime, static_cast<unsigned long>(cert.precision));
    return power_mod(cert.root, 3, modulus) == mod(cert.unit, modulus);
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const Certificate& cert) {
    nlohmann::json j;
    if (const auto* c = std::get_if<CubeRootCertificate>(&cert)) {
        j["type"] = "cube_root";
        j["prime"] = integer_to_json(c->prime);
        j["precision"] = c->precision;
        j["root"] = integer_to_json(c->root);
        j["unit"] = integer_to_json(c->unit);
        j["relation"] = to_string(c->relation);
        j["a"] = integer_to_json(c->a);
        j["b"] = integer_to_json(c->b);
        j["scale_exponent"] = c->scale_exponent;
        j["pair"] = c->pair ? nlohmann::json::array({c->pair->first, c->pair->second}) : nlohmann::json(nullptr);
    } else if (const auto* s = std::get_if<SeparationCertificate>(&cert)) {
        j["type"] = "separation";
        j["kind"] = to_string(s->kind);
        j["prime"] = integer_to_json(s->prime);
        j["target"] = to_string(s->target);
        j["radius"] = to_string(s->radius);
        if (s->kind == SeparationKind::ValuationClass) {
            j["valuation_residue"] = s->valuation_residue;
        } else {
            j["non_residue"] = integer_to_json(s->non_residue);
            j["exponent"] = s->exponent;
            j["extrapolated"] = s->extrapolated;
        }
    } else {
        const auto& a = std::get<AssertionCertificate>(cert);
        j["type"] = "assertion";
        j["nvars"] = a.nvars;
        j["nondegenerate_asserted"] = a.nondegenerate_asserted;
        j["conditional"] = a.conditional;
        if (a.zero) {
            nlohmann::json z;
            z["prime"] = integer_to_json(a.zero->prime);
            z["precision"] = a.zero->precision;
            z["pivot"] = a.zero->pivot;
            z["root"] = integer_to_json(a.zero->root);
            z["point"] = nlohmann::json::array();
            for (const Integer& c : a.zero->point) {
                z["point"].push_back(integer_to_json(c));
            }
            j["zero"] = z;
        } else {
            j["zero"] = nullptr;
        }
    }
    return j;
}

nlohmann::json to_json(const Verdict& verdict) {
    nlohmann::json j;
    j["status"] = to_string(verdict.status);
    j["basis"] = verdict.basis ? nlohmann::json(to_string(*verdict.basis)) : nlohmann::json(nullptr);
    j["certificate"] = verdict.certificate ? to_json(*verdict.certificate) : nlohmann::json(nullptr);
    j["caveat"] = verdict.caveat ? nlohmann::json(*verdict.caveat) : nlohmann::json(nullptr);
    j["normalized_swap"] = verdict.normalized_swap;
    return j;
}

} // namespace qlab
