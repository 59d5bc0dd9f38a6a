#include "qlab/witness.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace qlab {

namespace {

constexpr long kSmallSearchRadius = 3;

bool divides(const Integer& p, const Integer& n) { return mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t()) != 0; }

long val(const Integer& n, const Integer& p) {
    Integer rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long val(const Rational& q, const Integer& p) { return val(q.get_num(), p) - val(q.get_den(), p); }

Integer unit_part(const Integer& n, const Integer& p) {
    Integer rest;
    mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    return rest;
}

Rational distance(const Rational& q, const Rational& t, const Integer& p) {
    const Rational d = q - t;
    if (d == 0) {
        return 0;
    }
    return prime_power(p, -val(d, p));
}

struct Quad {
    Integer x, y, z, w;
};

QuotientWitness finish(const BinaryCubicForm& form, const Integer& p, const Rational& target, const Rational& bound,
                       const Quad& q) {
    const Integer num = form(q.x, q.y);
    const Integer den = form(q.z, q.w);
    if (den == 0) {
        throw ConstructionFailure("witness denominator vanished");
    }
    QuotientWitness out{q.x, q.y, q.z, q.w, make_rational(num, den), 0, bound};
    out.achieved_distance = distance(out.quotient, target, p);
    if (out.achieved_distance > bound) {
        throw ConstructionFailure("constructed witness misses the distance bound");
    }
    return out;
}

// Best quotient among small points, if it already meets the bound.
std::optional<Quad> small_search(const BinaryCubicForm& form, const Integer& p, const Rational& target,
                                 const Rational& bound) {
    struct Entry {
        long x, y;
        Integer value;
    };
    std::vector<Entry> entries;
    for (long x = -kSmallSearchRadius; x <= kSmallSearchRadius; ++x) {
        for (long y = -kSmallSearchRadius; y <= kSmallSearchRadius; ++y) {
            entries.push_back({x, y, form(Integer(x), Integer(y))});
        }
    }
    // Small height first, then fewer negative signs, a negative sign preferably in y.
    const auto key = [](const Entry& e) {
        return std::tuple(std::max(std::labs(e.x), std::labs(e.y)), int(e.x < 0) + int(e.y < 0), e.x < 0,
                          std::labs(e.y));
    };
    std::stable_sort(entries.begin(), entries.end(), [&](const Entry& l, const Entry& r) { return key(l) < key(r); });

    std::optional<Quad> best;
    Rational best_distance;
    for (const Entry& den : entries) {
        if (den.value == 0) {
            continue;
        }
        for (const Entry& num : entries) {
            const Rational d = distance(make_rational(num.value, den.value), target, p);
            if (d <= bound && (!best || d < best_distance)) {
                best = Quad{num.x, num.y, den.x, den.y};
                best_distance = d;
                if (d == 0) {
                    return best;
                }
            }
        }
    }
    return best;
}

// A x^3 + B y^3 with p not dividing AB and -B/A a cube in Z_p. Witness of
// the shape (x, 1, z, 1): z sits at distance p^m from the root rho of
// A X^3 + B, so C(z, 1) has valuation v(3) + m, and x solves
// td (A x^3 + B) = tn C(z, 1) near rho by Newton.
Quad coprime_witness(const Integer& A, const Integer& B, const Integer& p, const Rational& target, long precision) {
    const long vt = val(target, p);
    if (vt < 0) {
        const Quad inv = coprime_witness(A, B, p, Rational(1 / target), precision);
        return Quad{inv.z, inv.w, inv.x, inv.y};
    }
    const long alpha = hensel_exponent(p).value();
    const long v3 = alpha - 1;
    const Integer& tn = target.get_num();
    const Integer& td = target.get_den();

    const long first_m = std::max(1L, alpha - vt);
    for (long m = first_m; m < first_m + 4; ++m) {
        const long target_exponent = vt + v3 + m + precision;
        const long root_exponent = target_exponent + m + alpha + 2;
        const Integer root_modulus = power(p, static_cast<unsigned long>(root_exponent));
        const Integer minus_ratio = mod(Integer(-B * inverse_mod(A, root_modulus)), root_modulus);
        const auto cube_root = cube_root_mod_prime_power(minus_ratio, p, root_exponent);
        if (!cube_root) {
            throw InvalidInput("-b/a is not a cube in Z_p; the form is not dense");
        }
        const Integer& rho = cube_root->root;
        const Integer z = rho + power(p, static_cast<unsigned long>(m));
        const Integer den = A * z * z * z + B;
        if (den == 0 || val(den, p) != v3 + m) {
            continue;
        }
        const CubicPolynomial g{Integer(td * B - tn * den), 0, 0, Integer(td * A)};
        auto x = hensel_lift(g, rho, p, target_exponent);
        if (!x) {
            x = lift_by_digits(g, p, target_exponent);
        }
        if (x) {
            return Quad{*x, 1, z, 1};
        }
    }
    throw ConstructionFailure("no witness found within the lifting budget");
}

} // namespace

std::optional<Integer> lift_by_digits(const CubicPolynomial& g, const Integer& p, long exponent,
                                      std::size_t frontier_cap) {
    constexpr unsigned long kMaxDigitScan = 1UL << 20;
    if (exponent < 1 || p > kMaxDigitScan) {
        return std::nullopt;
    }
    const unsigned long base = p.get_ui();
    std::vector<Integer> frontier;
    for (unsigned long d = 0; d < base && frontier.size() < frontier_cap; ++d) {
        if (divides(p, g(Integer(d)))) {
            frontier.emplace_back(d);
        }
    }
    Integer place = p;
    for (long level = 1; level < exponent && !frontier.empty(); ++level) {
        const Integer next_modulus = place * p;
        std::vector<Integer> next;
        for (const Integer& x : frontier) {
            for (unsigned long d = 0; d < base && next.size() < frontier_cap; ++d) {
                const Integer y = x + d * place;
                if (mpz_divisible_p(Integer(g(y)).get_mpz_t(), next_modulus.get_mpz_t()) != 0) {
                    next.push_back(y);
                }
            }
        }
        frontier = std::move(next);
        place = next_modulus;
    }
    if (frontier.empty()) {
        return std::nullopt;
    }
    return frontier.front();
}

QuotientWitness witness_for_target(const BinaryCubicForm& form, const Integer& p, const Rational& target,
                                   long precision) {
    require_prime(p);
    if (precision < 1) {
        throw InvalidInput("witness precision must be at least 1");
    }
    if (target == 0) {
        throw InvalidInput("witness target must be nonzero");
    }
    const Verdict verdict = decide_binary(form, p);
    if (verdict.status != Status::Dense) {
        throw InvalidInput("form is not dense at p = " + p.get_str() + " (" + std::string(to_string(verdict.status)) +
                           ")");
    }
    const Rational bound = prime_power(p, -precision) * padic_norm(target, p);
    if (const auto small = small_search(form, p, target, bound)) {
        return finish(form, p, target, bound, *small);
    }

    const BinaryCubicForm normalized = verdict.normalized_swap ? form.swapped() : form;
    const long k = val(normalized.a(), p);
    const long scale = k / 3; // k is a multiple of 3 for dense forms
    Integer ell;
    mpz_divexact(ell.get_mpz_t(), normalized.a().get_mpz_t(), power(p, static_cast<unsigned long>(k)).get_mpz_t());

    // C(X, p^s Y) = p^{3s} (l X^3 + b Y^3), so quotients of the reduced form
    // are quotients of C.
    Quad q = coprime_witness(ell, normalized.b(), p, target, precision);
    const Integer lift = power(p, static_cast<unsigned long>(scale));
    q.y *= lift;
    q.w *= lift;
    if (verdict.normalized_swap) {
        std::swap(q.x, q.y);
        std::swap(q.z, q.w);
    }
    return finish(form, p, target, bound, q);
}

PointWitness witness_for_target(const DiagonalCubicForm& form, const Integer& p, const Rational& target,
                                long precision) {
    const Verdict verdict = decide_diagonal(form, p);
    if (verdict.status != Status::Dense || !verdict.certificate ||
        !std::holds_alternative<CubeRootCertificate>(*verdict.certificate)) {
        throw InvalidInput("witness construction needs a dense coefficient pair");
    }
    const auto& cert = std::get<CubeRootCertificate>(*verdict.certificate);
    std::size_t i = 0;
    std::size_t j = 1;
    if (cert.pair) {
        i = std::min(cert.pair->first, cert.pair->second);
        j = std::max(cert.pair->first, cert.pair->second);
    }
    const auto& coeffs = form.coefficients();
    Integer g;
    mpz_gcd(g.get_mpz_t(), coeffs[i].get_mpz_t(), coeffs[j].get_mpz_t());
    const QuotientWitness w = witness_for_target(BinaryCubicForm(coeffs[i] / g, coeffs[j] / g), p, target, precision);

    PointWitness out;
    out.numerator.assign(form.nvars(), Integer(0));
    out.denominator.assign(form.nvars(), Integer(0));
    out.numerator[i] = w.x;
    out.numerator[j] = w.y;
    out.denominator[i] = w.z;
    out.denominator[j] = w.w;
    out.quotient = make_rational(evaluate(form, out.numerator), evaluate(form, out.denominator));
    out.achieved_distance = distance(out.quotient, target, p);
    out.bound = w.bound;
    if (out.achieved_distance > out.bound) {
        throw ConstructionFailure("embedded pair witness misses the distance bound");
    }
    return out;
}

std::optional<SeparationCertificate> separation_certificate(const BinaryCubicForm& form, const Integer& p) {
    const Verdict verdict = decide_binary(form, p);
    if (verdict.status != Status::NotDense || !verdict.certificate) {
        return std::nullopt;
    }
    return std::get<SeparationCertificate>(*verdict.certificate);
}

// ---------------------------------------------------------------------------

namespace {

void check_bound(long bound, const AuditLimits& limits) {
    if (bound < 1) {
        throw InvalidInput("enumeration bound must be at least 1");
    }
    if (bound > limits.max_bound) {
        throw ResourceLimit("bound " + std::to_string(bound) + " exceeds the ceiling " +
                            std::to_string(limits.max_bound));
    }
}

struct ValueRecord {
    Integer value;
    Integer unit; // value / p^v, signed
    IntegerPoint point;
};

} // namespace

SeparationReport verify_separation(const CubicForm& form, const Integer& p, const SeparationCertificate& cert,
                                   long bound, const AuditLimits& limits) {
    require_prime(p);
    check_bound(bound, limits);
    if (cert.target == 0) {
        throw InvalidInput("separation target must be nonzero");
    }

    // Distinct nonzero values, grouped by valuation, with the first point
    // attaining each.
    std::unordered_map<Integer, std::size_t, IntegerHash> seen;
    std::map<long, std::vector<ValueRecord>> by_valuation;
    std::optional<IntegerPoint> zero_point;
    for_each_box_point(
        form, bound,
        [&](const IntegerPoint& point, const Integer& value) {
            if (value == 0) {
                if (!zero_point) {
                    zero_point = point;
                }
                return;
            }
            if (seen.contains(value)) {
                return;
            }
            const long v = val(value, p);
            auto& bucket = by_valuation[v];
            seen.emplace(value, bucket.size());
            bucket.push_back({value, unit_part(value, p), point});
        },
        limits.max_points);

    SeparationReport report;
    report.bound = bound;
    if (by_valuation.empty()) {
        throw InvalidInput("form vanishes on the whole box");
    }

    const Rational& t = cert.target;
    const long vt = val(t, p);
    const Integer tau_num = unit_part(t.get_num(), p);
    const Integer tau_den = unit_part(t.get_den(), p);

    // Best so far as (exponent e, exact-zero flag): distance p^{-e}, or 0.
    bool found_exact = false;
    long best_exponent = vt; // numerator 0 gives ||t|| = p^{-v(t)}
    const ValueRecord* best_num = nullptr;
    const ValueRecord* best_den = &by_valuation.begin()->second.front();

    const auto consider = [&](long exponent, const ValueRecord* num, const ValueRecord* den) {
        if (!found_exact && exponent > best_exponent) {
            best_exponent = exponent;
            best_num = num;
            best_den = den;
        }
    };

    // Pairs whose quotient valuation differs from v(t): distance is
    // p^{-min(v(q), v(t))}.
    for (const auto& [vn, nums] : by_valuation) {
        for (const auto& [vd, dens] : by_valuation) {
            if (vn - vd != vt) {
                consider(std::min(vn - vd, vt), &nums.front(), &dens.front());
            }
        }
    }

    // Pairs with v(q) = v(t): distance p^{-v(t) - v(tau_den u_n - tau_num u_d)}.
    for (const auto& [vd, dens] : by_valuation) {
        const auto it = by_valuation.find(vd + vt);
        if (it == by_valuation.end() || found_exact) {
            continue;
        }
        const auto& nums = it->second;
        Integer umax = 0;
        for (const auto& r : nums) {
            umax = std::max(umax, Integer(abs(r.unit)));
        }
        for (const auto& r : dens) {
            umax = std::max(umax, Integer(abs(r.unit)));
        }
        // Any nonzero tau_den u_n - tau_num u_d is below p^levels in size.
        const Integer ceiling = (abs(tau_den) + abs(tau_num)) * umax;
        long levels = 0;
        for (Integer pl = 1; pl <= ceiling; pl *= p) {
            ++levels;
        }
        std::vector<std::unordered_map<Integer, std::size_t, IntegerHash>> table(static_cast<std::size_t>(levels) + 1);
        std::vector<Integer> moduli(static_cast<std::size_t>(levels) + 1);
        moduli[0] = 1;
        for (long j = 1; j <= levels; ++j) {
            moduli[static_cast<std::size_t>(j)] = moduli[static_cast<std::size_t>(j - 1)] * p;
        }
        for (std::size_t idx = 0; idx < nums.size(); ++idx) {
            const Integer key = tau_den * nums[idx].unit;
            for (long j = 1; j <= levels; ++j) {
                table[static_cast<std::size_t>(j)].try_emplace(mod(key, moduli[static_cast<std::size_t>(j)]), idx);
            }
        }
        for (const auto& den : dens) {
            const Integer query = tau_num * den.unit;
            long lo = 0;
            long hi = levels;
            std::size_t match = 0;
            while (lo < hi) {
                const long mid = (lo + hi + 1) / 2;
                const auto& level = table[static_cast<std::size_t>(mid)];
                const auto found = level.find(mod(query, moduli[static_cast<std::size_t>(mid)]));
                if (found != level.end()) {
                    lo = mid;
                    match = found->second;
                } else {
                    hi = mid - 1;
                }
            }
            if (lo == 0) {
                continue;
            }
            if (lo == levels) {
                found_exact = true;
                best_num = &nums[match];
                best_den = &den;
                break;
            }
            consider(vt + lo, &nums[match], &den);
        }
    }

    const std::size_t r = nvars(form);
    report.numerator = best_num ? best_num->point : zero_point.value_or(IntegerPoint(r, Integer(0)));
    report.denominator = best_den->point;
    const Integer num_value = best_num ? best_num->value : Integer(0);
    report.min_distance = distance(make_rational(num_value, best_den->value), t, p);
    const Rational expected = found_exact ? Rational(0) : prime_power(p, -best_exponent);
    if (report.min_distance != expected) {
        throw ConstructionFailure("separation scan disagrees with exact recomputation");
    }
    report.verified = report.min_distance >= cert.radius;
    return report;
}

// ---------------------------------------------------------------------------

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t inverse_u64(std::uint64_t a, std::uint64_t m) {
    return inverse_mod(Integer(static_cast<unsigned long>(a)), Integer(static_cast<unsigned long>(m))).get_ui();
}

} // namespace

CoverageReport coverage_audit(const CubicForm& form, const Integer& p, long depth, long bound, long window,
                              const AuditLimits& limits) {
    require_prime(p);
    check_bound(bound, limits);
    if (depth < 1) {
        throw InvalidInput("audit depth must be at least 1");
    }
    if (window < 0) {
        throw InvalidInput("valuation window must be nonnegative");
    }
    const Integer modulus_z = power(p, static_cast<unsigned long>(depth));
    if (modulus_z > Integer(static_cast<unsigned long>(limits.max_modulus))) {
        throw ResourceLimit("p^depth = " + modulus_z.get_str() + " exceeds the modulus ceiling " +
                            std::to_string(limits.max_modulus));
    }
    const std::uint64_t modulus = modulus_z.get_ui();
    const std::uint64_t prime = p.get_ui();

    const Verdict verdict = decide(form, p);

    CoverageReport report;
    report.prime = p;
    report.depth = depth;
    report.bound = bound;
    report.window = window;
    report.verdict = verdict.status;
    report.unit_classes_total = modulus / prime * (prime - 1);

    std::vector<bool> value_units(modulus, false);
    std::set<long> value_valuations;
    Integer rest;
    for_each_box_point(
        form, bound,
        [&](const IntegerPoint& point, const Integer& value) {
            if (value == 0) {
                if (std::any_of(point.begin(), point.end(), [](const Integer& c) { return c != 0; })) {
                    report.zero_value_attained = true;
                }
                return;
            }
            const long v = static_cast<long>(mpz_remove(rest.get_mpz_t(), value.get_mpz_t(), p.get_mpz_t()));
            value_valuations.insert(v);
            value_units[mod(rest, modulus_z).get_ui()] = true;
        },
        limits.max_points);

    std::vector<std::uint64_t> units;
    for (std::uint64_t r = 0; r < modulus; ++r) {
        if (value_units[r]) {
            units.push_back(r);
        }
    }

    // Ratio classes u1 / u2.
    std::vector<bool> attained(modulus, false);
    std::uint64_t count = 0;
    std::uint64_t work = 0;
    for (const std::uint64_t u2 : units) {
        const std::uint64_t inv = inverse_u64(u2, modulus);
        for (const std::uint64_t u1 : units) {
            const std::uint64_t cls = mulmod(u1, inv, modulus);
            if (!attained[cls]) {
                attained[cls] = true;
                ++count;
            }
        }
        work += units.size();
        if (count == report.unit_classes_total) {
            break;
        }
        if (work > limits.max_pairs) {
            throw ResourceLimit("ratio-class enumeration exceeds " + std::to_string(limits.max_pairs) + " pairs");
        }
    }
    for (std::uint64_t r = 0; r < modulus; ++r) {
        if (attained[r]) {
            report.unit_classes_attained.push_back(r);
        }
    }

    for (const long v1 : value_valuations) {
        report.valuation_residues_mod_3.insert(static_cast<int>(((v1 % 3) + 3) % 3));
        for (const long v2 : value_valuations) {
            if (std::labs(v1 - v2) <= window) {
                report.valuations_attained.insert(v1 - v2);
            }
        }
    }

    if (verdict.status == Status::NotDense) {
        const bool valuation_class = verdict.certificate &&
                                     std::holds_alternative<SeparationCertificate>(*verdict.certificate) &&
                                     std::get<SeparationCertificate>(*verdict.certificate).kind ==
                                         SeparationKind::ValuationClass;
        if (report.full_unit_coverage() && report.full_valuation_coverage()) {
            report.discrepancy_flag = true;
            report.discrepancy_reason =
                "verdict is NOT_DENSE but every unit class mod p^depth and every valuation in the window is attained";
        } else if (valuation_class &&
                   (report.valuation_residues_mod_3.size() > 1 || !report.valuation_residues_mod_3.contains(0))) {
            report.discrepancy_flag = true;
            report.discrepancy_reason = "a value valuation lies outside 3Z despite a valuation-class certificate";
        }
        if (!verdict.certificate) {
            for (std::uint64_t r = 1; r < modulus && report.unverified_candidates.size() < 10; ++r) {
                if (r % prime != 0 && !attained[r]) {
                    report.unverified_candidates.push_back(r);
                }
            }
        }
    }
    return report;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json point_json(const IntegerPoint& point) {
    nlohmann::json j = nlohmann::json::array();
    for (const Integer& c : point) {
        j.push_back(integer_to_json(c));
    }
    return j;
}

} // namespace

nlohmann::json to_json(const QuotientWitness& w) {
    return {
        {"x", integer_to_json(w.x)},
        {"y", integer_to_json(w.y)},
        {"z", integer_to_json(w.z)},
        {"w", integer_to_json(w.w)},
        {"quotient", to_string(w.quotient)},
        {"achieved_distance", to_string(w.achieved_distance)},
        {"bound", to_string(w.bound)},
    };
}

nlohmann::json to_json(const PointWitness& w) {
    return {
        {"numerator", point_json(w.numerator)},
        {"denominator", point_json(w.denominator)},
        {"quotient", to_string(w.quotient)},
        {"achieved_distance", to_string(w.achieved_distance)},
        {"bound", to_string(w.bound)},
    };
}

nlohmann::json to_json(const SeparationReport& r) {
    return {
        {"verified", r.verified},
        {"min_distance", to_string(r.min_distance)},
        {"numerator", point_json(r.numerator)},
        {"denominator", point_json(r.denominator)},
        {"bound", r.bound},
    };
}

nlohmann::json to_json(const CoverageReport& r) {
    nlohmann::json j;
    j["prime"] = integer_to_json(r.prime);
    j["depth"] = r.depth;
    j["bound"] = r.bound;
    j["window"] = r.window;
    j["verdict"] = to_string(r.verdict);
    j["unit_classes_attained"] = r.unit_classes_attained;
    j["unit_classes_attained_count"] = r.unit_classes_attained.size();
    j["unit_classes_total"] = r.unit_classes_total;
    j["valuations_attained"] = r.valuations_attained;
    j["valuation_residues_mod_3"] = r.valuation_residues_mod_3;
    j["zero_value_attained"] = r.zero_value_attained;
    j["discrepancy_flag"] = r.discrepancy_flag;
    j["discrepancy_reason"] = r.discrepancy_reason ? nlohmann::json(*r.discrepancy_reason) : nlohmann::json(nullptr);
    j["unverified_candidates"] = r.unverified_candidates;
    return j;
}

} // namespace qlab
