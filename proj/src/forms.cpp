#include "qlab/forms.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace qlab {

namespace {

void require_dimension(std::size_t expected, const IntegerPoint& point) {
    if (point.size() != expected) {
        throw InvalidInput("point has " + std::to_string(point.size()) + " coordinates, form has " +
                           std::to_string(expected) + " variables");
    }
}

} // namespace

BinaryCubicForm::BinaryCubicForm(Integer a, Integer b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_ == 0 || b_ == 0) {
        throw InvalidInput("binary cubic form needs nonzero coefficients");
    }
}

DiagonalCubicForm::DiagonalCubicForm(std::vector<Integer> coefficients) : coefficients_(std::move(coefficients)) {
    if (coefficients_.size() < 2) {
        throw InvalidInput("diagonal cubic form needs at least two variables");
    }
    for (const Integer& c : coefficients_) {
        if (c == 0) {
            throw InvalidInput("diagonal cubic form needs nonzero coefficients");
        }
    }
}

GeneralCubicForm::GeneralCubicForm(std::size_t nvars, std::map<MonomialKey, Integer> monomials,
                                   bool nondegenerate_assertion)
    : nvars_(nvars), nondegenerate_(nondegenerate_assertion) {
    if (nvars_ == 0) {
        throw InvalidInput("cubic form needs at least one variable");
    }
    for (auto& [key, coeff] : monomials) {
        MonomialKey sorted = key;
        std::sort(sorted.begin(), sorted.end());
        if (sorted[2] >= nvars_) {
            throw InvalidInput("monomial index out of range");
        }
        monomials_[sorted] += coeff;
    }
    std::erase_if(monomials_, [](const auto& kv) { return kv.second == 0; });
    if (monomials_.empty()) {
        throw InvalidInput("cubic form has no nonzero monomial");
    }
}

DiagonalCubicForm to_diagonal(const BinaryCubicForm& form) { return DiagonalCubicForm({form.a(), form.b()}); }

GeneralCubicForm to_general(const DiagonalCubicForm& form) {
    std::map<MonomialKey, Integer> monomials;
    for (std::size_t i = 0; i < form.nvars(); ++i) {
        monomials[{i, i, i}] = form.coefficients()[i];
    }
    return GeneralCubicForm(form.nvars(), std::move(monomials), true);
}

GeneralCubicForm to_general(const BinaryCubicForm& form) { return to_general(to_diagonal(form)); }

std::size_t nvars(const CubicForm& form) {
    return std::visit([](const auto& f) { return f.nvars(); }, form);
}

std::vector<Integer> coefficients(const CubicForm& form) {
    if (const auto* b = std::get_if<BinaryCubicForm>(&form)) {
        return {b->a(), b->b()};
    }
    if (const auto* d = std::get_if<DiagonalCubicForm>(&form)) {
        return d->coefficients();
    }
    std::vector<Integer> out;
    for (const auto& [key, c] : std::get<GeneralCubicForm>(form).monomials()) {
        out.push_back(c);
    }
    return out;
}

Integer evaluate(const CubicForm& form, const IntegerPoint& point) {
    require_dimension(nvars(form), point);
    if (const auto* b = std::get_if<BinaryCubicForm>(&form)) {
        return (*b)(point[0], point[1]);
    }
    if (const auto* d = std::get_if<DiagonalCubicForm>(&form)) {
        Integer sum = 0;
        for (std::size_t i = 0; i < point.size(); ++i) {
            sum += d->coefficients()[i] * point[i] * point[i] * point[i];
        }
        return sum;
    }
    Integer sum = 0;
    for (const auto& [key, c] : std::get<GeneralCubicForm>(form).monomials()) {
        sum += c * point[key[0]] * point[key[1]] * point[key[2]];
    }
    return sum;
}

std::vector<Integer> gradient(const CubicForm& form, const IntegerPoint& point) {
    require_dimension(nvars(form), point);
    std::vector<Integer> grad(point.size(), Integer(0));
    if (std::holds_alternative<GeneralCubicForm>(form)) {
        // Product rule per factor handles repeated indices.
        for (const auto& [key, c] : std::get<GeneralCubicForm>(form).monomials()) {
            const auto [i, j, k] = key;
            grad[i] += c * point[j] * point[k];
            grad[j] += c * point[i] * point[k];
            grad[k] += c * point[i] * point[j];
        }
        return grad;
    }
    const std::vector<Integer> coeffs = coefficients(form);
    for (std::size_t i = 0; i < point.size(); ++i) {
        grad[i] = 3 * coeffs[i] * point[i] * point[i];
    }
    return grad;
}

bool is_primitive(const CubicForm& form) {
    Integer g = 0;
    for (const Integer& c : coefficients(form)) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    return g == 1;
}

CubicPolynomial restrict_to_coordinate(const GeneralCubicForm& form, const IntegerPoint& point, std::size_t pivot) {
    require_dimension(form.nvars(), point);
    if (pivot >= form.nvars()) {
        throw InvalidInput("pivot index out of range");
    }
    CubicPolynomial f{0, 0, 0, 0};
    for (const auto& [key, c] : form.monomials()) {
        int degree = 0;
        Integer rest = c;
        for (std::size_t idx : key) {
            if (idx == pivot) {
                ++degree;
            } else {
                rest *= point[idx];
            }
        }
        switch (degree) {
        case 0: f.c0 += rest; break;
        case 1: f.c1 += rest; break;
        case 2: f.c2 += rest; break;
        default: f.c3 += rest; break;
        }
    }
    return f;
}

bool is_anisotropic_mod_p(const BinaryCubicForm& form, const Integer& p) {
    require_prime(p);
    if (mpz_divisible_p(form.a().get_mpz_t(), p.get_mpz_t()) != 0 ||
        mpz_divisible_p(form.b().get_mpz_t(), p.get_mpz_t()) != 0) {
        return false;
    }
    const Integer ratio = mod(Integer(-form.b() * inverse_mod(form.a(), p)), p);
    return !is_cubic_residue(ratio, p, HenselExponent(1));
}

namespace detail {

void check_box(std::size_t nvars, long bound, unsigned long long max_points) {
    if (bound < 0) {
        throw InvalidInput("enumeration bound must be nonnegative");
    }
    const auto side = static_cast<unsigned long long>(2 * bound + 1);
    unsigned long long total = 1;
    for (std::size_t i = 0; i < nvars; ++i) {
        if (total > max_points / side) {
            throw ResourceLimit("enumeration box [-" + std::to_string(bound) + ", " + std::to_string(bound) + "]^" +
                                std::to_string(nvars) + " exceeds " + std::to_string(max_points) + " points");
        }
        total *= side;
    }
}

} // namespace detail

std::set<long> valuation_spectrum(const CubicForm& form, const Integer& p, long bound, unsigned long long max_points) {
    require_prime(p);
    std::set<long> out;
    Integer rest;
    for_each_box_point(
        form, bound,
        [&](const IntegerPoint&, const Integer& value) {
            if (value != 0) {
                out.insert(static_cast<long>(mpz_remove(rest.get_mpz_t(), value.get_mpz_t(), p.get_mpz_t())));
            }
        },
        max_points);
    return out;
}

// ---------------------------------------------------------------------------

nlohmann::json integer_to_json(const Integer& n) {
    if (mpz_fits_slong_p(n.get_mpz_t()) != 0) {
        return static_cast<std::int64_t>(n.get_si());
    }
    return n.get_str();
}

Integer integer_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) {
        return j.is_number_unsigned() ? Integer(std::to_string(j.get<std::uint64_t>()))
                                      : Integer(std::to_string(j.get<std::int64_t>()));
    }
    if (j.is_string()) {
        return parse_integer(j.get<std::string>());
    }
    throw InvalidInput("expected an integer, got " + j.dump());
}

nlohmann::json form_to_json(const CubicForm& form) {
    nlohmann::json j;
    if (const auto* g = std::get_if<GeneralCubicForm>(&form)) {
        j["kind"] = "general";
        j["nvars"] = g->nvars();
        j["monomials"] = nlohmann::json::array();
        for (const auto& [key, c] : g->monomials()) {
            j["monomials"].push_back({key[0], key[1], key[2], integer_to_json(c)});
        }
        j["nondegenerate"] = g->nondegenerate_assertion();
        return j;
    }
    j["kind"] = std::holds_alternative<BinaryCubicForm>(form) ? "binary" : "diagonal";
    j["coeffs"] = nlohmann::json::array();
    for (const Integer& c : coefficients(form)) {
        j["coeffs"].push_back(integer_to_json(c));
    }
    return j;
}

CubicForm form_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        throw InvalidInput("form JSON needs a string \"kind\"");
    }
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "binary" || kind == "diagonal") {
        if (!j.contains("coeffs") || !j["coeffs"].is_array()) {
            throw InvalidInput("form JSON needs a \"coeffs\" array");
        }
        std::vector<Integer> coeffs;
        for (const auto& c : j["coeffs"]) {
            coeffs.push_back(integer_from_json(c));
        }
        if (kind == "binary") {
            if (coeffs.size() != 2) {
                throw InvalidInput("binary form needs exactly two coefficients");
            }
            return BinaryCubicForm(coeffs[0], coeffs[1]);
        }
        return DiagonalCubicForm(std::move(coeffs));
    }
    if (kind == "general") {
        if (!j.contains("monomials") || !j["monomials"].is_array()) {
            throw InvalidInput("general form JSON needs a \"monomials\" array");
        }
        std::map<MonomialKey, Integer> monomials;
        std::size_t max_index = 0;
        for (const auto& m : j["monomials"]) {
            if (!m.is_array() || m.size() != 4) {
                throw InvalidInput("monomial entries are [i, j, k, coefficient]");
            }
            MonomialKey key{};
            for (std::size_t t = 0; t < 3; ++t) {
                if (!m[t].is_number_unsigned()) {
                    throw InvalidInput("monomial indices must be nonnegative integers");
                }
                key[t] = m[t].get<std::size_t>();
                max_index = std::max(max_index, key[t]);
            }
            std::sort(key.begin(), key.end());
            monomials[key] += integer_from_json(m[3]);
        }
        const std::size_t n = j.contains("nvars") ? j["nvars"].get<std::size_t>() : max_index + 1;
        const bool nondegenerate = j.contains("nondegenerate") && j["nondegenerate"].get<bool>();
        return GeneralCubicForm(n, std::move(monomials), nondegenerate);
    }
    throw InvalidInput("unknown form kind '" + kind + "'");
}

} // namespace qlab
