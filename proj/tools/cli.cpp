#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qlab/decision.hpp"
#include "qlab/forms.hpp"
#include "qlab/witness.hpp"

namespace qlab::cli {

Environment Environment::from_process() {
    Environment env;
    if (const char* v = std::getenv("QLAB_MAX_BOUND")) {
        env.max_bound = std::string(v);
    }
    return env;
}

namespace {

struct Options {
    std::string binary;
    std::string diagonal;
    std::string form_file;
    std::string prime;
    std::string target;
    long precision = 0;
    long depth = 1;
    long bound = 0;
    long window = 3;
    std::uint64_t seed = kDefaultSeed;
    unsigned long trials = 1000;
    bool constructive = false;
    bool json = false;
    bool text = false;
};

std::vector<Integer> parse_list(const std::string& text) {
    std::vector<Integer> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        out.push_back(parse_integer(item));
    }
    return out;
}

CubicForm load_form(const Options& o) {
    const int given = static_cast<int>(!o.binary.empty()) + static_cast<int>(!o.diagonal.empty()) +
                      static_cast<int>(!o.form_file.empty());
    if (given != 1) {
        throw InvalidInput("give exactly one of --binary, --diagonal, --form");
    }
    if (!o.binary.empty()) {
        const auto c = parse_list(o.binary);
        if (c.size() != 2) {
            throw InvalidInput("--binary takes two coefficients a,b");
        }
        return BinaryCubicForm(c[0], c[1]);
    }
    if (!o.diagonal.empty()) {
        return DiagonalCubicForm(parse_list(o.diagonal));
    }
    std::ifstream in(o.form_file);
    if (!in) {
        throw InvalidInput("cannot open form file '" + o.form_file + "'");
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed form JSON: ") + e.what());
    }
    return form_from_json(j);
}

Integer load_prime(const Options& o) {
    const Integer p = parse_integer(o.prime);
    require_prime(p);
    return p;
}

AuditLimits load_limits(const Environment& env) {
    AuditLimits limits;
    if (env.max_bound) {
        try {
            limits.max_bound = std::stol(*env.max_bound);
        } catch (const std::exception&) {
            throw InvalidInput("QLAB_MAX_BOUND must be an integer");
        }
    }
    return limits;
}

void render_text(const nlohmann::json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            render_text(value, prefix.empty() ? key : prefix + "." + key, out);
        }
        return;
    }
    out << prefix << ": ";
    if (j.is_string()) {
        out << j.get<std::string>();
    } else {
        out << j.dump();
    }
    out << '\n';
}

void emit(const nlohmann::json& j, const Options& o, std::ostream& out) {
    if (o.text) {
        render_text(j, "", out);
    } else {
        out << j.dump(2) << '\n';
    }
}

nlohmann::json header(const CubicForm& form, const Integer& p) {
    return {{"form", form_to_json(form)}, {"prime", integer_to_json(p)}};
}

int exit_for(Status s) { return s == Status::Unknown ? kUnknown : kOk; }

// ---------------------------------------------------------------------------

int run_decide(const Options& o, std::ostream& out) {
    const CubicForm form = load_form(o);
    const Integer p = load_prime(o);
    ZeroSearchOptions search;
    search.constructive = o.constructive;
    search.trials = o.trials;
    search.seed = o.seed;
    if (o.precision > 0) {
        search.precision = o.precision;
    }
    const Verdict verdict = decide(form, p, search);
    nlohmann::json j = header(form, p);
    j.update(to_json(verdict));
    emit(j, o, out);
    return exit_for(verdict.status);
}

int run_witness(const Options& o, std::ostream& out) {
    const CubicForm form = load_form(o);
    const Integer p = load_prime(o);
    if (o.target.empty()) {
        throw InvalidInput("witness needs --target");
    }
    const Rational target = parse_rational(o.target);
    const long precision = o.precision > 0 ? o.precision : 6;
    nlohmann::json j = header(form, p);
    j["target"] = to_string(target);
    j["precision"] = precision;

    const Verdict verdict = decide(form, p);
    if (verdict.status != Status::Dense) {
        j["error"] = "form is not dense";
        j["verdict"] = to_json(verdict);
        emit(j, o, out);
        return kInputError;
    }
    if (const auto* b = std::get_if<BinaryCubicForm>(&form)) {
        j["witness"] = to_json(witness_for_target(*b, p, target, precision));
    } else if (const auto* d = std::get_if<DiagonalCubicForm>(&form)) {
        j["witness"] = to_json(witness_for_target(*d, p, target, precision));
    } else {
        throw InvalidInput("witness construction supports binary and diagonal forms");
    }
    emit(j, o, out);
    return kOk;
}

int run_separate(const Options& o, std::ostream& out, const AuditLimits& limits) {
    const CubicForm form = load_form(o);
    const Integer p = load_prime(o);
    const long bound = o.bound > 0 ? o.bound : 60;
    const Verdict verdict = decide(form, p);
    nlohmann::json j = header(form, p);
    j["verdict"] = to_json(verdict);
    if (verdict.status != Status::NotDense || !verdict.certificate ||
        !std::holds_alternative<SeparationCertificate>(*verdict.certificate)) {
        j["certificate"] = nullptr;
        j["verification"] = nullptr;
        emit(j, o, out);
        return kUnknown;
    }
    const auto& cert = std::get<SeparationCertificate>(*verdict.certificate);
    const SeparationReport report = verify_separation(form, p, cert, bound, limits);
    j["certificate"] = to_json(Certificate(cert));
    j["verification"] = to_json(report);
    emit(j, o, out);
    return report.verified ? kOk : kDiscrepancy;
}

constexpr long kAuditSeparationBound = 100;

int run_audit(const Options& o, std::ostream& out, const AuditLimits& limits) {
    const CubicForm form = load_form(o);
    const Integer p = load_prime(o);
    const long bound = o.bound > 0 ? o.bound : 50;
    const CoverageReport report = coverage_audit(form, p, o.depth, bound, o.window, limits);
    nlohmann::json j = header(form, p);
    j.update(to_json(report));

    j["separation"] = nullptr;
    const Verdict verdict = decide(form, p);
    if (verdict.certificate && std::holds_alternative<SeparationCertificate>(*verdict.certificate)) {
        const SeparationReport sep = verify_separation(
            form, p, std::get<SeparationCertificate>(*verdict.certificate), std::min(bound, kAuditSeparationBound),
            limits);
        j["separation"] = to_json(sep);
    }
    emit(j, o, out);
    return report.discrepancy_flag ? kDiscrepancy : kOk;
}

int run_certify(const Options& o, std::ostream& out, const AuditLimits& limits) {
    const CubicForm form = load_form(o);
    const Integer p = load_prime(o);
    const long bound = o.bound > 0 ? o.bound : 60;
    ZeroSearchOptions search;
    search.constructive = true;
    search.trials = o.trials;
    search.seed = o.seed;
    if (o.precision > 0) {
        search.precision = o.precision;
    }
    const Verdict verdict = decide(form, p, search);
    nlohmann::json j = header(form, p);
    j["verdict"] = to_json(verdict);
    nlohmann::json checks = nlohmann::json::array();
    bool all_passed = true;
    const auto record = [&](const std::string& name, bool passed, nlohmann::json detail = nullptr) {
        checks.push_back({{"check", name}, {"passed", passed}, {"detail", std::move(detail)}});
        all_passed = all_passed && passed;
    };
    if (verdict.certificate) {
        if (const auto* c = std::get_if<CubeRootCertificate>(&*verdict.certificate)) {
            record("cube_root", check_cube_root_certificate(*c));
            record("unit_is_cubic_residue", is_cubic_residue(c->unit, p));
        } else if (const auto* s = std::get_if<SeparationCertificate>(&*verdict.certificate)) {
            if (s->kind == SeparationKind::NonResidue) {
                record("non_residue", !is_cubic_residue(s->non_residue, p));
            }
            const SeparationReport report = verify_separation(form, p, *s, bound, limits);
            record("separation", report.verified, to_json(report));
        } else {
            const auto& a = std::get<AssertionCertificate>(*verdict.certificate);
            if (a.zero) {
                const Integer modulus = power(p, static_cast<unsigned long>(a.zero->precision));
                const auto* g = std::get_if<GeneralCubicForm>(&form);
                const GeneralCubicForm general = g ? *g : to_general(std::get<DiagonalCubicForm>(form));
                record("lifted_zero", mod(evaluate(general, a.zero->point), modulus) == 0);
            } else {
                record("lifted_zero", false, "no zero found within the trial budget");
            }
        }
    }
    j["checks"] = checks;
    emit(j, o, out);
    if (verdict.status == Status::Unknown) {
        return kUnknown;
    }
    return all_passed ? kOk : kDiscrepancy;
}

void add_form_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--binary", o.binary, "binary form a,b (a x^3 + b y^3)");
    cmd->add_option("--diagonal", o.diagonal, "diagonal form a1,...,ar");
    cmd->add_option("--form", o.form_file, "form JSON file");
    cmd->add_option("--prime", o.prime, "prime p")->required();
    cmd->add_option("--seed", o.seed, "seed for randomized search");
    auto* json = cmd->add_flag("--json", o.json, "JSON output (default)");
    auto* text = cmd->add_flag("--text", o.text, "key: value text output");
    json->excludes(text);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
    CLI::App app{"Density of p-adic quotient sets of cubic forms"};
    app.require_subcommand(1);
    Options o;

    auto* decide_cmd = app.add_subcommand("decide", "decide density of R(C) in Q_p");
    add_form_options(decide_cmd, o);
    decide_cmd->add_flag("--constructive", o.constructive, "attach a lifted zero to high-order verdicts");
    decide_cmd->add_option("--trials", o.trials, "zero-search trials");
    decide_cmd->add_option("--prec", o.precision, "lifting precision");

    auto* witness_cmd = app.add_subcommand("witness", "approximate a target by a quotient of form values");
    add_form_options(witness_cmd, o);
    witness_cmd->add_option("--target", o.target, "target rational n/d")->required();
    witness_cmd->add_option("--prec", o.precision, "relative p-adic precision k");

    auto* separate_cmd = app.add_subcommand("separate", "emit and verify a separation certificate");
    add_form_options(separate_cmd, o);
    separate_cmd->add_option("--bound", o.bound, "enumeration bound B");

    auto* audit_cmd = app.add_subcommand("audit", "bounded coverage audit of quotient classes");
    add_form_options(audit_cmd, o);
    audit_cmd->add_option("--depth", o.depth, "digit depth k");
    audit_cmd->add_option("--bound", o.bound, "enumeration bound B");
    audit_cmd->add_option("--window", o.window, "valuation window V");

    auto* certify_cmd = app.add_subcommand("certify", "decide and check the attached certificate");
    add_form_options(certify_cmd, o);
    certify_cmd->add_option("--bound", o.bound, "enumeration bound for separation checks");
    certify_cmd->add_option("--trials", o.trials, "zero-search trials");
    certify_cmd->add_option("--prec", o.precision, "lifting precision");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        const AuditLimits limits = load_limits(env);
        if (decide_cmd->parsed()) {
            return run_decide(o, out);
        }
        if (witness_cmd->parsed()) {
            return run_witness(o, out);
        }
        if (separate_cmd->parsed()) {
            return run_separate(o, out, limits);
        }
        if (audit_cmd->parsed()) {
            return run_audit(o, out, limits);
        }
        return run_certify(o, out, limits);
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const ConstructionFailure& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

} // namespace qlab::cli
