// Command-line front end: load an instance, run an operation, a check or a
// suite, and write a JSON or CSV report.
//
// Exit status: 0 when every asserted property holds, 1 on a violation,
// 2 on usage or validation errors.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "conjugax/bellman.hpp"
#include "conjugax/conjugacy.hpp"
#include "conjugax/duality.hpp"
#include "conjugax/inf_convolution.hpp"
#include "conjugax/io.hpp"
#include "conjugax/partial_conjugates.hpp"
#include "conjugax/suites.hpp"

using namespace conjugax;

namespace {

struct Options {
    std::string instance;
    std::string out;
    std::string format = "json";
    double tol = kDefaultTolerance;
    std::uint64_t seed = 0;
    std::size_t budget = kDefaultEnumerationBudget;
    std::vector<std::string> binds;
    bool fast = false;
    std::string check_name;
    std::string suite_name;
    std::string bellman_check = "all";
    std::optional<std::size_t> iterations;
};

// What a command produces: reports, optional value tables, and extra JSON fields.
struct Output {
    std::vector<CheckReport> reports;
    std::vector<std::pair<std::string, ValueTable>> tables;
    Json extra = Json::object();
    bool single_report = false;
};

Instance load_bound(const Options& o) {
    if (o.instance.empty()) {
        throw std::invalid_argument("--instance is required");
    }
    Instance inst = load_instance(read_json_file(o.instance));
    for (const auto& b : o.binds) {
        const auto eq = b.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == b.size()) {
            throw std::invalid_argument("--bind expects role=id, got \"" + b + "\"");
        }
        inst.roles[b.substr(0, eq)] = b.substr(eq + 1);
    }
    return inst;
}

DualityInstance duality_instance(const Instance& in) {
    DualityInstance d{in.coupling("c"), in.coupling("d"), in.kernel("K"),
                      ValueTable::constant(in.coupling("c").primal(), 0.0), in.function("g")};
    if (in.has_function("f")) {
        d.f = in.function("f");
    } else {
        d.f = lhs_envelope(d);
    }
    d.validate();
    return d;
}

CheckReport minimax_report(const DualityInstance& d) {
    CheckReport r;
    r.check = "minimax";
    r.index_names = {"x#"};
    bool ok = true;
    for (std::size_t a = 0; a < d.c.dual()->size(); ++a) {
        const MinimaxPair mm = supinf_infsup(d, a);
        r.rows.push_back({{a}, mm.sup_inf, mm.inf_sup, margin(mm.sup_inf, mm.inf_sup)});
        r.margins.push_back(margin(mm.sup_inf, mm.inf_sup));
        if (!(mm.sup_inf <= mm.inf_sup)) {
            ok = false;
            r.violations.push_back({{a}, mm.sup_inf, mm.inf_sup});
        }
    }
    r.conclusion_holds = ok;
    return r;
}

CheckReport infconv_conjugate_report(const Instance& in) {
    const ValueTable& g1 = in.function("g1");
    const ValueTable& g2 = in.function("g2");
    const Convoluter& gamma = in.convoluter("gamma");
    CheckReport r;
    r.check = "infconv-conjugate";
    try {
        (void)infconv_as_conjugate(g1, gamma, g2);
        r.conclusion_holds = true;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::logic_error&) {
        r.conclusion_holds = false;
        r.violations.push_back({{}, ExtReal(0.0), ExtReal(0.0)});
    }
    return r;
}

CheckReport run_check(const Options& o) {
    const Instance in = load_bound(o);
    const std::string& n = o.check_name;
    const double tol = o.tol;
    if (n == "theorem-main") {
        return check_theorem_main(duality_instance(in), tol);
    }
    if (n == "minimax") {
        return minimax_report(duality_instance(in));
    }
    if (n == "equality-real") {
        return check_equality_real_valued(duality_instance(in), tol);
    }
    if (n == "equality-extended") {
        return check_equality_extended(duality_instance(in), tol);
    }
    if (n == "fenchel-general") {
        return fenchel_inequality_general(in.function("g3"), in.function("g"), in.coupling("d"), tol);
    }
    if (n == "factorization") {
        return check_factorization(in.kernel("L"), in.kernel("M"), in.coupling("c"), in.coupling("d"), tol);
    }
    if (n == "composed-conjugate") {
        return composed_conjugate_check(in.kernel("K"), in.coupling("c"), in.coupling("d"), tol);
    }
    if (n == "infconv-duality") {
        const ValueTable& g1 = in.function("g1");
        const ValueTable& g2 = in.function("g2");
        const Convoluter& gamma = in.convoluter("gamma");
        const ValueTable f = in.has_function("f") ? in.function("f") : infconv(g1, gamma, g2);
        return check_infconv_duality(f, g1, g2, gamma, in.coupling("c"), in.coupling("d1"), in.coupling("d2"),
                                     tol);
    }
    if (n == "infconv-conjugate") {
        return infconv_conjugate_report(in);
    }
    if (n == "split-conjugate") {
        return split_conjugate(in.function("g1"), in.function("g2"), in.convoluter("gamma"), in.coupling("c"),
                               in.coupling("G1"), in.coupling("G2"), tol);
    }
    if (n == "psi-additive") {
        return psi_additive_bound(in.function("g1"), in.function("g2"), in.coupling("d1"), in.coupling("d2"));
    }
    if (n == "classical-dual-convoluter") {
        return check_classical_dual_convoluter(in.set("Y1"), in.set("X"), in.set("Y2"), in.set("Y1s"),
                                               in.set("Xs"), in.set("Y2s"));
    }
    if (n == "lemma-partial") {
        const Kernel& e = in.kernel("E");
        const Coupling& d = in.coupling("d");
        const Kernel k = in.kernels.count(in.resolve("K")) ? in.kernel("K") : partial_conj_dual(e, d);
        return check_lemma_partial(k, e, in.coupling("c"), d);
    }
    if (n == "exchange-implication") {
        const Kernel& e = in.kernel("E");
        const Coupling& c = in.coupling("c");
        const Coupling& d = in.coupling("d");
        const ValueTable& g = in.function("g");
        ValueTable f = ValueTable::constant(e.rows(), 0.0);
        if (in.has_function("f")) {
            f = in.function("f");
        } else {
            DualityInstance env{c, d, partial_conj_dual(e, d), f, g};
            f = lhs_envelope(env);
        }
        return check_exchange_implication(f, g, e, c, d, tol);
    }
    throw std::invalid_argument("unknown check \"" + n + "\"");
}

Output run_bellman(const Options& o) {
    if (o.instance.empty()) {
        throw std::invalid_argument("--instance is required");
    }
    const SdpInstance inst = load_sdp_instance(read_json_file(o.instance));
    const std::string& which = o.bellman_check;
    static const std::vector<std::string> known = {"all", "induction", "hamiltonian-form", "conjugate-bellman",
                                                   "expectation-conjugate", "sandwich"};
    if (std::find(known.begin(), known.end(), which) == known.end()) {
        throw std::invalid_argument("unknown bellman check \"" + which + "\"");
    }
    Output out;
    auto want = [&](const char* name) { return which == "all" || which == name; };
    if (want("induction")) {
        const auto v = backward_induction(inst);
        for (std::size_t t = 0; t < v.size(); ++t) out.tables.emplace_back("V" + std::to_string(t), v[t]);
    }
    if (want("hamiltonian-form")) {
        out.reports.push_back(hamiltonian_form_check(inst, o.tol, o.budget));
    }
    if (want("conjugate-bellman")) {
        out.reports.push_back(conjugate_bellman_check(inst, o.tol, o.budget));
    }
    if (want("expectation-conjugate")) {
        for (std::size_t t = 0; t < inst.horizon(); ++t) {
            out.reports.push_back(expectation_conjugate_check(inst, t, o.tol, o.budget));
        }
    }
    if (want("sandwich")) {
        out.reports.push_back(sandwich_bounds(inst, o.iterations.value_or(inst.dual_grid->size()), o.tol).report);
    }
    return out;
}

Output run_operation(const std::string& command, const Options& o) {
    const Instance in = load_bound(o);
    Output out;
    if (command == "infconv") {
        out.tables.emplace_back("infconv", infconv(in.function("g1"), in.convoluter("gamma"), in.function("g2")));
        return out;
    }
    const ValueTable& f = in.function("f");
    const Coupling& c = in.coupling("c");
    if (command == "conjugate") {
        out.tables.emplace_back("conjugate", o.fast ? conjugate_bilinear_fast(f, c) : conjugate(f, c));
    } else {
        out.tables.emplace_back("biconjugate", biconjugate(f, c));
    }
    return out;
}

std::string render(const Output& out, const std::string& format) {
    if (format == "csv") {
        std::ostringstream s;
        bool first = true;
        if (!out.tables.empty()) {
            s << "table,index,value\n";
            for (const auto& [name, t] : out.tables) {
                for (std::size_t i = 0; i < t.size(); ++i) s << name << ',' << i << ',' << to_text(t[i]) << '\n';
            }
            first = false;
        }
        for (const auto& r : out.reports) {
            if (!first) {
                s << '\n';
            }
            s << to_csv(r);
            first = false;
        }
        return s.str();
    }
    Json j;
    if (out.single_report && out.reports.size() == 1 && out.tables.empty()) {
        j = to_json(out.reports.front());
    } else {
        if (!out.tables.empty()) {
            Json tables = Json::object();
            for (const auto& [name, t] : out.tables) tables[name] = to_json(t);
            j["tables"] = std::move(tables);
        }
        if (!out.reports.empty()) {
            Json reps = Json::array();
            for (const auto& r : out.reports) reps.push_back(to_json(r));
            j["reports"] = std::move(reps);
        }
    }
    for (const auto& [k, v] : out.extra.items()) j[k] = v;
    return j.dump(2) + "\n";
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::invalid_argument("cannot write " + path);
    }
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact conjugate duality over finite sets"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--instance", o.instance, "Instance JSON file");
    app.add_option("--out", o.out, "Write the report here instead of stdout");
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--tol", o.tol, "Absolute tolerance for real-valued comparisons")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "Seed for randomized suites");
    app.add_option("--budget", o.budget, "Cap on random-variable enumeration")->check(CLI::PositiveNumber);
    app.add_option("--bind", o.binds, "Bind a role to an instance object, role=id");

    auto* conj = app.add_subcommand("conjugate", "Conjugate of f through the coupling c");
    conj->add_flag("--fast", o.fast, "Linear-time path for bilinear couplings on 1-D grids");
    app.add_subcommand("biconjugate", "Biconjugate of f through c");
    app.add_subcommand("infconv", "Generalized inf-convolution of g1 and g2 through gamma");
    auto* check = app.add_subcommand("check", "Run a named check on an instance");
    check->add_option("name", o.check_name, "Check name")->required();
    auto* bell = app.add_subcommand("bellman", "Stochastic dynamic programming checks");
    bell->add_option("--check", o.bellman_check,
                     "all, induction, hamiltonian-form, conjugate-bellman, expectation-conjugate or sandwich");
    bell->add_option("--iterations", o.iterations, "Sandwich iterations (default: dual grid size)");
    auto* suite = app.add_subcommand("suite", "Run a seeded property suite");
    suite->add_option("name", o.suite_name, "Suite name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Output out;
        if (*check) {
            out.reports.push_back(run_check(o));
            out.single_report = true;
        } else if (*bell) {
            out = run_bellman(o);
        } else if (*suite) {
            out.reports.push_back(run_suite(o.suite_name, o.seed, o.tol));
            out.single_report = true;
            out.extra["seed"] = o.seed;
        } else {
            out = run_operation(app.get_subcommands().front()->get_name(), o);
        }
        emit(render(out, o.format), o.out);
        for (const auto& r : out.reports) {
            if (!r.ok()) {
                return 1;
            }
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
