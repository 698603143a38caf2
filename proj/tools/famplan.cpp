// famplan: expectations, simulations and exact certificates for
// "children until n boys and k girls" stopping rules.
//
// Exit codes: 0 success, 1 invalid input, 2 numeric failure.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "famplan/famplan.hpp"

namespace {

using json = nlohmann::ordered_json;
using famplan::count_t;
using famplan::DomainError;

constexpr int exit_domain = 1;
constexpr int exit_numeric = 2;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char separator) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(separator, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

count_t parse_count(const std::string& text, const char* what) {
    count_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw DomainError(std::string(what) + " must be a non-negative integer, got '" + text + "'");
    }
    return value;
}

double parse_real(const std::string& text, const char* what) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw DomainError(std::string(what) + " must be a number, got '" + text + "'");
    }
    return value;
}

/// "n,k"
famplan::Rule parse_rule(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) {
        throw DomainError("a rule is written n,k (e.g. 1,1), got '" + text + "'");
    }
    return {parse_count(parts[0], "boys required"), parse_count(parts[1], "girls required")};
}

json rule_json(const famplan::Rule& rule) { return json{{"boys", rule.boys()}, {"girls", rule.girls()}}; }

json series_json(const famplan::SeriesResult& r) {
    return json{{"value", r.value}, {"tail_bound", r.tail_bound}, {"terms_used", r.terms_used}};
}

std::string format_real(double x) { return famplan::format_full_precision(x); }

/// Flattens nested objects into "a.b: value" lines.
void print_human(std::ostream& out, const json& value, const std::string& prefix) {
    if (value.is_object()) {
        for (const auto& [key, child] : value.items()) {
            print_human(out, child, prefix.empty() ? key : prefix + "." + key);
        }
        return;
    }
    out << prefix << ": ";
    if (value.is_number_float()) {
        out << format_real(value.get<double>());
    } else if (value.is_string()) {
        out << value.get<std::string>();
    } else {
        out << value.dump();
    }
    out << '\n';
}

struct Invocation {
    std::string command;
    json inputs = json::object();
    json results = json::object();
    std::vector<std::string> warnings;
    bool as_json = false;
    /// Replaces the generic flattened body in human mode.
    std::function<void(std::ostream&)> human_body;

    void emit(std::ostream& out) const {
        if (as_json) {
            json envelope{{"command", command}, {"inputs", inputs}, {"results", results}, {"warnings", warnings}};
            out << envelope.dump(2) << '\n';
            return;
        }
        out << "command: " << command << '\n';
        print_human(out, inputs, "inputs");
        if (human_body) {
            human_body(out);
        } else {
            print_human(out, results, "results");
        }
        for (const auto& w : warnings) {
            out << "warning: " << w << '\n';
        }
    }
};

struct RuleArgs {
    std::string boys = "1";
    std::string girls = "1";
    std::string p = "0.5";
    double tol = 1e-10;

    famplan::Rule rule() const { return {parse_count(boys, "-n"), parse_count(girls, "-k")}; }
    famplan::BirthProbability probability() const { return famplan::BirthProbability(parse_real(p, "-p")); }

    void check_tol() const {
        if (!(tol > 0.0)) {
            throw DomainError("--tol must be positive");
        }
    }
};

void add_rule_options(CLI::App& cmd, RuleArgs& args) {
    cmd.add_option("-n,--boys", args.boys, "boys required")->capture_default_str();
    cmd.add_option("-k,--girls", args.girls, "girls required")->capture_default_str();
    cmd.add_option("-p,--probability", args.p, "probability that a birth is a boy, in (0,1)")->capture_default_str();
}

void run_exact(Invocation& inv, const RuleArgs& args) {
    args.check_tol();
    const auto rule = args.rule();
    const auto p = args.probability();
    inv.inputs = {{"rule", rule_json(rule)}, {"p", p.boy()}, {"tol", args.tol}};
    famplan::require_nonempty(rule, "exact");
    const auto boys = famplan::expected_boys(rule, p, args.tol);
    const auto girls = famplan::expected_girls(rule, p, args.tol);
    const auto size = famplan::expected_family_size(rule, p, args.tol);
    const double ratio = boys.value / girls.value;
    inv.results = {{"B", series_json(boys)},
                   {"G", series_json(girls)},
                   {"F", series_json(size)},
                   {"ratio", ratio},
                   {"birth_odds", p.odds()},
                   {"ratio_minus_odds", ratio - p.odds()}};
}

void run_simulate(Invocation& inv, const RuleArgs& args, count_t samples, std::uint64_t seed, unsigned threads) {
    const auto rule = args.rule();
    const auto p = args.probability();
    inv.inputs = {{"rule", rule_json(rule)}, {"p", p.boy()}, {"samples", samples}, {"seed", seed}};
    famplan::require_nonempty(rule, "simulate");
    const auto s = famplan::run_simulation(rule, p, samples, seed, {threads, famplan::default_birth_cap});
    inv.results = {{"samples", s.samples},
                   {"seed", s.seed},
                   {"mean_boys", s.mean_boys},
                   {"se_boys", s.se_boys},
                   {"mean_girls", s.mean_girls},
                   {"se_girls", s.se_girls},
                   {"mean_total", s.mean_total},
                   {"se_total", s.se_total},
                   {"mean_girl_share", s.mean_girl_share},
                   {"se_girl_share", s.se_girl_share},
                   {"mean_martingale", s.mean_martingale},
                   {"se_martingale", s.se_martingale},
                   {"ratio_estimate", s.ratio_estimate},
                   {"se_ratio", s.se_ratio},
                   {"birth_odds", p.odds()}};
}

bool run_verify(Invocation& inv, count_t max_n, count_t max_k) {
    inv.inputs = {{"max_n", max_n}, {"max_k", max_k}, {"cap", famplan::default_symbolic_cap}};
    const auto certificates = famplan::verify_ratio_grid(max_n, max_k);
    json list = json::array();
    bool all = true;
    for (const auto& c : certificates) {
        all = all && c.holds;
        list.push_back({{"n", c.boys_required},
                        {"k", c.girls_required},
                        {"holds", c.holds},
                        {"B", c.expected_boys.to_string()},
                        {"G", c.expected_girls.to_string()}});
    }
    inv.results = {{"identity", "(1-p)*B(n,k,p) = p*B(k,n,1-p)"},
                   {"rules_checked", certificates.size()},
                   {"all_hold", all},
                   {"certificates", list}};
    inv.human_body = [list, all, count = certificates.size()](std::ostream& out) {
        out << "identity: (1-p)*B(n,k,p) = p*B(k,n,1-p)\n";
        for (const auto& c : list) {
            out << "(" << c["n"].get<count_t>() << "," << c["k"].get<count_t>() << ") "
                << (c["holds"].get<bool>() ? "PASS" : "FAIL") << "  B = " << c["B"].get<std::string>() << '\n';
        }
        out << "rules_checked: " << count << '\n' << "all_hold: " << (all ? "true" : "false") << '\n';
    };
    return all;
}

void run_share(Invocation& inv, const RuleArgs& args) {
    args.check_tol();
    const auto rule = args.rule();
    const auto p = args.probability();
    inv.inputs = {{"rule", rule_json(rule)}, {"p", p.boy()}, {"tol", args.tol}};
    famplan::require_nonempty(rule, "share");
    const auto report = famplan::share_report(rule, p, args.tol);
    inv.results = {{"societal_share", report.societal_share},
                   {"average_share", report.average_share},
                   {"average_share_tail_bound", report.average_tail_bound},
                   {"gap", report.gap}};
    if (rule == famplan::Rule(2, 0)) {
        inv.results["average_share_closed_form"] = famplan::shammai_average_share_closed_form(p);
    } else {
        inv.warnings.push_back("average share for rule " + rule.to_string() +
                               " comes from the general branch series; the closed form exists only for (2,0)");
    }
    if (report.gap <= 0.0) {
        inv.warnings.push_back("average share is not below the societal share for this rule");
    }
}

void run_crossing(Invocation& inv, const std::string& a, const std::string& b, double tol) {
    const auto rule_a = parse_rule(a);
    const auto rule_b = parse_rule(b);
    inv.inputs = {{"rule_a", rule_json(rule_a)}, {"rule_b", rule_json(rule_b)}, {"tol", tol}};
    const auto r = famplan::crossing_probability(rule_a, rule_b, tol);
    inv.results = {{"probability", r.probability},
                   {"bracket_lower", r.lower},
                   {"bracket_upper", r.upper},
                   {"sign_changes", r.sign_changes}};
    if (r.multiple_sign_changes) {
        inv.warnings.push_back("F difference changes sign " + std::to_string(r.sign_changes) +
                               " times on the scan grid; the leftmost root was refined");
    }
}

struct SweepArgs {
    std::string rules = "1,1;2,0";
    std::string quantities = "F";
    double from = 0.1;
    double to = 0.9;
    count_t steps = 81;
    std::string include;
    std::string out;
    double tol = 1e-10;
};

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
    auto temp = path;
    temp += ".tmp";
    {
        std::ofstream file(temp, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw DomainError("cannot open '" + temp.string() + "' for writing");
        }
        file << contents;
        if (!file.flush()) {
            std::filesystem::remove(temp);
            throw DomainError("failed to write '" + temp.string() + "'");
        }
    }
    std::filesystem::rename(temp, path);
}

void run_sweep(Invocation& inv, const SweepArgs& args) {
    famplan::SweepRequest request;
    for (const auto& r : split(args.rules, ';')) {
        request.rules.push_back(parse_rule(r));
    }
    for (const auto& q : split(args.quantities, ',')) {
        request.quantities.push_back(famplan::parse_sweep_quantity(q));
    }
    if (!args.include.empty()) {
        for (const auto& x : split(args.include, ',')) {
            request.extra_points.push_back(parse_real(x, "--include"));
        }
    }
    request.p_start = args.from;
    request.p_end = args.to;
    request.steps = args.steps;
    request.tol = args.tol;

    json rules = json::array();
    for (const auto& r : request.rules) {
        rules.push_back(rule_json(r));
    }
    inv.inputs = {{"rules", rules},
                  {"quantities", split(args.quantities, ',')},
                  {"from", args.from},
                  {"to", args.to},
                  {"steps", args.steps},
                  {"include", request.extra_points},
                  {"tol", args.tol},
                  {"out", args.out}};

    const auto rows = famplan::sweep(request);
    const auto columns = famplan::sweep_columns(request);
    std::ostringstream csv;
    famplan::write_sweep_csv(csv, columns, rows);

    count_t failed = 0;
    for (const auto& row : rows) {
        for (const auto& cell : row.cells) {
            if (!cell.value) {
                ++failed;
                inv.warnings.push_back("p=" + format_real(row.p) + " " + cell.name + ": " + cell.error);
            }
        }
    }
    inv.results = {{"rows", rows.size()}, {"columns", columns}, {"failed_cells", failed}};
    if (!args.out.empty()) {
        write_atomically(args.out, csv.str());
        inv.results["written"] = args.out;
    } else if (inv.as_json) {
        json data = json::array();
        for (const auto& row : rows) {
            json values = json::object();
            values["p"] = row.p;
            for (const auto& cell : row.cells) {
                values[cell.name] = cell.value ? json(*cell.value) : json(nullptr);
            }
            data.push_back(values);
        }
        inv.results["data"] = data;
    } else {
        const std::string text = csv.str();
        inv.human_body = [text](std::ostream& out) { out << text; };
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stopping-rule family demographics: exact series, simulation, exact certificates"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit a JSON envelope instead of key: value lines");

    RuleArgs exact_args;
    auto* exact = app.add_subcommand("exact", "expected boys, girls, family size and gender ratio");
    add_rule_options(*exact, exact_args);
    exact->add_option("--tol", exact_args.tol, "series tolerance")->capture_default_str();
    exact->add_flag("--json", as_json);

    RuleArgs sim_args;
    count_t samples = 100000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates with standard errors");
    add_rule_options(*simulate, sim_args);
    simulate->add_option("--samples", samples, "number of simulated families")->capture_default_str();
    simulate->add_option("--seed", seed, "64-bit seed")->capture_default_str();
    simulate->add_option("--threads", threads, "worker threads, 0 = all cores (does not change results)")
        ->capture_default_str();
    simulate->add_flag("--json", as_json);

    count_t max_n = 8;
    count_t max_k = 8;
    auto* verify = app.add_subcommand("verify", "exact check of (1-p)B(n,k,p) = p B(k,n,1-p)");
    verify->add_option("--max-n", max_n, "largest n")->capture_default_str();
    verify->add_option("--max-k", max_k, "largest k")->capture_default_str();
    verify->add_flag("--json", as_json);

    RuleArgs share_args;
    auto* share = app.add_subcommand("share", "societal and average girl share");
    add_rule_options(*share, share_args);
    share->add_option("--tol", share_args.tol, "series tolerance")->capture_default_str();
    share->add_flag("--json", as_json);

    std::string rule_a = "1,1";
    std::string rule_b = "2,0";
    double crossing_tol = 1e-10;
    auto* crossing = app.add_subcommand("crossing", "probability where two rules give equal family size");
    crossing->add_option("--a", rule_a, "first rule n,k")->capture_default_str();
    crossing->add_option("--b", rule_b, "second rule n,k")->capture_default_str();
    crossing->add_option("--tol", crossing_tol, "bracket width")->capture_default_str();
    crossing->add_flag("--json", as_json);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "CSV of quantities over a probability grid");
    sweep->add_option("--rules", sweep_args.rules, "rules separated by ';', e.g. \"1,1;2,0\"")->capture_default_str();
    sweep->add_option("--quantities", sweep_args.quantities,
                      "comma-separated subset of F,G,B,ratio,societal_share,average_share")
        ->capture_default_str();
    sweep->add_option("--from", sweep_args.from, "first p")->capture_default_str();
    sweep->add_option("--to", sweep_args.to, "last p")->capture_default_str();
    sweep->add_option("--steps", sweep_args.steps, "grid points")->capture_default_str();
    sweep->add_option("--include", sweep_args.include, "extra p values merged into the grid, comma-separated");
    sweep->add_option("--out", sweep_args.out, "CSV path (stdout when omitted)");
    sweep->add_option("--tol", sweep_args.tol, "series tolerance")->capture_default_str();
    sweep->add_flag("--json", as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_domain;
    }

    Invocation inv;
    inv.as_json = as_json;
    int status = 0;
    try {
        if (exact->parsed()) {
            inv.command = "exact";
            run_exact(inv, exact_args);
        } else if (simulate->parsed()) {
            inv.command = "simulate";
            run_simulate(inv, sim_args, samples, seed, threads);
        } else if (verify->parsed()) {
            inv.command = "verify";
            if (!run_verify(inv, max_n, max_k)) {
                status = exit_numeric;
            }
        } else if (share->parsed()) {
            inv.command = "share";
            run_share(inv, share_args);
        } else if (crossing->parsed()) {
            inv.command = "crossing";
            run_crossing(inv, rule_a, rule_b, crossing_tol);
        } else if (sweep->parsed()) {
            inv.command = "sweep";
            run_sweep(inv, sweep_args);
        }
    } catch (const famplan::DomainError& e) {
        status = exit_domain;
        inv.results = {{"error", e.what()}};
        std::cerr << "error: " << e.what() << '\n';
    } catch (const famplan::NumericError& e) {
        status = exit_numeric;
        inv.results = {{"error", e.what()}};
        std::cerr << "error: " << e.what() << '\n';
    }
    if (status == 0 || as_json || inv.command == "verify") {
        inv.emit(std::cout);
    }
    return status;
}
