// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Criteria that name a CLI command run the built binary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "json.hpp"

#include "famplan/famplan.hpp"
#include "test_support.hpp"

using namespace famplan;
using famplan::testing::oracle_grid;
using famplan::testing::probability_grid;
using famplan::testing::run_cli;
using json = nlohmann::json;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& what) {
        if (!condition && ok) {
            detail = what;
        }
        ok = ok && condition;
    }
};

json cli_json(Check& check, const std::string& args) {
    const auto r = run_cli(args + " --json");
    check.expect(r.exit_code == 0, "'" + args + "' exited with " + std::to_string(r.exit_code));
    try {
        return json::parse(r.output);
    } catch (const std::exception& e) {
        check.expect(false, "'" + args + "' did not print JSON: " + e.what());
        return json::object();
    }
}

std::string fmt(double x) { return format_full_precision(x); }

// 1. Closed-form anchors through `exact`.
Check closed_form_anchors() {
    Check c;
    for (double pv : {0.3, 0.5, 0.7}) {
        const BirthProbability p(pv);
        const std::string ps = fmt(pv);
        const auto hillel = cli_json(c, "exact -n 1 -k 1 -p " + ps)["results"];
        const auto shammai = cli_json(c, "exact -n 2 -k 0 -p " + ps)["results"];
        const std::pair<double, ClosedForm> checks[] = {
            {hillel["F"]["value"].get<double>(), ClosedForm::hillel_family},
            {shammai["F"]["value"].get<double>(), ClosedForm::shammai_family},
            {hillel["G"]["value"].get<double>(), ClosedForm::hillel_girls},
            {shammai["G"]["value"].get<double>(), ClosedForm::shammai_girls},
            {hillel["B"]["value"].get<double>(), ClosedForm::hillel_boys},
            {shammai["B"]["value"].get<double>(), ClosedForm::shammai_boys},
        };
        for (const auto& [value, form] : checks) {
            const double expected = closed_form(form, p);
            c.expect(std::abs(value - expected) <= 1e-10, std::string(closed_form_name(form)) + " at p=" + ps + ": " +
                                                             fmt(value) + " vs " + fmt(expected));
        }
        c.expect(std::abs(shammai["B"]["value"].get<double>() - 2.0) <= 1e-10, "B_S != 2 at p=" + ps);
        if (pv == 0.5) {
            c.expect(std::abs(hillel["F"]["value"].get<double>() - 3.0) <= 1e-10, "F_H(1/2) != 3");
            c.expect(std::abs(shammai["F"]["value"].get<double>() - 4.0) <= 1e-10, "F_S(1/2) != 4");
            c.expect(std::abs(hillel["G"]["value"].get<double>() - 1.5) <= 1e-10, "G_H(1/2) != 3/2");
            c.expect(std::abs(shammai["G"]["value"].get<double>() - 2.0) <= 1e-10, "G_S(1/2) != 2");
        }
    }
    return c;
}

// 2. Gender ratio equals the birth odds on the (n,k,p) grid.
Check ratio_grid() {
    Check c;
    double worst = 0.0;
    for (count_t n = 0; n <= 6; ++n) {
        for (count_t k = 0; k <= 6; ++k) {
            if (n + k == 0) {
                continue;
            }
            for (double pv : probability_grid) {
                const BirthProbability p(pv);
                const double err = std::abs(gender_ratio(Rule(n, k), p, 1e-12) - p.odds());
                worst = std::max(worst, err);
                c.expect(err <= 1e-8, Rule(n, k).to_string() + " p=" + fmt(pv) + " error " + fmt(err));
            }
        }
    }
    if (c.ok) {
        c.detail = "max |ratio - odds| = " + fmt(worst);
    }
    return c;
}

// 3. Exact symbolic certificates for all 80 rules with n,k <= 8.
Check symbolic_proof() {
    Check c;
    const auto v = cli_json(c, "verify --max-n 8 --max-k 8");
    if (!c.ok) {
        return c;
    }
    const auto& certs = v["results"]["certificates"];
    c.expect(certs.size() == 80, "expected 80 certificates, got " + std::to_string(certs.size()));
    for (const auto& cert : certs) {
        c.expect(cert["holds"].get<bool>(), "identity fails for (" + cert["n"].dump() + "," + cert["k"].dump() + ")");
    }
    c.expect(v["results"]["all_hold"].get<bool>(), "all_hold is false");
    return c;
}

// 4. Truncated series vs brute-force enumeration at L = 24.
Check oracle_equivalence() {
    Check c;
    double worst = 0.0;
    for (count_t n = 0; n <= 4; ++n) {
        for (count_t k = 0; k <= 4; ++k) {
            if (n + k == 0) {
                continue;
            }
            for (double pv : oracle_grid) {
                const BirthProbability p(pv);
                const auto s = truncated_expectations(Rule(n, k), p, 24);
                const auto b = enumerate_brute_force(Rule(n, k), p, 24);
                double pmf_mass = 0.0;
                for (count_t t = pmf_support_min(Rule(n, k)); t <= 24; ++t) {
                    pmf_mass += stopping_pmf(Rule(n, k), p, t);
                }
                const double diffs[] = {std::abs(s.boys - b.boys), std::abs(s.girls - b.girls),
                                        std::abs(s.total - b.total), std::abs(s.girl_share - b.girl_share),
                                        std::abs(s.mass_covered - b.mass_covered), std::abs(pmf_mass - b.mass_covered)};
                for (double d : diffs) {
                    worst = std::max(worst, d);
                    c.expect(d <= 1e-12, Rule(n, k).to_string() + " p=" + fmt(pv) + " differs by " + fmt(d));
                }
            }
        }
    }
    if (c.ok) {
        c.detail = "max difference " + fmt(worst);
    }
    return c;
}

// 5. Hillel/Shammai family sizes cross at the golden ratio.
Check golden_crossing() {
    Check c;
    const auto r = cli_json(c, "crossing --a 1,1 --b 2,0");
    if (!c.ok) {
        return c;
    }
    const double root = r["results"]["probability"].get<double>();
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    c.expect(std::abs(root - golden) <= 1e-9, "root " + fmt(root) + " vs " + fmt(golden));
    if (c.ok) {
        c.detail = "root " + fmt(root);
    }
    return c;
}

// 6. Average girl share for the two-boys rule, and the inequality on 19 points.
Check share_values() {
    Check c;
    const double target = 2.0 * std::log(2.0) - 1.0;
    const auto r = cli_json(c, "share -n 2 -k 0 -p 0.5");
    if (!c.ok) {
        return c;
    }
    const double series = r["results"]["average_share"].get<double>();
    const double closed = r["results"]["average_share_closed_form"].get<double>();
    c.expect(std::abs(series - target) <= 1e-8, "series average share " + fmt(series));
    c.expect(std::abs(closed - target) <= 1e-8, "closed-form average share " + fmt(closed));
    for (int i = 1; i <= 19; ++i) {
        const double pv = 0.05 * i;
        const double value = shammai_average_share_closed_form(BirthProbability(pv));
        c.expect(value < 1.0 - pv, "inequality fails at p=" + fmt(pv));
    }
    return c;
}

// 7. Monte Carlo against exact values, the martingale check and reproducibility.
Check monte_carlo() {
    Check c;
    for (const Rule rule : {Rule(1, 1), Rule(2, 0)}) {
        const BirthProbability p(0.5);
        const auto s = run_simulation(rule, p, 1'000'000, 20240101);
        const auto again = run_simulation(rule, p, 1'000'000, 20240101, {3});
        c.expect(s == again, rule.to_string() + " not reproducible");
        struct Item {
            const char* name;
            double mean;
            double se;
            SeriesResult exact;
        };
        // The exact side's tail bound joins the band: B for (2,0) is constant, so se = 0.
        const Item items[] = {
            {"B", s.mean_boys, s.se_boys, expected_boys(rule, p, 1e-12)},
            {"G", s.mean_girls, s.se_girls, expected_girls(rule, p, 1e-12)},
            {"F", s.mean_total, s.se_total, expected_family_size(rule, p, 1e-12)},
            {"average share", s.mean_girl_share, s.se_girl_share, average_share(rule, p, 1e-12)},
            {"X_T", s.mean_martingale, s.se_martingale, SeriesResult{}},
        };
        for (const auto& item : items) {
            c.expect(std::abs(item.mean - item.exact.value) <= 4 * item.se + item.exact.tail_bound +
                                 16 * std::numeric_limits<double>::epsilon() * std::abs(item.exact.value),
                     rule.to_string() + " " + item.name + ": " + fmt(item.mean) + " vs " + fmt(item.exact.value) +
                         " (se " + fmt(item.se) + ")");
        }
    }
    const auto a = run_cli("simulate -n 1 -k 1 -p 0.5 --samples 50000 --seed 9");
    const auto b = run_cli("simulate -n 1 -k 1 -p 0.5 --samples 50000 --seed 9");
    c.expect(a.exit_code == 0 && a.output == b.output, "CLI simulate output differs between identical runs");
    return c;
}

// 8. Sweep CSV contains the marked plot points.
Check sweep_points() {
    Check c;
    const auto path = std::filesystem::temp_directory_path() /
                      ("famplan_acceptance_" + std::to_string(::getpid()) + ".csv");
    const auto r = run_cli("sweep --rules \"1,1;2,0\" --quantities F,G --from 0.1 --to 0.9 --steps 81 "
                           "--include 0.618034 --out " +
                           path.string());
    c.expect(r.exit_code == 0, "sweep exited with " + std::to_string(r.exit_code));
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    c.expect(line == "p,F(1,1),F(2,0),G(1,1),G(2,0)", "unexpected header '" + line + "'");
    std::map<double, std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::stringstream fields(line);
        std::string field;
        std::vector<double> values;
        while (std::getline(fields, field, ',')) {
            values.push_back(std::stod(field));
        }
        rows[values.front()] = std::vector<double>(values.begin() + 1, values.end());
    }
    std::filesystem::remove(path);

    auto near_row = [&](double p) -> const std::vector<double>* {
        for (const auto& [key, values] : rows) {
            if (std::abs(key - p) < 1e-9) {
                return &values;
            }
        }
        return nullptr;
    };
    struct Point {
        double p;
        std::size_t column;
        double value;
        const char* label;
    };
    const Point points[] = {
        {0.5, 0, 3.0, "F(1,1) at 0.5"},          {0.5, 1, 4.0, "F(2,0) at 0.5"},
        {0.618034, 0, 3.236068, "F(1,1) at 0.618034"}, {0.618034, 1, 3.236068, "F(2,0) at 0.618034"},
        {0.5, 2, 1.5, "G(1,1) at 0.5"},          {0.5, 3, 2.0, "G(2,0) at 0.5"},
        {0.618034, 2, 1.236068, "G(1,1) at 0.618034"}, {0.618034, 3, 1.236068, "G(2,0) at 0.618034"},
    };
    for (const auto& pt : points) {
        const auto* row = near_row(pt.p);
        c.expect(row != nullptr, std::string("missing row for ") + pt.label);
        if (row != nullptr) {
            c.expect(std::abs((*row)[pt.column] - pt.value) <= 1e-5,
                     std::string(pt.label) + " = " + fmt((*row)[pt.column]));
        }
    }
    return c;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_seconds;
        std::function<Check()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "closed-form anchors via exact", 1.0, closed_form_anchors},
        {2, "gender ratio equals birth odds on grid", 30.0, ratio_grid},
        {3, "exact identity certificates up to (8,8)", 60.0, symbolic_proof},
        {4, "series match brute-force enumeration at L=24", 120.0, oracle_equivalence},
        {5, "golden-ratio crossing", 5.0, golden_crossing},
        {6, "average girl share of the two-boys rule", 5.0, share_values},
        {7, "Monte Carlo consistency and martingale", 30.0, monte_carlo},
        {8, "sweep CSV marked points", 10.0, sweep_points},
    };
    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Check check;
        try {
            check = criterion.run();
        } catch (const std::exception& e) {
            check.ok = false;
            check.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > criterion.budget_seconds) {
            check.ok = false;
            check.detail = "took " + fmt(seconds) + " s, budget " + fmt(criterion.budget_seconds) + " s";
        }
        failures += check.ok ? 0 : 1;
        std::printf("[%s] %d %s (%.2f s)%s%s\n", check.ok ? "PASS" : "FAIL", criterion.id, criterion.name, seconds,
                    check.detail.empty() ? "" : ": ", check.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
