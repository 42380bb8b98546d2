// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fibft/format.hpp"
#include "fibft/recursion.hpp"
#include "fibft/sim.hpp"
#include "fibft/strength.hpp"
#include "oracles.hpp"

using namespace fibft;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
    std::printf("%s %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += !pass;
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ThresholdResult ls_threshold;

void ac1() {
    auto t0 = Clock::now();
    ls_threshold = threshold_scan(NoiseModel::LocalStochastic, 10, 1e-5);
    double dt = seconds_since(t0);
    const auto& t = ls_threshold;
    bool pass = std::abs(t.midpoint() - 0.67e-3) <= 0.02e-3 && t.hi - t.lo <= 1e-5 && dt <= 10;
    report("AC1", pass,
           "interval [" + sci(t.lo) + ", " + sci(t.hi) + "] midpoint " + sci(t.midpoint()) + " width " +
               sci(t.hi - t.lo) + " runtime " + fmt("%.3f s", dt));
}

void ac2() {
    ThresholdResult d = threshold_scan(NoiseModel::IndependentDepolarizing, 10, 1e-5);
    const auto& l = ls_threshold;
    bool exact = std::abs(d.lo / l.lo - 15.0 / 8) < 1e-14 && std::abs(d.hi / l.hi - 15.0 / 8) < 1e-14;
    bool near = std::abs(d.midpoint() - 15.0 / 8 * 0.67e-3) <= 15.0 / 8 * 0.02e-3;
    report("AC2", exact && near,
           "interval [" + sci(d.lo) + ", " + sci(d.hi) + "] ratio " + fmt("%.15g", d.midpoint() / l.midpoint()) +
               " midpoint " + sci(d.midpoint()));
}

void ac3() {
    auto seq = eps_css_sequence({0.67e-3, NoiseModel::LocalStochastic}, 10);
    bool pass = seq[9] <= 1.43e-5 * 1.05;
    report("AC3", pass, "eps_css(10) at 0.67e-3 = " + sci(seq[9]) + " (limit 1.43e-5)");
}

void ac4() {
    AncillaBounds ls = ancilla_bounds({0.67e-3, NoiseModel::LocalStochastic}, 10);
    AncillaBounds dp = ancilla_bounds({1.25e-3, NoiseModel::IndependentDepolarizing}, 10);
    bool pass = ls.eps_anc <= 6.09e-2 && dp.eps_anc <= 6.76e-2 && ls.eps_anc < kDistillationThreshold &&
                dp.eps_anc < kDistillationThreshold;
    report("AC4", pass, "local-stochastic " + sci(ls.eps_anc) + " depolarizing " + sci(dp.eps_anc));
}

void ac5() {
    std::vector<double> eps;
    for (int k = 4; k <= 40; k++) eps.push_back(k * 5e-5);
    auto rows = curves(NoiseModel::LocalStochastic, eps, 5);
    {
        std::ofstream csv("acceptance_curves.csv");
        csv << "epsilon,j,eps_css,acceptance\n";
        for (const auto& r : rows)
            csv << sci(r.epsilon) << ',' << r.j << ',' << sci(r.eps_css) << ',' << sci(r.acceptance) << '\n';
    }
    int below = 0, bad_decrease = 0, bad_trend = 0, above_decreasing = 0;
    for (size_t k = 0; k < eps.size(); k++) {
        const CurveRow* r = &rows[k * 5];
        bool decreasing = true;
        for (int j = 3; j < 5; j++) decreasing &= r[j].eps_css < r[j - 1].eps_css;
        if (eps[k] < ls_threshold.lo) {
            below++;
            bad_decrease += !decreasing;
            // p(j|j-1) approaches 1 for j >= 3: rejection falls from level 3 to 5.
            bad_trend += !(1 - r[4].acceptance < 1 - r[2].acceptance);
        } else {
            above_decreasing += decreasing;
        }
    }
    bool pass = below > 0 && bad_decrease == 0 && bad_trend == 0;
    report("AC5", pass,
           std::to_string(below) + " grid points below threshold, " + std::to_string(bad_decrease) +
               " not decreasing over j=3..5, " + std::to_string(bad_trend) + " without acceptance trend; " +
               std::to_string(above_decreasing) + " points above threshold still decreasing to j=5 (csv: acceptance_curves.csv)");
}

void ac6() {
    bool pass = true;
    std::string detail;
    for (int j = 1; j <= 4; j++) {
        auto a = build_profile({1e-5, NoiseModel::LocalStochastic}, j);
        auto b = build_profile({1e-4, NoiseModel::LocalStochastic}, j);
        for (ErrorType m : kErrorTypes) {
            double slope = std::log10(b[j].profile.at(m, j) / a[j].profile.at(m, j));
            double want = double(fibonacci(j + 1));
            pass &= std::abs(slope - want) <= 0.05 * want;
            detail += fmt("j=%d%c:%.3f ", j, type_char(m), slope);
        }
    }
    report("AC6", pass, "slopes " + detail + "(expected F(j+1) = 2,3,5,8)");
}

void ac7() {
    const double grid[] = {0, 1e-3, 1e-2, 1e-1};
    int cases = 0, violations = 0;
    for (double f : grid)
        for (double df : grid)
            for (double dn : grid) {
                StrengthTriple bound = decode_strengths({f, df, dn});
                for (double scale : {1.0, 0.5})
                    for (auto basis : {MeasurementBasis::ZBasis, MeasurementBasis::XBasis}) {
                        double p[2][2];
                        oracle::dominated_table(f, df, dn, scale, p);
                        auto b = oracle::enumerate_block(p, basis);
                        cases++;
                        violations += b.flagged > bound.f + 1e-15 || b.flagged_err > bound.delta_f + 1e-15 ||
                                      b.unflagged_err > bound.delta_nf + 1e-15;
                    }
            }
    report("AC7", violations == 0, std::to_string(cases) + " cases, " + std::to_string(violations) + " violations");
}

void ac8() {
    size_t checked = 0, bad = 0;
    for (int j : {1, 2})
        for (auto b : {MeasurementBasis::ZBasis, MeasurementBasis::XBasis}) bad += oracle::weight_two_mismatches(j, b, &checked);
    report("AC8", bad == 0, std::to_string(checked) + " patterns, " + std::to_string(bad) + " mismatches");
}

void ac9() {
    auto t0 = Clock::now();
    const uint64_t want = 100000;
    int checks = 0, fails = 0, vacuous = 0;
    std::string detail;
    for (CircuitKind kind : {CircuitKind::BellPair, CircuitKind::CnotGadget}) {
        for (int j : {1, 2}) {
            Circuit c = kind == CircuitKind::BellPair ? build_bp_circuit(j) : build_cnot_gadget(j);
            SimMode mode = default_mode(kind);
            for (double e : {1e-3, 3e-3, 1e-2}) {
                uint64_t trials = want;
                SimStats s;
                for (int attempt = 0; attempt < 4; attempt++) {
                    s = run_trials(c, {e, NoiseModel::IndependentDepolarizing}, trials, 2024 + j, mode);
                    if (s.accepted >= want) break;
                    trials = static_cast<uint64_t>(std::ceil(trials * 1.03 * want / std::max<uint64_t>(s.accepted, 1)));
                }
                auto bounds = analytic_bounds(c, e);
                bool ok = check_dominance(s, bounds) && s.accepted >= want;
                for (const auto& b : bounds) {
                    checks++;
                    vacuous += b.verdict == "vacuous";
                    if (b.verdict == "FAIL") {
                        fails++;
                        detail += " " + circuit_kind_name(kind) + fmt("/j=%d", j) + "/eps=" + sci(e) + "/" + b.rate_name;
                    }
                }
                if (s.accepted < want) {
                    fails++;
                    detail += " too few accepted at " + circuit_kind_name(kind) + fmt("/j=%d", j);
                }
                std::printf("  %s j=%d eps=%s accepted %llu/%llu %s\n", circuit_kind_name(kind).c_str(), j,
                            sci(e).c_str(), (unsigned long long)s.accepted, (unsigned long long)s.trials,
                            ok ? "ok" : "violations");
                std::fflush(stdout);
            }
        }
    }
    double dt = seconds_since(t0);
    bool pass = fails == 0 && dt <= 300;
    report("AC9", pass,
           std::to_string(checks) + " bound checks, " + std::to_string(fails) + " failures, " +
               std::to_string(vacuous) + " vacuous (engine fails at that strength), runtime " + fmt("%.1f s", dt) +
               detail);
}

void ac10() {
    const double e = 1e-2;
    SimStats s = run_trials(build_purification_circuit(), {e, NoiseModel::IndependentDepolarizing}, 1000000, 10,
                            SimMode::PostselectBP);
    const auto& x = s.rate("x_error");
    const double bound = 8.0 / 15.0 * e + 5 * e * e;
    auto ex = oracle::purification_exact(e);
    bool under = x.rate() - 3 * x.sigma() <= bound;
    bool exact = std::abs(x.rate() - ex.x_error) <= 3 * x.sigma();
    report("AC10", under && exact,
           "x_error " + sci(x.rate()) + " +- " + sci(x.sigma()) + ", bound (8/15)eps+5eps^2 = " + sci(bound) +
               ", exact enumeration " + sci(ex.x_error) + ", (8/15)eps = " + sci(8.0 / 15.0 * e));
}

void ac11() {
    OverheadParams p;
    bool agree = true;
    for (int j = 1; j <= 10; j++) {
        auto o = overhead(p, j, 1e9, 1e-4, 0.67e-3);
        agree &= o.C == o.C_closed && o.M == o.M_closed;
    }
    auto o3 = overhead(p, 3, 1e9, 1e-4, 0.67e-3);
    auto pm = parallel_multipliers();
    const double phi = 1.6180339887498948482;
    bool mult = std::abs(pm.M_parallel - phi) < 1e-12 && std::abs(pm.N_parallel - phi * phi) < 1e-12;
    report("AC11", agree && o3.B == 400 && mult,
           "closed forms agree for j<=10: " + std::string(agree ? "yes" : "no") + ", B(3) = " + std::to_string(o3.B) +
               fmt(", M_parallel %.15f", pm.M_parallel) + fmt(", N_parallel %.15f", pm.N_parallel));
}

}  // namespace

int main() {
    ac1();
    ac2();
    ac3();
    ac4();
    ac5();
    ac6();
    ac7();
    ac8();
    ac9();
    ac10();
    ac11();
    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
