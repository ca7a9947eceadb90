// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every tolerance and sample size is pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "nanoscout/nanoscout.hpp"

namespace ns = nanoscout;
using ns::VesselKind;

namespace {

// ---------------------------------------------------------------------------
// Pinned tolerances and budgets

constexpr double kDiffusivityRelTol = 0.02;
constexpr double kMsdRelTol = 0.05;
constexpr double kMeanStdErrors = 3.0;
constexpr std::size_t kMsdSteps = 100000;
constexpr std::size_t kOracleInstances = 20;
constexpr double kMarginationTol = 0.02;
constexpr std::size_t kMarginationCount = 10000;
constexpr std::size_t kTrendTrials = 100;
constexpr double kSpearmanMin = 0.9;
constexpr double kVesselRatioMin = 2.0;
constexpr double kDampingCapillary[2] = {1.2, 2.5};
constexpr double kDampingLarger[2] = {1.5, 3.0};
constexpr double kDesignBudgetSeconds = 30.0 * 60.0;
constexpr double kThroughputBudgetSeconds = 10.0;
constexpr double kThroughputHorizon = 4.0;

int failures = 0;

void report(int id, bool pass, const std::string& name, const std::string& detail) {
    std::printf("[%s] %2d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Desk-scale defaults for the trend criteria.
ns::Settings trend_base() {
    ns::Settings s;
    s.trials = kTrendTrials;
    return s;
}

ns::BatchEstimate estimate(const ns::Settings& s) {
    return ns::run_batch(ns::make_trial_config(s), s.trials, s.master_seed, 0);
}

ns::Settings at_vessel(ns::Settings s, VesselKind v) {
    s.vessel = v;
    return s;
}

/// Wilson half-width of the two arms pooled into one sample.
double pooled_half_width(const ns::BatchEstimate& a, const ns::BatchEstimate& b) {
    return ns::wilson_estimate(a.detected + b.detected, a.total + b.total, a.trials + b.trials).half_width();
}

std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
        i = j + 1;
    }
    return rank;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = average_ranks(x), ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return (sxx == 0.0 || syy == 0.0) ? 0.0 : sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// Analytic / exact

void criterion_1() {
    const double small = ns::diffusion_coefficient(ns::units::nm(25), 310.0, 4e-3);
    const double large = ns::diffusion_coefficient(ns::units::nm(1000), 310.0, 4e-3);
    const double e1 = std::abs(small / 2.3e-12 - 1.0), e2 = std::abs(large / 5.7e-14 - 1.0);
    report(1, e1 <= kDiffusivityRelTol && e2 <= kDiffusivityRelTol, "Stokes-Einstein diffusivity",
           "D(25nm)=" + fmt(small) + " (rel err " + fmt(e1, 2) + "), D(1000nm)=" + fmt(large) + " (rel err " +
               fmt(e2, 2) + "), tol " + fmt(kDiffusivityRelTol));
}

void criterion_2() {
    const double a = ns::velocity_cofactor(ns::units::nm(100), ns::units::nm(25));
    const double b = ns::velocity_cofactor(ns::units::nm(2000), ns::units::nm(25));
    const double c = ns::velocity_cofactor(ns::units::nm(1000), ns::units::nm(25));
    report(2, a == 0.25 && b == 0.0125 && c == 0.025, "velocity cofactors exact",
           "a(100nm)=" + fmt(a, 17) + " a(2000nm)=" + fmt(b, 17) + " a(1000nm)=" + fmt(c, 17));
}

void criterion_3() {
    bool ok = true;
    std::string detail;
    for (auto kind : {VesselKind::capillary, VesselKind::venule, VesselKind::arteriole}) {
        const auto v = ns::preset(kind);
        const double R = v.radius();
        ok &= ns::laminar_profile(v.v_max, R, 0.0) == v.v_max;
        ok &= ns::laminar_profile(v.v_max, R, R * R) == 0.0;
        ok &= ns::laminar_profile(v.v_max, R, 0.25 * R * R) == 0.75 * v.v_max;
        const auto grid = ns::discretize(v.v_max, v, ns::default_cell_count(kind));
        const ns::FlowModel analytic = ns::LaminarFlow{v.v_max, R};
        const ns::Domain d = ns::Domain::from(v);
        std::size_t mismatches = 0;
        for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
            for (std::size_t iz = 0; iz < grid.nz(); ++iz) {
                const auto [cy, cz] = grid.cell_center(iy, iz);
                if (grid.speed(iy, iz) != ns::velocity_at(analytic, {0.5 * v.length, cy, cz}, d)) ++mismatches;
            }
        }
        ok &= mismatches == 0;
        detail += std::string(ns::to_string(kind)) + " cells=" + std::to_string(grid.cell_count()) + " (" +
                  std::to_string(grid.ny()) + "x" + std::to_string(grid.nz()) + ", " + std::to_string(mismatches) +
                  " mismatches) ";
    }
    ok &= ns::default_cell_count(VesselKind::capillary) == 81 && ns::default_cell_count(VesselKind::venule) == 200 &&
          ns::default_cell_count(VesselKind::arteriole) == 300;
    report(3, ok, "laminar profile and discretization", detail + "landmarks v(0), v(R), v(R/2) exact");
}

void criterion_4() {
    ns::Settings s;
    s.trials = 40;
    s.sweep_values = {20, 100};
    s.sweep_vessels = {VesselKind::capillary, VesselKind::venule};
    const auto spec = ns::make_sweep(s);
    const auto a = ns::results_to_string(ns::run_sweep(spec, 1));
    const auto b = ns::results_to_string(ns::run_sweep(spec, 1));
    const auto c = ns::results_to_string(ns::run_sweep(spec, 4));
    const auto d = ns::results_to_string(ns::run_sweep(spec, 0));
    report(4, a == b && a == c && a == d, "deterministic CSV",
           std::to_string(a.size()) + " bytes; repeat run, 4 threads and all-core run byte-identical: " +
               (a == b && a == c && a == d ? "yes" : "no"));
}

// ---------------------------------------------------------------------------
// Statistical

void criterion_5() {
    const auto species = ns::make_biomarker();
    const ns::KineticParams params{1e-4};
    const ns::FlowModel still = ns::UniformFlow{0.0};
    ns::RandomStream rng(ns::make_stream(ns::default_master_seed, ns::Stream::biomarker_motion));
    double sum[3] = {0, 0, 0}, sq[3] = {0, 0, 0};
    ns::Vec3 p{0, 0, 0};
    for (std::size_t i = 0; i < kMsdSteps; ++i) {
        const ns::Vec3 q = ns::step(p, species, still, params, rng);
        const double d[3] = {q.x - p.x, q.y - p.y, q.z - p.z};
        for (int k = 0; k < 3; ++k) {
            sum[k] += d[k];
            sq[k] += d[k] * d[k];
        }
        p = q;
    }
    const double expected = 2.0 * species.diffusivity * params.dt;
    const double se = std::sqrt(expected / static_cast<double>(kMsdSteps));
    bool ok = true;
    std::string detail;
    const char* axis = "xyz";
    for (int k = 0; k < 3; ++k) {
        const double msd = sq[k] / static_cast<double>(kMsdSteps);
        const double mean = sum[k] / static_cast<double>(kMsdSteps);
        const double rel = std::abs(msd / expected - 1.0);
        ok &= rel <= kMsdRelTol && std::abs(mean) <= kMeanStdErrors * se;
        detail += std::string(1, axis[k]) + ": msd rel err " + fmt(rel, 3) + ", mean " + fmt(mean / se, 3) + " SE; ";
    }
    report(5, ok, "Brownian MSD", detail + std::to_string(kMsdSteps) + " steps");
}

/// Reference detection: every active biomarker against every active
/// nanomachine, lowest nanomachine id within range wins.
std::vector<std::pair<std::size_t, std::size_t>> all_pairs(const ns::TrialRunner& r, double range) {
    std::vector<std::pair<std::size_t, std::size_t>> hits;
    const auto& bp = r.biomarker_positions();
    const auto& np = r.nanomachine_positions();
    for (std::size_t b = 0; b < bp.size(); ++b) {
        if (r.biomarker_status()[b] != ns::ParticleStatus::active) continue;
        for (std::size_t n = 0; n < np.size(); ++n) {
            if (r.nanomachine_status()[n] != ns::ParticleStatus::active) continue;
            const double dx = bp[b].x - np[n].x, dy = bp[b].y - np[n].y, dz = bp[b].z - np[n].z;
            if (dx * dx + dy * dy + dz * dz <= range * range) {
                hits.emplace_back(n, b);
                break;
            }
        }
    }
    return hits;
}

void criterion_6() {
    std::mt19937_64 pick(20260);
    const VesselKind vessels[] = {VesselKind::capillary, VesselKind::venule, VesselKind::arteriole};
    const ns::FlowKind flows[] = {ns::FlowKind::uniform, ns::FlowKind::laminar, ns::FlowKind::laminar_discretized};
    std::size_t mismatched = 0, events = 0, steps = 0;
    for (std::size_t inst = 0; inst < kOracleInstances; ++inst) {
        ns::Settings s;
        s.vessel = vessels[pick() % 3];
        s.flow = flows[pick() % 3];
        s.nanomachines = 1 + pick() % 50;
        s.biomarkers = 3;
        s.biomarkers_at = ns::BiomarkerPlacement::cross_section;
        s.margination = std::uniform_real_distribution<double>(0.0, 1.0)(pick);
        s.d_det = ns::units::um(std::uniform_real_distribution<double>(0.5, 4.0)(pick));
        s.t_max = static_cast<double>(1 + pick() % 500) * s.dt;
        auto config = ns::make_trial_config(s);
        config.seed = pick();
        config.index = ns::DetectionIndex::grid;

        ns::TrialRunner runner(config);
        while (!runner.finished()) {
            runner.move();
            const auto expected = all_pairs(runner, config.detection_range);
            const auto got = runner.detect();
            std::vector<std::pair<std::size_t, std::size_t>> seen;
            for (const auto& e : got) seen.emplace_back(e.nanomachine, e.biomarker);
            if (seen != expected) ++mismatched;
            events += got.size();
            ++steps;
        }
        config.index = ns::DetectionIndex::brute_force;
        auto grid_config = config;
        grid_config.index = ns::DetectionIndex::grid;
        if (ns::run_trial(config, true) != ns::run_trial(grid_config, true)) ++mismatched;
    }
    report(6, mismatched == 0 && events > 0, "engine matches all-pairs oracle",
           std::to_string(kOracleInstances) + " instances, " + std::to_string(steps) + " steps, " +
               std::to_string(events) + " events, " + std::to_string(mismatched) + " mismatches");
}

void criterion_7() {
    const auto v = ns::preset(VesselKind::capillary);
    ns::ReleasePlan plan;
    plan.margination = 0.5;
    ns::RandomStream rng(ns::make_stream(ns::default_master_seed, ns::Stream::nanomachine_release));
    const auto pos = ns::sample_initial_positions(plan, ns::make_nanomachine(ns::units::nm(1000), 0.025),
                                                  kMarginationCount, v, rng);
    const double realized = ns::realized_margination(pos, v);
    const double target = 0.5 + 0.5 * ns::NearWallRule{}.band_area_fraction(v);
    report(7, std::abs(realized - target) <= kMarginationTol, "release margination",
           "realized " + fmt(realized) + " vs " + fmt(target) + " (tol " + fmt(kMarginationTol) + ", " +
               std::to_string(kMarginationCount) + " nanomachines)");
}

// ---------------------------------------------------------------------------
// Trend reproduction

void criteria_8_9() {
    const std::vector<double> counts{20, 50, 100, 200, 500};
    std::map<ns::FlowKind, std::vector<ns::BatchEstimate>> est;
    for (auto flow : {ns::FlowKind::uniform, ns::FlowKind::laminar}) {
        for (double n : counts) {
            auto s = trend_base();
            s.flow = flow;
            s.nanomachines = static_cast<std::size_t>(n);
            est[flow].push_back(estimate(s));
        }
    }
    bool ok8 = true;
    std::string d8;
    for (auto flow : {ns::FlowKind::uniform, ns::FlowKind::laminar}) {
        std::vector<double> p;
        for (const auto& e : est[flow]) p.push_back(e.p_d);
        const double rho = spearman(counts, p);
        ok8 &= rho >= kSpearmanMin;
        d8 += std::string(ns::to_string(flow)) + " rho=" + fmt(rho, 3) + " p_d=";
        for (double x : p) d8 += fmt(x, 3) + " ";
    }
    report(8, ok8, "P_d grows with N", d8 + "(min rho " + fmt(kSpearmanMin) + ")");

    bool ok9 = true;
    std::string d9;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto& u = est[ns::FlowKind::uniform][i];
        const auto& l = est[ns::FlowKind::laminar][i];
        const double gap = u.p_d - l.p_d, hw = pooled_half_width(u, l);
        ok9 &= gap > -hw;
        d9 += "N=" + fmt(counts[i]) + " gap " + fmt(gap, 3) + " (hw " + fmt(hw, 3) + ") ";
    }
    report(9, ok9, "uniform flow detects at least as well as laminar", d9);
}

void criterion_10() {
    const auto base = trend_base();
    const auto c = estimate(at_vessel(base, VesselKind::capillary));
    const auto v = estimate(at_vessel(base, VesselKind::venule));
    const auto a = estimate(at_vessel(base, VesselKind::arteriole));
    const double ratio = a.p_d > 0.0 ? c.p_d / a.p_d : INFINITY;
    report(10, c.p_d > v.p_d && v.p_d > a.p_d && ratio >= kVesselRatioMin, "vessel ordering",
           "capillary " + fmt(c.p_d, 3) + " > venule " + fmt(v.p_d, 3) + " > arteriole " + fmt(a.p_d, 3) +
               ", capillary/arteriole " + fmt(ratio, 3) + " (min " + fmt(kVesselRatioMin) + ")");
}

void criterion_11() {
    const std::vector<double> cofactors{0.0125, 0.05, 0.25, 0.5, 1.0};
    bool ok = true;
    std::string detail;
    for (auto kind : {VesselKind::capillary, VesselKind::venule, VesselKind::arteriole}) {
        std::vector<double> p;
        for (double a : cofactors) {
            auto s = at_vessel(trend_base(), kind);
            s.cofactor = a;
            p.push_back(estimate(s).p_d);
        }
        const double at_one = p.back();
        const bool min_at_one = std::all_of(p.begin(), p.end() - 1, [&](double x) { return x > at_one; });
        ok &= min_at_one;
        detail += std::string(ns::to_string(kind)) + ":";
        for (double x : p) detail += " " + fmt(x, 3);
        detail += "; ";
    }
    report(11, ok, "P_d minimal at cofactor 1", detail + "cofactors 0.0125 0.05 0.25 0.5 1");
}

void criterion_12() {
    bool ok = true;
    std::string detail;
    for (auto kind : {VesselKind::capillary, VesselKind::venule, VesselKind::arteriole}) {
        auto s = at_vessel(trend_base(), kind);
        s.margination = 0.0;
        const double p0 = estimate(s).p_d;
        s.margination = 0.5;
        const double p5 = estimate(s).p_d;
        const double ratio = p5 > 0.0 ? p0 / p5 : INFINITY;
        const double* band = kind == VesselKind::capillary ? kDampingCapillary : kDampingLarger;
        ok &= ratio >= band[0] && ratio <= band[1];
        detail += std::string(ns::to_string(kind)) + " " + fmt(p0, 3) + "/" + fmt(p5, 3) + "=" + fmt(ratio, 3) +
                  " in [" + fmt(band[0]) + "," + fmt(band[1]) + "]; ";
    }
    report(12, ok, "margination damping", detail);
}

void criterion_13() {
    auto s = trend_base();
    s.sweep_kind = ns::SweepKind::size;
    s.sweep_values = {ns::units::nm(100), ns::units::nm(500), ns::units::nm(1000), ns::units::nm(2000)};
    const auto spec = ns::make_sweep(s);
    std::map<ns::Variant, std::vector<double>> p;
    for (auto variant : {ns::Variant::simplified, ns::Variant::realistic}) {
        for (double r : spec.values) p[variant].push_back(estimate(ns::sweep_point(spec, s.vessel, variant, r)).p_d);
    }
    const auto& simple = p[ns::Variant::simplified];
    const auto& real = p[ns::Variant::realistic];
    bool increasing = true;
    for (std::size_t i = 1; i < simple.size(); ++i) increasing &= simple[i] > simple[i - 1];
    const double gap500 = simple[1] - real[1], gap2000 = simple[3] - real[3];
    std::string detail = "simplified";
    for (double x : simple) detail += " " + fmt(x, 3);
    detail += "; realistic";
    for (double x : real) detail += " " + fmt(x, 3);
    report(13, increasing && gap2000 > gap500, "size trend",
           detail + "; gap 500nm " + fmt(gap500, 3) + " < gap 2000nm " + fmt(gap2000, 3));
}

void criterion_14() {
    const ns::Settings s;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = ns::run_design_table(s, 0);
    const double seconds = seconds_since(t0);
    std::map<std::tuple<VesselKind, double, double>, std::size_t> n;
    bool attainable = true;
    for (const auto& r : rows) {
        n[{r.vessel, r.radius, r.target}] = r.nanomachines;
        attainable &= r.attainable;
    }
    std::size_t checks = 0, violations = 0;
    const auto expect_less = [&](std::size_t a, std::size_t b) {
        ++checks;
        if (!(a < b)) ++violations;
    };
    const auto& vs = s.design_vessels;
    const auto& rs = s.design_radii;
    for (auto v : vs)
        for (double r : rs) expect_less(n[{v, r, 0.25}], n[{v, r, 0.5}]);
    for (auto v : vs)
        for (double t : s.design_targets)
            for (std::size_t i = 1; i < rs.size(); ++i) expect_less(n[{v, rs[i], t}], n[{v, rs[i - 1], t}]);
    for (double r : rs)
        for (double t : s.design_targets)
            for (std::size_t i = 1; i < vs.size(); ++i) expect_less(n[{vs[i - 1], r, t}], n[{vs[i], r, t}]);
    std::string detail;
    for (const auto& r : rows) {
        detail += std::string(ns::to_string(r.vessel)).substr(0, 3) + "/" + fmt(ns::units::in_nm(r.radius)) + "/" +
                  fmt(r.target) + "=" + std::to_string(r.nanomachines) + " ";
    }
    report(14, violations == 0 && attainable && seconds <= kDesignBudgetSeconds, "design-table ordinals",
           std::to_string(checks - violations) + "/" + std::to_string(checks) + " ordinals hold, " +
               fmt(seconds, 3) + " s (budget " + fmt(kDesignBudgetSeconds) + " s); " + detail);
}

void criterion_15() {
    ns::Settings s;
    const auto config = ns::make_trial_config(s);
    auto t0 = std::chrono::steady_clock::now();
    ns::run_batch(config, 100, s.master_seed, 1);
    const double t_default = seconds_since(t0);

    // Trials end once every biomarker is gone, so the long-horizon run with
    // biomarkers spread over the inlet slab is the heaviest default-size load.
    // Its per-particle-step rate is also extrapolated to the full step budget.
    s.horizon = kThroughputHorizon;
    s.biomarkers_at = ns::BiomarkerPlacement::cross_section;
    const auto heavy = ns::make_trial_config(s);
    t0 = std::chrono::steady_clock::now();
    const auto batch = ns::run_batch_detailed(heavy, 100, s.master_seed, 1, true);
    const double t_heavy = seconds_since(t0);
    std::size_t steps = 0;
    for (const auto& o : batch.outcomes) steps += o.steps_run;
    const double particles = static_cast<double>(heavy.nanomachines + heavy.biomarkers);
    const double done = static_cast<double>(steps) * particles;
    const double full = 100.0 * static_cast<double>(heavy.step_budget()) * particles;
    const double t_full = t_heavy / done * full;
    report(15, t_default <= kThroughputBudgetSeconds && t_heavy <= kThroughputBudgetSeconds &&
                   t_full <= kThroughputBudgetSeconds,
           "throughput",
           "default " + fmt(t_default, 3) + " s; horizon " + fmt(kThroughputHorizon) + " " + fmt(done / 1e6, 3) +
               "M particle-steps in " + fmt(t_heavy, 3) + " s, extrapolated " + fmt(full / 1e6, 3) + "M in " +
               fmt(t_full, 3) + " s; budget " + fmt(kThroughputBudgetSeconds) + " s single-threaded");
}

} // namespace

int main() {
    const std::vector<std::function<void()>> criteria{criterion_1, criterion_2,  criterion_3,  criterion_4,
                                                      criterion_5, criterion_6,  criterion_7,  criteria_8_9,
                                                      criterion_10, criterion_11, criterion_12, criterion_13,
                                                      criterion_14, criterion_15};
    for (const auto& c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            std::printf("[FAIL] criterion threw: %s\n", e.what());
            ++failures;
        }
    }
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
