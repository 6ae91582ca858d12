// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Every tolerance is pinned here as a constant next to its check.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "onecomp/boundary_criterion.hpp"
#include "onecomp/disk_geometry.hpp"
#include "onecomp/inner_function.hpp"
#include "onecomp/report.hpp"
#include "onecomp/sublevel.hpp"
#include "onecomp/zero_sequence.hpp"

using namespace onecomp;

namespace {

int failures = 0;
std::string detail;

double now() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

void expect(bool ok, const std::string& what) {
    if (!ok) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
}

void report(int id, const char* name, double t0, double budget_s) {
    const double dt = now() - t0;
    if (budget_s > 0 && dt > budget_s)
        expect(false, "runtime " + std::to_string(dt) + "s over budget " +
                          std::to_string(budget_s) + "s");
    const bool pass = detail.empty();
    std::printf("%s c%d %s (%.2fs)%s%s\n", pass ? "PASS" : "FAIL", id, name, dt,
                pass ? "" : " -- ", detail.c_str());
    if (!pass) ++failures;
    detail.clear();
}

InnerSpec atomic_square() {
    return compose(InnerSpec::atomic_s(),
                   InnerSpec::finite_blaschke({Complex(0, 0), Complex(0, 0)}));
}

std::vector<Complex> geometric_points(long n_max) {
    const ZeroSequence seq = ZeroSequence::geometric(n_max);
    std::vector<Complex> pts;
    for (long n = 1; n <= n_max; ++n) pts.push_back(seq.point(n));
    return pts;
}

std::vector<Complex> thin_points() {
    std::vector<Complex> pts;
    for (int n = 2; n <= 6; ++n)
        pts.push_back(Complex(1.0 - std::pow(n, -double(n)), 0.0));
    return pts;
}

struct Experiment {
    std::string name;
    InnerSpec spec;
    std::vector<double> etas;  // ascending
    int levels = 4;
};

std::vector<Experiment> stock_experiments() {
    std::vector<Experiment> xs;
    xs.push_back({"atomic", InnerSpec::atomic_s(), {0.25, 0.5}, 4});
    xs.push_back({"atomic-square", atomic_square(), {0.3, 0.45}, 4});
    xs.push_back({"blaschke-pair",
                  InnerSpec::finite_blaschke({Complex(0.6, 0), Complex(-0.6, 0)}),
                  {0.2, 0.6},
                  4});
    xs.push_back({"geometric",
                  InnerSpec::infinite_blaschke(ZeroSequence::geometric(64)),
                  {0.5},
                  3});
    xs.push_back({"power-2",
                  InnerSpec::infinite_blaschke(ZeroSequence::power(2.0, 10000)),
                  {0.5},
                  4});
    xs.push_back({"hyperbolic-orbit",
                  InnerSpec::infinite_blaschke(ZeroSequence::hyperbolic_orbit(64)),
                  {0.5},
                  3});
    xs.push_back({"parabolic-orbit",
                  InnerSpec::infinite_blaschke(ZeroSequence::parabolic_orbit(2000)),
                  {0.5},
                  2});
    xs.push_back(
        {"thin-truncated", InnerSpec::finite_blaschke(thin_points()), {0.033, 0.2}, 4});
    xs.push_back({"super-exponential",
                  InnerSpec::infinite_blaschke(ZeroSequence::super_exponential(64)),
                  {0.5},
                  3});
    xs.push_back({"frostman-atomic",
                  frostman_shift(InnerSpec::atomic_s(), DiskPoint(0.5, 0.0)),
                  {0.5},
                  3});
    xs.push_back({"two-atoms",
                  InnerSpec::singular_atomic({{BoundaryPoint(1.0, 0.0), 1.0},
                                              {BoundaryPoint(-1.0, 0.0), 1.0}}),
                  {0.5},
                  4});
    return xs;
}

GridPolicy experiment_policy(int levels) {
    GridPolicy p;
    p.levels = levels;
    return p;
}

// ---------------------------------------------------------------------------

void criterion_1() {
    constexpr double kTolOrbit = 1e-13;
    constexpr double kTolCircle = 1e-14;
    constexpr double kTolInterleaved = 1e-6;

    const ZeroSequence hyp = ZeroSequence::hyperbolic_orbit(64);
    for (long j = 1; j <= 30; ++j)
        expect(std::abs(consecutive_rho(hyp, j) - 0.5) <= kTolOrbit,
               "hyperbolic rho at " + std::to_string(j));

    const ZeroSequence par = ZeroSequence::parabolic_orbit(2000);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (long j = 1; j <= 30; ++j) {
        expect(std::abs(consecutive_rho(par, j) - inv_sqrt2) <= kTolOrbit,
               "parabolic rho at " + std::to_string(j));
        expect(std::abs(std::abs(par.point(j) - Complex(0.5, 0.0)) - 0.5) <=
                   kTolCircle,
               "parabolic circle at " + std::to_string(j));
    }

    const VhnRatio v = vhn_ratio(ZeroSequence::geometric(64), 64);
    expect(v.sup == 0.5, "geometric gap ratio not exactly 1/2");

    const ZeroSequence il = ZeroSequence::interleaved_thin(64);
    for (long m = 1; m <= 63; m += 2) {
        const double n = static_cast<double>(2 + (m - 1) / 2);
        const double want = 1.0 / (3.0 - 2.0 * std::pow(n, -n));
        expect(std::abs(consecutive_rho(il, m) - want) <= kTolInterleaved,
               "interleaved pair rho at " + std::to_string(m));
    }
}

void criterion_2() {
    constexpr double kAgreement = 0.999;
    const InnerSpec s = InnerSpec::atomic_s();
    const GridPolicy policy;  // defaults
    // refinement level 3 of the default schedule
    const DiskGrid grid(policy.r_max_schedule[3], policy.cell_cap0 / 8.0);
    for (double eta : {std::exp(-1.0), 0.5, std::exp(-3.0)}) {
        const EuclideanDisk h = horodisk(eta);
        const Classification cls = classify_cells(s, eta, grid, policy);
        long certified = 0, agree = 0;
        for (int j = 0; j < grid.rings(); ++j)
            for (long i = 0; i < grid.ring_cell_count(j); ++i) {
                const CellClass c =
                    cls.classes[static_cast<size_t>(grid.ring_offset(j) + i)];
                if (c == CellClass::Uncertain) continue;
                ++certified;
                if ((c == CellClass::In) == h.contains(grid.cell_center(j, i)))
                    ++agree;
            }
        expect(certified > 0, "no certified cells");
        expect(agree >= static_cast<long>(kAgreement * double(certified)),
               "agreement " + std::to_string(double(agree) / double(certified)) +
                   " at eta " + std::to_string(eta));
        const ConnectivityVerdict verdict = is_connected(s, eta, policy);
        expect(verdict.verdict == Verdict::Connected,
               "not connected at eta " + std::to_string(eta));
    }
}

void criterion_3() {
    constexpr double kWitnessSymmetry = 0.1;
    constexpr double kBracketLo = 0.3, kBracketHi = 0.45;
    const InnerSpec ssq = atomic_square();
    const GridPolicy policy;

    const ConnectivityVerdict low = is_connected(ssq, std::exp(-2.0), policy);
    expect(low.verdict == Verdict::Disconnected, "low threshold not disconnected");
    expect(low.witnesses.size() == 2, "expected two witnesses");
    if (low.witnesses.size() == 2) {
        expect(std::abs(low.witnesses[0] + low.witnesses[1]) <= kWitnessSymmetry,
               "witnesses not mirror-symmetric");
    }
    const ConnectivityVerdict high = is_connected(ssq, 0.5, policy);
    expect(high.verdict == Verdict::Connected, "high threshold not connected");

    const ThresholdBracket br = threshold_search(ssq, 0.02, policy);
    expect(br.status != ThresholdBracket::Status::AllConnected,
           "no flip detected");
    expect(br.lo >= kBracketLo - 1e-12 && br.hi <= kBracketHi + 1e-12,
           "bracket [" + std::to_string(br.lo) + ", " + std::to_string(br.hi) +
               "] escapes [0.3, 0.45]");
    expect(br.lo < std::exp(-1.0) && br.hi > std::exp(-1.0) - 0.05,
           "bracket misses the pinch value");
}

void criterion_4() {
    constexpr double kRatioTol = 1e-9;
    constexpr int kArcPoints = 1000;
    const double kHalfLog = std::log(0.5);

    const InnerSpec s = InnerSpec::atomic_s();
    for (int k = 0; k < kArcPoints; ++k) {
        const double theta = 2.0 * M_PI * (k + 0.5) / kArcPoints;
        const double r = aleksandrov_ratio(s, BoundaryPoint::from_angle(theta));
        expect(std::abs(r - 1.0) <= kRatioTol,
               "ratio off unity at angle " + std::to_string(theta));
    }

    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    std::vector<Complex> zeros;
    while (zeros.size() < 4) {
        const Complex z(u(rng), u(rng));
        if (std::abs(z) < 0.7) zeros.push_back(z);
    }
    const InnerSpec composed =
        compose(InnerSpec::atomic_s(), InnerSpec::finite_blaschke(zeros));
    const CriterionReport rep = criterion_scan(composed);
    expect(std::isfinite(rep.sup_ratio) && std::isfinite(rep.sup_ratio_dense),
           "sup not finite");
    expect(rep.sup_stable, "sup not stable across the two sampling densities");
    expect(!rep.probes.empty(), "no spectrum points probed");
    for (const RadialProbe& p : rep.probes)
        expect(p.last_log_modulus < kHalfLog,
               "radial modulus not below 1/2 near a spectrum point");
}

void criterion_5() {
    constexpr long kTrunc = 20;
    constexpr double kSigmaPad = 0.1;
    constexpr long kAxisSamples = 20000;

    const std::vector<Complex> zeros = geometric_points(kTrunc);
    const InnerSpec trunc = InnerSpec::finite_blaschke(zeros);
    const ZeroSequence seq = ZeroSequence::explicit_list(zeros);

    double delta = 1.0;
    for (long n = 1; n <= kTrunc; ++n)
        delta = std::min(delta, interp_delta_n(seq, n, kTrunc));
    expect(delta > 0.0 && delta < 1.0, "degenerate interpolation constant");
    const HoffmanConstants h = hoffman_constants(delta);
    const double eta = h.eta, eps = h.epsilon;

    // the pseudo-disks are pairwise disjoint: centers further apart than the
    // diameter bound 2 eta / (1 + eta^2)
    const double min_sep = 2.0 * eta / (1.0 + eta * eta);
    for (long n = 1; n <= kTrunc; ++n)
        for (long m = n + 1; m <= kTrunc; ++m)
            expect(seq.pair_rho(n, m) > min_sep,
                   "pseudo-disks touch at pair " + std::to_string(n) + "," +
                       std::to_string(m));

    // every grid cell certified inside the eps-sublevel set sits in the union
    const GridPolicy policy;
    const DiskGrid grid(policy.r_max_schedule[3], policy.cell_cap0 / 8.0);
    const Classification cls = classify_cells(trunc, eps, grid, policy);
    auto in_union = [&](Complex z) {
        for (const Complex& zn : zeros)
            if (pseudo_dist(z, zn) <= eta) return true;
        return false;
    };
    long in_cells = 0;
    for (int j = 0; j < grid.rings(); ++j)
        for (long i = 0; i < grid.ring_cell_count(j); ++i)
            if (cls.classes[static_cast<size_t>(grid.ring_offset(j) + i)] ==
                CellClass::In) {
                ++in_cells;
                expect(in_union(grid.cell_center(j, i)),
                       "sublevel cell outside the pseudo-disk union");
            }

    // the grid check can be vacuous at tiny eps, so also walk the radius
    // where the zeros live and test the inclusion pointwise
    long below = 0;
    for (long k = 0; k < kAxisSamples; ++k) {
        const double x = double(k) / double(kAxisSamples);
        if (std::abs(eval(trunc, Complex(x, 0)).value) < eps) {
            ++below;
            expect(in_union(Complex(x, 0)),
                   "axis point in sublevel set but outside the union");
        }
    }
    for (const Complex& zn : zeros) {
        ++below;
        expect(in_union(zn), "zero escapes its own pseudo-disk");
    }
    expect(below > 0, "inclusion check never exercised");
    std::ignore = in_cells;

    // above the largest consecutive gap distance the set fuses
    double sigma = 0.0;
    for (long n = 1; n < kTrunc; ++n)
        sigma = std::max(sigma, consecutive_rho(seq, n));
    sigma += kSigmaPad;
    const ConnectivityVerdict v = is_connected(trunc, sigma, policy);
    expect(v.verdict == Verdict::Connected,
           "not connected at sigma " + std::to_string(sigma));
}

void criterion_6() {
    const std::vector<Complex> zeros = thin_points();
    const InnerSpec thin = InnerSpec::finite_blaschke(zeros);
    const ZeroSequence seq = ZeroSequence::explicit_list(zeros);

    double delta = 1.0;
    for (long n = 1; n <= static_cast<long>(zeros.size()); ++n)
        delta = std::min(delta, interp_delta_n(seq, n, zeros.size()));
    const HoffmanConstants h = hoffman_constants(delta);

    const GridPolicy policy;
    const ConnectivityVerdict v = is_connected(thin, h.epsilon, policy);
    expect(v.verdict == Verdict::Disconnected,
           "thin spec not disconnected at eps " + std::to_string(h.epsilon));
    expect(v.in_components >= 2, "fewer than two components");

    // each component holds exactly one of the zeros inside the grid
    const DiskGrid grid(v.grid.r_max, v.grid.cell_cap);
    std::vector<int> zero_count(v.in_map.components.size(), 0);
    long inside = 0;
    for (const Complex& z : zeros) {
        int ring;
        long idx;
        if (!grid.locate(z, ring, idx)) continue;  // beyond the sampling rim
        ++inside;
        const int label = v.in_map.label_at(ring, idx);
        expect(label >= 0, "zero not inside any component");
        if (label >= 0) ++zero_count[static_cast<size_t>(label)];
    }
    expect(inside == static_cast<long>(v.in_map.components.size()),
           "component count differs from zero count (" + std::to_string(inside) +
               " zeros vs " + std::to_string(v.in_map.components.size()) +
               " components)");
    for (size_t c = 0; c < zero_count.size(); ++c)
        expect(zero_count[c] == 1,
               "component " + std::to_string(c) + " holds " +
                   std::to_string(zero_count[c]) + " zeros");
}

void criterion_7() {
    for (const Experiment& x : stock_experiments()) {
        const GridPolicy policy = experiment_policy(x.levels);
        for (double eta : x.etas) {
            const ConnectivityVerdict v = is_connected(x.spec, eta, policy);
            // rebuild the final grid and validate every component's shape
            const DiskGrid grid(v.grid.r_max, v.grid.cell_cap);
            const Classification cls = classify_cells(x.spec, eta, grid, policy);
            const std::vector<Complex> zeros =
                collect_leaf_zeros(x.spec, grid.r_max());
            const ComponentMap map = label_components(
                grid, cls.classes, false, cls.log_mod, zeros);
            const TopologyReport topo = topology_checks(grid, cls.classes, map);
            for (size_t c = 0; c < topo.simply_connected.size(); ++c) {
                expect(topo.simply_connected[c],
                       x.name + " eta " + std::to_string(eta) + " component " +
                           std::to_string(c) + " not simply connected");
                expect(topo.zero_or_rim[c],
                       x.name + " eta " + std::to_string(eta) + " component " +
                           std::to_string(c) + " has no zero and misses the rim");
            }
        }

        // growing the threshold on one fixed grid can only grow the IN set
        // and merge components, never split one
        if (x.etas.size() < 2) continue;
        const GridPolicy fixed = experiment_policy(2);
        const DiskGrid grid(0.99, 0.15);
        std::vector<ComponentMap> maps;
        std::vector<Classification> clss;
        for (double eta : x.etas) {  // ascending
            clss.push_back(classify_cells(x.spec, eta, grid, fixed));
            maps.push_back(label_components(grid, clss.back().classes, false,
                                            clss.back().log_mod, {}));
        }
        for (size_t step = 0; step + 1 < maps.size(); ++step) {
            const auto& lo_cls = clss[step].classes;
            const auto& hi_cls = clss[step + 1].classes;
            std::vector<int> image(maps[step].components.size(), -1);
            for (int j = 0; j < grid.rings(); ++j)
                for (long i = 0; i < grid.ring_cell_count(j); ++i) {
                    const size_t g = static_cast<size_t>(grid.ring_offset(j) + i);
                    if (lo_cls[g] != CellClass::In) continue;
                    expect(hi_cls[g] == CellClass::In,
                           x.name + " cell leaves the sublevel set as eta grows");
                    const int lo_label = maps[step].label_at(j, i);
                    const int hi_label = maps[step + 1].label_at(j, i);
                    if (lo_label < 0) continue;
                    int& img = image[static_cast<size_t>(lo_label)];
                    if (img == -1) img = hi_label;
                    expect(img == hi_label,
                           x.name + " component splits as eta grows");
                }
        }
    }
}

void criterion_8() {
    // identical reruns byte-for-byte (timing aside)
    for (const Experiment& x : stock_experiments()) {
        AnalyzeOptions opt;
        opt.etas = x.etas;
        opt.policy = experiment_policy(x.levels);
        Json a = analyze_report(x.spec, opt);
        Json b = analyze_report(x.spec, opt);
        expect(a.at("content_hash") == b.at("content_hash"),
               x.name + " hash differs between reruns");
        a.erase("timing");
        b.erase("timing");
        expect(dump_report(a) == dump_report(b),
               x.name + " report differs between reruns");
    }

    // worker count must not leak into any classification
    GridPolicy p1;
    p1.workers = 1;
    GridPolicy p8 = p1;
    p8.workers = 8;
    const DiskGrid grid(0.999, 0.1);
    for (const InnerSpec& u :
         {InnerSpec::atomic_s(), atomic_square(),
          InnerSpec::infinite_blaschke(ZeroSequence::geometric(64))}) {
        const Classification a = classify_cells(u, 0.4, grid, p1);
        const Classification b = classify_cells(u, 0.4, grid, p8);
        expect(a.classes == b.classes, "worker count changes cell classes");
        bool same = a.log_mod.size() == b.log_mod.size();
        for (size_t i = 0; same && i < a.log_mod.size(); ++i)
            same = a.log_mod[i] == b.log_mod[i];
        expect(same, "worker count changes sampled values");
        const ConnectivityVerdict v1 = is_connected(u, 0.4, p1);
        const ConnectivityVerdict v8 = is_connected(u, 0.4, p8);
        expect(v1.verdict == v8.verdict, "worker count changes the verdict");
    }
}

}  // namespace

int main() {
    double t = now();
    criterion_1();
    report(1, "closed-form sequence constants", t, 1.0);

    t = now();
    criterion_2();
    report(2, "atomic sublevel sets match horodisks", t, 30.0);

    t = now();
    criterion_3();
    report(3, "squared atomic connectivity flip", t, 60.0);

    t = now();
    criterion_4();
    report(4, "boundary derivative criterion", t, 10.0);

    t = now();
    criterion_5();
    report(5, "pseudo-disk inclusion at truncation", t, 60.0);

    t = now();
    criterion_6();
    report(6, "thin zeros split into singleton components", t, 60.0);

    t = now();
    criterion_7();
    report(7, "component topology and threshold monotonicity", t, 0.0);

    t = now();
    criterion_8();
    report(8, "deterministic reports and worker independence", t, 0.0);

    std::printf("%s\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL");
    return failures == 0 ? 0 : 1;
}
