#include "onecomp/sublevel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "onecomp/errors.hpp"

namespace onecomp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Diameter cap splits between the radial and angular extent of a cell.
constexpr double kAxisShare = 1.5;

}  // namespace

DiskGrid::DiskGrid(double r_max, double cell_cap) : r_max_(r_max), cap_(cell_cap) {
    if (!(r_max > 0.0 && r_max < 1.0))
        throw ValidationError("grid r_max must lie in (0, 1)");
    if (!(cell_cap > 0.0 && cell_cap < 1.0))
        throw ValidationError("cell_cap must lie in (0, 1)");

    const double a = cell_cap / kAxisShare;
    const double t = 1.0 - r_max;
    const double s_target = (2.0 - a) / (2.0 + a);
    const int K =
        std::max(1, static_cast<int>(std::ceil(std::log(t) / std::log(s_target))));

    edges_.resize(static_cast<size_t>(K) + 1);
    for (int j = 0; j <= K; ++j)
        edges_[static_cast<size_t>(j)] =
            1.0 - std::pow(t, static_cast<double>(j) / K);
    edges_.front() = 0.0;
    edges_.back() = r_max;

    counts_.resize(static_cast<size_t>(K));
    offsets_.resize(static_cast<size_t>(K));
    diam_.resize(static_cast<size_t>(K));
    for (int j = 0; j < K; ++j) {
        const double lo = edges_[static_cast<size_t>(j)];
        const double hi = edges_[static_cast<size_t>(j) + 1];
        const double gap_c = 1.0 - 0.5 * (lo + hi);
        long m = static_cast<long>(std::ceil(kTwoPi * hi / (a * gap_c)));
        m = std::max<long>(m, 8);
        m += m & 1;  // even: grid symmetric under z -> -z
        counts_[static_cast<size_t>(j)] = m;
        offsets_[static_cast<size_t>(j)] = total_;
        diam_[static_cast<size_t>(j)] =
            std::hypot(hi - lo, kTwoPi * hi / static_cast<double>(m));
        total_ += m;
    }
}

Complex DiskGrid::cell_center(int j, long i) const {
    const double r = ring_center_radius(j);
    const double theta =
        kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(ring_cell_count(j));
    return std::polar(r, theta);
}

bool DiskGrid::locate(Complex z, int& ring, long& idx) const {
    const double r = std::abs(z);
    if (r >= r_max_) return false;
    const int K = rings();
    const double t = 1.0 - r_max_;
    int j = 0;
    if (r > 0.0) {
        const double x = std::log1p(-r) / std::log(t) * K;
        j = std::clamp(static_cast<int>(x), 0, K - 1);
    }
    while (j > 0 && r < edges_[static_cast<size_t>(j)]) --j;
    while (j + 1 < K && r >= edges_[static_cast<size_t>(j) + 1]) ++j;

    double theta = std::atan2(z.imag(), z.real());
    if (theta < 0.0) theta += kTwoPi;
    const long m = ring_cell_count(j);
    idx = std::clamp(static_cast<long>(theta / kTwoPi * static_cast<double>(m)),
                     0L, m - 1);
    ring = j;
    return true;
}

Classification classify_cells(const InnerSpec& u, double eta, const DiskGrid& grid,
                              const GridPolicy& policy, double margin_scale) {
    if (!(eta > 0.0 && eta < 1.0))
        throw EtaOutOfRange("sublevel threshold must lie in (0, 1)");
    const double log_eta = std::log(eta);

    Classification out;
    out.classes.assign(static_cast<size_t>(grid.cells()), CellClass::Uncertain);
    out.log_mod.assign(static_cast<size_t>(grid.cells()), 0.0f);

    const int rings = grid.rings();
    std::vector<double> slack_factor(static_cast<size_t>(rings));
    for (int j = 0; j < rings; ++j) {
        // Within-cell variation of log|u| (a negative harmonic function) over
        // a cell of diameter d at distance gap from the boundary is bounded by
        // |L| * d / (gap - d/2), Harnack on the disk of radius gap.
        const double cq = grid.cell_diameter(j) / (1.0 - grid.ring_center_radius(j));
        slack_factor[static_cast<size_t>(j)] = cq / (1.0 - 0.5 * cq);
    }

    int n_workers = policy.workers > 0
                        ? policy.workers
                        : static_cast<int>(std::thread::hardware_concurrency());
    n_workers = std::max(1, n_workers);

    std::atomic<int> next_ring{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mu;

    auto work = [&] {
        for (;;) {
            const int j = next_ring.fetch_add(1);
            if (j >= rings || failed.load()) return;
            try {
                const long m = grid.ring_cell_count(j);
                const long base = grid.ring_offset(j);
                const double sf = slack_factor[static_cast<size_t>(j)];
                for (long i = 0; i < m; ++i) {
                    const Complex z = grid.cell_center(j, i);
                    const LogModulus lm = eval_log_modulus(u, z, policy.log_tol);
                    const size_t gi = static_cast<size_t>(base + i);
                    out.log_mod[gi] = static_cast<float>(lm.value);
                    if (lm.value == -std::numeric_limits<double>::infinity()) {
                        out.classes[gi] = CellClass::In;
                        continue;
                    }
                    if (!std::isfinite(lm.err)) continue;  // Uncertain
                    const double margin =
                        margin_scale * (lm.err + sf * std::abs(lm.value));
                    if (lm.value < log_eta - margin)
                        out.classes[gi] = CellClass::In;
                    else if (lm.value > log_eta + margin)
                        out.classes[gi] = CellClass::Out;
                }
            } catch (...) {
                std::scoped_lock lk(error_mu);
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };

    if (n_workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    int add() {
        parent.push_back(static_cast<int>(parent.size()));
        return parent.back();
    }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x != y) parent[static_cast<size_t>(std::max(x, y))] = std::min(x, y);
    }
};

using RawRun = std::pair<long, long>;  // [begin, end)

// Angular arcs [b1/m1, e1/m1) and [b2/m2, e2/m2) overlap with positive measure.
bool arcs_overlap(long b1, long e1, long m1, long b2, long e2, long m2) {
    return b1 * m2 < e2 * m1 && b2 * m1 < e1 * m2;
}

// Connected-component labels for arbitrary per-ring run sets.  Adjacency:
// intra-ring wraparound (first/last run touching angle 0 == 2pi) and
// ring-to-ring angular overlap.  Labels are assigned in order of first
// appearance, ring-major, so the result is deterministic.
std::vector<std::vector<ComponentMap::Run>> unite_runs(
    const DiskGrid& grid, const std::vector<std::vector<RawRun>>& raw,
    int& n_components) {
    const int rings = grid.rings();
    UnionFind uf;
    std::vector<std::vector<int>> ids(static_cast<size_t>(rings));
    for (int j = 0; j < rings; ++j) {
        auto& ring_ids = ids[static_cast<size_t>(j)];
        const auto& runs = raw[static_cast<size_t>(j)];
        ring_ids.reserve(runs.size());
        for (size_t k = 0; k < runs.size(); ++k) ring_ids.push_back(uf.add());
        const long m = grid.ring_cell_count(j);
        if (runs.size() >= 2 && runs.front().first == 0 && runs.back().second == m)
            uf.unite(ring_ids.front(), ring_ids.back());
        if (j > 0) {
            const auto& prev = raw[static_cast<size_t>(j) - 1];
            const auto& prev_ids = ids[static_cast<size_t>(j) - 1];
            const long m0 = grid.ring_cell_count(j - 1);
            size_t p = 0, q = 0;
            while (p < prev.size() && q < runs.size()) {
                if (arcs_overlap(prev[p].first, prev[p].second, m0, runs[q].first,
                                 runs[q].second, m))
                    uf.unite(prev_ids[p], ring_ids[q]);
                // advance the run that ends first in angle
                if (prev[p].second * m <= runs[q].second * m0)
                    ++p;
                else
                    ++q;
            }
        }
    }

    std::vector<int> label_of_root(uf.parent.size(), -1);
    n_components = 0;
    std::vector<std::vector<ComponentMap::Run>> out(static_cast<size_t>(rings));
    for (int j = 0; j < rings; ++j) {
        const auto& runs = raw[static_cast<size_t>(j)];
        auto& labeled = out[static_cast<size_t>(j)];
        labeled.reserve(runs.size());
        for (size_t k = 0; k < runs.size(); ++k) {
            const int root = uf.find(ids[static_cast<size_t>(j)][k]);
            if (label_of_root[static_cast<size_t>(root)] < 0)
                label_of_root[static_cast<size_t>(root)] = n_components++;
            labeled.push_back({runs[k].first, runs[k].second,
                               label_of_root[static_cast<size_t>(root)]});
        }
    }
    return out;
}

std::vector<std::vector<RawRun>> runs_from_classes(
    const DiskGrid& grid, std::span<const CellClass> classes, bool include_uncertain) {
    const int rings = grid.rings();
    std::vector<std::vector<RawRun>> raw(static_cast<size_t>(rings));
    for (int j = 0; j < rings; ++j) {
        const long m = grid.ring_cell_count(j);
        const long base = grid.ring_offset(j);
        auto& runs = raw[static_cast<size_t>(j)];
        long start = -1;
        for (long i = 0; i < m; ++i) {
            const CellClass c = classes[static_cast<size_t>(base + i)];
            const bool member =
                c == CellClass::In || (include_uncertain && c == CellClass::Uncertain);
            if (member && start < 0) start = i;
            if (!member && start >= 0) {
                runs.push_back({start, i});
                start = -1;
            }
        }
        if (start >= 0) runs.push_back({start, m});
    }
    return raw;
}

}  // namespace

int ComponentMap::label_at(int ring, long idx) const {
    const auto& ring_runs = runs[static_cast<size_t>(ring)];
    auto it = std::upper_bound(ring_runs.begin(), ring_runs.end(), idx,
                               [](long v, const Run& r) { return v < r.begin; });
    if (it == ring_runs.begin()) return -1;
    --it;
    return idx < it->end ? it->label : -1;
}

ComponentMap label_components(const DiskGrid& grid,
                              std::span<const CellClass> classes,
                              bool include_uncertain,
                              std::span<const float> log_mod,
                              std::span<const Complex> zeros) {
    ComponentMap map;
    const auto raw = runs_from_classes(grid, classes, include_uncertain);
    int n = 0;
    map.runs = unite_runs(grid, raw, n);
    map.components.assign(static_cast<size_t>(n), {});
    for (auto& st : map.components)
        st.min_log_mod = std::numeric_limits<double>::quiet_NaN();

    const int rings = grid.rings();
    for (int j = 0; j < rings; ++j) {
        const long base = grid.ring_offset(j);
        for (const auto& run : map.runs[static_cast<size_t>(j)]) {
            auto& st = map.components[static_cast<size_t>(run.label)];
            st.cells += run.end - run.begin;
            st.r_lo = std::min(st.r_lo, grid.ring_inner(j));
            st.r_hi = std::max(st.r_hi, grid.ring_outer(j));
            if (j == rings - 1) st.touches_rim = true;
            for (long i = run.begin; i < run.end; ++i) {
                const size_t gi = static_cast<size_t>(base + i);
                if (!log_mod.empty()) {
                    const double v = log_mod[gi];
                    if (std::isnan(st.min_log_mod) || v < st.min_log_mod)
                        st.min_log_mod = v;
                }
                if (st.witness_ring < 0 && classes[gi] == CellClass::In) {
                    st.witness_ring = j;
                    st.witness_idx = i;
                }
            }
        }
    }

    for (const Complex& zero : zeros) {
        int jr = 0;
        long idx = 0;
        if (!grid.locate(zero, jr, idx)) continue;
        int label = map.label_at(jr, idx);
        if (label < 0) {
            // a zero sitting on a cell edge may classify into a neighbor
            const long m = grid.ring_cell_count(jr);
            const long left = (idx + m - 1) % m, right = (idx + 1) % m;
            label = map.label_at(jr, left);
            if (label < 0) label = map.label_at(jr, right);
            for (int dj : {-1, 1}) {
                if (label >= 0) break;
                const int nj = jr + dj;
                if (nj < 0 || nj >= grid.rings()) continue;
                int j2 = 0;
                long i2 = 0;
                if (grid.locate(std::polar(grid.ring_center_radius(nj),
                                           std::arg(zero) < 0
                                               ? std::arg(zero) + kTwoPi
                                               : std::arg(zero)),
                                j2, i2))
                    label = map.label_at(j2, i2);
            }
        }
        if (label >= 0)
            map.components[static_cast<size_t>(label)].contains_zero = true;
    }
    return map;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Connected: return "connected";
        case Verdict::Disconnected: return "disconnected";
        default: return "unresolved";
    }
}

namespace {

// Merged (IN + UNCERTAIN) components that contain at least one IN cell.
std::vector<char> in_bearing(const DiskGrid& grid, const ComponentMap& in_map,
                             const ComponentMap& merged) {
    std::vector<char> bearing(static_cast<size_t>(merged.size()), 0);
    for (int j = 0; j < grid.rings(); ++j)
        for (const auto& run : in_map.runs[static_cast<size_t>(j)]) {
            const int lbl = merged.label_at(j, run.begin);
            if (lbl >= 0) bearing[static_cast<size_t>(lbl)] = 1;
        }
    return bearing;
}

int count_set(const std::vector<char>& v) {
    return static_cast<int>(std::count(v.begin(), v.end(), 1));
}

}  // namespace

ConnectivityVerdict is_connected(const InnerSpec& u, double eta,
                                 const GridPolicy& policy) {
    if (!(eta > 0.0 && eta < 1.0))
        throw EtaOutOfRange("sublevel threshold must lie in (0, 1)");
    if (policy.levels < 1 || policy.r_max_schedule.empty())
        throw ValidationError("grid policy needs at least one refinement level");

    double r_cert = std::min(certified_radius(u, 0.5 * policy.log_tol), 1.0 - 1e-9);

    ConnectivityVerdict result;
    result.eta = eta;
    Verdict prev = Verdict::Unresolved;
    bool have_prev = false;

    for (int level = 0; level < policy.levels; ++level) {
        const double r_sched = policy.r_max_schedule[std::min(
            static_cast<size_t>(level), policy.r_max_schedule.size() - 1)];
        const bool clipped = r_cert < r_sched;
        const double r_max = std::min(r_sched, r_cert);
        if (r_max < 0.5)
            throw TruncationBudgetExceeded(
                "certified radius too small for connectivity analysis");
        const double cap = std::ldexp(policy.cell_cap0, -level);

        DiskGrid grid(r_max, cap);
        auto cls = classify_cells(u, eta, grid, policy);
        const auto zeros = collect_leaf_zeros(u, r_max);
        auto in_map = label_components(grid, cls.classes, false, cls.log_mod, zeros);
        auto merged = label_components(grid, cls.classes, true, cls.log_mod, zeros);
        const auto bearing = in_bearing(grid, in_map, merged);
        const int n_bearing = count_set(bearing);

        Verdict v = Verdict::Unresolved;
        if (in_map.size() == 1 && n_bearing == 1) {
            v = Verdict::Connected;
        } else if (n_bearing >= 2) {
            // stability: the separation must survive halving the margin
            auto cls2 = classify_cells(u, eta, grid, policy, 0.5);
            auto in2 = label_components(grid, cls2.classes, false);
            auto merged2 = label_components(grid, cls2.classes, true);
            if (count_set(in_bearing(grid, in2, merged2)) >= 2)
                v = Verdict::Disconnected;
        }

        // A truncation-clipped grid cannot certify structure reaching its rim:
        // whatever happens beyond r_max could reconnect or split it.
        if (v != Verdict::Unresolved && clipped) {
            bool rim = false;
            for (size_t c = 0; c < bearing.size(); ++c)
                if (bearing[c] && merged.components[c].touches_rim) rim = true;
            if (rim) v = Verdict::Unresolved;
        }

        result.verdict = v;
        result.grid = {level, r_max, cap, grid.cells(), grid.rings(), clipped};
        result.in_components = in_map.size();
        result.merged_components = n_bearing;
        result.in_cells = 0;
        result.uncertain_cells = 0;
        for (const CellClass c : cls.classes) {
            if (c == CellClass::In) ++result.in_cells;
            else if (c == CellClass::Uncertain) ++result.uncertain_cells;
        }
        result.witnesses.clear();
        if (v == Verdict::Disconnected) {
            std::vector<char> seen(static_cast<size_t>(merged.size()), 0);
            for (const auto& st : in_map.components) {
                if (st.witness_ring < 0) continue;
                const int lbl = merged.label_at(st.witness_ring, st.witness_idx);
                if (lbl >= 0 && !seen[static_cast<size_t>(lbl)]) {
                    seen[static_cast<size_t>(lbl)] = 1;
                    result.witnesses.push_back(
                        grid.cell_center(st.witness_ring, st.witness_idx));
                }
            }
        }
        result.refinement_levels_used = level + 1;
        result.in_map = std::move(in_map);

        // accept a resolved verdict confirmed by two consecutive levels;
        // otherwise keep refining and let the final level stand on its own
        if (have_prev && v != Verdict::Unresolved && v == prev) break;
        prev = v;
        have_prev = true;
    }
    return result;
}

ThresholdBracket threshold_search(const InnerSpec& u, double tol_eta,
                                  const GridPolicy& policy, double eta_hi0) {
    if (!(tol_eta > 0.0)) throw ValidationError("tol_eta must be positive");
    ThresholdBracket out;
    auto probe = [&](double eta) {
        const Verdict v = is_connected(u, eta, policy).verdict;
        out.probes.emplace_back(eta, v);
        return v;
    };

    double hi = std::clamp(eta_hi0, 1e-3, 0.95);
    Verdict vh = probe(hi);
    while (vh != Verdict::Connected && hi < 0.95) {
        hi = std::min(0.95, hi * 1.25);
        vh = probe(hi);
    }
    if (vh != Verdict::Connected) {
        out.status = ThresholdBracket::Status::Unresolved;
        out.lo = 0.0;
        out.hi = hi;
        return out;
    }

    double lo = hi / 2.0;
    Verdict vl = probe(lo);
    while (vl == Verdict::Connected && lo > 1e-3) {
        hi = lo;
        lo /= 2.0;
        vl = probe(lo);
    }
    if (vl == Verdict::Connected) {
        out.status = ThresholdBracket::Status::AllConnected;
        out.lo = 0.0;
        out.hi = lo;
        return out;
    }
    if (vl == Verdict::Unresolved) {
        out.status = ThresholdBracket::Status::Unresolved;
        out.lo = lo;
        out.hi = hi;
        return out;
    }

    // invariant: lo disconnected, hi connected
    while (hi - lo > tol_eta) {
        const double mid = 0.5 * (lo + hi);
        const Verdict vm = probe(mid);
        if (vm == Verdict::Connected) {
            hi = mid;
        } else if (vm == Verdict::Disconnected) {
            lo = mid;
        } else {
            out.status = ThresholdBracket::Status::Unresolved;
            out.lo = lo;
            out.hi = hi;
            return out;
        }
    }
    out.status = ThresholdBracket::Status::Flipped;
    out.lo = lo;
    out.hi = hi;
    return out;
}

bool TopologyReport::all_pass() const {
    for (size_t i = 0; i < simply_connected.size(); ++i)
        if (!simply_connected[i] || !zero_or_rim[i]) return false;
    return true;
}

TopologyReport topology_checks(const DiskGrid& grid,
                               std::span<const CellClass> classes,
                               const ComponentMap& map) {
    (void)classes;
    TopologyReport rep;
    const int rings = grid.rings();
    rep.simply_connected.resize(static_cast<size_t>(map.size()), true);
    rep.zero_or_rim.resize(static_cast<size_t>(map.size()));
    for (int c = 0; c < map.size(); ++c) {
        rep.zero_or_rim[static_cast<size_t>(c)] =
            map.components[static_cast<size_t>(c)].contains_zero ||
            map.components[static_cast<size_t>(c)].touches_rim;

        // Complement runs of component c, built by inverting its member runs.
        std::vector<std::vector<RawRun>> comp(static_cast<size_t>(rings));
        for (int j = 0; j < rings; ++j) {
            const long m = grid.ring_cell_count(j);
            auto& cruns = comp[static_cast<size_t>(j)];
            long cursor = 0;
            for (const auto& run : map.runs[static_cast<size_t>(j)]) {
                if (run.label != c) continue;
                if (run.begin > cursor) cruns.push_back({cursor, run.begin});
                cursor = run.end;
            }
            if (cursor < m) cruns.push_back({cursor, m});
        }
        int n = 0;
        const auto labeled = unite_runs(grid, comp, n);
        // an enclosed pocket is a complement component never reaching the rim
        std::vector<char> reaches_rim(static_cast<size_t>(n), 0);
        for (const auto& run : labeled[static_cast<size_t>(rings) - 1])
            reaches_rim[static_cast<size_t>(run.label)] = 1;
        for (int k = 0; k < n; ++k)
            if (!reaches_rim[static_cast<size_t>(k)]) {
                rep.simply_connected[static_cast<size_t>(c)] = false;
                break;
            }
    }
    return rep;
}

}  // namespace onecomp
