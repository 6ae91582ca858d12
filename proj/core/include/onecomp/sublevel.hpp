#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "onecomp/inner_function.hpp"

namespace onecomp {

/// Refinement and classification policy for connectivity analysis.
struct GridPolicy {
    int levels = 4;
    std::vector<double> r_max_schedule = {0.9, 0.99, 0.999, 0.9999};
    /// Cell diameter cap relative to 1 - |center| at level 0; halves per level.
    double cell_cap0 = 0.6;
    /// Certified truncation tolerance for log|u| at cell centers.
    double log_tol = 0.02;
    int workers = 0;  // 0 -> hardware concurrency
};

/// Polar grid over {|z| <= r_max} with geometric radial refinement toward
/// the boundary: ring edges satisfy 1 - e_j = (1 - r_max)^{j/K}, and each
/// ring's angular count scales like 1/(1 - r).  Every cell has diameter
/// <= cell_cap * (1 - |center|); angular counts are even so the grid is
/// symmetric under z -> -z.
class DiskGrid {
  public:
    DiskGrid(double r_max, double cell_cap);

    int rings() const { return static_cast<int>(counts_.size()); }
    long cells() const { return total_; }
    long ring_cell_count(int j) const { return counts_[static_cast<size_t>(j)]; }
    long ring_offset(int j) const { return offsets_[static_cast<size_t>(j)]; }
    double ring_inner(int j) const { return edges_[static_cast<size_t>(j)]; }
    double ring_outer(int j) const { return edges_[static_cast<size_t>(j) + 1]; }
    double ring_center_radius(int j) const {
        return 0.5 * (ring_inner(j) + ring_outer(j));
    }
    double cell_diameter(int j) const { return diam_[static_cast<size_t>(j)]; }
    Complex cell_center(int j, long i) const;
    double r_max() const { return r_max_; }
    double cell_cap() const { return cap_; }

    /// Ring/index of the cell containing z; false if |z| >= r_max.
    bool locate(Complex z, int& ring, long& idx) const;

  private:
    double r_max_, cap_;
    std::vector<double> edges_;
    std::vector<long> counts_;
    std::vector<long> offsets_;
    std::vector<double> diam_;
    long total_ = 0;
};

enum class CellClass : std::uint8_t { Out = 0, In = 1, Uncertain = 2 };

struct Classification {
    std::vector<CellClass> classes;  // indexed by grid global cell index
    std::vector<float> log_mod;      // sampled log|u| at centers
};

/// Classify every cell of the grid against the sublevel threshold eta.
/// IN/OUT are claims about the cell center with margin
/// m = margin_scale * (truncation err + within-cell variation slack).
Classification classify_cells(const InnerSpec& u, double eta, const DiskGrid& grid,
                              const GridPolicy& policy, double margin_scale = 1.0);

struct ComponentStats {
    long cells = 0;
    double min_log_mod = 0.0;
    double r_lo = 1.0, r_hi = 0.0;  // bounding annulus
    bool contains_zero = false;
    bool touches_rim = false;
    int witness_ring = -1;
    long witness_idx = -1;
};

/// Component labels over the selected cells, run-length encoded by ring.
struct ComponentMap {
    struct Run {
        long begin = 0, end = 0;  // cell index range [begin, end)
        int label = -1;
    };
    std::vector<std::vector<Run>> runs;  // per ring, sorted by begin
    std::vector<ComponentStats> components;

    int label_at(int ring, long idx) const;
    int size() const { return static_cast<int>(components.size()); }
};

/// Union-find labeling of IN cells (or IN + UNCERTAIN when include_uncertain)
/// under edge-sharing adjacency: same-ring neighbors plus ring-to-ring pairs
/// whose angular arcs overlap with positive measure.
ComponentMap label_components(const DiskGrid& grid,
                              std::span<const CellClass> classes,
                              bool include_uncertain,
                              std::span<const float> log_mod = {},
                              std::span<const Complex> zeros = {});

enum class Verdict { Connected, Disconnected, Unresolved };

const char* to_string(Verdict v);

struct GridSummary {
    int level = 0;
    double r_max = 0.0;
    double cell_cap = 0.0;
    long cells = 0;
    int rings = 0;
    bool r_max_clipped = false;
};

struct ConnectivityVerdict {
    Verdict verdict = Verdict::Unresolved;
    double eta = 0.0;
    GridSummary grid;
    std::vector<Complex> witnesses;  // disconnected: one IN center per component
    int in_components = 0;
    int merged_components = 0;  // components of IN + UNCERTAIN containing IN cells
    long in_cells = 0;
    long uncertain_cells = 0;
    int refinement_levels_used = 0;
    ComponentMap in_map;  // final-level IN components
};

/// Refines through the policy schedule until a verdict is robust:
/// connected needs a nonempty IN set forming one component whose
/// IN+UNCERTAIN hull is also one component; disconnected needs >= 2
/// IN-bearing components after merging UNCERTAIN cells, stable under
/// halving the classification margin.  Truncated specs whose certified
/// radius clips the schedule never upgrade a rim-touching picture beyond
/// unresolved.
ConnectivityVerdict is_connected(const InnerSpec& u, double eta,
                                 const GridPolicy& policy = {});

struct ThresholdBracket {
    enum class Status { Flipped, AllConnected, Unresolved };
    Status status = Status::Unresolved;
    double lo = 0.0, hi = 0.0;
    std::vector<std::pair<double, Verdict>> probes;
};

/// Bisection on eta justified by monotonicity of connectedness.
ThresholdBracket threshold_search(const InnerSpec& u, double tol_eta,
                                  const GridPolicy& policy = {},
                                  double eta_hi0 = 0.6);

struct TopologyReport {
    std::vector<bool> simply_connected;  // per component: no enclosed pocket
    std::vector<bool> zero_or_rim;       // contains-zero or touches-rim
    bool all_pass() const;
};

TopologyReport topology_checks(const DiskGrid& grid,
                               std::span<const CellClass> classes,
                               const ComponentMap& map);

}  // namespace onecomp
