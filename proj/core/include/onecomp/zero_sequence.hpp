#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "onecomp/disk_geometry.hpp"
#include "onecomp/errors.hpp"

namespace onecomp {

enum class GeneratorKind {
    Geometric,        // z_n = 1 - 2^-n
    Power,            // z_n = 1 - n^-p, p > 1
    HyperbolicOrbit,  // x_j = (3^j - 1)/(3^j + 1)
    ParabolicOrbit,   // z_n = n/(n - i)
    InterleavedThin,  // pairs 1 - n^-n, 1 - 2 n^-n for n >= 2
    SuperExponential, // z_n = 1 - n^-n
    Explicit,
};

/// Deterministic closed-form zero sequence with a Blaschke-sum convergence
/// certificate.  Points near the boundary are handled through their gap
/// 1 - z_n, which the generators produce in closed form; this is what keeps
/// pairwise pseudohyperbolic distances accurate when 1 - |z_n| is far below
/// machine epsilon relative to 1.
class ZeroSequence {
  public:
    static ZeroSequence geometric(long budget = 64);
    static ZeroSequence power(double p, long budget = 10000);
    static ZeroSequence hyperbolic_orbit(long budget = 64);
    static ZeroSequence parabolic_orbit(long budget = 10000);
    static ZeroSequence interleaved_thin(long budget = 64);
    static ZeroSequence super_exponential(long budget = 64);
    static ZeroSequence explicit_list(std::vector<Complex> zeros);

    GeneratorKind kind() const { return kind_; }
    long budget() const { return budget_; }
    double power_exponent() const { return p_; }
    const std::vector<Complex>& explicit_zeros() const { return explicit_; }

    /// n is 1-based throughout.
    Complex point(long n) const;
    Complex one_minus(long n) const;       // 1 - z_n, closed form
    double one_minus_abs2(long n) const;   // 1 - |z_n|^2, closed form
    double one_minus_abs(long n) const;    // 1 - |z_n|, closed form

    /// rho(z_n, z_m) through the generator's stable route.
    double pair_rho(long n, long m) const;

    /// True when every generated point is real and nonnegative.
    bool radial() const;

    /// Certified upper bound on sum_{n > N} (1 - |z_n|).
    double tail_one_minus_abs(long N) const;

    /// Boundary cluster points of the sequence (spectrum metadata).
    std::vector<Complex> cluster_points() const;

  private:
    ZeroSequence(GeneratorKind k, long budget, double p,
                 std::vector<Complex> zeros);
    void check_index(long n) const;

    GeneratorKind kind_;
    long budget_;
    double p_ = 0.0;
    std::vector<Complex> explicit_;
};

struct BlaschkeSum {
    double partial = 0.0;     // sum_{n <= N} (1 - |z_n|^2)
    double tail_bound = 0.0;  // certified bound on the remainder
};

struct VhnRatio {
    double sup = 0.0;
    bool trending_to_one = false;
};

struct FrostmanSum {
    double partial = 0.0;
    bool divergent = false;
};

/// Hoffman's Lemma constants.  Invariants: 0 < delta < 1,
/// 0 < eta < (1 - sqrt(1 - delta^2))/delta, 0 < epsilon < eta (delta - eta)/(1 - delta eta).
struct HoffmanConstants {
    double delta = 0.0;
    double eta = 0.0;
    double epsilon = 0.0;
};

BlaschkeSum blaschke_sum(const ZeroSequence& seq, long N);

double consecutive_rho(const ZeroSequence& seq, long n);

/// min over pairs n < m <= N of rho(z_n, z_m).
double separation_constant(const ZeroSequence& seq, long N);

/// Vinogradov-Hayman-Newman ratio sup_{n < N} (1 - x_{n+1})/(1 - x_n);
/// only defined for increasing radial sequences.
VhnRatio vhn_ratio(const ZeroSequence& seq, long N);

/// delta_n = prod_{k != n, k <= N_trunc} rho(z_k, z_n); nonincreasing in N_trunc.
double interp_delta_n(const ZeroSequence& seq, long n, long N_trunc);

FrostmanSum frostman_sum(const ZeroSequence& seq, const BoundaryPoint& xi,
                         long N, double ceiling = 100.0);

/// eta chosen strictly inside (0, eta_max(delta)); epsilon at half its
/// allowed maximum, so the strict inequalities of Hoffman's Lemma hold.
HoffmanConstants hoffman_constants(double delta,
                                   std::optional<double> eta = std::nullopt);

/// sup_n rho(z_n, Z \ {z_n}) over the first N indices.
double eta_star(const ZeroSequence& seq, long N);

}  // namespace onecomp
