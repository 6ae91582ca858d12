#pragma once

#include <vector>

#include "onecomp/inner_function.hpp"

namespace onecomp {

struct Spectrum {
    /// Boundary points, sorted by argument in [0, 2pi), deduplicated.
    std::vector<Complex> points;
    /// False when any point came from numeric root-finding (preimages under
    /// a finite Blaschke inner factor of a composition).
    bool exact = true;
};

/// Boundary singular support derived structurally from the spec tree.
Spectrum spectrum(const InnerSpec& u);

/// |u''| / |u'|^2 at a boundary point off the spectrum.  Finite, uniformly
/// bounded values along the circle are the one-component signature.
double aleksandrov_ratio(const InnerSpec& u, const BoundaryPoint& zeta);

struct RadialProbe {
    Complex zeta{1.0, 0.0};
    double min_log_modulus = 0.0;   // min over probed radii of log|u(r zeta)|
    double last_log_modulus = 0.0;  // at the deepest probed radius
    double deepest_radius = 0.0;
};

/// log|u| along radii 1 - 2^-k, k = 1..k_max toward zeta, clipped to the
/// certified radius.  Decay of the deep values is evidence that the modulus
/// liminf vanishes at zeta.
RadialProbe radial_liminf_probe(const InnerSpec& u, const BoundaryPoint& zeta,
                                int k_max = 20, double log_tol = 1e-6);

struct CriterionReport {
    double sup_ratio = 0.0;
    Complex argmax{1.0, 0.0};
    long samples = 0;
    double sup_ratio_dense = 0.0;  // re-scan at doubled density
    long samples_dense = 0;
    bool sup_stable = false;  // doubled density did not inflate the sup
    std::vector<RadialProbe> probes;       // one per spectrum point
    bool decay_at_spectrum = false;        // every probe reaches log|u| < threshold
    bool consistent = false;  // stable finite sup and decay at the whole spectrum
};

/// Two-density arc scan of the second-derivative ratio off the spectrum,
/// samples accumulating geometrically toward spectrum points, plus radial
/// decay probes at the spectrum.  Sampled evidence, not a proof.
CriterionReport criterion_scan(const InnerSpec& u, long density = 512,
                               int radial_k_max = 20);

}  // namespace onecomp
