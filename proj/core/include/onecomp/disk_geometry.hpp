#pragma once

#include <cmath>
#include <complex>

#include "onecomp/errors.hpp"

namespace onecomp {

using Complex = std::complex<double>;

/// A point in the open unit disk.  Construction enforces |z| < 1, so
/// metric operations taking DiskPoint never see boundary values.
class DiskPoint {
  public:
    DiskPoint(double re, double im) : z_(re, im) {
        if (std::norm(z_) >= 1.0)
            throw ValidationError("DiskPoint: |z| >= 1");
    }
    explicit DiskPoint(Complex z) : DiskPoint(z.real(), z.imag()) {}

    double re() const { return z_.real(); }
    double im() const { return z_.imag(); }
    Complex value() const { return z_; }

  private:
    Complex z_;
};

/// A point on the unit circle, normalized to |z| = 1 on construction.
/// Rejects inputs farther than 1e-12 from the circle.
class BoundaryPoint {
  public:
    BoundaryPoint(double re, double im) : z_(re, im) {
        const double m = std::abs(z_);
        if (std::abs(m - 1.0) > 1e-12)
            throw ValidationError("BoundaryPoint: | |z| - 1 | > 1e-12");
        z_ /= m;
    }
    explicit BoundaryPoint(Complex z) : BoundaryPoint(z.real(), z.imag()) {}
    static BoundaryPoint from_angle(double theta) {
        return BoundaryPoint(std::cos(theta), std::sin(theta));
    }

    double re() const { return z_.real(); }
    double im() const { return z_.imag(); }
    Complex value() const { return z_; }

  private:
    Complex z_;
};

struct EuclideanDisk {
    Complex center;
    double radius = 0.0;

    bool contains(Complex z) const { return std::abs(z - center) < radius; }
};

/// Nontangential approach region {z : |vertex - z| < C (1 - |z|)}.
struct StolzAngle {
    BoundaryPoint vertex;
    double opening_constant;  // C > 1

    StolzAngle(BoundaryPoint v, double c) : vertex(v), opening_constant(c) {
        if (c <= 1.0) throw ValidationError("StolzAngle: opening constant must exceed 1");
    }
};

/// rho(z, w) = |z - w| / |1 - conj(z) w|, the Moebius-invariant metric.
double pseudo_dist(const DiskPoint& z, const DiskPoint& w);
double pseudo_dist(Complex z, Complex w);

/// rho(1 - a, 1 - b) = |a - b| / (a + b - a b) for 0 < a, b <= 1.
/// Cancellation-free form for radial sequences given by their boundary gaps.
double rho_one_minus(double a, double b);

/// Level set of the atomic inner function: Omega_S(eta) is the Euclidean disk
/// with center L/(L+1) and radius 1/(L+1), L = log(1/eta), tangent to the
/// unit circle at 1.
EuclideanDisk horodisk(double eta);

/// Euclidean realization of the pseudohyperbolic disk D_rho(center, r).
EuclideanDisk pseudo_disk_to_euclidean(const DiskPoint& center, double r);
EuclideanDisk pseudo_disk_to_euclidean(Complex center, double r);

bool in_stolz(const StolzAngle& angle, const DiskPoint& z);

/// Disk automorphism z -> e^{i theta} (z - a)/(1 - conj(a) z); used by the
/// Moebius-invariance property tests.
Complex disk_automorphism(Complex a, double theta, Complex z);

}  // namespace onecomp
