#include "onecomp/disk_geometry.hpp"

#include <cmath>

namespace onecomp {

double pseudo_dist(Complex z, Complex w) {
    const double num = std::abs(z - w);
    const double den = std::abs(1.0 - std::conj(z) * w);
    return num / den;
}

double pseudo_dist(const DiskPoint& z, const DiskPoint& w) {
    return pseudo_dist(z.value(), w.value());
}

double rho_one_minus(double a, double b) {
    if (!(a > 0.0 && a <= 1.0) || !(b > 0.0 && b <= 1.0))
        throw ValidationError("rho_one_minus: arguments must lie in (0, 1]");
    return std::abs(a - b) / (a + b - a * b);
}

EuclideanDisk horodisk(double eta) {
    if (!(eta > 0.0 && eta < 1.0))
        throw ValidationError("horodisk: eta must lie in (0, 1)");
    const double L = std::log(1.0 / eta);
    return EuclideanDisk{Complex(L / (L + 1.0), 0.0), 1.0 / (L + 1.0)};
}

EuclideanDisk pseudo_disk_to_euclidean(Complex z0, double r) {
    if (!(r > 0.0 && r < 1.0))
        throw ValidationError("pseudo_disk_to_euclidean: r must lie in (0, 1)");
    const double r2 = r * r;
    const double den = 1.0 - r2 * std::norm(z0);
    return EuclideanDisk{(1.0 - r2) * z0 / den, r * (1.0 - std::norm(z0)) / den};
}

EuclideanDisk pseudo_disk_to_euclidean(const DiskPoint& center, double r) {
    return pseudo_disk_to_euclidean(center.value(), r);
}

bool in_stolz(const StolzAngle& angle, const DiskPoint& z) {
    return std::abs(angle.vertex.value() - z.value()) <
           angle.opening_constant * (1.0 - std::abs(z.value()));
}

Complex disk_automorphism(Complex a, double theta, Complex z) {
    return std::polar(1.0, theta) * (z - a) / (1.0 - std::conj(a) * z);
}

}  // namespace onecomp
