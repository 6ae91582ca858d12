#include <doctest.h>

#include <cmath>
#include <random>

#include "onecomp/disk_geometry.hpp"

using namespace onecomp;

TEST_CASE("disk point construction enforces the open disk") {
    CHECK_NOTHROW(DiskPoint(0.999, 0.0));
    CHECK_THROWS_AS(DiskPoint(1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(DiskPoint(0.8, 0.7), ValidationError);
}

TEST_CASE("boundary point normalizes and rejects interior input") {
    const BoundaryPoint z(1.0 + 5e-13, 0.0);
    CHECK(z.re() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(BoundaryPoint(0.5, 0.5), ValidationError);
    const BoundaryPoint w = BoundaryPoint::from_angle(2.0);
    CHECK(std::abs(w.value()) == doctest::Approx(1.0));
}

TEST_CASE("pseudohyperbolic distance basics") {
    CHECK(pseudo_dist(DiskPoint(0.5, 0.0), DiskPoint(0.0, 0.0)) ==
          doctest::Approx(0.5));
    CHECK(pseudo_dist(Complex(0.7, 0.0), Complex(0.9, 0.0)) ==
          doctest::Approx(0.2 / 0.37));
    // symmetry and range
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.95, 0.95);
    for (int i = 0; i < 200; ++i) {
        const Complex z(u(rng) * 0.7, u(rng) * 0.7), w(u(rng) * 0.7, u(rng) * 0.7);
        const double d = pseudo_dist(z, w);
        CHECK(d == doctest::Approx(pseudo_dist(w, z)).epsilon(1e-14));
        CHECK(d >= 0.0);
        CHECK(d < 1.0);
    }
}

TEST_CASE("pseudohyperbolic distance is Moebius invariant") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    for (int i = 0; i < 100; ++i) {
        const Complex a(u(rng), u(rng));
        const double theta = 3.0 * u(rng);
        const Complex z(u(rng), u(rng)), w(u(rng), u(rng));
        const double before = pseudo_dist(z, w);
        const double after =
            pseudo_dist(disk_automorphism(a, theta, z), disk_automorphism(a, theta, w));
        CHECK(after == doctest::Approx(before).epsilon(1e-12));
    }
}

TEST_CASE("gap form of the distance matches the direct formula") {
    CHECK(rho_one_minus(0.3, 0.1) == doctest::Approx(0.2 / 0.37));
    CHECK(rho_one_minus(0.3, 0.1) ==
          doctest::Approx(pseudo_dist(Complex(0.7, 0), Complex(0.9, 0))));
    CHECK(rho_one_minus(0.5, 0.5) == 0.0);
    CHECK_THROWS_AS(rho_one_minus(0.0, 0.5), ValidationError);
    CHECK_THROWS_AS(rho_one_minus(0.5, 1.5), ValidationError);
    // stays exact far below machine epsilon relative to 1
    CHECK(rho_one_minus(std::ldexp(1.0, -400), std::ldexp(1.0, -401)) ==
          doctest::Approx(1.0 / (3.0 - std::ldexp(1.0, -400))));
}

TEST_CASE("horodisk geometry") {
    const EuclideanDisk h = horodisk(0.5);
    CHECK(h.center.real() == doctest::Approx(0.4093838908503587).epsilon(1e-14));
    CHECK(h.center.imag() == 0.0);
    CHECK(h.radius == doctest::Approx(0.5906161091496412).epsilon(1e-14));
    // tangent to the unit circle at 1 for every eta
    for (double eta : {0.9, 0.5, 0.1, 0.01})
        CHECK(std::abs(horodisk(eta).center) + horodisk(eta).radius ==
              doctest::Approx(1.0).epsilon(1e-14));
    const EuclideanDisk h3 = horodisk(std::exp(-3.0));
    CHECK(h3.center.real() == doctest::Approx(0.75));
    CHECK(h3.radius == doctest::Approx(0.25));
    CHECK_THROWS_AS(horodisk(0.0), ValidationError);
    CHECK_THROWS_AS(horodisk(1.0), ValidationError);
}

TEST_CASE("pseudohyperbolic disks realize as euclidean disks") {
    const EuclideanDisk d = pseudo_disk_to_euclidean(DiskPoint(0.9, 0.0), 0.5);
    CHECK(d.center.real() == doctest::Approx(0.8463949843260189).epsilon(1e-14));
    CHECK(d.radius == doctest::Approx(0.1191222570532915).epsilon(1e-14));
    // membership agreement: z in the euclidean disk iff rho(z, center) < r
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0;
    while (checked < 300) {
        const Complex z(u(rng), u(rng));
        if (std::norm(z) >= 1.0) continue;
        const double rho = pseudo_dist(z, Complex(0.9, 0.0));
        if (std::abs(rho - 0.5) < 1e-9) continue;  // skip the boundary itself
        CHECK(d.contains(z) == (rho < 0.5));
        ++checked;
    }
}

TEST_CASE("stolz angle membership") {
    const StolzAngle st(BoundaryPoint(1.0, 0.0), 2.0);
    CHECK(in_stolz(st, DiskPoint(0.9, 0.0)));
    CHECK_FALSE(in_stolz(st, DiskPoint(0.0, 0.9)));
    CHECK_THROWS_AS(StolzAngle(BoundaryPoint(1.0, 0.0), 1.0), ValidationError);
}
