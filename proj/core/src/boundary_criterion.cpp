#include "onecomp/boundary_criterion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "onecomp/errors.hpp"

namespace onecomp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSpectrumClearance = 1e-5;  // radians kept clear of the spectrum
constexpr double kDecayLog = -4.0;  // log|u| must drop below this along a probe

std::vector<Complex> poly_mul(const std::vector<Complex>& p,
                              const std::vector<Complex>& q) {
    std::vector<Complex> out(p.size() + q.size() - 1, Complex(0.0, 0.0));
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
    return out;
}

Complex horner(const std::vector<Complex>& c, Complex z) {
    Complex acc(0.0, 0.0);
    for (size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
    return acc;
}

// All roots of a complex polynomial (coefficients low to high) by
// Durand-Kerner iteration from the standard deterministic seeds.
std::vector<Complex> polynomial_roots(std::vector<Complex> c) {
    double top = 0.0;
    for (const Complex& x : c) top = std::max(top, std::abs(x));
    if (top == 0.0) return {};
    while (c.size() > 1 && std::abs(c.back()) < 1e-14 * top) c.pop_back();
    const size_t d = c.size() - 1;
    if (d == 0) return {};
    for (auto& x : c) x /= c.back();

    std::vector<Complex> w(d);
    const Complex seed(0.4, 0.9);
    Complex pw(1.0, 0.0);
    for (size_t k = 0; k < d; ++k) {
        pw *= seed;
        w[k] = pw;
    }
    for (int iter = 0; iter < 500; ++iter) {
        double worst = 0.0;
        for (size_t k = 0; k < d; ++k) {
            Complex den(1.0, 0.0);
            for (size_t j = 0; j < d; ++j)
                if (j != k) den *= w[k] - w[j];
            if (std::abs(den) < 1e-300) {
                w[k] += Complex(1e-8, 1e-8);
                worst = 1.0;
                continue;
            }
            const Complex delta = horner(c, w[k]) / den;
            w[k] -= delta;
            worst = std::max(worst, std::abs(delta));
        }
        if (worst < 1e-13) break;
    }
    return w;
}

// Solutions of B(z) = s on the unit circle for a finite Blaschke product.
std::vector<Complex> circle_preimages(const FiniteBlaschkeLeaf& b, Complex s) {
    if (b.zeros.empty()) {
        if (std::abs(b.unimodular - s) < 1e-12)
            throw UnsupportedSpec(
                "spectrum: constant inner factor equal to a singular value");
        return {};
    }
    std::vector<Complex> num{b.unimodular};
    std::vector<Complex> den{Complex(1.0, 0.0)};
    for (const Complex& a : b.zeros) {
        if (a == Complex(0.0, 0.0)) {
            num = poly_mul(num, {Complex(0.0, 0.0), Complex(1.0, 0.0)});
        } else {
            const Complex c = std::abs(a) / a;
            num = poly_mul(num, {c * a, -c});
            den = poly_mul(den, {Complex(1.0, 0.0), -std::conj(a)});
        }
    }
    std::vector<Complex> p(std::max(num.size(), den.size()), Complex(0.0, 0.0));
    for (size_t i = 0; i < num.size(); ++i) p[i] += num[i];
    for (size_t i = 0; i < den.size(); ++i) p[i] -= s * den[i];

    std::vector<Complex> out;
    for (const Complex& w : polynomial_roots(p)) {
        const double m = std::abs(w);
        if (std::abs(m - 1.0) < 1e-6) out.push_back(w / m);
    }
    return out;
}

void spectrum_impl(const InnerSpec& u, std::vector<Complex>& pts, bool& exact);

void spectrum_compose(const ComposeNode& n, std::vector<Complex>& pts,
                      bool& exact) {
    const Spectrum so = spectrum(*n.outer);
    if (so.points.empty()) {
        spectrum_impl(*n.inner, pts, exact);
        return;
    }
    const auto* fb = std::get_if<FiniteBlaschkeLeaf>(&n.inner->node());
    if (!fb)
        throw UnsupportedSpec(
            "spectrum: composition preimages need a finite Blaschke inner factor");
    exact = false;
    for (const Complex& s : so.points)
        for (const Complex& w : circle_preimages(*fb, s)) pts.push_back(w);
}

void spectrum_impl(const InnerSpec& u, std::vector<Complex>& pts, bool& exact) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FiniteBlaschkeLeaf>) {
                // analytic across the whole circle
            } else if constexpr (std::is_same_v<T, InfiniteBlaschkeLeaf>) {
                for (const Complex& c : n.sequence.cluster_points())
                    pts.push_back(c);
            } else if constexpr (std::is_same_v<T, SingularAtomicLeaf>) {
                for (const SingularAtom& a : n.atoms) pts.push_back(a.zeta.value());
            } else if constexpr (std::is_same_v<T, ProductNode>) {
                for (const InnerSpec& f : n.factors) spectrum_impl(f, pts, exact);
            } else if constexpr (std::is_same_v<T, ComposeNode>) {
                spectrum_compose(n, pts, exact);
            } else {  // FrostmanShiftNode: a Moebius map moves no singularity
                spectrum_impl(*n.base, pts, exact);
            }
        },
        u.node());
}

double principal_angle(Complex z) {
    double t = std::atan2(z.imag(), z.real());
    if (t < 0.0) t += kTwoPi;
    return t;
}

}  // namespace

Spectrum spectrum(const InnerSpec& u) {
    Spectrum sp;
    spectrum_impl(u, sp.points, sp.exact);
    std::sort(sp.points.begin(), sp.points.end(), [](Complex a, Complex b) {
        return principal_angle(a) < principal_angle(b);
    });
    sp.points.erase(std::unique(sp.points.begin(), sp.points.end(),
                                [](Complex a, Complex b) {
                                    return std::abs(a - b) < 1e-9;
                                }),
                    sp.points.end());
    return sp;
}

double aleksandrov_ratio(const InnerSpec& u, const BoundaryPoint& zeta) {
    const BoundaryJet j = boundary_derivatives(u, zeta);
    const double d1 = std::abs(j.d1);
    if (d1 < 1e-12)
        throw DerivativeVanishes("aleksandrov_ratio: |u'| below 1e-12");
    return std::abs(j.d2) / (d1 * d1);
}

RadialProbe radial_liminf_probe(const InnerSpec& u, const BoundaryPoint& zeta,
                                int k_max, double log_tol) {
    RadialProbe p;
    p.zeta = zeta.value();
    p.min_log_modulus = std::numeric_limits<double>::infinity();
    // Slowly converging tails cannot certify a tight tolerance anywhere near
    // the boundary; trade precision for reach before giving up.
    double tol = log_tol;
    double r_cert = certified_radius(u, tol);
    while (r_cert < 0.75 && tol < 0.2) {
        tol *= 4.0;
        r_cert = certified_radius(u, tol);
    }
    r_cert = std::min(r_cert, 1.0 - 1e-12);
    if (r_cert < 0.5) return p;
    log_tol = tol;
    for (int k = 1; k <= k_max; ++k) {
        double r = 1.0 - std::ldexp(1.0, -k);
        const bool clipped = r >= r_cert;
        if (clipped) r = r_cert;
        const double L = eval_log_modulus(u, r * p.zeta, log_tol).value;
        p.min_log_modulus = std::min(p.min_log_modulus, L);
        p.last_log_modulus = L;
        p.deepest_radius = r;
        if (clipped) break;
    }
    return p;
}

namespace {

std::vector<double> scan_angles(const std::vector<Complex>& spectrum_pts,
                                long density) {
    std::vector<double> out;
    if (spectrum_pts.empty()) {
        out.reserve(static_cast<size_t>(density));
        for (long i = 0; i < density; ++i)
            out.push_back(kTwoPi * (static_cast<double>(i) + 0.5) /
                          static_cast<double>(density));
        return out;
    }
    std::vector<double> angles;
    angles.reserve(spectrum_pts.size());
    for (const Complex& z : spectrum_pts) angles.push_back(principal_angle(z));
    for (size_t k = 0; k < angles.size(); ++k) {
        const double lo = angles[k];
        const double hi =
            k + 1 < angles.size() ? angles[k + 1] : angles.front() + kTwoPi;
        const double gap = hi - lo;
        if (gap <= 2.0 * kSpectrumClearance) continue;
        const long uniform = std::max<long>(
            4, static_cast<long>(std::llround(static_cast<double>(density) * gap /
                                              kTwoPi)));
        for (long i = 0; i < uniform; ++i)
            out.push_back(lo + gap * (static_cast<double>(i) + 0.5) /
                                   static_cast<double>(uniform));
        // geometric accumulation toward both spectrum endpoints
        for (int j = 2; j < 40; ++j) {
            const double off = gap * std::ldexp(1.0, -j);
            if (off < kSpectrumClearance) break;
            out.push_back(lo + off);
            out.push_back(hi - off);
        }
    }
    return out;
}

}  // namespace

CriterionReport criterion_scan(const InnerSpec& u, long density,
                               int radial_k_max) {
    if (density < 8) throw ValidationError("criterion_scan density must be >= 8");
    const Spectrum sp = spectrum(u);
    CriterionReport rep;

    auto scan = [&](long dens, double& sup, Complex* arg, long& count) {
        sup = 0.0;
        count = 0;
        for (const double theta : scan_angles(sp.points, dens)) {
            const BoundaryPoint zeta = BoundaryPoint::from_angle(theta);
            double ratio = 0.0;
            try {
                ratio = aleksandrov_ratio(u, zeta);
            } catch (const SpectrumHit&) {
                continue;
            } catch (const DerivativeVanishes&) {
                continue;
            }
            ++count;
            if (ratio > sup) {
                sup = ratio;
                if (arg) *arg = zeta.value();
            }
        }
    };

    scan(density, rep.sup_ratio, &rep.argmax, rep.samples);
    scan(2 * density, rep.sup_ratio_dense, nullptr, rep.samples_dense);
    rep.sup_stable = std::isfinite(rep.sup_ratio_dense) &&
                     rep.sup_ratio_dense <= 1.25 * rep.sup_ratio + 1e-9;

    rep.decay_at_spectrum = true;
    for (const Complex& z : sp.points) {
        rep.probes.push_back(
            radial_liminf_probe(u, BoundaryPoint(z), radial_k_max));
        if (!(rep.probes.back().min_log_modulus < kDecayLog))
            rep.decay_at_spectrum = false;
    }
    rep.consistent = rep.samples > 0 && rep.sup_stable && rep.decay_at_spectrum;
    return rep;
}

}  // namespace onecomp
