#include "onecomp/zero_sequence.hpp"

#include <algorithm>
#include <cmath>

namespace onecomp {

namespace {

// Index of the underlying n for the interleaved generator: pairs
// (1 - n^-n, 1 - 2 n^-n) for n = 2, 3, ... laid out consecutively.
long interleaved_base(long m) { return 2 + (m - 1) / 2; }
bool interleaved_doubled(long m) { return m % 2 == 0; }

// Largest n for which n^-n is still a normal double.
constexpr long kSuperExpCap = 140;

}  // namespace

ZeroSequence::ZeroSequence(GeneratorKind k, long budget, double p,
                           std::vector<Complex> zeros)
    : kind_(k), budget_(budget), p_(p), explicit_(std::move(zeros)) {
    if (budget_ < 1) throw ValidationError("ZeroSequence: budget must be >= 1");
}

ZeroSequence ZeroSequence::geometric(long budget) {
    if (budget > 1000) throw ValidationError("geometric: budget exceeds double range");
    return ZeroSequence(GeneratorKind::Geometric, budget, 0.0, {});
}

ZeroSequence ZeroSequence::power(double p, long budget) {
    if (!(p > 1.0))
        throw ValidationError("power: exponent must exceed 1 (Blaschke condition)");
    if (budget > 100'000'000) throw ValidationError("power: budget too large");
    return ZeroSequence(GeneratorKind::Power, budget, p, {});
}

ZeroSequence ZeroSequence::hyperbolic_orbit(long budget) {
    if (budget > 500) throw ValidationError("hyperbolic_orbit: budget exceeds double range");
    return ZeroSequence(GeneratorKind::HyperbolicOrbit, budget, 0.0, {});
}

ZeroSequence ZeroSequence::parabolic_orbit(long budget) {
    if (budget > 100'000'000) throw ValidationError("parabolic_orbit: budget too large");
    return ZeroSequence(GeneratorKind::ParabolicOrbit, budget, 0.0, {});
}

ZeroSequence ZeroSequence::interleaved_thin(long budget) {
    if (interleaved_base(budget) > kSuperExpCap)
        throw ValidationError("interleaved_thin: budget exceeds double range");
    return ZeroSequence(GeneratorKind::InterleavedThin, budget, 0.0, {});
}

ZeroSequence ZeroSequence::super_exponential(long budget) {
    if (budget > kSuperExpCap)
        throw ValidationError("super_exponential: budget exceeds double range");
    return ZeroSequence(GeneratorKind::SuperExponential, budget, 0.0, {});
}

ZeroSequence ZeroSequence::explicit_list(std::vector<Complex> zeros) {
    if (zeros.empty()) throw ValidationError("explicit_list: empty zero list");
    for (const Complex& z : zeros)
        if (std::norm(z) >= 1.0)
            throw ValidationError("explicit_list: zero outside the open disk");
    const long n = static_cast<long>(zeros.size());
    return ZeroSequence(GeneratorKind::Explicit, n, 0.0, std::move(zeros));
}

void ZeroSequence::check_index(long n) const {
    if (n < 1 || n > budget_)
        throw ValidationError("ZeroSequence: index outside [1, budget]");
}

Complex ZeroSequence::one_minus(long n) const {
    check_index(n);
    switch (kind_) {
        case GeneratorKind::Geometric:
            return {std::ldexp(1.0, static_cast<int>(-n)), 0.0};
        case GeneratorKind::Power:
            return {std::pow(static_cast<double>(n), -p_), 0.0};
        case GeneratorKind::HyperbolicOrbit:
            return {2.0 / (std::pow(3.0, static_cast<double>(n)) + 1.0), 0.0};
        case GeneratorKind::ParabolicOrbit: {
            const double d = static_cast<double>(n) * n + 1.0;
            return Complex(1.0 / d, -static_cast<double>(n) / d);
        }
        case GeneratorKind::InterleavedThin: {
            const double b = static_cast<double>(interleaved_base(n));
            const double g = std::pow(b, -b);
            return {interleaved_doubled(n) ? 2.0 * g : g, 0.0};
        }
        case GeneratorKind::SuperExponential:
            return {std::pow(static_cast<double>(n), -static_cast<double>(n)), 0.0};
        case GeneratorKind::Explicit:
            return 1.0 - explicit_[static_cast<size_t>(n - 1)];
    }
    throw Error("unreachable");
}

Complex ZeroSequence::point(long n) const {
    if (kind_ == GeneratorKind::Explicit) {
        check_index(n);
        return explicit_[static_cast<size_t>(n - 1)];
    }
    return 1.0 - one_minus(n);
}

double ZeroSequence::one_minus_abs2(long n) const {
    switch (kind_) {
        case GeneratorKind::ParabolicOrbit:
            check_index(n);
            return 1.0 / (static_cast<double>(n) * n + 1.0);
        case GeneratorKind::Explicit:
            check_index(n);
            return 1.0 - std::norm(explicit_[static_cast<size_t>(n - 1)]);
        default: {
            const double g = one_minus(n).real();
            return g * (2.0 - g);
        }
    }
}

double ZeroSequence::one_minus_abs(long n) const {
    switch (kind_) {
        case GeneratorKind::ParabolicOrbit: {
            // 1 - |z| = (1 - |z|^2)/(1 + |z|)
            const double m2 = 1.0 - one_minus_abs2(n);
            return one_minus_abs2(n) / (1.0 + std::sqrt(m2));
        }
        case GeneratorKind::Explicit:
            check_index(n);
            return 1.0 - std::abs(explicit_[static_cast<size_t>(n - 1)]);
        default:
            return one_minus(n).real();
    }
}

double ZeroSequence::pair_rho(long n, long m) const {
    if (n == m) return 0.0;
    switch (kind_) {
        case GeneratorKind::ParabolicOrbit: {
            check_index(n);
            check_index(m);
            // Exact: rho(z_n, z_m) = |m - n| / sqrt((m - n)^2 + 1).
            const double d = static_cast<double>(std::labs(m - n));
            return d / std::hypot(d, 1.0);
        }
        case GeneratorKind::Explicit:
            return pseudo_dist(point(n), point(m));
        default:
            return rho_one_minus(one_minus(n).real(), one_minus(m).real());
    }
}

bool ZeroSequence::radial() const {
    switch (kind_) {
        case GeneratorKind::ParabolicOrbit:
            return false;
        case GeneratorKind::Explicit:
            return std::all_of(explicit_.begin(), explicit_.end(), [](const Complex& z) {
                return z.imag() == 0.0 && z.real() >= 0.0;
            });
        default:
            return true;
    }
}

double ZeroSequence::tail_one_minus_abs(long N) const {
    if (N < 0) N = 0;
    switch (kind_) {
        case GeneratorKind::Geometric:
            return std::ldexp(1.0, static_cast<int>(-N));
        case GeneratorKind::Power:
            // sum_{n > N} n^-p <= integral bound N^{1-p}/(p-1)
            return N == 0 ? 1.0 + 1.0 / (p_ - 1.0)
                          : std::pow(static_cast<double>(N), 1.0 - p_) / (p_ - 1.0);
        case GeneratorKind::HyperbolicOrbit:
            // 2/(3^j + 1) <= 2 * 3^-j
            return std::pow(3.0, static_cast<double>(-N));
        case GeneratorKind::ParabolicOrbit:
            // 1 - |z_n| <= 1/(n^2 + 1) <= n^-2
            return N == 0 ? 2.0 : 1.0 / static_cast<double>(N);
        case GeneratorKind::InterleavedThin: {
            const long b = interleaved_base(N + 1);
            // terms <= 2 n^-n; successive ratio <= 1/2 for n >= 2
            return 6.0 * std::pow(static_cast<double>(b), -static_cast<double>(b));
        }
        case GeneratorKind::SuperExponential: {
            const double b = static_cast<double>(N + 1);
            return 2.0 * std::pow(b, -b);
        }
        case GeneratorKind::Explicit: {
            double s = 0.0;
            for (long n = N + 1; n <= budget_; ++n) s += one_minus_abs(n);
            return s;
        }
    }
    throw Error("unreachable");
}

std::vector<Complex> ZeroSequence::cluster_points() const {
    if (kind_ == GeneratorKind::Explicit) return {};
    return {Complex(1.0, 0.0)};
}

BlaschkeSum blaschke_sum(const ZeroSequence& seq, long N) {
    if (N > seq.budget()) throw ValidationError("blaschke_sum: N exceeds budget");
    BlaschkeSum out;
    for (long n = 1; n <= N; ++n) out.partial += seq.one_minus_abs2(n);
    // 1 - |z|^2 <= 2 (1 - |z|)
    out.tail_bound = 2.0 * seq.tail_one_minus_abs(N);
    return out;
}

double consecutive_rho(const ZeroSequence& seq, long n) {
    if (n + 1 > seq.budget())
        throw ValidationError("consecutive_rho: n + 1 exceeds budget");
    return seq.pair_rho(n, n + 1);
}

double separation_constant(const ZeroSequence& seq, long N) {
    if (N < 2) throw ValidationError("separation_constant: N must be >= 2");
    if (N > seq.budget()) throw ValidationError("separation_constant: N exceeds budget");
    double best = 1.0;
    for (long n = 1; n < N; ++n)
        for (long m = n + 1; m <= N; ++m)
            best = std::min(best, seq.pair_rho(n, m));
    return best;
}

VhnRatio vhn_ratio(const ZeroSequence& seq, long N) {
    if (N < 2) throw ValidationError("vhn_ratio: N must be >= 2");
    if (N > seq.budget()) throw ValidationError("vhn_ratio: N exceeds budget");
    VhnRatio out;
    double last = 0.0;
    for (long n = 1; n < N; ++n) {
        const Complex gn = seq.one_minus(n);
        const Complex gn1 = seq.one_minus(n + 1);
        if (gn.imag() != 0.0 || gn1.imag() != 0.0)
            throw NotRadial("vhn_ratio: sequence not real");
        if (!(gn1.real() < gn.real()))
            throw NotRadial("vhn_ratio: sequence not increasing");
        last = gn1.real() / gn.real();
        out.sup = std::max(out.sup, last);
    }
    out.trending_to_one = out.sup > 0.9 && last >= out.sup - 1e-3;
    return out;
}

double interp_delta_n(const ZeroSequence& seq, long n, long N_trunc) {
    if (n < 1 || n > N_trunc || N_trunc > seq.budget())
        throw ValidationError("interp_delta_n: need 1 <= n <= N_trunc <= budget");
    double prod = 1.0;
    for (long k = 1; k <= N_trunc; ++k)
        if (k != n) prod *= seq.pair_rho(k, n);
    return prod;
}

FrostmanSum frostman_sum(const ZeroSequence& seq, const BoundaryPoint& xi,
                         long N, double ceiling) {
    if (N > seq.budget()) throw ValidationError("frostman_sum: N exceeds budget");
    const Complex xm1 = xi.value() - 1.0;
    FrostmanSum out;
    double mid_term = 0.0, last_term = 0.0;
    for (long n = 1; n <= N; ++n) {
        // |xi - z_n| = |(xi - 1) + (1 - z_n)|, stable near the cluster point.
        const double dist = std::abs(xm1 + seq.one_minus(n));
        const double term = seq.one_minus_abs2(n) / dist;
        out.partial += term;
        if (n == std::max<long>(1, N / 2)) mid_term = term;
        last_term = term;
    }
    out.divergent = out.partial > ceiling && last_term >= 0.5 * mid_term;
    return out;
}

HoffmanConstants hoffman_constants(double delta, std::optional<double> eta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw ValidationError("hoffman_constants: delta must lie in (0, 1)");
    const double eta_max = (1.0 - std::sqrt(1.0 - delta * delta)) / delta;
    HoffmanConstants out;
    out.delta = delta;
    if (eta) {
        if (!(*eta > 0.0 && *eta < eta_max))
            throw EtaOutOfRange("hoffman_constants: eta outside (0, eta_max)");
        out.eta = *eta;
    } else {
        out.eta = 0.5 * eta_max;
    }
    out.epsilon = 0.5 * out.eta * (delta - out.eta) / (1.0 - delta * out.eta);
    return out;
}

double eta_star(const ZeroSequence& seq, long N) {
    if (N < 2) throw ValidationError("eta_star: N must be >= 2");
    if (N > seq.budget()) throw ValidationError("eta_star: N exceeds budget");
    double sup = 0.0;
    for (long n = 1; n <= N; ++n) {
        double nearest = 1.0;
        for (long m = 1; m <= N; ++m)
            if (m != n) nearest = std::min(nearest, seq.pair_rho(n, m));
        sup = std::max(sup, nearest);
    }
    return sup;
}

}  // namespace onecomp
