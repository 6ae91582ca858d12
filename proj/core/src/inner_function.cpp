#include "onecomp/inner_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace onecomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

long smallest_truncation(const ZeroSequence& seq, double tail_target) {
    // tail_one_minus_abs is nonincreasing in N.
    if (seq.tail_one_minus_abs(seq.budget()) > tail_target) return -1;
    long lo = 0, hi = seq.budget();
    while (lo < hi) {
        const long mid = lo + (hi - lo) / 2;
        if (seq.tail_one_minus_abs(mid) <= tail_target)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

double boundary_factor(double abs_z) { return (1.0 + abs_z) / (1.0 - abs_z); }

}  // namespace

Complex blaschke_factor(Complex a, Complex one_minus_a, Complex z) {
    if (a == Complex(0.0, 0.0)) return z;
    const Complex omz = 1.0 - z;
    const Complex num = omz - one_minus_a;               // a - z
    const Complex den = omz + z * std::conj(one_minus_a);  // 1 - conj(a) z
    return (std::abs(a) / a) * num / den;
}

InnerSpec InnerSpec::finite_blaschke(std::vector<Complex> zeros, Complex unimodular) {
    for (const Complex& z : zeros)
        if (std::norm(z) >= 1.0)
            throw ValidationError("finite_blaschke: zero outside the open disk");
    if (std::abs(std::abs(unimodular) - 1.0) > 1e-12)
        throw ValidationError("finite_blaschke: |unimodular factor| != 1");
    return InnerSpec(FiniteBlaschkeLeaf{std::move(zeros), unimodular});
}

InnerSpec InnerSpec::infinite_blaschke(ZeroSequence seq) {
    return InnerSpec(InfiniteBlaschkeLeaf{std::move(seq)});
}

InnerSpec InnerSpec::singular_atomic(std::vector<SingularAtom> atoms) {
    if (atoms.empty()) throw ValidationError("singular_atomic: no atoms");
    for (const SingularAtom& a : atoms)
        if (!(a.mass > 0.0))
            throw ValidationError("singular_atomic: masses must be positive");
    return InnerSpec(SingularAtomicLeaf{std::move(atoms)});
}

InnerSpec InnerSpec::atomic_s(double mass) {
    return singular_atomic({SingularAtom{BoundaryPoint(1.0, 0.0), mass}});
}

bool InnerSpec::has_infinite_leaf() const {
    return std::visit(
        [](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, InfiniteBlaschkeLeaf>) {
                return true;
            } else if constexpr (std::is_same_v<T, ProductNode>) {
                for (const InnerSpec& f : n.factors)
                    if (f.has_infinite_leaf()) return true;
                return false;
            } else if constexpr (std::is_same_v<T, ComposeNode>) {
                return n.outer->has_infinite_leaf() || n.inner->has_infinite_leaf();
            } else if constexpr (std::is_same_v<T, FrostmanShiftNode>) {
                return n.base->has_infinite_leaf();
            } else {
                return false;
            }
        },
        node());
}

InnerSpec multiply(std::vector<InnerSpec> factors) {
    if (factors.empty()) throw ValidationError("multiply: empty factor list");
    if (factors.size() == 1) return factors.front();
    return InnerSpec(ProductNode{std::move(factors)});
}

InnerSpec compose(InnerSpec outer, InnerSpec inner) {
    return InnerSpec(ComposeNode{
        std::make_shared<const InnerSpec>(std::move(outer)),
        std::make_shared<const InnerSpec>(std::move(inner))});
}

InnerSpec frostman_shift(InnerSpec base, const DiskPoint& a) {
    return InnerSpec(FrostmanShiftNode{
        std::make_shared<const InnerSpec>(std::move(base)), a.value()});
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

EvalResult eval_impl(const InnerSpec& u, Complex z, double tol);

EvalResult eval_infinite(const InfiniteBlaschkeLeaf& leaf, Complex z, double tol) {
    const ZeroSequence& seq = leaf.sequence;
    const double C = boundary_factor(std::abs(z));
    // |prod_{n>N} b_n - 1| <= exp(2 C tail) - 1 once C tail <= 1/2.
    const double tail_target = std::log1p(tol) / (2.0 * C);
    const long N = smallest_truncation(seq, tail_target);
    if (N < 0)
        throw TruncationBudgetExceeded(
            "infinite Blaschke product: tail bound cannot reach tol within budget");
    Complex prod(1.0, 0.0);
    for (long n = 1; n <= N; ++n)
        prod *= blaschke_factor(seq.point(n), seq.one_minus(n), z);
    return EvalResult{prod, std::expm1(2.0 * C * seq.tail_one_minus_abs(N))};
}

Complex herglotz_exponent(const SingularAtomicLeaf& leaf, Complex z) {
    Complex g(0.0, 0.0);
    for (const SingularAtom& a : leaf.atoms) {
        const Complex zeta = a.zeta.value();
        g -= a.mass * (zeta + z) / (zeta - z);
    }
    return g;
}

EvalResult eval_impl(const InnerSpec& u, Complex z, double tol) {
    return std::visit(
        [&](const auto& n) -> EvalResult {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FiniteBlaschkeLeaf>) {
                Complex prod = n.unimodular;
                for (const Complex& a : n.zeros)
                    prod *= blaschke_factor(a, 1.0 - a, z);
                return EvalResult{prod, 0.0};
            } else if constexpr (std::is_same_v<T, InfiniteBlaschkeLeaf>) {
                return eval_infinite(n, z, tol);
            } else if constexpr (std::is_same_v<T, SingularAtomicLeaf>) {
                return EvalResult{std::exp(herglotz_exponent(n, z)), 0.0};
            } else if constexpr (std::is_same_v<T, ProductNode>) {
                const double child_tol = tol / static_cast<double>(n.factors.size());
                EvalResult out{Complex(1.0, 0.0), 0.0};
                for (const InnerSpec& f : n.factors) {
                    const EvalResult r = eval_impl(f, z, child_tol);
                    out.value *= r.value;
                    out.truncation_bound += r.truncation_bound;
                }
                return out;
            } else if constexpr (std::is_same_v<T, ComposeNode>) {
                EvalResult in = eval_impl(*n.inner, z, tol / 4.0);
                for (int attempt = 0;; ++attempt) {
                    const EvalResult out = eval_impl(*n.outer, in.value, tol / 2.0);
                    double prop = 2.0;  // worst case |u(a) - u(b)| <= 2
                    const double den =
                        1.0 - std::abs(in.value) *
                                  (std::abs(in.value) + in.truncation_bound);
                    if (den > 0.0)
                        prop = std::min(2.0, 2.0 * in.truncation_bound / den);
                    const double bound = out.truncation_bound + prop;
                    if (bound <= tol)
                        return EvalResult{out.value, bound};
                    if (attempt == 1)
                        throw TruncationBudgetExceeded(
                            "compose: cannot certify tol at this point");
                    in = eval_impl(*n.inner, z,
                                   std::max(1e-300, tol * tol / 16.0));
                }
            } else {  // FrostmanShiftNode
                const Complex a = n.a;
                const double amp = (1.0 + std::abs(a)) / (1.0 - std::abs(a));
                const EvalResult base = eval_impl(*n.base, z, tol / (2.0 * amp));
                const Complex v = base.value;
                return EvalResult{(a - v) / (1.0 - std::conj(a) * v),
                                  amp * base.truncation_bound};
            }
        },
        u.node());
}

}  // namespace

EvalResult eval(const InnerSpec& u, Complex z, double tol) {
    if (!(tol > 0.0)) throw ValidationError("eval: tol must be positive");
    return eval_impl(u, z, tol);
}

EvalResult eval(const InnerSpec& u, const DiskPoint& z, double tol) {
    return eval(u, z.value(), tol);
}

// ---------------------------------------------------------------------------
// Log-modulus evaluation

namespace {

LogModulus log_infinite(const InfiniteBlaschkeLeaf& leaf, Complex z, double tol) {
    const ZeroSequence& seq = leaf.sequence;
    const double C = boundary_factor(std::abs(z));
    const long N = smallest_truncation(seq, tol / (2.0 * C));
    if (N < 0)
        throw TruncationBudgetExceeded(
            "infinite Blaschke product: log tail bound cannot reach tol within budget");
    double sum = 0.0;
    for (long n = 1; n <= N; ++n) {
        const double m = std::abs(blaschke_factor(seq.point(n), seq.one_minus(n), z));
        if (m == 0.0) return LogModulus{-kInf, 0.0};
        sum += std::log(m);
    }
    return LogModulus{sum, 2.0 * C * seq.tail_one_minus_abs(N)};
}

double log_singular(const SingularAtomicLeaf& leaf, Complex z) {
    const double one_minus_abs2 = 1.0 - std::norm(z);
    double sum = 0.0;
    for (const SingularAtom& a : leaf.atoms)
        sum -= a.mass * one_minus_abs2 / std::norm(a.zeta.value() - z);
    return sum;
}

LogModulus log_impl(const InnerSpec& u, Complex z, double tol) {
    return std::visit(
        [&](const auto& n) -> LogModulus {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FiniteBlaschkeLeaf>) {
                double sum = 0.0;
                for (const Complex& a : n.zeros) {
                    const double m = std::abs(blaschke_factor(a, 1.0 - a, z));
                    if (m == 0.0) return LogModulus{-kInf, 0.0};
                    sum += std::log(m);
                }
                return LogModulus{sum, 0.0};
            } else if constexpr (std::is_same_v<T, InfiniteBlaschkeLeaf>) {
                return log_infinite(n, z, tol);
            } else if constexpr (std::is_same_v<T, SingularAtomicLeaf>) {
                return LogModulus{log_singular(n, z), 0.0};
            } else if constexpr (std::is_same_v<T, ProductNode>) {
                const double child_tol = tol / static_cast<double>(n.factors.size());
                LogModulus out;
                for (const InnerSpec& f : n.factors) {
                    const LogModulus r = log_impl(f, z, child_tol);
                    out.value += r.value;
                    out.err += r.err;
                }
                return out;
            } else if constexpr (std::is_same_v<T, ComposeNode>) {
                const EvalResult in = eval_impl(*n.inner, z, tol / 8.0);
                LogModulus out = log_impl(*n.outer, in.value, tol / 2.0);
                if (in.truncation_bound > 0.0) {
                    // Slack for the perturbed evaluation point of the outer
                    // function, valid while the perturbation stays well inside.
                    const double gap = 1.0 - std::abs(in.value) - in.truncation_bound;
                    out.err += gap > 0.0 ? 8.0 * in.truncation_bound / gap : kInf;
                }
                return out;
            } else {  // FrostmanShiftNode
                const Complex a = n.a;
                const EvalResult base = eval_impl(*n.base, z, tol / 4.0);
                const Complex v = base.value;
                const double num = std::abs(a - v);
                const double den = std::abs(1.0 - std::conj(a) * v);
                LogModulus out;
                out.value = num == 0.0 ? -kInf : std::log(num) - std::log(den);
                if (base.truncation_bound > 0.0) {
                    const double b = base.truncation_bound;
                    out.err = (num > b && den > b)
                                  ? b / (num - b) + std::abs(a) * b / (den - b)
                                  : kInf;
                }
                return out;
            }
        },
        u.node());
}

}  // namespace

LogModulus eval_log_modulus(const InnerSpec& u, Complex z, double tol) {
    if (!(tol > 0.0)) throw ValidationError("eval_log_modulus: tol must be positive");
    return log_impl(u, z, tol);
}

double eval_log_modulus(const InnerSpec& u, const DiskPoint& z, double tol) {
    return eval_log_modulus(u, z.value(), tol).value;
}

// ---------------------------------------------------------------------------
// Boundary derivatives

namespace {

BoundaryJet jet_mul(const BoundaryJet& f, const BoundaryJet& g) {
    return BoundaryJet{f.value * g.value,
                       f.d1 * g.value + f.value * g.d1,
                       f.d2 * g.value + 2.0 * f.d1 * g.d1 + f.value * g.d2};
}

BoundaryJet jet_chain(const BoundaryJet& outer_at_g, const BoundaryJet& g) {
    return BoundaryJet{outer_at_g.value,
                       outer_at_g.d1 * g.d1,
                       outer_at_g.d2 * g.d1 * g.d1 + outer_at_g.d1 * g.d2};
}

BoundaryJet factor_jet(Complex a, Complex z) {
    if (a == Complex(0.0, 0.0)) return BoundaryJet{z, Complex(1.0, 0.0), {}};
    const Complex c = std::abs(a) / a;
    const Complex den = 1.0 - std::conj(a) * z;
    const Complex d1 = c * (std::norm(a) - 1.0) / (den * den);
    return BoundaryJet{c * (a - z) / den, d1, d1 * 2.0 * std::conj(a) / den};
}

// Moebius (a - w)/(1 - conj(a) w) as a jet in w.
BoundaryJet mobius_jet(Complex a, Complex w) {
    const Complex den = 1.0 - std::conj(a) * w;
    const Complex d1 = (std::norm(a) - 1.0) / (den * den);
    return BoundaryJet{(a - w) / den, d1, d1 * 2.0 * std::conj(a) / den};
}

BoundaryJet jet_impl(const InnerSpec& u, Complex zeta) {
    return std::visit(
        [&](const auto& n) -> BoundaryJet {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FiniteBlaschkeLeaf>) {
                BoundaryJet out{n.unimodular, {}, {}};
                for (const Complex& a : n.zeros)
                    out = jet_mul(out, factor_jet(a, zeta));
                return out;
            } else if constexpr (std::is_same_v<T, InfiniteBlaschkeLeaf>) {
                // Truncated at the full sequence budget.  Away from the
                // cluster set the neglected tail perturbs the log-derivative
                // by O(tail / dist^2), far below the scan resolution; at the
                // cluster set itself the calculus does not apply.
                for (const Complex& c : n.sequence.cluster_points())
                    if (std::abs(c - zeta) < 1e-6)
                        throw SpectrumHit(
                            "boundary_derivatives: point within 1e-6 of a "
                            "cluster point of the zero set");
                BoundaryJet out{Complex(1.0, 0.0), {}, {}};
                for (long k = 1; k <= n.sequence.budget(); ++k)
                    out = jet_mul(out, factor_jet(n.sequence.point(k), zeta));
                return out;
            } else if constexpr (std::is_same_v<T, SingularAtomicLeaf>) {
                Complex g(0.0, 0.0), g1(0.0, 0.0), g2(0.0, 0.0);
                for (const SingularAtom& a : n.atoms) {
                    const Complex zk = a.zeta.value();
                    const Complex d = zk - zeta;
                    if (std::abs(d) < 1e-9)
                        throw SpectrumHit(
                            "boundary_derivatives: point within 1e-9 of the spectrum");
                    g -= a.mass * (zk + zeta) / d;
                    g1 -= a.mass * 2.0 * zk / (d * d);
                    g2 -= a.mass * 4.0 * zk / (d * d * d);
                }
                const Complex f = std::exp(g);
                return BoundaryJet{f, g1 * f, (g2 + g1 * g1) * f};
            } else if constexpr (std::is_same_v<T, ProductNode>) {
                BoundaryJet out{Complex(1.0, 0.0), {}, {}};
                for (const InnerSpec& f : n.factors)
                    out = jet_mul(out, jet_impl(f, zeta));
                return out;
            } else if constexpr (std::is_same_v<T, ComposeNode>) {
                const BoundaryJet g = jet_impl(*n.inner, zeta);
                // Renormalize onto the circle before recursing: the outer
                // boundary calculus assumes |w| = 1.
                Complex w = g.value;
                const double m = std::abs(w);
                if (std::abs(m - 1.0) > 1e-9)
                    throw UnsupportedSpec(
                        "boundary_derivatives: inner part not unimodular here");
                w /= m;
                return jet_chain(jet_impl(*n.outer, w), g);
            } else {  // FrostmanShiftNode
                const BoundaryJet g = jet_impl(*n.base, zeta);
                return jet_chain(mobius_jet(n.a, g.value), g);
            }
        },
        u.node());
}

}  // namespace

BoundaryJet boundary_derivatives(const InnerSpec& u, const BoundaryPoint& zeta) {
    return jet_impl(u, zeta.value());
}

// ---------------------------------------------------------------------------
// Leaf metadata

std::vector<Complex> collect_leaf_zeros(const InnerSpec& u, double r_max) {
    std::vector<Complex> out;
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, FiniteBlaschkeLeaf>) {
                for (const Complex& a : n.zeros)
                    if (std::abs(a) <= r_max) out.push_back(a);
            } else if constexpr (std::is_same_v<T, InfiniteBlaschkeLeaf>) {
                const long cap = std::min<long>(n.sequence.budget(), 100000);
                for (long k = 1; k <= cap; ++k) {
                    const Complex z = n.sequence.point(k);
                    if (std::abs(z) <= r_max) out.push_back(z);
                }
            } else if constexpr (std::is_same_v<T, ProductNode>) {
                for (const InnerSpec& f : n.factors) {
                    auto sub = collect_leaf_zeros(f, r_max);
                    out.insert(out.end(), sub.begin(), sub.end());
                }
            } else if constexpr (std::is_same_v<T, FrostmanShiftNode>) {
                // zeros of (a - T)/(1 - conj(a) T) are the preimages T = a;
                // for a single-atom singular base exp(-m (zeta+z)/(zeta-z))
                // they are explicit: -m (zeta+z)/(zeta-z) = log a + 2 pi i k
                const auto* leaf =
                    std::get_if<SingularAtomicLeaf>(&n.base->node());
                const double abs_a = std::abs(n.a);
                if (leaf && leaf->atoms.size() == 1 && abs_a > 0.0) {
                    const Complex zeta = leaf->atoms[0].zeta.value();
                    const double m = leaf->atoms[0].mass;
                    const double arg_a = std::arg(n.a);
                    auto preimage = [&](long k) {
                        const Complex w(std::log(abs_a),
                                        arg_a + 2.0 * M_PI * double(k));
                        const Complex s = -w / m;
                        return zeta * (s - 1.0) / (s + 1.0);
                    };
                    constexpr long kCap = 100000;
                    for (long k = 0; k <= kCap; ++k) {
                        const Complex z = preimage(k);
                        if (std::abs(z) > r_max) break;
                        out.push_back(z);
                    }
                    for (long k = -1; k >= -kCap; --k) {
                        const Complex z = preimage(k);
                        if (std::abs(z) > r_max) break;
                        out.push_back(z);
                    }
                }
            }
            // Singular leaves have no zeros; Compose zeros and Frostman
            // shifts of other bases are not enumerable from leaf data.
        },
        u.node());
    return out;
}

double certified_radius(const InnerSpec& u, double tol) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, InfiniteBlaschkeLeaf>) {
                const double tail = n.sequence.tail_one_minus_abs(n.sequence.budget());
                if (tail == 0.0) return 1.0;
                const double q = tol / (2.0 * tail);  // (1+r)/(1-r) <= q
                if (q <= 1.0) return 0.0;
                return (q - 1.0) / (q + 1.0);
            } else if constexpr (std::is_same_v<T, ProductNode>) {
                const double child_tol = tol / static_cast<double>(n.factors.size());
                double r = 1.0;
                for (const InnerSpec& f : n.factors)
                    r = std::min(r, certified_radius(f, child_tol));
                return r;
            } else if constexpr (std::is_same_v<T, ComposeNode>) {
                if (n.outer->has_infinite_leaf()) return 0.0;
                return certified_radius(*n.inner, tol / 8.0);
            } else if constexpr (std::is_same_v<T, FrostmanShiftNode>) {
                return certified_radius(*n.base, tol / 4.0);
            } else {
                return 1.0;
            }
        },
        u.node());
}

}  // namespace onecomp
