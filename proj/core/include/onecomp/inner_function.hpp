#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "onecomp/disk_geometry.hpp"
#include "onecomp/zero_sequence.hpp"

namespace onecomp {

struct SingularAtom {
    BoundaryPoint zeta;
    double mass;  // > 0
};

class InnerSpec;

struct FiniteBlaschkeLeaf {
    std::vector<Complex> zeros;  // multiplicities by repetition
    Complex unimodular{1.0, 0.0};
};

struct InfiniteBlaschkeLeaf {
    ZeroSequence sequence;
};

struct SingularAtomicLeaf {
    std::vector<SingularAtom> atoms;
};

struct ProductNode {
    std::vector<InnerSpec> factors;
};

struct ComposeNode {
    std::shared_ptr<const InnerSpec> outer;
    std::shared_ptr<const InnerSpec> inner;
};

struct FrostmanShiftNode {
    std::shared_ptr<const InnerSpec> base;
    Complex a;
};

/// Immutable expression tree describing an inner function.  Shared freely
/// across threads; evaluation is pure and bit-deterministic for identical
/// truncation indices.
class InnerSpec {
  public:
    using Node = std::variant<FiniteBlaschkeLeaf, InfiniteBlaschkeLeaf,
                              SingularAtomicLeaf, ProductNode, ComposeNode,
                              FrostmanShiftNode>;

    static InnerSpec finite_blaschke(std::vector<Complex> zeros,
                                     Complex unimodular = {1.0, 0.0});
    static InnerSpec infinite_blaschke(ZeroSequence seq);
    static InnerSpec singular_atomic(std::vector<SingularAtom> atoms);
    /// The atomic inner function S(z) = exp(-(1+z)/(1-z)).
    static InnerSpec atomic_s(double mass = 1.0);

    const Node& node() const { return *node_; }

    bool has_infinite_leaf() const;

  private:
    explicit InnerSpec(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}
    std::shared_ptr<const Node> node_;

    friend InnerSpec multiply(std::vector<InnerSpec> factors);
    friend InnerSpec compose(InnerSpec outer, InnerSpec inner);
    friend InnerSpec frostman_shift(InnerSpec base, const DiskPoint& a);
};

InnerSpec multiply(std::vector<InnerSpec> factors);
InnerSpec compose(InnerSpec outer, InnerSpec inner);
/// (a - u)/(1 - conj(a) u).
InnerSpec frostman_shift(InnerSpec base, const DiskPoint& a);

struct EvalResult {
    Complex value{0.0, 0.0};
    /// Guaranteed upper bound on |computed - true| at the queried point;
    /// zero for specs with no infinite Blaschke leaf.
    double truncation_bound = 0.0;
};

EvalResult eval(const InnerSpec& u, const DiskPoint& z, double tol = 1e-12);
EvalResult eval(const InnerSpec& u, Complex z, double tol = 1e-12);

struct LogModulus {
    double value = 0.0;  // log|u(z)|, may be -inf at a zero
    double err = 0.0;    // certified absolute error in log scale
};

/// log|u(z)| with certified error <= tol in log scale (err may exceed tol
/// only where certification is impossible, e.g. a Frostman shift evaluated
/// within the truncation error of its pivot; callers must check err).
LogModulus eval_log_modulus(const InnerSpec& u, Complex z, double tol = 1e-9);
double eval_log_modulus(const InnerSpec& u, const DiskPoint& z, double tol = 1e-9);

struct BoundaryJet {
    Complex value{0.0, 0.0};
    Complex d1{0.0, 0.0};
    Complex d2{0.0, 0.0};
};

/// (u, u', u'') at a boundary point, assembled by node-local product/chain/
/// Frostman rules.  Rejects points within 1e-9 of the singular support and
/// within 1e-6 of a zero-sequence cluster point; infinite Blaschke leaves
/// use the truncated product at the full sequence budget.
BoundaryJet boundary_derivatives(const InnerSpec& u, const BoundaryPoint& zeta);

/// Zeros available from spec leaves (finite zeros plus generated sequence
/// points) with |z| <= r_max.  Frostman shifts of a single-atom singular
/// base contribute their closed-form preimages of the pivot; Compose nodes
/// and other Frostman bases contribute none (not enumerable from leaf data).
std::vector<Complex> collect_leaf_zeros(const InnerSpec& u, double r_max);

/// Largest radius r < 1 such that eval_log_modulus is certifiable to tol
/// (log scale) on all |z| <= r within the sequence budgets.  1.0 when the
/// spec has no infinite Blaschke leaf.
double certified_radius(const InnerSpec& u, double tol);

/// Normalized Blaschke factor, positive at the origin: for a != 0,
/// (|a|/a)(a - z)/(1 - conj(a) z); for a = 0 the factor is z.
/// one_minus_a = 1 - a supplied exactly by sequence generators.
Complex blaschke_factor(Complex a, Complex one_minus_a, Complex z);

}  // namespace onecomp
