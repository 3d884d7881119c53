// Regular representations and the reduced norm.
//
// For a unit u, represent(f, u) materializes V_u(f) on the flattened
// coordinate space of X_u:
//   [V_u(f) h](z) = sum over a in G^{r(z)} of f(a) h(a^{-1}z),
// equivalently block (z, e) acts by left multiplication with f(z e^{-1}).
//
// The Hilbert space carrying the norm is the induced space
// X_u (x)_{A_u} C^{n(u)}; its pre-inner product on the algebraic tensor
// space is captured by the positive semidefinite Gram form P_u with
//   <b (x) v, b' (x) v'> = v^H (b* b') v'
// over the basis {E_i at a} (x) {e_m}, laid out flat-index-major, then m.
// The operator norm of a module map M is the largest singular value of
// P^{1/2} (M (x) I) P^{+1/2}, and
//   reduced_norm(f) = max over units of that norm.

#pragma once

#include <fellbundle/hilbert_module.hpp>
#include <fellbundle/section.hpp>

#include <map>
#include <vector>

namespace fell {

class GramForm {
public:
    /// Gram form of the induced pre-inner product at the given unit.
    GramForm(const FellBundle& bundle, int unit);

    /// Arbitrary positive semidefinite form (unit = -1); used by tests and
    /// anywhere a raw P is convenient.
    explicit GramForm(const Mat& p, int unit = -1);

    int unit() const { return unit_; }
    int dim() const { return static_cast<int>(p_.rows()); }
    int rank() const { return rank_; }
    const Mat& matrix() const { return p_; }
    const Mat& sqrt() const { return sqrt_; }
    const Mat& pinv_sqrt() const { return pinv_sqrt_; }
    double sqrt_norm() const { return sqrt_norm_; }
    /// Orthonormal basis of the null space (dim x (dim-rank)).
    const Mat& null_basis() const { return null_basis_; }

private:
    void factorize();

    int unit_;
    Mat p_;
    Mat sqrt_;
    Mat pinv_sqrt_;
    Mat null_basis_;
    double sqrt_norm_ = 0.0;
    int rank_ = 0;
};

/// P_u for the bundle at unit u.
GramForm build_induced(const FellBundle& bundle, int unit);

/// V_u(f) as a matrix on the flattened X_u space (not yet tensored with
/// the representation space C^{n(u)}).
Mat represent(const Section& f, int unit);

/// kron(m, I_n): the extension of a flat-space operator to the algebraic
/// tensor space carrying the Gram form.
Mat induced_extension(const Mat& m, int rep_dim);

/// Operator norm of m on the Hilbert space induced by the Gram form.
/// m must act on the Gram form's space (use induced_extension first for
/// flat-space operators) and must preserve null(P); leakage beyond
/// leak_tol (relative) throws std::invalid_argument.
double operator_norm_p(const Mat& m, const GramForm& gram, double leak_tol = 1e-8);

/// Per-unit operator norms of V_u(f) in unit order.
std::vector<double> unit_norms(const Section& f);
std::vector<double> unit_norms(const Section& f, const std::vector<GramForm>& grams);

/// sup over units of the norm of V_u(f).
double reduced_norm(const Section& f);
double reduced_norm(const Section& f, const std::vector<GramForm>& grams);

/// Gram forms for every unit, in unit order; build once and reuse when
/// taking many norms over the same bundle.
std::vector<GramForm> build_all_induced(const FellBundle& bundle);

/// The family {V_u(f)}_u of flat-space matrices, one per unit.
class OperatorFamily {
public:
    OperatorFamily(BundlePtr bundle, std::vector<Mat> per_unit);

    const BundlePtr& bundle_ptr() const { return bundle_; }
    const FellBundle& bundle() const { return *bundle_; }
    /// Matrix at a unit (by arrow index of the unit).
    const Mat& at_unit(int u) const;
    Mat& at_unit(int u);

    OperatorFamily operator+(const OperatorFamily& other) const;
    OperatorFamily operator*(Cplx scalar) const;

private:
    BundlePtr bundle_;
    std::vector<Mat> per_unit_;  // aligned with groupoid().units()
};

/// represent(f, u) for every unit.
OperatorFamily represent_family(const Section& f);

}  // namespace fell
