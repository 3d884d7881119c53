// Hilbert C*-module machinery over a Fell bundle at finite scale.
//
// For a unit u, X_u is the right Hilbert A_u-module of fiber-valued
// functions h on G_u (source fiber) with <h,k> = sum_a h(a)* k(a).
// For an arrow c with u = r(c), v = s(c), W_c is the right Hilbert
// A_v-module of functions xi on G_u with xi(a) in B_{ac} and
// <xi,zeta> = sum_a xi(a)* zeta(a). W_c carries a left action of
// K_u = L(X_u), making it a K_u--A_v imprimitivity bimodule.
//
// Operators on X_u are materialized as complex matrices over the
// flattened coordinate space (+)_{a in G_u} B_a; the flat layout is
// arrows of G_u ascending, then fiber entries row-major.

#pragma once

#include <fellbundle/bundle.hpp>
#include <fellbundle/rng.hpp>

#include <vector>

namespace fell {

class XuVector {
public:
    /// Zero vector of X_u.
    XuVector(BundlePtr bundle, int unit);

    /// Entries aligned with fiber_s(unit) order.
    XuVector(BundlePtr bundle, int unit, std::vector<Mat> entries);

    /// h_a^b as an element of X_{s(a)}.
    static XuVector delta(BundlePtr bundle, int arrow, const Mat& value);

    static XuVector random(BundlePtr bundle, int unit, CounterRng& rng);

    const BundlePtr& bundle_ptr() const { return bundle_; }
    const FellBundle& bundle() const { return *bundle_; }
    int unit() const { return unit_; }
    const std::vector<int>& support_arrows() const;  // G_u, ascending
    const Mat& entry(int i) const { return entries_[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(entries_.size()); }

    XuVector operator+(const XuVector& other) const;
    XuVector operator-(const XuVector& other) const;
    XuVector operator*(Cplx scalar) const;

    /// Right action by a in A_u: (x . a)(eta) = x(eta) a.
    XuVector acted_by(const Mat& a) const;

    /// Coordinates restricted to the first `prefix` arrows of G_u (the rest zeroed).
    XuVector truncated(int prefix) const;

private:
    BundlePtr bundle_;
    int unit_;
    std::vector<Mat> entries_;
};

class WgVector {
public:
    WgVector(BundlePtr bundle, int arrow);
    WgVector(BundlePtr bundle, int arrow, std::vector<Mat> entries);

    static WgVector random(BundlePtr bundle, int arrow, CounterRng& rng);

    const BundlePtr& bundle_ptr() const { return bundle_; }
    const FellBundle& bundle() const { return *bundle_; }
    int arrow() const { return arrow_; }
    int base_unit() const { return bundle_->groupoid().range(arrow_); }    // u = r(c)
    int value_unit() const { return bundle_->groupoid().source(arrow_); }  // v = s(c)
    const std::vector<int>& support_arrows() const;  // G_{r(c)}, ascending
    const Mat& entry(int i) const { return entries_[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(entries_.size()); }

    WgVector operator+(const WgVector& other) const;
    WgVector operator-(const WgVector& other) const;
    WgVector operator*(Cplx scalar) const;
    WgVector truncated(int prefix) const;

private:
    BundlePtr bundle_;
    int arrow_;
    std::vector<Mat> entries_;
};

/// The flat image of x in the dual module; pairing formulas below take the
/// conjugate-linear structure into account.
struct DualVector {
    XuVector vec;
};

inline DualVector dual(XuVector x) { return DualVector{std::move(x)}; }

/// Finite sum of rank-one operators <x_i, y_i> on X_u, acting by
/// z -> sum_i x_i . <y_i, z>.
class RankOne {
public:
    RankOne(XuVector x, XuVector y);
    explicit RankOne(std::vector<std::pair<XuVector, XuVector>> terms);

    const std::vector<std::pair<XuVector, XuVector>>& terms() const { return terms_; }
    int unit() const;
    RankOne operator+(const RankOne& other) const;

private:
    std::vector<std::pair<XuVector, XuVector>> terms_;
};

/// <h, k> = sum_a h(a)* k(a) in A_u. Conjugate-linear in h.
Mat xu_inner(const XuVector& h, const XuVector& k);
double xu_norm(const XuVector& h);

/// <xi, zeta> = sum_a xi(a)* zeta(a) in A_v. Conjugate-linear in xi.
Mat wg_inner(const WgVector& xi, const WgVector& zeta);
double wg_norm(const WgVector& xi);

/// (T z)(a) = sum_i x_i(a) . <y_i, z>.
XuVector rank_one_apply(const RankOne& t, const XuVector& z);

/// Left K_u action on W_c: [<f,g> . xi](a) = f(a) sum_t g(t)* xi(t).
WgVector ku_action_on_wg(const RankOne& t, const WgVector& xi);

/// Left K_u-valued inner product of xi, zeta in W_c, materialized as the
/// matrix on the flattened X_u space; acting on h in X_u by
/// [<xi,zeta>_K h](a) = xi(a) . (sum_t zeta(t)* h(t)).
Mat wg_ku_inner(const WgVector& xi, const WgVector& zeta);

/// The same inner product applied to omega in W_c via its defining action
/// [<xi,zeta>_K . omega](a) = xi(a) sum_t zeta(t)* omega(t).
WgVector wg_ku_inner_apply(const WgVector& xi, const WgVector& zeta, const WgVector& omega);

/// Psi(f (x) b)(a) = f(a) b, mapping X_u (x) B_c onto W_c isometrically.
WgVector psi(const XuVector& f, int arrow, const Mat& b);

/// <flat f (x) xi, flat g (x) zeta> = < <g,f>_K . xi, zeta >_{A_v}.
Mat internal_tensor_inner(const DualVector& x1, const WgVector& y1, const DualVector& x2,
                          const WgVector& y2);

/// Phi(flat f (x) xi) = sum_a f(a)* xi(a) in B_c.
Mat phi(const DualVector& x, const WgVector& y);

// --- flat coordinates -------------------------------------------------

/// Total flat dimension of X_u: sum over G_u of dim B_a.
int xu_flat_dim(const FellBundle& bundle, int unit);

Eigen::VectorXcd xu_flatten(const XuVector& x);
XuVector xu_unflatten(BundlePtr bundle, int unit, const Eigen::VectorXcd& coords);

/// Apply a flat-space matrix to a module vector.
XuVector apply_flat(const Mat& op, const XuVector& x);

}  // namespace fell
