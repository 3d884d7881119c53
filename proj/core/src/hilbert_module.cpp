#include <fellbundle/hilbert_module.hpp>

#include <cmath>
#include <stdexcept>

namespace fell {

namespace {

void require_same_space(const XuVector& a, const XuVector& b, const char* what) {
    if (a.bundle_ptr() != b.bundle_ptr() || a.unit() != b.unit())
        throw std::invalid_argument(std::string(what) + ": vectors live in different modules");
}

void require_same_space(const WgVector& a, const WgVector& b, const char* what) {
    if (a.bundle_ptr() != b.bundle_ptr() || a.arrow() != b.arrow())
        throw std::invalid_argument(std::string(what) + ": vectors live in different modules");
}

Mat random_fiber(int rows, int cols, CounterRng& rng) {
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.next_complex_gaussian();
    return m;
}

}  // namespace

XuVector::XuVector(BundlePtr bundle, int unit) : bundle_(std::move(bundle)), unit_(unit) {
    for (int a : bundle_->groupoid().fiber_s(unit_)) entries_.push_back(bundle_->zero(a));
}

XuVector::XuVector(BundlePtr bundle, int unit, std::vector<Mat> entries)
    : bundle_(std::move(bundle)), unit_(unit), entries_(std::move(entries)) {
    const auto& arrows = bundle_->groupoid().fiber_s(unit_);
    if (entries_.size() != arrows.size())
        throw std::invalid_argument("xu vector: one entry per arrow of G_u required");
    for (std::size_t i = 0; i < arrows.size(); ++i)
        if (!bundle_->has_fiber_shape(arrows[i], entries_[i]))
            throw std::invalid_argument("xu vector: entry shape mismatch");
}

XuVector XuVector::delta(BundlePtr bundle, int arrow, const Mat& value) {
    if (!bundle->has_fiber_shape(arrow, value))
        throw std::invalid_argument("xu delta: value shape does not match fiber");
    const int u = bundle->groupoid().source(arrow);
    XuVector x(bundle, u);
    const auto& arrows = bundle->groupoid().fiber_s(u);
    for (std::size_t i = 0; i < arrows.size(); ++i)
        if (arrows[i] == arrow) x.entries_[i] = value;
    return x;
}

XuVector XuVector::random(BundlePtr bundle, int unit, CounterRng& rng) {
    XuVector x(bundle, unit);
    const auto& arrows = bundle->groupoid().fiber_s(unit);
    for (std::size_t i = 0; i < arrows.size(); ++i)
        x.entries_[i] =
            random_fiber(bundle->fiber_rows(arrows[i]), bundle->fiber_cols(arrows[i]), rng);
    return x;
}

const std::vector<int>& XuVector::support_arrows() const {
    return bundle_->groupoid().fiber_s(unit_);
}

XuVector XuVector::operator+(const XuVector& other) const {
    require_same_space(*this, other, "xu sum");
    XuVector out = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += other.entries_[i];
    return out;
}

XuVector XuVector::operator-(const XuVector& other) const {
    return *this + other * Cplx{-1.0, 0.0};
}

XuVector XuVector::operator*(Cplx scalar) const {
    XuVector out = *this;
    for (auto& e : out.entries_) e *= scalar;
    return out;
}

XuVector XuVector::acted_by(const Mat& a) const {
    XuVector out = *this;
    for (auto& e : out.entries_) e = e * a;
    return out;
}

XuVector XuVector::truncated(int prefix) const {
    XuVector out = *this;
    for (int i = prefix; i < size(); ++i)
        out.entries_[static_cast<std::size_t>(i)].setZero();
    return out;
}

WgVector::WgVector(BundlePtr bundle, int arrow) : bundle_(std::move(bundle)), arrow_(arrow) {
    const FiniteGroupoid& g = bundle_->groupoid();
    for (int a : g.fiber_s(g.range(arrow_))) entries_.push_back(bundle_->zero(g.compose(a, arrow_)));
}

WgVector::WgVector(BundlePtr bundle, int arrow, std::vector<Mat> entries)
    : bundle_(std::move(bundle)), arrow_(arrow), entries_(std::move(entries)) {
    const FiniteGroupoid& g = bundle_->groupoid();
    const auto& arrows = g.fiber_s(g.range(arrow_));
    if (entries_.size() != arrows.size())
        throw std::invalid_argument("wg vector: one entry per arrow of G_u required");
    for (std::size_t i = 0; i < arrows.size(); ++i)
        if (!bundle_->has_fiber_shape(g.compose(arrows[i], arrow_), entries_[i]))
            throw std::invalid_argument("wg vector: entry shape mismatch");
}

WgVector WgVector::random(BundlePtr bundle, int arrow, CounterRng& rng) {
    WgVector x(bundle, arrow);
    const FiniteGroupoid& g = bundle->groupoid();
    const auto& arrows = g.fiber_s(g.range(arrow));
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        const int shifted = g.compose(arrows[i], arrow);
        x.entries_[i] =
            random_fiber(bundle->fiber_rows(shifted), bundle->fiber_cols(shifted), rng);
    }
    return x;
}

const std::vector<int>& WgVector::support_arrows() const {
    const FiniteGroupoid& g = bundle_->groupoid();
    return g.fiber_s(g.range(arrow_));
}

WgVector WgVector::operator+(const WgVector& other) const {
    require_same_space(*this, other, "wg sum");
    WgVector out = *this;
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] += other.entries_[i];
    return out;
}

WgVector WgVector::operator-(const WgVector& other) const {
    return *this + other * Cplx{-1.0, 0.0};
}

WgVector WgVector::operator*(Cplx scalar) const {
    WgVector out = *this;
    for (auto& e : out.entries_) e *= scalar;
    return out;
}

WgVector WgVector::truncated(int prefix) const {
    WgVector out = *this;
    for (int i = prefix; i < size(); ++i)
        out.entries_[static_cast<std::size_t>(i)].setZero();
    return out;
}

RankOne::RankOne(XuVector x, XuVector y) {
    require_same_space(x, y, "rank one");
    terms_.emplace_back(std::move(x), std::move(y));
}

RankOne::RankOne(std::vector<std::pair<XuVector, XuVector>> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("rank one: empty sum");
    for (const auto& [x, y] : terms_) {
        require_same_space(x, y, "rank one");
        require_same_space(x, terms_.front().first, "rank one");
    }
}

int RankOne::unit() const { return terms_.front().first.unit(); }

RankOne RankOne::operator+(const RankOne& other) const {
    auto terms = terms_;
    terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
    return RankOne(std::move(terms));
}

Mat xu_inner(const XuVector& h, const XuVector& k) {
    require_same_space(h, k, "xu inner");
    const FellBundle& bundle = h.bundle();
    const FiniteGroupoid& g = bundle.groupoid();
    const int n = bundle.unit_dim(h.unit());
    Mat acc = Mat::Zero(n, n);
    const auto& arrows = h.support_arrows();
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        const int a = arrows[i];
        acc += bundle.mult(g.inverse(a), a, bundle.invol(a, h.entry(static_cast<int>(i))),
                           k.entry(static_cast<int>(i)));
    }
    return acc;
}

double xu_norm(const XuVector& h) { return std::sqrt(operator_norm(xu_inner(h, h))); }

Mat wg_inner(const WgVector& xi, const WgVector& zeta) {
    require_same_space(xi, zeta, "wg inner");
    const FellBundle& bundle = xi.bundle();
    const FiniteGroupoid& g = bundle.groupoid();
    const int c = xi.arrow();
    const int n = bundle.unit_dim(xi.value_unit());
    Mat acc = Mat::Zero(n, n);
    const auto& arrows = xi.support_arrows();
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        const int shifted = g.compose(arrows[i], c);
        acc += bundle.mult(g.inverse(shifted), shifted,
                           bundle.invol(shifted, xi.entry(static_cast<int>(i))),
                           zeta.entry(static_cast<int>(i)));
    }
    return acc;
}

double wg_norm(const WgVector& xi) { return std::sqrt(operator_norm(wg_inner(xi, xi))); }

XuVector rank_one_apply(const RankOne& t, const XuVector& z) {
    require_same_space(t.terms().front().first, z, "rank one apply");
    XuVector out(z.bundle_ptr(), z.unit());
    for (const auto& [x, y] : t.terms()) out = out + x.acted_by(xu_inner(y, z));
    return out;
}

namespace {

/// sum_t zeta(t)* omega(t) for zeta, omega in W_c; lands in A_v.
Mat wg_pair_sum(const WgVector& zeta, const WgVector& omega) {
    const FellBundle& bundle = zeta.bundle();
    const FiniteGroupoid& g = bundle.groupoid();
    const int c = zeta.arrow();
    const int n = bundle.unit_dim(zeta.value_unit());
    Mat acc = Mat::Zero(n, n);
    const auto& arrows = zeta.support_arrows();
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        const int shifted = g.compose(arrows[i], c);
        acc += bundle.mult(g.inverse(shifted), shifted,
                           bundle.invol(shifted, zeta.entry(static_cast<int>(i))),
                           omega.entry(static_cast<int>(i)));
    }
    return acc;
}

/// sum_t g(t)* xi(t) for g in X_u and xi in W_c; lands in B_c.
Mat xu_wg_pair_sum(const XuVector& gvec, const WgVector& xi) {
    const FellBundle& bundle = gvec.bundle();
    const FiniteGroupoid& g = bundle.groupoid();
    const int c = xi.arrow();
    Mat acc = bundle.zero(c);
    const auto& arrows = gvec.support_arrows();
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        const int a = arrows[i];
        acc += bundle.mult(g.inverse(a), g.compose(a, c),
                           bundle.invol(a, gvec.entry(static_cast<int>(i))),
                           xi.entry(static_cast<int>(i)));
    }
    return acc;
}

}  // namespace

WgVector ku_action_on_wg(const RankOne& t, const WgVector& xi) {
    const FellBundle& bundle = xi.bundle();
    const int c = xi.arrow();
    if (t.unit() != xi.base_unit())
        throw std::invalid_argument("ku action: operator unit must equal r(arrow)");
    WgVector out(xi.bundle_ptr(), c);
    const auto& arrows = xi.support_arrows();
    for (const auto& [f, gv] : t.terms()) {
        const Mat s = xu_wg_pair_sum(gv, xi);  // in B_c
        std::vector<Mat> entries;
        entries.reserve(arrows.size());
        for (std::size_t i = 0; i < arrows.size(); ++i)
            entries.push_back(bundle.mult(arrows[i], c, f.entry(static_cast<int>(i)), s));
        out = out + WgVector(xi.bundle_ptr(), c, std::move(entries));
    }
    return out;
}

WgVector wg_ku_inner_apply(const WgVector& xi, const WgVector& zeta, const WgVector& omega) {
    require_same_space(xi, zeta, "wg ku inner");
    require_same_space(xi, omega, "wg ku inner");
    const FellBundle& bundle = xi.bundle();
    const FiniteGroupoid& g = bundle.groupoid();
    const int c = xi.arrow();
    const Mat s = wg_pair_sum(zeta, omega);  // in A_v
    const auto& arrows = xi.support_arrows();
    std::vector<Mat> entries;
    entries.reserve(arrows.size());
    for (std::size_t i = 0; i < arrows.size(); ++i) {
        const int shifted = g.compose(arrows[i], c);
        entries.push_back(bundle.mult(shifted, g.source(shifted),
                                      xi.entry(static_cast<int>(i)), s));
    }
    return WgVector(xi.bundle_ptr(), c, std::move(entries));
}

int xu_flat_dim(const FellBundle& bundle, int unit) {
    int d = 0;
    for (int a : bundle.groupoid().fiber_s(unit)) d += bundle.fiber_dim(a);
    return d;
}

Eigen::VectorXcd xu_flatten(const XuVector& x) {
    Eigen::VectorXcd out(xu_flat_dim(x.bundle(), x.unit()));
    int pos = 0;
    for (int i = 0; i < x.size(); ++i) {
        const Mat& e = x.entry(i);
        for (int r = 0; r < e.rows(); ++r)
            for (int c = 0; c < e.cols(); ++c) out(pos++) = e(r, c);
    }
    return out;
}

XuVector xu_unflatten(BundlePtr bundle, int unit, const Eigen::VectorXcd& coords) {
    if (coords.size() != xu_flat_dim(*bundle, unit))
        throw std::invalid_argument("xu unflatten: coordinate size mismatch");
    std::vector<Mat> entries;
    int pos = 0;
    for (int a : bundle->groupoid().fiber_s(unit)) {
        Mat e(bundle->fiber_rows(a), bundle->fiber_cols(a));
        for (int r = 0; r < e.rows(); ++r)
            for (int c = 0; c < e.cols(); ++c) e(r, c) = coords(pos++);
        entries.push_back(std::move(e));
    }
    return XuVector(std::move(bundle), unit, std::move(entries));
}

XuVector apply_flat(const Mat& op, const XuVector& x) {
    if (op.cols() != xu_flat_dim(x.bundle(), x.unit()))
        throw std::invalid_argument("apply_flat: operator size mismatch");
    return xu_unflatten(x.bundle_ptr(), x.unit(), op * xu_flatten(x));
}

Mat wg_ku_inner(const WgVector& xi, const WgVector& zeta) {
    require_same_space(xi, zeta, "wg ku inner");
    const BundlePtr& bundle = xi.bundle_ptr();
    const FiniteGroupoid& g = bundle->groupoid();
    const int c = xi.arrow();
    const int u = g.range(c);
    const int d = xu_flat_dim(*bundle, u);
    Mat op(d, d);
    // column-by-column from the action [T h](a) = xi(a) . (sum_t zeta(t)* h(t)),
    // where the pair sum lands in B_{c^{-1}}.
    const auto& arrows = xi.support_arrows();
    for (int col = 0; col < d; ++col) {
        Eigen::VectorXcd basis = Eigen::VectorXcd::Zero(d);
        basis(col) = 1.0;
        const XuVector h = xu_unflatten(bundle, u, basis);
        // s = sum_t zeta(t)* h(t) in B_{c^{-1}}
        Mat s = bundle->zero(g.inverse(c));
        for (std::size_t i = 0; i < arrows.size(); ++i) {
            const int shifted = g.compose(arrows[i], c);
            s += bundle->mult(g.inverse(shifted), arrows[i],
                              bundle->invol(shifted, zeta.entry(static_cast<int>(i))),
                              h.entry(static_cast<int>(i)));
        }
        std::vector<Mat> entries;
        entries.reserve(arrows.size());
        for (std::size_t i = 0; i < arrows.size(); ++i) {
            const int shifted = g.compose(arrows[i], c);
            entries.push_back(bundle->mult(shifted, g.inverse(c),
                                           xi.entry(static_cast<int>(i)), s));
        }
        op.col(col) = xu_flatten(XuVector(bundle, u, std::move(entries)));
    }
    return op;
}

WgVector psi(const XuVector& f, int arrow, const Mat& b) {
    const FellBundle& bundle = f.bundle();
    const FiniteGroupoid& g = bundle.groupoid();
    if (g.range(arrow) != f.unit())
        throw std::invalid_argument("psi: base unit of the vector must equal r(arrow)");
    if (!bundle.has_fiber_shape(arrow, b))
        throw std::invalid_argument("psi: coefficient shape does not match fiber");
    const auto& arrows = f.support_arrows();
    std::vector<Mat> entries;
    entries.reserve(arrows.size());
    for (std::size_t i = 0; i < arrows.size(); ++i)
        entries.push_back(bundle.mult(arrows[i], arrow, f.entry(static_cast<int>(i)), b));
    return WgVector(f.bundle_ptr(), arrow, std::move(entries));
}

Mat internal_tensor_inner(const DualVector& x1, const WgVector& y1, const DualVector& x2,
                          const WgVector& y2) {
    require_same_space(y1, y2, "internal tensor inner");
    // < flat f (x) xi, flat g (x) zeta > = < <g,f>_K . xi, zeta >
    const RankOne t(x2.vec, x1.vec);
    return wg_inner(ku_action_on_wg(t, y1), y2);
}

Mat phi(const DualVector& x, const WgVector& y) {
    if (x.vec.unit() != y.base_unit())
        throw std::invalid_argument("phi: unit of the dual vector must equal r(arrow)");
    return xu_wg_pair_sum(x.vec, y);
}

}  // namespace fell
