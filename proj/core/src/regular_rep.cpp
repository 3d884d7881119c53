#include <fellbundle/regular_rep.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fell {

namespace {

// singular values of P below this fraction of the largest are null directions
constexpr double kPinvThreshold = 1e-10;

std::vector<int> flat_offsets(const FellBundle& bundle, int unit) {
    std::vector<int> offsets;
    int pos = 0;
    for (int a : bundle.groupoid().fiber_s(unit)) {
        offsets.push_back(pos);
        pos += bundle.fiber_dim(a);
    }
    offsets.push_back(pos);
    return offsets;
}

}  // namespace

GramForm::GramForm(const FellBundle& bundle, int unit) : unit_(unit) {
    const FiniteGroupoid& g = bundle.groupoid();
    const int n = bundle.unit_dim(unit);
    const int flat = xu_flat_dim(bundle, unit);
    p_ = Mat::Zero(static_cast<Eigen::Index>(flat) * n, static_cast<Eigen::Index>(flat) * n);

    // block diagonal over arrows of G_u: <E_i (x) e_m, E_j (x) e_m'> =
    // [E_i* E_j](m, m') with the product through the bundle
    const auto offsets = flat_offsets(bundle, unit);
    const auto& arrows = g.fiber_s(unit);
    for (std::size_t t = 0; t < arrows.size(); ++t) {
        const int a = arrows[t];
        const int d = bundle.fiber_dim(a);
        const int ai = g.inverse(a);
        for (int i = 0; i < d; ++i) {
            const Mat ei_star = bundle.invol(a, bundle.basis_element(a, i));
            for (int j = 0; j < d; ++j) {
                const Mat prod = bundle.mult(ai, a, ei_star, bundle.basis_element(a, j));
                for (int m = 0; m < n; ++m)
                    for (int mp = 0; mp < n; ++mp)
                        p_((offsets[t] + i) * n + m, (offsets[t] + j) * n + mp) = prod(m, mp);
            }
        }
    }
    factorize();
}

GramForm::GramForm(const Mat& p, int unit) : unit_(unit), p_(p) {
    if (p_.rows() != p_.cols()) throw std::invalid_argument("gram form: matrix must be square");
    factorize();
}

void GramForm::factorize() {
    const Mat herm = 0.5 * (p_ + p_.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> solver(herm);
    const Eigen::VectorXd evals = solver.eigenvalues();
    const Mat evecs = solver.eigenvectors();
    const double top = evals.size() ? std::max(0.0, evals.maxCoeff()) : 0.0;
    const double cutoff = kPinvThreshold * top;

    Eigen::VectorXd root = Eigen::VectorXd::Zero(evals.size());
    Eigen::VectorXd inv_root = Eigen::VectorXd::Zero(evals.size());
    rank_ = 0;
    std::vector<Eigen::Index> null_cols;
    for (Eigen::Index i = 0; i < evals.size(); ++i) {
        if (evals(i) > cutoff && evals(i) > 0.0) {
            root(i) = std::sqrt(evals(i));
            inv_root(i) = 1.0 / root(i);
            ++rank_;
        } else {
            null_cols.push_back(i);
        }
    }
    sqrt_ = evecs * root.asDiagonal() * evecs.adjoint();
    pinv_sqrt_ = evecs * inv_root.asDiagonal() * evecs.adjoint();
    sqrt_norm_ = std::sqrt(top);
    null_basis_ = Mat(p_.rows(), static_cast<Eigen::Index>(null_cols.size()));
    for (std::size_t i = 0; i < null_cols.size(); ++i)
        null_basis_.col(static_cast<Eigen::Index>(i)) = evecs.col(null_cols[i]);
}

GramForm build_induced(const FellBundle& bundle, int unit) { return GramForm(bundle, unit); }

Mat represent(const Section& f, int unit) {
    const FellBundle& bundle = f.bundle();
    const FiniteGroupoid& g = bundle.groupoid();
    const auto& arrows = g.fiber_s(unit);
    const auto offsets = flat_offsets(bundle, unit);
    const int flat = offsets.back();
    Mat out = Mat::Zero(flat, flat);

    for (std::size_t zi = 0; zi < arrows.size(); ++zi) {
        const int z = arrows[zi];
        for (std::size_t ei = 0; ei < arrows.size(); ++ei) {
            const int e = arrows[ei];
            const int a = g.compose(z, g.inverse(e));  // arrow carrying the block
            const int de = bundle.fiber_dim(e);
            for (int j = 0; j < de; ++j) {
                const Mat img = bundle.mult(a, e, f.value(a), bundle.basis_element(e, j));
                const int cols = static_cast<int>(img.cols());
                for (int r = 0; r < img.rows(); ++r)
                    for (int c = 0; c < cols; ++c)
                        out(offsets[zi] + r * cols + c, offsets[ei] + j) = img(r, c);
            }
        }
    }
    return out;
}

Mat induced_extension(const Mat& m, int rep_dim) {
    Mat out = Mat::Zero(m.rows() * rep_dim, m.cols() * rep_dim);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (int k = 0; k < rep_dim; ++k) out(i * rep_dim + k, j * rep_dim + k) = m(i, j);
    return out;
}

double operator_norm_p(const Mat& m, const GramForm& gram, double leak_tol) {
    if (m.rows() != gram.dim() || m.cols() != gram.dim())
        throw std::invalid_argument("operator_norm_p: operator does not act on the form's space");
    if (gram.rank() == 0) return 0.0;

    // a module map sends null(P) into null(P)
    if (gram.null_basis().cols() > 0) {
        const Mat leaked = gram.sqrt() * (m * gram.null_basis());
        const double scale = 1.0 + gram.sqrt_norm() * m.norm();
        const double leak = leaked.cwiseAbs().maxCoeff();
        if (leak > leak_tol * scale)
            throw std::invalid_argument("operator_norm_p: not a module map (null-space leakage " +
                                        std::to_string(leak) + ")");
    }
    return operator_norm(gram.sqrt() * m * gram.pinv_sqrt());
}

std::vector<GramForm> build_all_induced(const FellBundle& bundle) {
    std::vector<GramForm> grams;
    for (int u : bundle.groupoid().units()) grams.emplace_back(bundle, u);
    return grams;
}

std::vector<double> unit_norms(const Section& f, const std::vector<GramForm>& grams) {
    const FellBundle& bundle = f.bundle();
    const auto& units = bundle.groupoid().units();
    std::vector<double> norms;
    norms.reserve(units.size());
    for (std::size_t i = 0; i < units.size(); ++i) {
        const int u = units[i];
        const Mat m = induced_extension(represent(f, u), bundle.unit_dim(u));
        norms.push_back(operator_norm_p(m, grams[i]));
    }
    return norms;
}

std::vector<double> unit_norms(const Section& f) {
    return unit_norms(f, build_all_induced(f.bundle()));
}

double reduced_norm(const Section& f, const std::vector<GramForm>& grams) {
    double best = 0.0;
    for (double v : unit_norms(f, grams)) best = std::max(best, v);
    return best;
}

double reduced_norm(const Section& f) { return reduced_norm(f, build_all_induced(f.bundle())); }

OperatorFamily::OperatorFamily(BundlePtr bundle, std::vector<Mat> per_unit)
    : bundle_(std::move(bundle)), per_unit_(std::move(per_unit)) {
    if (per_unit_.size() != bundle_->groupoid().units().size())
        throw std::invalid_argument("operator family: one matrix per unit required");
}

const Mat& OperatorFamily::at_unit(int u) const {
    const auto& units = bundle_->groupoid().units();
    for (std::size_t i = 0; i < units.size(); ++i)
        if (units[i] == u) return per_unit_[i];
    throw std::invalid_argument("operator family: unknown unit");
}

Mat& OperatorFamily::at_unit(int u) {
    return const_cast<Mat&>(static_cast<const OperatorFamily*>(this)->at_unit(u));
}

OperatorFamily OperatorFamily::operator+(const OperatorFamily& other) const {
    if (bundle_ != other.bundle_)
        throw std::invalid_argument("operator family sum: bundle mismatch");
    std::vector<Mat> out = per_unit_;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.per_unit_[i];
    return OperatorFamily(bundle_, std::move(out));
}

OperatorFamily OperatorFamily::operator*(Cplx scalar) const {
    std::vector<Mat> out = per_unit_;
    for (auto& m : out) m *= scalar;
    return OperatorFamily(bundle_, std::move(out));
}

OperatorFamily represent_family(const Section& f) {
    std::vector<Mat> per_unit;
    for (int u : f.bundle().groupoid().units()) per_unit.push_back(represent(f, u));
    return OperatorFamily(f.bundle_ptr(), std::move(per_unit));
}

}  // namespace fell
