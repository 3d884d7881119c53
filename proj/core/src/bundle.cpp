#include <fellbundle/bundle.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace fell {

double operator_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    // BDCSVD mishandles complex input in Eigen 3.4.0, so large matrices go
    // through the Hermitian eigensolver on m^H m instead
    if (m.rows() > 16 || m.cols() > 16) {
        if (m.rows() >= m.cols()) {
            Eigen::SelfAdjointEigenSolver<Mat> es(Mat(m.adjoint() * m),
                                                  Eigen::EigenvaluesOnly);
            return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(Mat(m * m.adjoint()), Eigen::EigenvaluesOnly);
        return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    }
    return m.jacobiSvd().singularValues()(0);
}

Mat FellBundle::basis_element(int a, int i) const {
    const int rows = fiber_rows(a);
    const int cols = fiber_cols(a);
    Mat e = Mat::Zero(rows, cols);
    e(i / cols, i % cols) = 1.0;
    return e;
}

Cplx FellBundle::sigma(int a, int b) const {
    if (kind_ != BundleKind::Twist) throw StructureError("sigma: not a twist bundle");
    return sigma_[static_cast<std::size_t>(a) * groupoid_->arrow_count() + b];
}

const Mat& FellBundle::action_unitary(int a) const {
    if (kind_ != BundleKind::CrossedProduct)
        throw StructureError("action_unitary: not a crossed-product bundle");
    return unitaries_[static_cast<std::size_t>(a)];
}

Mat FellBundle::apply_action(int a, const Mat& x) const {
    const Mat& u = action_unitary(a);
    return u * x * u.adjoint();
}

Mat FellBundle::mult(int a, int b, const Mat& x, const Mat& y) const {
    if (!groupoid_->composable(a, b) || groupoid_->compose(a, b) == kUndefined)
        throw StructureError("mult: arrows are not composable");
    if (!has_fiber_shape(a, x) || !has_fiber_shape(b, y))
        throw StructureError("mult: operand shape does not match fiber");
    switch (kind_) {
        case BundleKind::Trivial:
            return x * y;
        case BundleKind::Twist:
            return sigma(a, b) * (x * y);
        case BundleKind::CrossedProduct:
            return x * apply_action(a, y);
        case BundleKind::Custom: {
            const auto it = tables_.mult.find({a, b});
            if (it == tables_.mult.end()) throw StructureError("mult: missing custom table");
            const int ab = groupoid_->compose(a, b);
            Mat out = zero(ab);
            const int cols_a = fiber_cols(a);
            const int cols_b = fiber_cols(b);
            for (int i = 0; i < fiber_dim(a); ++i) {
                const Cplx xi = x(i / cols_a, i % cols_a);
                if (xi == Cplx{0, 0}) continue;
                for (int j = 0; j < fiber_dim(b); ++j) {
                    const Cplx yj = y(j / cols_b, j % cols_b);
                    if (yj == Cplx{0, 0}) continue;
                    out += xi * yj * it->second[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                }
            }
            return out;
        }
    }
    throw StructureError("mult: unknown bundle kind");
}

Mat FellBundle::invol(int a, const Mat& x) const {
    if (!has_fiber_shape(a, x)) throw StructureError("invol: operand shape does not match fiber");
    switch (kind_) {
        case BundleKind::Trivial:
            return x.adjoint();
        case BundleKind::Twist:
            return std::conj(sigma(a, groupoid_->inverse(a))) * x.conjugate();
        case BundleKind::CrossedProduct:
            return apply_action(groupoid_->inverse(a), Mat(x.adjoint()));
        case BundleKind::Custom: {
            const auto it = tables_.invol.find(a);
            if (it == tables_.invol.end()) throw StructureError("invol: missing custom table");
            Mat out = zero(groupoid_->inverse(a));
            const int cols_a = fiber_cols(a);
            for (int i = 0; i < fiber_dim(a); ++i) {
                const Cplx xi = x(i / cols_a, i % cols_a);
                if (xi == Cplx{0, 0}) continue;
                out += std::conj(xi) * it->second[static_cast<std::size_t>(i)];
            }
            return out;
        }
    }
    throw StructureError("invol: unknown bundle kind");
}

double FellBundle::fiber_norm(int a, const Mat& x) const {
    const int ai = groupoid_->inverse(a);
    const Mat star_x = mult(ai, a, invol(a, x), x);
    return std::sqrt(operator_norm(star_x));
}

namespace {

void check_dims_positive(const FiniteGroupoid& g, const FiberSpec& dims) {
    for (int u : g.units()) {
        if (dims.at(u) <= 0) throw StructureError("fiber spec: dimensions must be positive");
    }
}

std::string triple_str(const FiniteGroupoid& g, int a, int b, int c) {
    std::ostringstream os;
    os << "(" << g.label(a) << ", " << g.label(b) << ", " << g.label(c) << ")";
    return os.str();
}

}  // namespace

ValidationReport validate_bundle(const FellBundle& bundle, double tol) {
    const FiniteGroupoid& g = bundle.groupoid();
    const int n = g.arrow_count();
    ValidationReport report;

    check_dims_positive(g, bundle.fibers());

    // output shapes of mult and invol
    for (int a = 0; a < n; ++a) {
        const Mat xs = bundle.invol(a, bundle.basis_element(a, 0));
        if (xs.rows() != bundle.fiber_rows(g.inverse(a)) ||
            xs.cols() != bundle.fiber_cols(g.inverse(a)))
            throw StructureError("invol table maps outside the inverse fiber");
        for (int b = 0; b < n; ++b) {
            if (g.compose(a, b) == kUndefined) continue;
            const int ab = g.compose(a, b);
            const Mat p = bundle.mult(a, b, bundle.basis_element(a, 0), bundle.basis_element(b, 0));
            if (p.rows() != bundle.fiber_rows(ab) || p.cols() != bundle.fiber_cols(ab))
                throw StructureError("mult table maps outside the composite fiber");
        }
    }

    // associativity over all composable triples and basis elements
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int ab = g.compose(a, b);
            if (ab == kUndefined) continue;
            for (int c = 0; c < n; ++c) {
                const int bc = g.compose(b, c);
                if (bc == kUndefined) continue;
                double worst = 0.0;
                for (int i = 0; i < bundle.fiber_dim(a); ++i) {
                    const Mat ea = bundle.basis_element(a, i);
                    for (int j = 0; j < bundle.fiber_dim(b); ++j) {
                        const Mat eb = bundle.basis_element(b, j);
                        const Mat ea_eb = bundle.mult(a, b, ea, eb);
                        for (int k = 0; k < bundle.fiber_dim(c); ++k) {
                            const Mat ec = bundle.basis_element(c, k);
                            const Mat lhs = bundle.mult(ab, c, ea_eb, ec);
                            const Mat rhs = bundle.mult(a, bc, ea, bundle.mult(b, c, eb, ec));
                            worst = std::max(worst, (lhs - rhs).norm());
                        }
                    }
                }
                if (worst > tol) report.add("associativity", triple_str(g, a, b, c), worst);
            }
        }
    }

    // involution laws on bases
    for (int a = 0; a < n; ++a) {
        const int ai = g.inverse(a);
        double worst_inv = 0.0;
        for (int i = 0; i < bundle.fiber_dim(a); ++i) {
            const Mat e = bundle.basis_element(a, i);
            worst_inv = std::max(worst_inv, (bundle.invol(ai, bundle.invol(a, e)) - e).norm());
        }
        if (worst_inv > tol) report.add("involution_involutive", g.label(a), worst_inv);
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int ab = g.compose(a, b);
            if (ab == kUndefined) continue;
            double worst = 0.0;
            for (int i = 0; i < bundle.fiber_dim(a); ++i) {
                const Mat ea = bundle.basis_element(a, i);
                for (int j = 0; j < bundle.fiber_dim(b); ++j) {
                    const Mat eb = bundle.basis_element(b, j);
                    const Mat lhs = bundle.invol(ab, bundle.mult(a, b, ea, eb));
                    const Mat rhs = bundle.mult(g.inverse(b), g.inverse(a), bundle.invol(b, eb),
                                                bundle.invol(a, ea));
                    worst = std::max(worst, (lhs - rhs).norm());
                }
            }
            if (worst > tol)
                report.add("involution_antimultiplicative",
                           "(" + g.label(a) + ", " + g.label(b) + ")", worst);
        }
    }

    // positivity and the C*-norm condition on every fiber basis
    for (int a = 0; a < n; ++a) {
        const int ai = g.inverse(a);
        for (int i = 0; i < bundle.fiber_dim(a); ++i) {
            const Mat e = bundle.basis_element(a, i);
            const Mat es = bundle.invol(a, e);
            const Mat star_e = bundle.mult(ai, a, es, e);   // e* e in A_{s(a)}
            const Mat e_star = bundle.mult(a, ai, e, es);   // e e* in A_{r(a)}

            const double herm = (star_e - Mat(star_e.adjoint())).norm();
            if (herm > tol)
                report.add("positivity_hermitian", g.label(a) + "[" + std::to_string(i) + "]",
                           herm);
            Eigen::SelfAdjointEigenSolver<Mat> es_solver(
                Mat(0.5 * (star_e + star_e.adjoint())));
            const double min_eig = es_solver.eigenvalues().minCoeff();
            if (min_eig < -1e-10)
                report.add("positivity", g.label(a) + "[" + std::to_string(i) + "]", -min_eig);

            const double gap = std::abs(operator_norm(star_e) - operator_norm(e_star));
            if (gap > tol)
                report.add("cstar_norm", g.label(a) + "[" + std::to_string(i) + "]", gap);
        }
    }

    // saturation: span{b* b'} = A_{s(a)} and span{b b'*} = A_{r(a)}
    for (int a = 0; a < n; ++a) {
        const int ai = g.inverse(a);
        const int ns = bundle.fiber_cols(a);
        const int nr = bundle.fiber_rows(a);
        const int d = bundle.fiber_dim(a);
        Mat right_span(ns * ns, d * d);
        Mat left_span(nr * nr, d * d);
        for (int i = 0; i < d; ++i) {
            const Mat ei = bundle.basis_element(a, i);
            const Mat ei_star = bundle.invol(a, ei);
            for (int j = 0; j < d; ++j) {
                const Mat ej = bundle.basis_element(a, j);
                const Mat r = bundle.mult(ai, a, ei_star, ej);
                const Mat l = bundle.mult(a, ai, ej, ei_star);
                right_span.col(i * d + j) = r.reshaped();
                left_span.col(i * d + j) = l.reshaped();
            }
        }
        auto rank_of = [](const Mat& m) {
            Eigen::JacobiSVD<Mat> svd(m);
            const auto& sv = svd.singularValues();
            if (sv.size() == 0) return 0;
            int rank = 0;
            for (int i = 0; i < sv.size(); ++i)
                if (sv(i) > 1e-10 * sv(0)) ++rank;
            return rank;
        };
        if (rank_of(right_span) < ns * ns)
            report.add("saturation_right", g.label(a),
                       static_cast<double>(ns * ns - rank_of(right_span)));
        if (rank_of(left_span) < nr * nr)
            report.add("saturation_left", g.label(a),
                       static_cast<double>(nr * nr - rank_of(left_span)));
    }

    return report;
}

BundlePtr make_trivial_bundle(GroupoidPtr g, const FiberSpec& dims) {
    check_dims_positive(*g, dims);
    return BundlePtr(new FellBundle(std::move(g), dims, BundleKind::Trivial));
}

BundlePtr make_twist_bundle(GroupoidPtr g, const std::map<std::pair<int, int>, Cplx>& sigma) {
    const int n = g->arrow_count();
    std::vector<Cplx> table(static_cast<std::size_t>(n) * n, Cplx{0, 0});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (g->compose(a, b) == kUndefined) continue;
            const auto it = sigma.find({a, b});
            if (it == sigma.end())
                throw std::invalid_argument("twist: sigma missing for composable pair (" +
                                            g->label(a) + ", " + g->label(b) + ")");
            if (std::abs(std::abs(it->second) - 1.0) > 1e-12)
                throw std::invalid_argument("twist: sigma not unit-modulus at (" + g->label(a) +
                                            ", " + g->label(b) + ")");
            table[static_cast<std::size_t>(a) * n + b] = it->second;
        }

    auto tab = [&](int a, int b) { return table[static_cast<std::size_t>(a) * n + b]; };
    for (int a = 0; a < n; ++a) {
        if (std::abs(tab(g->range(a), a) - Cplx{1, 0}) > 1e-12 ||
            std::abs(tab(a, g->source(a)) - Cplx{1, 0}) > 1e-12)
            throw std::invalid_argument("twist: sigma not normalized at " + g->label(a));
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const int ab = g->compose(a, b);
            if (ab == kUndefined) continue;
            for (int c = 0; c < n; ++c) {
                const int bc = g->compose(b, c);
                if (bc == kUndefined) continue;
                const Cplx lhs = tab(a, b) * tab(ab, c);
                const Cplx rhs = tab(b, c) * tab(a, bc);
                if (std::abs(lhs - rhs) > 1e-12) {
                    std::ostringstream os;
                    os << "twist: cocycle identity fails at " << triple_str(*g, a, b, c)
                       << ", residual " << std::scientific << std::abs(lhs - rhs);
                    throw std::invalid_argument(os.str());
                }
            }
        }

    FiberSpec dims;
    for (int u : g->units()) dims.dim[u] = 1;
    auto bundle = BundlePtr(new FellBundle(std::move(g), dims, BundleKind::Twist));
    const_cast<FellBundle&>(*bundle).sigma_ = std::move(table);

    // the involution normalization is only accepted once the axioms confirm it
    const ValidationReport check = validate_bundle(*bundle, 1e-10);
    if (!check.ok())
        throw std::invalid_argument("twist: constructed bundle fails validation:\n" +
                                    check.to_string());
    return bundle;
}

BundlePtr make_crossed_product_bundle(GroupoidPtr g, const FiberSpec& dims,
                                      const std::map<int, Mat>& alpha) {
    check_dims_positive(*g, dims);
    const int n = g->arrow_count();
    std::vector<Mat> unitaries(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const auto it = alpha.find(a);
        if (it == alpha.end())
            throw std::invalid_argument("crossed product: missing unitary for arrow " +
                                        g->label(a));
        const int mr = dims.at(g->range(a));
        const int ms = dims.at(g->source(a));
        if (mr != ms)
            throw std::invalid_argument(
                "crossed product: fiber dimension must be constant along orbits (arrow " +
                g->label(a) + ")");
        if (it->second.rows() != mr || it->second.cols() != ms)
            throw StructureError("crossed product: unitary shape mismatch at arrow " +
                                 g->label(a));
        const Mat& u = it->second;
        if ((u * u.adjoint() - Mat::Identity(mr, mr)).norm() > 1e-10)
            throw std::invalid_argument("crossed product: alpha is not unitary at arrow " +
                                        g->label(a));
        unitaries[static_cast<std::size_t>(a)] = u;
    }

    auto conj_by = [&](int a, const Mat& x) -> Mat {
        const Mat& u = unitaries[static_cast<std::size_t>(a)];
        return u * x * u.adjoint();
    };

    // alpha_u = id on units
    for (int u : g->units()) {
        const int m = dims.at(u);
        for (int i = 0; i < m * m; ++i) {
            Mat e = Mat::Zero(m, m);
            e(i / m, i % m) = 1.0;
            if ((conj_by(u, e) - e).norm() > 1e-10)
                throw std::invalid_argument("crossed product: alpha must be trivial at unit " +
                                            g->label(u));
        }
    }
    // alpha_a . alpha_b = alpha_{ab} on composable pairs
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const int ab = g->compose(a, b);
            if (ab == kUndefined) continue;
            const int m = dims.at(g->source(b));
            for (int i = 0; i < m * m; ++i) {
                Mat e = Mat::Zero(m, m);
                e(i / m, i % m) = 1.0;
                if ((conj_by(a, conj_by(b, e)) - conj_by(ab, e)).norm() > 1e-10)
                    throw std::invalid_argument(
                        "crossed product: alpha is not multiplicative at pair (" + g->label(a) +
                        ", " + g->label(b) + ")");
            }
        }

    auto bundle = BundlePtr(new FellBundle(std::move(g), dims, BundleKind::CrossedProduct));
    const_cast<FellBundle&>(*bundle).unitaries_ = std::move(unitaries);
    return bundle;
}

BundlePtr make_custom_bundle(GroupoidPtr g, const FiberSpec& dims, CustomTables tables) {
    check_dims_positive(*g, dims);
    const int n = g->arrow_count();
    auto rows = [&](int a) { return dims.at(g->range(a)); };
    auto cols = [&](int a) { return dims.at(g->source(a)); };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const int ab = g->compose(a, b);
            if (ab == kUndefined) continue;
            const auto it = tables.mult.find({a, b});
            if (it == tables.mult.end())
                throw StructureError("custom bundle: missing mult table for composable pair");
            const int da = rows(a) * cols(a);
            const int db = rows(b) * cols(b);
            if (static_cast<int>(it->second.size()) != da)
                throw StructureError("custom bundle: mult table has wrong left basis size");
            for (const auto& row : it->second) {
                if (static_cast<int>(row.size()) != db)
                    throw StructureError("custom bundle: mult table has wrong right basis size");
                for (const auto& m : row)
                    if (m.rows() != rows(ab) || m.cols() != cols(ab))
                        throw StructureError("custom bundle: mult value shape mismatch");
            }
        }
    for (int a = 0; a < n; ++a) {
        const auto it = tables.invol.find(a);
        if (it == tables.invol.end())
            throw StructureError("custom bundle: missing invol table for arrow");
        const int ai = g->inverse(a);
        if (static_cast<int>(it->second.size()) != rows(a) * cols(a))
            throw StructureError("custom bundle: invol table has wrong basis size");
        for (const auto& m : it->second)
            if (m.rows() != rows(ai) || m.cols() != cols(ai))
                throw StructureError("custom bundle: invol value shape mismatch");
    }
    auto bundle = BundlePtr(new FellBundle(std::move(g), dims, BundleKind::Custom));
    const_cast<FellBundle&>(*bundle).tables_ = std::move(tables);
    return bundle;
}

}  // namespace fell
