#include <fellbundle/jmap.hpp>

#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fell {

namespace {

int arrow_position_in_fiber(const FiniteGroupoid& g, int unit, int arrow) {
    const auto& arrows = g.fiber_s(unit);
    for (std::size_t i = 0; i < arrows.size(); ++i)
        if (arrows[i] == arrow) return static_cast<int>(i);
    throw std::invalid_argument("arrow is not in the source fiber");
}

}  // namespace

Mat j_recover(const OperatorFamily& family, int arrow, double tol) {
    const FellBundle& bundle = family.bundle();
    const FiniteGroupoid& g = bundle.groupoid();
    const int u = g.source(arrow);
    const int nu = bundle.unit_dim(u);
    const int d = bundle.fiber_dim(arrow);
    const Mat& op = family.at_unit(u);
    const int pos = arrow_position_in_fiber(g, u, arrow);

    // Sweeping <h_arrow^{E_kl}, V h_u^{E_mm}> over all matrix units pins down
    // the coefficient block of (V h_u^{E_mm}) at `arrow`; each diagonal unit
    // E_mm then yields the linear equation  mult(arrow, u)(M, E_mm) = block.
    Mat system(static_cast<Eigen::Index>(d) * nu, d);
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(d) * nu);
    for (int m = 0; m < nu; ++m) {
        Mat emm = Mat::Zero(nu, nu);
        emm(m, m) = 1.0;
        XuVector h = XuVector::delta(family.bundle_ptr(), u, emm);
        const XuVector w = apply_flat(op, h);
        const Mat block = w.entry(pos);
        for (int i = 0; i < d; ++i) {
            const Mat img = bundle.mult(arrow, u, bundle.basis_element(arrow, i), emm);
            system.block(static_cast<Eigen::Index>(m) * d, i, d, 1) = img.reshaped<Eigen::RowMajor>();
        }
        rhs.segment(static_cast<Eigen::Index>(m) * d, d) = block.reshaped<Eigen::RowMajor>();
    }

    const Eigen::VectorXcd coeffs = system.colPivHouseholderQr().solve(rhs);
    const double residual = (system * coeffs - rhs).cwiseAbs().maxCoeff();
    const double scale = 1.0 + op.norm();
    if (residual > tol * scale)
        throw std::invalid_argument(
            "j_recover: family is not in the image of the representation (residual " +
            std::to_string(residual) + " at arrow " + g.label(arrow) + ")");

    Mat out(bundle.fiber_rows(arrow), bundle.fiber_cols(arrow));
    const int cols = bundle.fiber_cols(arrow);
    for (int i = 0; i < d; ++i) out(i / cols, i % cols) = coeffs(i);
    return out;
}

Section j_recover_section(const OperatorFamily& family, double tol) {
    const FellBundle& bundle = family.bundle();
    std::vector<Mat> values;
    values.reserve(static_cast<std::size_t>(bundle.groupoid().arrow_count()));
    for (int a = 0; a < bundle.groupoid().arrow_count(); ++a)
        values.push_back(j_recover(family, a, tol));
    return Section(family.bundle_ptr(), std::move(values));
}

CheckRecord check_norm_reducing(const Section& f, const std::vector<GramForm>& grams,
                                double tol) {
    const double sup = sup_norm(f);
    const double red = reduced_norm(f, grams);
    CheckRecord rec;
    rec.name = "norm_reducing";
    rec.law = "sup_c |f(c)| <= |f|_r";
    rec.residual = sup - red;
    rec.bound = tol;
    rec.pass = rec.residual <= rec.bound;
    return rec;
}

CheckRecord check_adjoint(const Section& f, double tol) {
    const FiniteGroupoid& g = f.bundle().groupoid();
    const OperatorFamily vf = represent_family(f);
    const OperatorFamily vfs = represent_family(involute(f));
    double worst = 0.0;
    for (int a = 0; a < g.arrow_count(); ++a) {
        const Mat lhs = j_recover(vfs, a);
        const Mat rhs = f.bundle().invol(g.inverse(a), j_recover(vf, g.inverse(a)));
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    CheckRecord rec;
    rec.name = "adjoint_formula";
    rec.law = "j(f*)(c) = j(f)(c^{-1})*";
    rec.residual = worst;
    rec.bound = tol * (1.0 + sup_norm(f));
    rec.pass = rec.residual <= rec.bound;
    return rec;
}

CheckRecord check_convolution_formula(const Section& f, const Section& g, double tol) {
    if (!f.same_bundle(g))
        throw std::invalid_argument("convolution check: bundle mismatch");
    const FellBundle& bundle = f.bundle();
    const FiniteGroupoid& gpd = bundle.groupoid();

    const Section direct = convolve(f, g);                              // route 1
    const Section jf = j_recover_section(represent_family(f));
    const Section jg = j_recover_section(represent_family(g));
    const Section jfs = j_recover_section(represent_family(involute(f)));

    double worst = 0.0;
    for (int c = 0; c < gpd.arrow_count(); ++c) {
        // route 2: fiber sum over G^{r(c)} of j(f)(a) j(g)(a^{-1}c)
        Mat fiber_sum = bundle.zero(c);
        for (int a : gpd.fiber_r(gpd.range(c))) {
            const int b = gpd.compose(gpd.inverse(a), c);
            fiber_sum += bundle.mult(a, b, jf.value(a), jg.value(b));
        }

        // route 3: Phi applied to x_f(e) = j(f*)(e), y_g(e) = j(g)(ec) over G_{r(c)}
        const int u = gpd.range(c);
        const auto& gu = gpd.fiber_s(u);
        std::vector<Mat> xf_entries, yg_entries;
        xf_entries.reserve(gu.size());
        yg_entries.reserve(gu.size());
        for (int e : gu) {
            xf_entries.push_back(jfs.value(e));
            yg_entries.push_back(jg.value(gpd.compose(e, c)));
        }
        const XuVector xf(f.bundle_ptr(), u, std::move(xf_entries));
        const WgVector yg(f.bundle_ptr(), c, std::move(yg_entries));
        const Mat phi_route = phi(dual(xf), yg);

        double local = (direct.value(c) - fiber_sum).cwiseAbs().maxCoeff();
        local = std::max(local, (direct.value(c) - phi_route).cwiseAbs().maxCoeff());
        local = std::max(local, (fiber_sum - phi_route).cwiseAbs().maxCoeff());

        // route 4 on crossed products: the action-twisted sum through the raw
        // unitaries, j(f*g)(c) = sum_a j(f)(a) alpha_a(j(g)(a^{-1}c))
        if (bundle.kind() == BundleKind::CrossedProduct) {
            Mat twisted = bundle.zero(c);
            for (int a : gpd.fiber_r(gpd.range(c))) {
                const int b = gpd.compose(gpd.inverse(a), c);
                twisted += jf.value(a) * bundle.apply_action(a, jg.value(b));
            }
            local = std::max(local, (direct.value(c) - twisted).cwiseAbs().maxCoeff());
            local = std::max(local, (fiber_sum - twisted).cwiseAbs().maxCoeff());
            local = std::max(local, (phi_route - twisted).cwiseAbs().maxCoeff());
        }
        worst = std::max(worst, local);
    }

    CheckRecord rec;
    rec.name = "convolution_routes";
    rec.law = "j(f*g)(c) = sum_{a in G^{r(c)}} j(f)(a) j(g)(a^{-1}c), all routes";
    rec.residual = worst;
    rec.bound = tol * (1.0 + sup_norm(f) * sup_norm(g) * gpd.arrow_count());
    rec.pass = rec.residual <= rec.bound;
    return rec;
}

CheckRecord check_ju_bound(const Section& f, int unit, const std::vector<GramForm>& grams,
                           double tol) {
    const FellBundle& bundle = f.bundle();
    const FiniteGroupoid& g = bundle.groupoid();
    const Section jf = j_recover_section(represent_family(f));

    const auto& gu = g.fiber_s(unit);
    std::vector<Mat> entries;
    entries.reserve(gu.size());
    for (int a : gu) entries.push_back(jf.value(a));
    const XuVector ju(f.bundle_ptr(), unit, std::move(entries));

    const double norm_gap = xu_norm(ju) - reduced_norm(f, grams);

    // |f|_{X_u}^2 = |sum_a f(a)* f(a)| recomputed term by term
    Mat gram_sum = Mat::Zero(bundle.unit_dim(unit), bundle.unit_dim(unit));
    for (std::size_t i = 0; i < gu.size(); ++i) {
        const int a = gu[i];
        gram_sum += bundle.mult(g.inverse(a), a, bundle.invol(a, ju.entry(static_cast<int>(i))),
                                ju.entry(static_cast<int>(i)));
    }
    const double identity_gap =
        std::abs(xu_norm(ju) * xu_norm(ju) - operator_norm(gram_sum));

    CheckRecord rec;
    rec.name = "xu_bound";
    rec.law = "|j_u(f)|_{X_u} <= |f|_r and |f|_{X_u}^2 = |sum f(a)* f(a)|";
    rec.instance = "unit " + g.label(unit);
    rec.residual = std::max(norm_gap, identity_gap);
    rec.bound = tol * (1.0 + sup_norm(f) * sup_norm(f));
    rec.pass = rec.residual <= rec.bound;
    return rec;
}

CheckRecord check_phi_bound(const XuVector& x, const WgVector& y, double tol) {
    const FellBundle& bundle = x.bundle();
    const int arrow = y.arrow();
    const Mat full = phi(dual(x), y);
    const double xnorm = xu_norm(x);
    const double ynorm = wg_norm(y);
    const double scale = 1.0 + xnorm * ynorm;

    double worst = bundle.fiber_norm(arrow, full) - xnorm * ynorm;  // cross-norm bound

    // growing-support partial sums; each tail is controlled by the
    // cross-norm of the truncated vectors, and that majorant is monotone
    double prev_major = std::numeric_limits<double>::infinity();
    for (int prefix = 0; prefix <= x.size(); ++prefix) {
        const XuVector xt = x.truncated(prefix);
        const WgVector yt = y.truncated(prefix);
        const Mat partial = phi(dual(xt), yt);
        const double residual = bundle.fiber_norm(arrow, Mat(full - partial));
        const double major = xu_norm(x - xt) * wg_norm(y - yt);
        worst = std::max(worst, residual - major);           // tail obeys the bound
        worst = std::max(worst, major - prev_major);         // majorants nonincreasing
        if (prefix == x.size()) worst = std::max(worst, residual);  // exact at full support
        prev_major = major;
    }

    CheckRecord rec;
    rec.name = "phi_bound";
    rec.law = "|Phi(flat x (x) y)| <= |x|_{X_u} |y|_{W_c} with convergent truncations";
    rec.residual = worst;
    rec.bound = tol * scale;
    rec.pass = rec.residual <= rec.bound;
    return rec;
}

Section random_section(const BundlePtr& bundle, CounterRng& rng) {
    const FiniteGroupoid& g = bundle->groupoid();
    std::vector<Mat> values;
    values.reserve(static_cast<std::size_t>(g.arrow_count()));
    for (int a = 0; a < g.arrow_count(); ++a) {
        Mat m(bundle->fiber_rows(a), bundle->fiber_cols(a));
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c) m(r, c) = rng.next_complex_gaussian();
        values.push_back(std::move(m));
    }
    return Section(bundle, std::move(values));
}

namespace {

void add_module_checks(VerificationReport& report, const BundlePtr& bundle, CounterRng& rng,
                       const std::string& tag, double tol) {
    const FiniteGroupoid& g = bundle->groupoid();
    const int arrow = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(g.arrow_count())));
    const int u = g.range(arrow);
    const int v = g.source(arrow);

    const XuVector h = XuVector::random(bundle, u, rng);
    const XuVector k = XuVector::random(bundle, u, rng);
    const WgVector xi = WgVector::random(bundle, arrow, rng);
    const WgVector zeta = WgVector::random(bundle, arrow, rng);
    const WgVector omega = WgVector::random(bundle, arrow, rng);

    {  // Cauchy-Schwarz in X_u
        const double lhs = operator_norm(xu_inner(h, k));
        const double rhs = operator_norm(xu_inner(h, h)) * operator_norm(xu_inner(k, k));
        report.add("cauchy_schwarz", "|<h,k>|^2 <= |<h,h>| |<k,k>|", tag, lhs * lhs - rhs,
                   tol * (1.0 + rhs));
    }
    {  // Psi preserves inner products
        Mat b(bundle->fiber_rows(arrow), bundle->fiber_cols(arrow));
        Mat c(bundle->fiber_rows(arrow), bundle->fiber_cols(arrow));
        for (int r = 0; r < b.rows(); ++r)
            for (int s = 0; s < b.cols(); ++s) {
                b(r, s) = rng.next_complex_gaussian();
                c(r, s) = rng.next_complex_gaussian();
            }
        const Mat lhs = wg_inner(psi(h, arrow, b), psi(k, arrow, c));
        const int ai = g.inverse(arrow);
        const Mat rhs = bundle->mult(
            ai, arrow, bundle->mult(ai, u, bundle->invol(arrow, b), xu_inner(h, k)), c);
        const double scale = 1.0 + operator_norm(rhs);
        report.add("psi_isometry", "<Psi(h (x) b), Psi(k (x) c)> = b* <h,k> c", tag,
                   (lhs - rhs).norm(), tol * scale);
    }
    {  // Phi preserves inner products
        const Mat lhs_val = phi(dual(h), xi);
        const Mat rhs_val = phi(dual(k), zeta);
        const int ai = g.inverse(arrow);
        const Mat lhs = bundle->mult(ai, arrow, bundle->invol(arrow, lhs_val), rhs_val);
        const Mat rhs = internal_tensor_inner(dual(h), xi, dual(k), zeta);
        const double scale = 1.0 + operator_norm(rhs);
        report.add("phi_isometry", "<Phi(x1), Phi(x2)> = <x1, x2>_{internal}", tag,
                   (lhs - rhs).norm(), tol * scale);
    }
    {  // imprimitivity identity on W_c
        const WgVector lhs = wg_ku_inner_apply(xi, zeta, omega);
        const WgVector rhs = [&] {
            const Mat a = wg_inner(zeta, omega);  // <zeta, omega> in A_v
            std::vector<Mat> entries;
            const auto& arrows = xi.support_arrows();
            for (std::size_t i = 0; i < arrows.size(); ++i) {
                const int shifted = g.compose(arrows[i], arrow);
                entries.push_back(bundle->mult(shifted, v, xi.entry(static_cast<int>(i)), a));
            }
            return WgVector(bundle, arrow, std::move(entries));
        }();
        double worst = 0.0;
        for (int i = 0; i < lhs.size(); ++i)
            worst = std::max(worst, (lhs.entry(i) - rhs.entry(i)).norm());
        const double scale = 1.0 + wg_norm(xi) * wg_norm(zeta) * wg_norm(omega);
        report.add("imprimitivity", "<xi,zeta>_K . omega = xi . <zeta,omega>_{A_v}", tag, worst,
                   tol * scale);
    }
    {  // cross-norm inequality for internal tensors
        const double lhs = std::sqrt(operator_norm(internal_tensor_inner(dual(h), xi, dual(h), xi)));
        const double rhs = xu_norm(h) * wg_norm(xi);
        report.add("cross_norm", "|x (x) y| <= |x| |y|", tag, lhs - rhs, tol * (1.0 + rhs));
    }
    CheckRecord pb = check_phi_bound(h, xi, std::max(tol, 1e-9));
    pb.instance = tag;
    report.add(std::move(pb));
}

}  // namespace

VerificationReport run_suite(const BundlePtr& bundle, int num_random, std::uint64_t seed) {
    SuiteConfig config;
    config.num_random = num_random;
    config.seed = seed;
    return run_suite(bundle, config);
}

VerificationReport run_suite(const BundlePtr& bundle, const SuiteConfig& config) {
    const ValidationReport validation = validate_bundle(*bundle);
    if (!validation.ok())
        throw std::invalid_argument("run_suite: bundle fails validation:\n" +
                                    validation.to_string());

    const FiniteGroupoid& g = bundle->groupoid();
    const auto grams = build_all_induced(*bundle);
    VerificationReport report;
    CounterRng rng(config.seed);
    const double tol = config.tol;

    auto run_section_checks = [&](const Section& f, const Section& gsec,
                                  const std::string& tag) {
        auto tagged = [&](CheckRecord rec) {
            if (rec.instance.empty()) rec.instance = tag;
            else rec.instance = tag + ", " + rec.instance;
            report.add(std::move(rec));
        };
        tagged(check_norm_reducing(f, grams, std::max(tol, 1e-9)));
        {  // round trip: j is the identity on sections
            const Section back = j_recover_section(represent_family(f));
            CheckRecord rec;
            rec.name = "j_roundtrip";
            rec.law = "j(V(f))(c) = f(c)";
            rec.residual = max_entry_distance(back, f);
            rec.bound = tol * (1.0 + sup_norm(f));
            rec.pass = rec.residual <= rec.bound;
            tagged(std::move(rec));
        }
        tagged(check_adjoint(f, tol));
        tagged(check_convolution_formula(f, gsec, tol));
        for (int u : g.units()) tagged(check_ju_bound(f, u, grams, std::max(tol, 1e-9)));
        {  // C*-identity of the reduced norm
            const double nf = reduced_norm(f, grams);
            const double nff = reduced_norm(convolve(involute(f), f), grams);
            CheckRecord rec;
            rec.name = "cstar_identity";
            rec.law = "|f* . f|_r = |f|_r^2";
            rec.residual = std::abs(nff - nf * nf);
            rec.bound = 1e-8 * (1.0 + nf * nf);
            rec.pass = rec.residual <= rec.bound;
            tagged(std::move(rec));
        }
    };

    run_section_checks(Section::units_identity(bundle), Section::units_identity(bundle),
                       "fixture delta_units");
    {
        const int a = g.arrow_count() - 1;
        const Section d = Section::delta(bundle, a, bundle->basis_element(a, 0));
        run_section_checks(d, d, "fixture delta arrow " + g.label(a));
    }
    for (int i = 0; i < config.num_random; ++i) {
        const Section f = random_section(bundle, rng);
        const Section h = random_section(bundle, rng);
        const std::string tag = "random[" + std::to_string(i) + "]";
        run_section_checks(f, h, tag);
        add_module_checks(report, bundle, rng, tag, tol);
    }
    return report;
}

}  // namespace fell
