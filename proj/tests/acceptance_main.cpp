// Acceptance suite: every criterion below runs at its stated tolerance
// and prints one PASS/FAIL line. The binary exits nonzero if any
// criterion fails.
//
//  1. norm reduction          sup|f| <= |f|_r + 1e-9, 500 instances
//  2. recovery round trip     j(V(f)) = f, entrywise <= 1e-10
//  3. adjoint formula         j(f*)(c) = j(f)(c^{-1})*, <= 1e-10
//  4. convolution routes      direct / fiber-sum / Phi (/ action-twisted)
//                             agree pairwise <= 1e-10
//  5. module bounds           |j_u f| <= |f|_r, cross-norm, Cauchy-Schwarz,
//                             Psi/Phi inner products, imprimitivity <= 1e-9,
//                             >= 100 random vectors per bundle kind
//  6. C*-identity             | |f*.f|_r - |f|_r^2 | <= 1e-8 |f|_r^2
//  7. oracle equivalences     characters / section-as-matrix / Pauli
//  8. integer-window harness  2cos(pi/(2N+2)) at 1e-9; 20 random instances
//                             bracketed with final gap <= 1e-3 at N = 256
//  9. determinism             jcheck emits byte-identical reports

#include <fellbundle/instances.hpp>
#include <fellbundle/io.hpp>
#include <fellbundle/jmap.hpp>
#include <fellbundle/zwindow.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace fell;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << index << ". " << name << ": " << detail
              << "\n";
    if (!pass) ++failures;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

Mat random_fiber(const FellBundle& b, int arrow, CounterRng& rng) {
    Mat m(b.fiber_rows(arrow), b.fiber_cols(arrow));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = rng.next_complex_gaussian();
    return m;
}

struct SharedStats {
    int instances = 0;
    double worst_norm_reduction = -1e300;   // sup - reduced
    double worst_roundtrip = 0.0;
    double worst_adjoint = 0.0;
    double worst_convolution = 0.0;
    double worst_cstar_rel = 0.0;
    // criterion 5 accumulators
    int module_draws[3] = {0, 0, 0};
    double worst_ju = -1e300;
    double worst_cross = -1e300;
    double worst_cs = -1e300;
    double worst_psi = 0.0;
    double worst_phi_iso = 0.0;
    double worst_imprim = 0.0;
    double elapsed = 0.0;
};

SharedStats run_shared_instances(int count) {
    SharedStats stats;
    Timer timer;
    for (int i = 0; i < count; ++i) {
        const BundleKind kind = i % 3 == 0 ? BundleKind::Trivial
                                           : (i % 3 == 1 ? BundleKind::Twist
                                                         : BundleKind::CrossedProduct);
        const int kind_slot = i % 3;
        const auto bundle =
            make_random_instance(kind, 3, 10000 + static_cast<std::uint64_t>(i));
        const FiniteGroupoid& g = bundle->groupoid();
        CounterRng rng(static_cast<std::uint64_t>(i));

        const Section f = random_section(bundle, rng);
        const Section h = random_section(bundle, rng);
        const Section fs = involute(f);
        const auto grams = build_all_induced(*bundle);

        const double red_f = reduced_norm(f, grams);

        // 1. norm reduction
        stats.worst_norm_reduction =
            std::max(stats.worst_norm_reduction, sup_norm(f) - red_f);

        // 2. round trip through the regular representation
        const Section jf = j_recover_section(represent_family(f));
        const Section jh = j_recover_section(represent_family(h));
        const Section jfs = j_recover_section(represent_family(fs));
        stats.worst_roundtrip = std::max(stats.worst_roundtrip, max_entry_distance(jf, f));
        stats.worst_roundtrip = std::max(stats.worst_roundtrip, max_entry_distance(jh, h));

        // 3. adjoint formula from recovered data
        for (int a = 0; a < g.arrow_count(); ++a) {
            const Mat rhs = bundle->invol(g.inverse(a), jf.value(g.inverse(a)));
            stats.worst_adjoint = std::max(
                stats.worst_adjoint, (jfs.value(a) - rhs).cwiseAbs().maxCoeff());
        }

        // 4. convolution routes, pairwise
        const Section direct = convolve(f, h);
        for (int c = 0; c < g.arrow_count(); ++c) {
            Mat fiber_sum = bundle->zero(c);
            for (int a : g.fiber_r(g.range(c))) {
                const int b = g.compose(g.inverse(a), c);
                fiber_sum += bundle->mult(a, b, jf.value(a), jh.value(b));
            }
            const int u = g.range(c);
            const auto& gu = g.fiber_s(u);
            std::vector<Mat> xf_entries, yh_entries;
            for (int e : gu) {
                xf_entries.push_back(jfs.value(e));
                yh_entries.push_back(jh.value(g.compose(e, c)));
            }
            const Mat phi_route = phi(dual(XuVector(bundle, u, std::move(xf_entries))),
                                      WgVector(bundle, c, std::move(yh_entries)));
            double local = (direct.value(c) - fiber_sum).cwiseAbs().maxCoeff();
            local = std::max(local, (direct.value(c) - phi_route).cwiseAbs().maxCoeff());
            local = std::max(local, (fiber_sum - phi_route).cwiseAbs().maxCoeff());
            if (bundle->kind() == BundleKind::CrossedProduct) {
                Mat twisted = bundle->zero(c);
                for (int a : g.fiber_r(g.range(c))) {
                    const int b = g.compose(g.inverse(a), c);
                    twisted += jf.value(a) * bundle->apply_action(a, jh.value(b));
                }
                local = std::max(local, (direct.value(c) - twisted).cwiseAbs().maxCoeff());
                local = std::max(local, (fiber_sum - twisted).cwiseAbs().maxCoeff());
            }
            stats.worst_convolution = std::max(stats.worst_convolution, local);
        }

        // 6. C*-identity of the reduced norm
        const double red_ff = reduced_norm(convolve(fs, f), grams);
        if (red_f > 1e-12)
            stats.worst_cstar_rel = std::max(
                stats.worst_cstar_rel, std::abs(red_ff - red_f * red_f) / (red_f * red_f));

        // 5. module bounds, one draw per instance (>= 100 per kind overall)
        {
            ++stats.module_draws[kind_slot];
            // |j_u f|_{X_u} <= |f|_r over every unit
            for (int u : g.units()) {
                const auto& gu = g.fiber_s(u);
                std::vector<Mat> entries;
                for (int a : gu) entries.push_back(jf.value(a));
                const XuVector ju(bundle, u, std::move(entries));
                stats.worst_ju = std::max(stats.worst_ju, xu_norm(ju) - red_f);
            }
            const int arrow =
                static_cast<int>(rng.next_below(static_cast<std::uint64_t>(g.arrow_count())));
            const int u = g.range(arrow);
            const int ai = g.inverse(arrow);
            const XuVector x = XuVector::random(bundle, u, rng);
            const XuVector y = XuVector::random(bundle, u, rng);
            const WgVector xi = WgVector::random(bundle, arrow, rng);
            const WgVector zeta = WgVector::random(bundle, arrow, rng);
            const WgVector omega = WgVector::random(bundle, arrow, rng);

            // cross-norm (Cauchy-Schwarz for the internal tensor product)
            const double cross =
                std::sqrt(operator_norm(internal_tensor_inner(dual(x), xi, dual(x), xi)));
            stats.worst_cross = std::max(stats.worst_cross, cross - xu_norm(x) * wg_norm(xi));

            // Cauchy-Schwarz in X_u
            const double lhs = operator_norm(xu_inner(x, y));
            const double rhs = operator_norm(xu_inner(x, x)) * operator_norm(xu_inner(y, y));
            stats.worst_cs = std::max(stats.worst_cs, lhs * lhs - rhs);

            // Psi inner-product preservation
            const Mat b = random_fiber(*bundle, arrow, rng);
            const Mat c = random_fiber(*bundle, arrow, rng);
            const Mat psi_lhs = wg_inner(psi(x, arrow, b), psi(y, arrow, c));
            const Mat psi_rhs = bundle->mult(
                ai, arrow, bundle->mult(ai, u, bundle->invol(arrow, b), xu_inner(x, y)), c);
            stats.worst_psi = std::max(stats.worst_psi, (psi_lhs - psi_rhs).norm());

            // Phi inner-product preservation
            const Mat p1 = phi(dual(x), xi);
            const Mat p2 = phi(dual(y), zeta);
            const Mat phi_lhs = bundle->mult(ai, arrow, bundle->invol(arrow, p1), p2);
            const Mat phi_rhs = internal_tensor_inner(dual(x), xi, dual(y), zeta);
            stats.worst_phi_iso = std::max(stats.worst_phi_iso, (phi_lhs - phi_rhs).norm());

            // imprimitivity identity
            const WgVector imp_lhs = wg_ku_inner_apply(xi, zeta, omega);
            const Mat pairing = wg_inner(zeta, omega);
            for (int k = 0; k < imp_lhs.size(); ++k) {
                const int shifted =
                    g.compose(xi.support_arrows()[static_cast<std::size_t>(k)], arrow);
                const Mat imp_rhs =
                    bundle->mult(shifted, g.source(arrow), xi.entry(k), pairing);
                stats.worst_imprim =
                    std::max(stats.worst_imprim, (imp_lhs.entry(k) - imp_rhs).norm());
            }
        }
        ++stats.instances;
    }
    stats.elapsed = timer.seconds();
    return stats;
}

void criterion_7_oracles() {
    Timer timer;
    double worst_char = 0.0;
    // (a) abelian trivial line bundles vs the character maximum
    for (int n = 2; n <= 8; ++n) {
        FiberSpec dims;
        const auto gp = make_group_groupoid(cyclic_group_table(n));
        dims.dim[0] = 1;
        const auto bundle = make_trivial_bundle(gp, dims);
        const auto grams = build_all_induced(*bundle);
        CounterRng rng(static_cast<std::uint64_t>(n));
        for (int trial = 0; trial < 20; ++trial) {
            const Section f = random_section(bundle, rng);
            double best = 0.0;
            for (int k = 0; k < n; ++k) {
                Cplx sum{0, 0};
                for (int j = 0; j < n; ++j) {
                    const double t = 2.0 * std::numbers::pi * j * k / n;
                    sum += f.value(j)(0, 0) * Cplx{std::cos(t), std::sin(t)};
                }
                best = std::max(best, std::abs(sum));
            }
            worst_char = std::max(worst_char, std::abs(reduced_norm(f, grams) - best));
        }
    }
    {
        const auto gp = make_group_groupoid(klein_four_table());
        FiberSpec dims;
        dims.dim[0] = 1;
        const auto bundle = make_trivial_bundle(gp, dims);
        const auto grams = build_all_induced(*bundle);
        CounterRng rng(99);
        for (int trial = 0; trial < 20; ++trial) {
            const Section f = random_section(bundle, rng);
            double best = 0.0;
            for (int sx : {1, -1})
                for (int sy : {1, -1})
                    best = std::max(best, std::abs(f.value(0)(0, 0) +
                                                   static_cast<double>(sx) * f.value(1)(0, 0) +
                                                   static_cast<double>(sy) * f.value(2)(0, 0) +
                                                   static_cast<double>(sx * sy) *
                                                       f.value(3)(0, 0)));
            worst_char = std::max(worst_char, std::abs(reduced_norm(f, grams) - best));
        }
    }
    report(7, "oracle: abelian characters", worst_char <= 1e-9,
           "max |reduced - characters| = " + fmt(worst_char) + " (bound 1e-9)");

    // (b) pair groupoid line bundle vs the section-as-matrix norm
    double worst_pair = 0.0;
    for (int n : {2, 3}) {
        FiberSpec dims;
        const auto gp = make_pair_groupoid(n);
        for (int u : gp->units()) dims.dim[u] = 1;
        const auto bundle = make_trivial_bundle(gp, dims);
        const auto grams = build_all_induced(*bundle);
        CounterRng rng(static_cast<std::uint64_t>(n) + 40);
        for (int trial = 0; trial < 20; ++trial) {
            const Section f = random_section(bundle, rng);
            Mat m(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) m(i, j) = f.value(i * n + j)(0, 0);
            worst_pair =
                std::max(worst_pair, std::abs(reduced_norm(f, grams) - operator_norm(m)));
        }
    }
    report(7, "oracle: pair groupoid matrix norm", worst_pair <= 1e-10,
           "max |reduced - svd| = " + fmt(worst_pair) + " (bound 1e-10)");

    // (c) Klein four-group twist vs the 2x2 Pauli realization
    double worst_pauli = 0.0;
    {
        const auto gp = make_group_groupoid(klein_four_table());
        const auto bundle = make_twist_bundle(gp, klein_anticommutation_cocycle(*gp));
        const auto grams = build_all_induced(*bundle);
        Mat X(2, 2), Z(2, 2);
        X << 0, 1, 1, 0;
        Z << 1, 0, 0, -1;
        const std::vector<Mat> image = {Mat::Identity(2, 2), X, Z, X * Z};
        CounterRng rng(77);
        for (int trial = 0; trial < 20; ++trial) {
            const Section f = random_section(bundle, rng);
            Mat rep = Mat::Zero(2, 2);
            for (int a = 0; a < 4; ++a)
                rep += f.value(a)(0, 0) * image[static_cast<std::size_t>(a)];
            worst_pauli =
                std::max(worst_pauli, std::abs(reduced_norm(f, grams) - operator_norm(rep)));
        }
    }
    report(7, "oracle: Klein twist Pauli realization", worst_pauli <= 1e-9,
           "max |reduced - pauli| = " + fmt(worst_pauli) + " (bound 1e-9, " +
               std::to_string(timer.seconds()).substr(0, 4) + " s)");
}

void criterion_8_zwindow() {
    Timer timer;
    double worst_closed_form = 0.0;
    {
        ZWindowInstance hop;
        hop.coeffs[-1] = Cplx{1, 0};
        hop.coeffs[1] = Cplx{1, 0};
        for (int n : {4, 16, 64}) {
            const double expected = 2.0 * std::cos(std::numbers::pi / (2 * n + 2));
            worst_closed_form =
                std::max(worst_closed_form, std::abs(z_window_norm(hop, n) - expected));
        }
    }
    bool chain_ok = true;
    double worst_gap = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = random_z_instance(8, 9, 5000 + seed);
        const auto bracket = fourier_oracle(inst, 512);
        double norm256 = 0.0;
        for (int n : {16, 64, 256}) {
            const double norm = z_window_norm(inst, n);
            if (inst.coeff_max() > norm + 1e-9) chain_ok = false;
            if (norm > bracket.upper + 1e-9) chain_ok = false;
            if (n == 256) norm256 = norm;
        }
        worst_gap = std::max(worst_gap, bracket.upper - norm256);
    }
    const bool pass = worst_closed_form <= 1e-9 && chain_ok && worst_gap <= 1e-3;
    report(8, "integer-window harness", pass,
           "closed form " + fmt(worst_closed_form) + " (bound 1e-9), chain " +
               (chain_ok ? "ok" : "violated") + ", final gap " + fmt(worst_gap) +
               " (bound 1e-3), " + std::to_string(timer.seconds()).substr(0, 4) + " s");
}

void criterion_9_determinism(const std::string& cli) {
    Timer timer;
    namespace fs = std::filesystem;
    const fs::path tmp = fs::temp_directory_path();
    const fs::path bundle_path = tmp / "fell_acceptance_bundle.json";
    {
        const auto bundle = make_random_instance(BundleKind::CrossedProduct, 2, 31337);
        std::ofstream out(bundle_path);
        out << bundle_to_json(*bundle) << "\n";
    }
    const fs::path out1 = tmp / "fell_acceptance_run1.json";
    const fs::path out2 = tmp / "fell_acceptance_run2.json";
    const std::string base = cli + " jcheck " + bundle_path.string() +
                             " --random 10 --seed 424242 --out ";
    const int s1 = std::system((base + out1.string()).c_str());
    const int s2 = std::system((base + out2.string()).c_str());
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    const std::string a = slurp(out1);
    const std::string b = slurp(out2);
    const bool pass = WEXITSTATUS(s1) == 0 && WEXITSTATUS(s2) == 0 && !a.empty() && a == b;
    report(9, "deterministic reports", pass,
           a == b ? "two jcheck runs emitted identical bytes (" +
                        std::to_string(a.size()) + " bytes, " +
                        std::to_string(timer.seconds()).substr(0, 4) + " s)"
                  : "runs differ or failed");
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli = FELL_CLI_PATH;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];

    const SharedStats stats = run_shared_instances(500);
    std::ostringstream shared;
    shared << stats.instances << " instances in " << stats.elapsed << " s";

    report(1, "norm reduction", stats.worst_norm_reduction <= 1e-9,
           "max (sup - reduced) = " + fmt(stats.worst_norm_reduction) + " (bound 1e-9), " +
               shared.str());
    report(2, "recovery round trip", stats.worst_roundtrip <= 1e-10,
           "max entrywise residual = " + fmt(stats.worst_roundtrip) + " (bound 1e-10)");
    report(3, "adjoint formula", stats.worst_adjoint <= 1e-10,
           "max residual = " + fmt(stats.worst_adjoint) + " (bound 1e-10)");
    report(4, "convolution routes", stats.worst_convolution <= 1e-10,
           "max pairwise residual = " + fmt(stats.worst_convolution) + " (bound 1e-10)");
    {
        const bool enough = stats.module_draws[0] >= 100 && stats.module_draws[1] >= 100 &&
                            stats.module_draws[2] >= 100;
        const double worst_ineq =
            std::max({stats.worst_ju, stats.worst_cross, stats.worst_cs});
        const double worst_eq =
            std::max({stats.worst_psi, stats.worst_phi_iso, stats.worst_imprim});
        report(5, "module bounds", enough && worst_ineq <= 1e-9 && worst_eq <= 1e-9,
               "max inequality slack = " + fmt(worst_ineq) + ", max identity residual = " +
                   fmt(worst_eq) + " (bounds 1e-9; draws " +
                   std::to_string(stats.module_draws[0]) + "/" +
                   std::to_string(stats.module_draws[1]) + "/" +
                   std::to_string(stats.module_draws[2]) + " per kind)");
    }
    report(6, "C*-identity", stats.worst_cstar_rel <= 1e-8,
           "max relative residual = " + fmt(stats.worst_cstar_rel) + " (bound 1e-8)");

    criterion_7_oracles();
    criterion_8_zwindow();
    criterion_9_determinism(cli);

    std::cout << (failures == 0 ? "acceptance: all criteria passed\n"
                                : "acceptance: " + std::to_string(failures) +
                                      " criterion line(s) failed\n");
    return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
