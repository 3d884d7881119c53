#include <fellbundle/instances.hpp>

#include <Eigen/QR>

#include <algorithm>
#include <numbers>
#include <sstream>

namespace fell {

namespace {

Mat random_unitary(int m, CounterRng& rng) {
    Mat a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = rng.next_complex_gaussian();
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < m; ++i) {
        const Cplx d = r(i, i);
        if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

Mat clock_unitary(int m, int order, int step, CounterRng& rng) {
    // diagonal of order-th roots of unity raised to `step`, random exponents
    Mat u = Mat::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        const auto p = static_cast<double>(rng.next_below(static_cast<std::uint64_t>(order)));
        const double t = 2.0 * std::numbers::pi * p * step / order;
        u(i, i) = Cplx{std::cos(t), std::sin(t)};
    }
    return u;
}

enum class Family {
    Pair2,
    Pair3,
    Cyclic2,
    Cyclic3,
    Cyclic4,
    Cyclic6,
    Klein,
    Sym3,
    Transf2,
    Transf3,
    Units3,
};

struct Pick {
    GroupoidPtr g;
    Family family;
    int cyclic_order = 0;  // for cyclic families
};

Pick pick_groupoid(CounterRng& rng, bool allow_units_only) {
    std::vector<Family> options = {Family::Pair2,   Family::Pair3,  Family::Cyclic2,
                                   Family::Cyclic3, Family::Cyclic4, Family::Cyclic6,
                                   Family::Klein,   Family::Sym3,   Family::Transf2,
                                   Family::Transf3};
    if (allow_units_only) options.push_back(Family::Units3);
    const Family f = options[rng.next_below(options.size())];
    Pick pick;
    pick.family = f;
    switch (f) {
        case Family::Pair2: pick.g = make_pair_groupoid(2); break;
        case Family::Pair3: pick.g = make_pair_groupoid(3); break;
        case Family::Cyclic2:
            pick.g = make_group_groupoid(cyclic_group_table(2));
            pick.cyclic_order = 2;
            break;
        case Family::Cyclic3:
            pick.g = make_group_groupoid(cyclic_group_table(3));
            pick.cyclic_order = 3;
            break;
        case Family::Cyclic4:
            pick.g = make_group_groupoid(cyclic_group_table(4));
            pick.cyclic_order = 4;
            break;
        case Family::Cyclic6:
            pick.g = make_group_groupoid(cyclic_group_table(6));
            pick.cyclic_order = 6;
            break;
        case Family::Klein: pick.g = make_group_groupoid(klein_four_table()); break;
        case Family::Sym3: pick.g = make_group_groupoid(symmetric3_table()); break;
        case Family::Transf2: {
            // Z2 flipping two points
            pick.g = make_transformation_groupoid(2, cyclic_group_table(2),
                                                  {{0, 1}, {1, 0}});
            break;
        }
        case Family::Transf3: {
            // Z3 cycling three points
            pick.g = make_transformation_groupoid(3, cyclic_group_table(3),
                                                  {{0, 1, 2}, {2, 0, 1}, {1, 2, 0}});
            break;
        }
        case Family::Units3: pick.g = make_unit_groupoid(3); break;
    }
    return pick;
}

}  // namespace

std::map<std::pair<int, int>, Cplx> trivial_cocycle(const FiniteGroupoid& g) {
    std::map<std::pair<int, int>, Cplx> sigma;
    for (int a = 0; a < g.arrow_count(); ++a)
        for (int b = 0; b < g.arrow_count(); ++b)
            if (g.compose(a, b) != kUndefined) sigma[{a, b}] = Cplx{1, 0};
    return sigma;
}

std::map<std::pair<int, int>, Cplx> random_coboundary(const FiniteGroupoid& g, CounterRng& rng) {
    std::vector<Cplx> lambda(static_cast<std::size_t>(g.arrow_count()));
    for (int a = 0; a < g.arrow_count(); ++a)
        lambda[static_cast<std::size_t>(a)] = g.is_unit(a) ? Cplx{1, 0} : rng.next_phase();
    std::map<std::pair<int, int>, Cplx> sigma;
    for (int a = 0; a < g.arrow_count(); ++a)
        for (int b = 0; b < g.arrow_count(); ++b) {
            const int ab = g.compose(a, b);
            if (ab == kUndefined) continue;
            sigma[{a, b}] = lambda[static_cast<std::size_t>(a)] *
                            lambda[static_cast<std::size_t>(b)] *
                            std::conj(lambda[static_cast<std::size_t>(ab)]);
        }
    return sigma;
}

std::map<std::pair<int, int>, Cplx> klein_anticommutation_cocycle(const FiniteGroupoid& g) {
    if (g.arrow_count() != 4 || g.units().size() != 1)
        throw std::invalid_argument("klein cocycle: expects the Klein four-group groupoid");
    std::map<std::pair<int, int>, Cplx> sigma;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const int exp = (a >> 1) * (b & 1);
            sigma[{a, b}] = (exp % 2 == 0) ? Cplx{1, 0} : Cplx{-1, 0};
        }
    return sigma;
}

BundlePtr make_random_instance(BundleKind kind, int size_hint, std::uint64_t seed) {
    CounterRng rng(seed);
    const int max_dim = std::clamp(size_hint, 1, 3);

    switch (kind) {
        case BundleKind::Trivial: {
            const Pick pick = pick_groupoid(rng, /*allow_units_only=*/true);
            FiberSpec dims;
            for (int u : pick.g->units())
                dims.dim[u] = 1 + static_cast<int>(rng.next_below(
                                      static_cast<std::uint64_t>(max_dim)));
            return make_trivial_bundle(pick.g, dims);
        }
        case BundleKind::Twist: {
            const Pick pick = pick_groupoid(rng, /*allow_units_only=*/false);
            auto sigma = random_coboundary(*pick.g, rng);
            if (pick.family == Family::Klein && rng.next_below(2) == 0) {
                // multiply in the nontrivial class; the product stays a cocycle
                const auto klein = klein_anticommutation_cocycle(*pick.g);
                for (auto& [key, value] : sigma) value *= klein.at(key);
            }
            return make_twist_bundle(pick.g, sigma);
        }
        case BundleKind::CrossedProduct: {
            const Pick pick = pick_groupoid(rng, /*allow_units_only=*/false);
            const int m = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_dim)));
            FiberSpec dims;
            for (int u : pick.g->units()) dims.dim[u] = m;
            const FiniteGroupoid& g = *pick.g;
            std::map<int, Mat> alpha;

            const bool trivial_action = (m == 1) || rng.next_below(3) == 0;
            if (trivial_action) {
                for (int a = 0; a < g.arrow_count(); ++a) alpha[a] = Mat::Identity(m, m);
            } else if (pick.cyclic_order > 0) {
                // exact representation of Z_n by a diagonal clock unitary
                const Mat gen = clock_unitary(m, pick.cyclic_order, 1, rng);
                Mat power = Mat::Identity(m, m);
                for (int k = 0; k < g.arrow_count(); ++k) {
                    alpha[k] = power;  // group groupoid: arrow k is g^k
                    power = gen * power;
                }
            } else if (pick.family == Family::Klein) {
                // commuting diagonal sign matrices
                auto signs = [&] {
                    Mat u = Mat::Identity(m, m);
                    for (int i = 0; i < m; ++i)
                        if (rng.next_below(2) == 1) u(i, i) = -1.0;
                    return u;
                };
                const Mat ux = signs();
                const Mat uy = signs();
                alpha[0] = Mat::Identity(m, m);
                alpha[1] = ux;
                alpha[2] = uy;
                alpha[3] = ux * uy;
            } else if (pick.family == Family::Transf2 || pick.family == Family::Transf3) {
                // arrows (x, g): alpha depends only on g through a clock rep
                const int order = pick.family == Family::Transf2 ? 2 : 3;
                const Mat gen = clock_unitary(m, order, 1, rng);
                std::vector<Mat> powers(static_cast<std::size_t>(order));
                powers[0] = Mat::Identity(m, m);
                for (int k = 1; k < order; ++k) powers[static_cast<std::size_t>(k)] =
                    gen * powers[static_cast<std::size_t>(k - 1)];
                for (int a = 0; a < g.arrow_count(); ++a)
                    alpha[a] = powers[static_cast<std::size_t>(a % order)];
            } else if (pick.family == Family::Pair2 || pick.family == Family::Pair3) {
                // alpha_{(i,j)} = Ad(W_i W_j*) for random unitaries W_i
                const int n = pick.family == Family::Pair2 ? 2 : 3;
                std::vector<Mat> w;
                w.reserve(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) w.push_back(random_unitary(m, rng));
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        alpha[i * n + j] = w[static_cast<std::size_t>(i)] *
                                           w[static_cast<std::size_t>(j)].adjoint();
            } else if (pick.family == Family::Sym3 && m == 3) {
                // permutation representation of S_3
                const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                         {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
                for (int k = 0; k < 6; ++k) {
                    Mat u = Mat::Zero(3, 3);
                    for (int x = 0; x < 3; ++x) u(perms[k][x], x) = 1.0;
                    alpha[k] = u;
                }
            } else {
                for (int a = 0; a < g.arrow_count(); ++a) alpha[a] = Mat::Identity(m, m);
            }
            return make_crossed_product_bundle(pick.g, dims, alpha);
        }
        case BundleKind::Custom:
            throw std::invalid_argument("make_random_instance: custom bundles are not generated");
    }
    throw std::invalid_argument("make_random_instance: unknown kind");
}

std::string describe_instance(const FellBundle& bundle) {
    std::ostringstream os;
    switch (bundle.kind()) {
        case BundleKind::Trivial: os << "trivial"; break;
        case BundleKind::Twist: os << "twist"; break;
        case BundleKind::CrossedProduct: os << "crossed"; break;
        case BundleKind::Custom: os << "custom"; break;
    }
    const FiniteGroupoid& g = bundle.groupoid();
    os << " bundle, " << g.arrow_count() << " arrows, " << g.units().size() << " units, dims [";
    bool first = true;
    for (int u : g.units()) {
        if (!first) os << ",";
        os << bundle.unit_dim(u);
        first = false;
    }
    os << "]";
    return os.str();
}

}  // namespace fell
