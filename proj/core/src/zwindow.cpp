#include <fellbundle/zwindow.hpp>

#include <fellbundle/rng.hpp>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

namespace fell {

int ZWindowInstance::support_radius() const {
    int r = 0;
    for (const auto& [k, v] : coeffs)
        if (std::abs(v) > 0.0) r = std::max(r, std::abs(k));
    return r;
}

double ZWindowInstance::coeff_max() const {
    double m = 0.0;
    for (const auto& [k, v] : coeffs) m = std::max(m, std::abs(v));
    return m;
}

double ZWindowInstance::ell1_norm() const {
    double s = 0.0;
    for (const auto& [k, v] : coeffs) s += std::abs(v);
    return s;
}

double z_window_norm(const ZWindowInstance& inst, int N) {
    if (N < inst.support_radius())
        throw std::invalid_argument("z_window_norm: window smaller than the support radius");
    const int dim = 2 * N + 1;
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [k, v] : inst.coeffs) {
        for (int i = 0; i < dim; ++i) {
            const int j = i - k;
            if (j >= 0 && j < dim) t(i, j) = v;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        Eigen::MatrixXcd(t.adjoint() * t), Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

namespace {

double symbol_abs(const ZWindowInstance& inst, double t) {
    std::complex<double> sum{0.0, 0.0};
    for (const auto& [k, v] : inst.coeffs)
        sum += v * std::complex<double>{std::cos(k * t), std::sin(k * t)};
    return std::abs(sum);
}

}  // namespace

FourierBracket fourier_oracle(const ZWindowInstance& inst, int grid) {
    const int diameter = 2 * inst.support_radius();
    if (grid < 4 * (diameter + 1))
        throw std::invalid_argument("fourier_oracle: grid too coarse for the support");

    double lipschitz = 0.0;
    for (const auto& [k, v] : inst.coeffs) lipschitz += std::abs(k) * std::abs(v);

    struct Interval {
        double a, b, va, vb;
        double ub(double lip) const { return std::max(va, vb) + lip * (b - a) / 2.0; }
    };
    auto cmp = [lipschitz](const Interval& x, const Interval& y) {
        return x.ub(lipschitz) < y.ub(lipschitz);
    };
    std::priority_queue<Interval, std::vector<Interval>, decltype(cmp)> heap(cmp);

    const double tau = 2.0 * std::numbers::pi;
    double lower = 0.0;
    std::vector<double> vals(static_cast<std::size_t>(grid) + 1);
    for (int i = 0; i <= grid; ++i) {
        vals[static_cast<std::size_t>(i)] = symbol_abs(inst, tau * i / grid);
        lower = std::max(lower, vals[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < grid; ++i)
        heap.push({tau * i / grid, tau * (i + 1) / grid, vals[static_cast<std::size_t>(i)],
                   vals[static_cast<std::size_t>(i) + 1]});

    constexpr double kTargetGap = 1e-6;
    constexpr int kMaxSteps = 2'000'000;
    double upper = lower;
    for (int step = 0; step < kMaxSteps && !heap.empty(); ++step) {
        const Interval top = heap.top();
        upper = top.ub(lipschitz);
        if (upper - lower <= kTargetGap) break;
        heap.pop();
        const double mid = 0.5 * (top.a + top.b);
        const double vm = symbol_abs(inst, mid);
        lower = std::max(lower, vm);
        const Interval left{top.a, mid, top.va, vm};
        const Interval right{mid, top.b, vm, top.vb};
        if (left.ub(lipschitz) > lower) heap.push(left);
        if (right.ub(lipschitz) > lower) heap.push(right);
        if (heap.empty()) upper = lower;
    }
    if (!heap.empty()) upper = std::max(lower, heap.top().ub(lipschitz));
    return {lower, upper};
}

ZWindowTable z_window_report(const ZWindowInstance& inst, const std::vector<int>& windows,
                             int grid) {
    const FourierBracket bracket = fourier_oracle(inst, grid);
    const double coeff = inst.coeff_max();
    const double ell1 = inst.ell1_norm();
    ZWindowTable table;
    constexpr double slack = 1e-9;
    for (int n : windows) {
        ZWindowRow row;
        row.window = n;
        row.norm = z_window_norm(inst, n);
        row.oracle_lower = bracket.lower;
        row.oracle_upper = bracket.upper;
        row.coeff_max = coeff;
        row.ell1 = ell1;
        row.chain_ok = coeff <= row.norm + slack && row.norm <= bracket.upper + slack &&
                       bracket.lower <= ell1 + bracket.gap() + slack;
        table.rows.push_back(row);
    }
    return table;
}

ZWindowInstance random_z_instance(int max_radius, int terms, std::uint64_t seed) {
    CounterRng rng(seed);
    ZWindowInstance inst;
    for (int i = 0; i < terms; ++i) {
        const int span = 2 * max_radius + 1;
        const int k = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(span))) -
                      max_radius;
        inst.coeffs[k] += rng.next_complex_gaussian();
    }
    // normalize to unit l1 norm, the scale on which the whole norm chain
    // max|f(k)| <= window norm <= symbol sup <= |f|_1 lives in [0, 1]
    const double ell1 = inst.ell1_norm();
    if (ell1 > 0.0)
        for (auto& [k, v] : inst.coeffs) v /= ell1;
    return inst;
}

}  // namespace fell
