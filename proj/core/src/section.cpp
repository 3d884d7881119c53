#include <fellbundle/section.hpp>

#include <stdexcept>

namespace fell {

Section::Section(BundlePtr bundle) : bundle_(std::move(bundle)) {
    const int n = bundle_->groupoid().arrow_count();
    values_.reserve(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) values_.push_back(bundle_->zero(a));
}

Section::Section(BundlePtr bundle, std::vector<Mat> values)
    : bundle_(std::move(bundle)), values_(std::move(values)) {
    const int n = bundle_->groupoid().arrow_count();
    if (static_cast<int>(values_.size()) != n)
        throw std::invalid_argument("section: one value per arrow required");
    for (int a = 0; a < n; ++a)
        if (!bundle_->has_fiber_shape(a, values_[static_cast<std::size_t>(a)]))
            throw std::invalid_argument("section: value shape does not match fiber at arrow " +
                                        bundle_->groupoid().label(a));
}

Section Section::delta(BundlePtr bundle, int arrow, const Mat& value) {
    if (!bundle->has_fiber_shape(arrow, value))
        throw std::invalid_argument("delta section: value shape does not match fiber");
    Section s(bundle);
    s.values_[static_cast<std::size_t>(arrow)] = value;
    return s;
}

Section Section::units_identity(BundlePtr bundle) {
    Section s(bundle);
    for (int u : bundle->groupoid().units()) {
        const int n = bundle->unit_dim(u);
        s.values_[static_cast<std::size_t>(u)] = Mat::Identity(n, n);
    }
    return s;
}

Section Section::operator+(const Section& other) const {
    if (!same_bundle(other)) throw std::invalid_argument("section sum: bundle mismatch");
    std::vector<Mat> vals = values_;
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += other.values_[i];
    return Section(bundle_, std::move(vals));
}

Section Section::operator-(const Section& other) const {
    return *this + other * Cplx{-1.0, 0.0};
}

Section Section::operator*(Cplx scalar) const {
    std::vector<Mat> vals = values_;
    for (auto& v : vals) v *= scalar;
    return Section(bundle_, std::move(vals));
}

Section convolve(const Section& f, const Section& g) {
    if (!f.same_bundle(g)) throw std::invalid_argument("convolve: bundle mismatch");
    const FellBundle& bundle = f.bundle();
    const FiniteGroupoid& gpd = bundle.groupoid();
    Section out(f.bundle_ptr());
    std::vector<Mat> vals = out.values();
    for (int c = 0; c < gpd.arrow_count(); ++c) {
        Mat acc = bundle.zero(c);
        for (int a : gpd.fiber_r(gpd.range(c))) {
            const int b = gpd.compose(gpd.inverse(a), c);
            acc += bundle.mult(a, b, f.value(a), g.value(b));
        }
        vals[static_cast<std::size_t>(c)] = acc;
    }
    return Section(f.bundle_ptr(), std::move(vals));
}

Section involute(const Section& f) {
    const FellBundle& bundle = f.bundle();
    const FiniteGroupoid& gpd = bundle.groupoid();
    std::vector<Mat> vals;
    vals.reserve(static_cast<std::size_t>(gpd.arrow_count()));
    for (int a = 0; a < gpd.arrow_count(); ++a) {
        const int ai = gpd.inverse(a);
        vals.push_back(bundle.invol(ai, f.value(ai)));
    }
    return Section(f.bundle_ptr(), std::move(vals));
}

double sup_norm(const Section& f) {
    const FellBundle& bundle = f.bundle();
    double best = 0.0;
    for (int a = 0; a < bundle.groupoid().arrow_count(); ++a)
        best = std::max(best, bundle.fiber_norm(a, f.value(a)));
    return best;
}

double max_entry_distance(const Section& f, const Section& g) {
    if (!f.same_bundle(g)) throw std::invalid_argument("section distance: bundle mismatch");
    double best = 0.0;
    for (int a = 0; a < f.bundle().groupoid().arrow_count(); ++a) {
        const Mat diff = f.value(a) - g.value(a);
        if (diff.size() > 0) best = std::max(best, diff.cwiseAbs().maxCoeff());
    }
    return best;
}

}  // namespace fell
