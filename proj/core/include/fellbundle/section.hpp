// The *-algebra of finitely supported sections of a Fell bundle:
// fiber-valued functions on the arrows under convolution
//   (f * g)(c) = sum over a in G^{r(c)} of f(a) g(a^{-1}c)
// and involution f*(c) = f(c^{-1})^*. Sections are stored densely over
// all arrows and treated as immutable values.

#pragma once

#include <fellbundle/bundle.hpp>

#include <vector>

namespace fell {

class Section {
public:
    /// Zero section.
    explicit Section(BundlePtr bundle);

    /// Section from explicit per-arrow values; shapes must match the fibers.
    Section(BundlePtr bundle, std::vector<Mat> values);

    /// h_a^b: value b at arrow a, zero elsewhere. Throws on shape mismatch.
    static Section delta(BundlePtr bundle, int arrow, const Mat& value);

    /// The multiplicative identity: the identity matrix on every unit.
    static Section units_identity(BundlePtr bundle);

    const BundlePtr& bundle_ptr() const { return bundle_; }
    const FellBundle& bundle() const { return *bundle_; }
    const Mat& value(int arrow) const { return values_[static_cast<std::size_t>(arrow)]; }
    const std::vector<Mat>& values() const { return values_; }

    Section operator+(const Section& other) const;
    Section operator-(const Section& other) const;
    Section operator*(Cplx scalar) const;

    bool same_bundle(const Section& other) const { return bundle_ == other.bundle_; }

private:
    BundlePtr bundle_;
    std::vector<Mat> values_;
};

/// Convolution product; throws std::invalid_argument on a bundle mismatch.
Section convolve(const Section& f, const Section& g);

/// Adjoint section f*.
Section involute(const Section& f);

/// Sup norm: max over arrows of the fiber norm.
double sup_norm(const Section& f);

/// Max entrywise absolute difference; sections must share the bundle.
double max_entry_distance(const Section& f, const Section& g);

}  // namespace fell
