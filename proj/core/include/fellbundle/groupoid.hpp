// Finite etale groupoid: arrows, units, range/source, partial composition,
// inverse. Arrows are dense integer indices; composition is stored as a total
// table with -1 marking undefined pairs, so lookups are O(1) and the whole
// object serializes directly.

#pragma once

#include <fellbundle/report.hpp>

#include <memory>
#include <string>
#include <vector>

namespace fell {

inline constexpr int kUndefined = -1;

/// Raw groupoid tables. May describe something that is not a groupoid;
/// validate() reports every broken axiom instead of failing.
struct GroupoidData {
    int arrows = 0;
    std::vector<int> units;            // arrow indices flagged as units
    std::vector<int> range;            // arrows -> units
    std::vector<int> source;           // arrows -> units
    std::vector<int> inverse;          // arrows -> arrows
    std::vector<int> compose;          // dense arrows x arrows, kUndefined where not composable
    std::vector<std::string> labels;   // optional, defaults to index strings
};

class FiniteGroupoid {
public:
    /// Throws std::invalid_argument on structurally malformed tables
    /// (wrong sizes, out-of-range indices). Axiom violations are fine here;
    /// they are data for validate().
    explicit FiniteGroupoid(GroupoidData data);

    int arrow_count() const { return data_.arrows; }
    const std::vector<int>& units() const { return data_.units; }
    bool is_unit(int a) const { return unit_flags_[static_cast<std::size_t>(a)]; }

    int range(int a) const { return data_.range[static_cast<std::size_t>(a)]; }
    int source(int a) const { return data_.source[static_cast<std::size_t>(a)]; }
    int inverse(int a) const { return data_.inverse[static_cast<std::size_t>(a)]; }

    bool composable(int a, int b) const { return source(a) == range(b); }

    /// Composite arrow ab, or kUndefined if the pair is not in the table.
    int compose(int a, int b) const {
        return data_.compose[static_cast<std::size_t>(a) * data_.arrows + b];
    }

    /// G^u = { a : range(a) = u }, ascending. Throws on a non-unit argument.
    const std::vector<int>& fiber_r(int u) const;
    /// G_u = { a : source(a) = u }, ascending. Throws on a non-unit argument.
    const std::vector<int>& fiber_s(int u) const;

    const std::string& label(int a) const { return data_.labels[static_cast<std::size_t>(a)]; }
    const GroupoidData& data() const { return data_; }

private:
    GroupoidData data_;
    std::vector<bool> unit_flags_;
    // fibers indexed by position of u in units()
    std::vector<std::vector<int>> fibers_r_;
    std::vector<std::vector<int>> fibers_s_;
    std::vector<int> unit_pos_;  // arrow index -> position in units(), -1 for non-units

    int unit_position(int u) const;
};

using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

/// Checks every groupoid axiom by enumeration; empty report iff g is a groupoid.
ValidationReport validate(const FiniteGroupoid& g);

/// Pair groupoid on n points: arrows (i,j) with (i,j)(j,k) = (i,k).
GroupoidPtr make_pair_groupoid(int n);

/// One-unit groupoid from a group Cayley table (table[i][j] = ij).
/// Throws std::invalid_argument if the table is not a group.
GroupoidPtr make_group_groupoid(const std::vector<std::vector<int>>& cayley);

/// Transformation groupoid X x| Gamma for a left action given as one
/// permutation of X per group element: arrows (x, g), r = x, s = g^{-1}.x.
/// Throws if the permutation assignment is not a homomorphism.
GroupoidPtr make_transformation_groupoid(int space_size,
                                         const std::vector<std::vector<int>>& group,
                                         const std::vector<std::vector<int>>& action);

/// Groupoid with n units and no other arrows.
GroupoidPtr make_unit_groupoid(int n);

/// Disjoint union; arrows of b are shifted past those of a.
GroupoidPtr disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b);

/// Cayley table of the cyclic group Z_n (identity = 0).
std::vector<std::vector<int>> cyclic_group_table(int n);
/// Cayley table of the Klein four-group {1, x, y, xy} = {0, 1, 2, 3}.
std::vector<std::vector<int>> klein_four_table();
/// Cayley table of the symmetric group S_3 (element 0 = identity).
std::vector<std::vector<int>> symmetric3_table();

}  // namespace fell
