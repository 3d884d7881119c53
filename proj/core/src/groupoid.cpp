#include <fellbundle/groupoid.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fell {

namespace {

std::string arrow_pair(const FiniteGroupoid& g, int a, int b) {
    std::ostringstream os;
    os << "(" << g.label(a) << ", " << g.label(b) << ")";
    return os.str();
}

}  // namespace

FiniteGroupoid::FiniteGroupoid(GroupoidData data) : data_(std::move(data)) {
    const int n = data_.arrows;
    if (n < 0) throw std::invalid_argument("groupoid: negative arrow count");
    const auto sz = static_cast<std::size_t>(n);
    if (data_.range.size() != sz || data_.source.size() != sz || data_.inverse.size() != sz)
        throw std::invalid_argument("groupoid: range/source/inverse size mismatch");
    if (data_.compose.size() != sz * sz)
        throw std::invalid_argument("groupoid: compose table size mismatch");

    auto in_range = [n](int a) { return a >= 0 && a < n; };
    for (int u : data_.units)
        if (!in_range(u)) throw std::invalid_argument("groupoid: unit index out of range");
    for (int a = 0; a < n; ++a) {
        if (!in_range(data_.range[a]) || !in_range(data_.source[a]) || !in_range(data_.inverse[a]))
            throw std::invalid_argument("groupoid: arrow map out of range");
    }
    for (int c : data_.compose)
        if (c != kUndefined && !in_range(c))
            throw std::invalid_argument("groupoid: compose entry out of range");

    if (data_.labels.empty()) {
        data_.labels.resize(sz);
        for (int a = 0; a < n; ++a) data_.labels[a] = std::to_string(a);
    } else if (data_.labels.size() != sz) {
        throw std::invalid_argument("groupoid: labels size mismatch");
    }

    std::sort(data_.units.begin(), data_.units.end());
    data_.units.erase(std::unique(data_.units.begin(), data_.units.end()), data_.units.end());

    unit_flags_.assign(sz, false);
    unit_pos_.assign(sz, -1);
    for (std::size_t i = 0; i < data_.units.size(); ++i) {
        unit_flags_[static_cast<std::size_t>(data_.units[i])] = true;
        unit_pos_[static_cast<std::size_t>(data_.units[i])] = static_cast<int>(i);
    }

    fibers_r_.resize(data_.units.size());
    fibers_s_.resize(data_.units.size());
    for (int a = 0; a < n; ++a) {
        const int ru = unit_pos_[static_cast<std::size_t>(data_.range[a])];
        const int su = unit_pos_[static_cast<std::size_t>(data_.source[a])];
        if (ru >= 0) fibers_r_[static_cast<std::size_t>(ru)].push_back(a);
        if (su >= 0) fibers_s_[static_cast<std::size_t>(su)].push_back(a);
    }
}

int FiniteGroupoid::unit_position(int u) const {
    if (u < 0 || u >= data_.arrows || !unit_flags_[static_cast<std::size_t>(u)])
        throw std::invalid_argument("groupoid: " + std::to_string(u) + " is not a unit");
    return unit_pos_[static_cast<std::size_t>(u)];
}

const std::vector<int>& FiniteGroupoid::fiber_r(int u) const {
    return fibers_r_[static_cast<std::size_t>(unit_position(u))];
}

const std::vector<int>& FiniteGroupoid::fiber_s(int u) const {
    return fibers_s_[static_cast<std::size_t>(unit_position(u))];
}

ValidationReport validate(const FiniteGroupoid& g) {
    ValidationReport report;
    const int n = g.arrow_count();

    for (int a = 0; a < n; ++a) {
        if (!g.is_unit(g.range(a)))
            report.add("range_is_unit", g.label(a));
        if (!g.is_unit(g.source(a)))
            report.add("source_is_unit", g.label(a));
    }

    for (int u : g.units()) {
        if (g.range(u) != u || g.source(u) != u)
            report.add("unit_range_source", g.label(u));
    }

    // compose defined exactly on composable pairs
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int c = g.compose(a, b);
            if (c != kUndefined && !g.composable(a, b))
                report.add("composability", arrow_pair(g, a, b));
            if (c == kUndefined && g.composable(a, b))
                report.add("composable_pair_missing", arrow_pair(g, a, b));
        }
    }

    // unit laws: u.a = a and a.u = a
    for (int a = 0; a < n; ++a) {
        const int u = g.range(a);
        const int v = g.source(a);
        if (g.is_unit(u) && g.compose(u, a) != kUndefined && g.compose(u, a) != a)
            report.add("left_unit_law", g.label(a));
        if (g.is_unit(v) && g.compose(a, v) != kUndefined && g.compose(a, v) != a)
            report.add("right_unit_law", g.label(a));
    }

    // range/source of composites
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int c = g.compose(a, b);
            if (c == kUndefined) continue;
            if (g.range(c) != g.range(a))
                report.add("range_of_composite", arrow_pair(g, a, b));
            if (g.source(c) != g.source(b))
                report.add("source_of_composite", arrow_pair(g, a, b));
        }
    }

    // associativity wherever both sides are defined
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const int ab = g.compose(a, b);
            if (ab == kUndefined) continue;
            for (int c = 0; c < n; ++c) {
                const int bc = g.compose(b, c);
                if (bc == kUndefined) continue;
                const int left = g.compose(ab, c);
                const int right = g.compose(a, bc);
                if (left != right) {
                    std::ostringstream os;
                    os << "(" << g.label(a) << ", " << g.label(b) << ", " << g.label(c) << ")";
                    report.add("associativity", os.str());
                }
            }
        }
    }

    // inverses
    for (int a = 0; a < n; ++a) {
        const int ai = g.inverse(a);
        if (g.inverse(ai) != a)
            report.add("inverse_involutive", g.label(a));
        if (g.compose(a, ai) != g.range(a))
            report.add("right_inverse_law", g.label(a));
        if (g.compose(ai, a) != g.source(a))
            report.add("left_inverse_law", g.label(a));
    }

    return report;
}

GroupoidPtr make_pair_groupoid(int n) {
    if (n < 1) throw std::invalid_argument("pair groupoid: n must be positive");
    GroupoidData d;
    d.arrows = n * n;
    const auto sz = static_cast<std::size_t>(d.arrows);
    d.range.resize(sz);
    d.source.resize(sz);
    d.inverse.resize(sz);
    d.labels.resize(sz);
    d.compose.assign(sz * sz, kUndefined);
    auto id = [n](int i, int j) { return i * n + j; };
    for (int i = 0; i < n; ++i) {
        d.units.push_back(id(i, i));
        for (int j = 0; j < n; ++j) {
            const int a = id(i, j);
            d.range[a] = id(i, i);
            d.source[a] = id(j, j);
            d.inverse[a] = id(j, i);
            d.labels[a] = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                d.compose[static_cast<std::size_t>(id(i, j)) * d.arrows + id(j, k)] = id(i, k);
    return std::make_shared<FiniteGroupoid>(std::move(d));
}

namespace {

void require_group(const std::vector<std::vector<int>>& t) {
    const int n = static_cast<int>(t.size());
    if (n == 0) throw std::invalid_argument("group table: empty");
    for (const auto& row : t) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("group table: not square");
        for (int v : row)
            if (v < 0 || v >= n) throw std::invalid_argument("group table: entry out of range");
    }
    // identity row/column: element 0 must be the identity
    for (int i = 0; i < n; ++i)
        if (t[0][static_cast<std::size_t>(i)] != i || t[static_cast<std::size_t>(i)][0] != i)
            throw std::invalid_argument("group table: element 0 is not an identity");
    // each element has an inverse
    for (int i = 0; i < n; ++i) {
        bool found = false;
        for (int j = 0; j < n; ++j)
            if (t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 0 &&
                t[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] == 0)
                found = true;
        if (!found) throw std::invalid_argument("group table: missing inverse");
    }
    // associativity
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const auto si = static_cast<std::size_t>(i);
                const auto sj = static_cast<std::size_t>(j);
                const auto sk = static_cast<std::size_t>(k);
                if (t[static_cast<std::size_t>(t[si][sj])][sk] !=
                    t[si][static_cast<std::size_t>(t[sj][sk])])
                    throw std::invalid_argument("group table: not associative");
            }
}

int group_inverse(const std::vector<std::vector<int>>& t, int i) {
    for (int j = 0; j < static_cast<int>(t.size()); ++j)
        if (t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 0) return j;
    return -1;  // unreachable after require_group
}

}  // namespace

GroupoidPtr make_group_groupoid(const std::vector<std::vector<int>>& cayley) {
    require_group(cayley);
    const int n = static_cast<int>(cayley.size());
    GroupoidData d;
    d.arrows = n;
    d.units = {0};
    d.range.assign(static_cast<std::size_t>(n), 0);
    d.source.assign(static_cast<std::size_t>(n), 0);
    d.inverse.resize(static_cast<std::size_t>(n));
    d.compose.resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        d.inverse[static_cast<std::size_t>(i)] = group_inverse(cayley, i);
        for (int j = 0; j < n; ++j)
            d.compose[static_cast<std::size_t>(i) * n + j] =
                cayley[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return std::make_shared<FiniteGroupoid>(std::move(d));
}

GroupoidPtr make_transformation_groupoid(int space_size,
                                         const std::vector<std::vector<int>>& group,
                                         const std::vector<std::vector<int>>& action) {
    require_group(group);
    const int m = static_cast<int>(group.size());
    if (space_size < 1) throw std::invalid_argument("transformation groupoid: empty space");
    if (static_cast<int>(action.size()) != m)
        throw std::invalid_argument("transformation groupoid: one permutation per group element");
    for (const auto& p : action) {
        if (static_cast<int>(p.size()) != space_size)
            throw std::invalid_argument("transformation groupoid: permutation size mismatch");
        std::vector<bool> seen(static_cast<std::size_t>(space_size), false);
        for (int v : p) {
            if (v < 0 || v >= space_size || seen[static_cast<std::size_t>(v)])
                throw std::invalid_argument("transformation groupoid: not a permutation");
            seen[static_cast<std::size_t>(v)] = true;
        }
    }
    // homomorphism: action[g][action[h][x]] == action[gh][x], action[e] = id
    for (int x = 0; x < space_size; ++x)
        if (action[0][static_cast<std::size_t>(x)] != x)
            throw std::invalid_argument("transformation groupoid: identity must act trivially");
    for (int gi = 0; gi < m; ++gi)
        for (int h = 0; h < m; ++h) {
            const int gh = group[static_cast<std::size_t>(gi)][static_cast<std::size_t>(h)];
            for (int x = 0; x < space_size; ++x) {
                const int hx = action[static_cast<std::size_t>(h)][static_cast<std::size_t>(x)];
                if (action[static_cast<std::size_t>(gi)][static_cast<std::size_t>(hx)] !=
                    action[static_cast<std::size_t>(gh)][static_cast<std::size_t>(x)])
                    throw std::invalid_argument(
                        "transformation groupoid: action is not a homomorphism");
            }
        }

    GroupoidData d;
    d.arrows = space_size * m;
    const auto sz = static_cast<std::size_t>(d.arrows);
    d.range.resize(sz);
    d.source.resize(sz);
    d.inverse.resize(sz);
    d.labels.resize(sz);
    d.compose.assign(sz * sz, kUndefined);
    auto id = [m](int x, int gi) { return x * m + gi; };
    auto act = [&](int gi, int x) {
        return action[static_cast<std::size_t>(gi)][static_cast<std::size_t>(x)];
    };
    for (int x = 0; x < space_size; ++x) {
        d.units.push_back(id(x, 0));
        for (int gi = 0; gi < m; ++gi) {
            const int a = id(x, gi);
            const int ginv = group_inverse(group, gi);
            d.range[static_cast<std::size_t>(a)] = id(x, 0);
            d.source[static_cast<std::size_t>(a)] = id(act(ginv, x), 0);
            d.inverse[static_cast<std::size_t>(a)] = id(act(ginv, x), ginv);
            d.labels[static_cast<std::size_t>(a)] =
                "(" + std::to_string(x) + "," + std::to_string(gi) + ")";
        }
    }
    // (x, g)(g^{-1}.x, h) = (x, gh)
    for (int x = 0; x < space_size; ++x)
        for (int gi = 0; gi < m; ++gi) {
            const int ginv = group_inverse(group, gi);
            const int y = act(ginv, x);
            for (int h = 0; h < m; ++h) {
                const int gh = group[static_cast<std::size_t>(gi)][static_cast<std::size_t>(h)];
                d.compose[static_cast<std::size_t>(id(x, gi)) * d.arrows + id(y, h)] = id(x, gh);
            }
        }
    return std::make_shared<FiniteGroupoid>(std::move(d));
}

GroupoidPtr make_unit_groupoid(int n) {
    if (n < 1) throw std::invalid_argument("unit groupoid: n must be positive");
    GroupoidData d;
    d.arrows = n;
    const auto sz = static_cast<std::size_t>(n);
    d.range.resize(sz);
    d.source.resize(sz);
    d.inverse.resize(sz);
    d.compose.assign(sz * sz, kUndefined);
    for (int i = 0; i < n; ++i) {
        d.units.push_back(i);
        d.range[static_cast<std::size_t>(i)] = i;
        d.source[static_cast<std::size_t>(i)] = i;
        d.inverse[static_cast<std::size_t>(i)] = i;
        d.compose[static_cast<std::size_t>(i) * n + i] = i;
    }
    return std::make_shared<FiniteGroupoid>(std::move(d));
}

GroupoidPtr disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b) {
    const int na = a.arrow_count();
    const int nb = b.arrow_count();
    GroupoidData d;
    d.arrows = na + nb;
    const auto sz = static_cast<std::size_t>(d.arrows);
    d.range.resize(sz);
    d.source.resize(sz);
    d.inverse.resize(sz);
    d.labels.resize(sz);
    d.compose.assign(sz * sz, kUndefined);
    for (int i = 0; i < na; ++i) {
        d.range[static_cast<std::size_t>(i)] = a.range(i);
        d.source[static_cast<std::size_t>(i)] = a.source(i);
        d.inverse[static_cast<std::size_t>(i)] = a.inverse(i);
        d.labels[static_cast<std::size_t>(i)] = "a:" + a.label(i);
    }
    for (int i = 0; i < nb; ++i) {
        d.range[static_cast<std::size_t>(na + i)] = na + b.range(i);
        d.source[static_cast<std::size_t>(na + i)] = na + b.source(i);
        d.inverse[static_cast<std::size_t>(na + i)] = na + b.inverse(i);
        d.labels[static_cast<std::size_t>(na + i)] = "b:" + b.label(i);
    }
    for (int u : a.units()) d.units.push_back(u);
    for (int u : b.units()) d.units.push_back(na + u);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j)
            if (a.compose(i, j) != kUndefined)
                d.compose[static_cast<std::size_t>(i) * d.arrows + j] = a.compose(i, j);
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
            if (b.compose(i, j) != kUndefined)
                d.compose[static_cast<std::size_t>(na + i) * d.arrows + (na + j)] =
                    na + b.compose(i, j);
    return std::make_shared<FiniteGroupoid>(std::move(d));
}

std::vector<std::vector<int>> cyclic_group_table(int n) {
    if (n < 1) throw std::invalid_argument("cyclic group: n must be positive");
    std::vector<std::vector<int>> t(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = (i + j) % n;
    return t;
}

std::vector<std::vector<int>> klein_four_table() {
    // elements (a,b) in Z2 x Z2 encoded as a + 2b
    std::vector<std::vector<int>> t(4, std::vector<int>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                ((i ^ j) & 1) | (((i >> 1) ^ (j >> 1)) << 1);
    return t;
}

std::vector<std::vector<int>> symmetric3_table() {
    // permutations of {0,1,2} listed as images (p[0],p[1],p[2])
    const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    auto find = [&](const int p[3]) {
        for (int i = 0; i < 6; ++i)
            if (perms[i][0] == p[0] && perms[i][1] == p[1] && perms[i][2] == p[2]) return i;
        return -1;
    };
    std::vector<std::vector<int>> t(6, std::vector<int>(6));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            int comp[3];
            for (int x = 0; x < 3; ++x) comp[x] = perms[i][perms[j][x]];
            t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = find(comp);
        }
    return t;
}

std::string ValidationReport::to_string() const {
    if (violations.empty()) return "ok";
    std::ostringstream os;
    for (const auto& v : violations) {
        os << v.rule << " at " << v.witness;
        if (v.residual != 0.0) os << " (residual " << v.residual << ")";
        os << "\n";
    }
    return os.str();
}

std::string VerificationReport::summary() const {
    std::ostringstream os;
    int passed = 0;
    for (const auto& c : checks)
        if (c.pass) ++passed;
    os << passed << "/" << checks.size() << " checks passed";
    return os.str();
}

}  // namespace fell
