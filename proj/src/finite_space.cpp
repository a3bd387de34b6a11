#include "ck/finite_space.hpp"

#include <algorithm>

namespace ck {

std::vector<int> mask_to_indices(Mask m) {
    std::vector<int> out;
    mask_for_each(m, [&](int i) { out.push_back(i); });
    return out;
}

FiniteSpace::FiniteSpace(std::vector<std::string> points,
                         const std::vector<std::pair<std::string, std::string>>& leq) {
    if (points.size() > 64) throw InvalidSpace("space exceeds 64 points");
    std::sort(points.begin(), points.end());
    if (std::adjacent_find(points.begin(), points.end()) != points.end())
        throw InvalidSpace("duplicate point identifier");
    points_ = std::move(points);
    for (int i = 0; i < size(); ++i) index_[points_[i]] = i;

    up_.assign(size(), 0);
    for (int i = 0; i < size(); ++i) up_[i] |= mask_bit(i);
    for (const auto& [a, b] : leq) {
        auto ia = index_.find(a), ib = index_.find(b);
        if (ia == index_.end() || ib == index_.end())
            throw InvalidSpace("leq mentions unknown point: " + a + "," + b);
        up_[ia->second] |= mask_bit(ib->second);
    }
    finish();
}

FiniteSpace FiniteSpace::from_upsets(std::vector<std::string> points, std::vector<Mask> up) {
    FiniteSpace s;
    if (points.size() != up.size()) throw InvalidSpace("point/relation size mismatch");
    if (points.size() > 64) throw InvalidSpace("space exceeds 64 points");
    s.points_ = std::move(points);
    for (int i = 0; i < s.size(); ++i) {
        up[i] |= mask_bit(i);
        if (!s.index_.emplace(s.points_[i], i).second)
            throw InvalidSpace("duplicate point identifier");
    }
    s.up_ = std::move(up);
    s.finish();
    return s;
}

void FiniteSpace::finish() {
    const int n = size();
    // Transitivity: close the relation and require that the input was
    // already closed, so malformed relations are rejected, not repaired.
    for (int i = 0; i < n; ++i) {
        Mask reach = up_[i];
        bool grew = true;
        while (grew) {
            grew = false;
            Mask next = reach;
            mask_for_each(reach, [&](int j) { next |= up_[j]; });
            if (next != reach) {
                reach = next;
                grew = true;
            }
        }
        if (reach != up_[i]) throw InvalidSpace("relation is not transitive");
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (leq(i, j) && leq(j, i)) throw InvalidSpace("relation is not antisymmetric");

    down_.assign(n, 0);
    for (int i = 0; i < n; ++i)
        mask_for_each(up_[i], [&](int j) { down_[j] |= mask_bit(i); });

    cover_up_.assign(n, 0);
    cover_down_.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        Mask strict = up_[i] & ~mask_bit(i);
        mask_for_each(strict, [&](int j) {
            // i <| j iff nothing lies strictly between.
            Mask between = strict & (down_[j] & ~mask_bit(j));
            if (between == 0) {
                cover_up_[i] |= mask_bit(j);
                cover_down_[j] |= mask_bit(i);
            }
        });
    }
}

int FiniteSpace::index(const std::string& point) const {
    auto it = index_.find(point);
    if (it == index_.end()) throw UnknownPoint("unknown point: " + point);
    return it->second;
}

Mask FiniteSpace::up_closure(Mask s) const {
    Mask out = 0;
    mask_for_each(s, [&](int i) { out |= up_[i]; });
    return out;
}

Mask FiniteSpace::down_closure(Mask s) const {
    Mask out = 0;
    mask_for_each(s, [&](int i) { out |= down_[i]; });
    return out;
}

namespace {

template <typename Nbr>
Mask grow_component(int start, Mask s, Nbr&& neighbours) {
    Mask comp = mask_bit(start);
    Mask frontier = comp;
    while (frontier) {
        Mask next = 0;
        mask_for_each(frontier, [&](int i) { next |= neighbours(i) & s & ~comp; });
        comp |= next;
        frontier = next;
    }
    return comp;
}

}  // namespace

Mask FiniteSpace::component_of(int i, Mask s) const {
    return grow_component(i, s, [&](int j) { return comparables(j); });
}

bool FiniteSpace::subspace_connected(Mask s) const {
    if (s == 0) return true;
    return component_of(mask_lowest(s), s) == s;
}

Mask FiniteSpace::step_component_of(int i, Mask s) const {
    return grow_component(i, s, [&](int j) { return adjacency(j); });
}

bool FiniteSpace::step_connected(Mask s) const {
    if (s == 0) return true;
    return step_component_of(mask_lowest(s), s) == s;
}

std::vector<Mask> FiniteSpace::all_open_sets() const {
    if (size() > 20) throw Error("open-set lattice enumeration limited to 20 points");
    std::vector<Mask> opens;
    const Mask full = all();
    for (Mask s = 0;; ++s) {
        if (is_open(s)) opens.push_back(s);
        if (s == full) break;
    }
    return opens;
}

FiniteSpace FiniteSpace::subspace(Mask s, std::vector<int>* back) const {
    std::vector<int> idx = mask_to_indices(s);
    std::vector<std::string> pts;
    pts.reserve(idx.size());
    for (int i : idx) pts.push_back(points_[i]);
    std::vector<Mask> up(idx.size(), 0);
    for (size_t a = 0; a < idx.size(); ++a)
        for (size_t b = 0; b < idx.size(); ++b)
            if (leq(idx[a], idx[b])) up[a] |= mask_bit(static_cast<int>(b));
    if (back) *back = idx;
    return from_upsets(std::move(pts), std::move(up));
}

// --- stock spaces --------------------------------------------------------

namespace {
// Zero-pads so that lexicographic id order agrees with numeric order.
std::string numbered(const std::string& prefix, int i, int total) {
    std::string digits = std::to_string(i);
    size_t width = std::to_string(total > 0 ? total - 1 : 0).size();
    return prefix + std::string(width - digits.size(), '0') + digits;
}
}  // namespace

FiniteSpace make_chain(int n) {
    std::vector<std::string> pts;
    std::vector<std::pair<std::string, std::string>> rel;
    for (int i = 0; i < n; ++i) pts.push_back(numbered("c", i, n));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            rel.emplace_back(numbered("c", i, n), numbered("c", j, n));
    return FiniteSpace(pts, rel);
}

FiniteSpace make_fence(int n) {
    std::vector<std::string> pts;
    std::vector<std::pair<std::string, std::string>> rel;
    for (int i = 0; i < n; ++i) pts.push_back(numbered("f", i, n));
    for (int i = 0; i + 1 < n; ++i) {
        if (i % 2 == 0)
            rel.emplace_back(numbered("f", i, n), numbered("f", i + 1, n));
        else
            rel.emplace_back(numbered("f", i + 1, n), numbered("f", i, n));
    }
    return FiniteSpace(pts, rel);
}

FiniteSpace make_fence_circle(int n) {
    if (n < 2) throw InvalidSpace("fence circle needs at least 4 points");
    const int m = 2 * n;
    std::vector<std::string> pts;
    std::vector<std::pair<std::string, std::string>> rel;
    for (int i = 0; i < m; ++i) pts.push_back(numbered("r", i, m));
    for (int i = 0; i < m; i += 2) {
        rel.emplace_back(numbered("r", i, m), numbered("r", (i + 1) % m, m));
        rel.emplace_back(numbered("r", i, m), numbered("r", (i + m - 1) % m, m));
    }
    return FiniteSpace(pts, rel);
}

FiniteSpace make_pseudocircle() {
    return FiniteSpace({"a", "b", "c", "d"},
                       {{"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}});
}

FiniteSpace make_sierpinski() { return FiniteSpace({"c", "o"}, {{"c", "o"}}); }

FiniteSpace make_discrete(int n) {
    std::vector<std::string> pts;
    for (int i = 0; i < n; ++i) pts.push_back(numbered("d", i, n));
    return FiniteSpace(pts, {});
}

FiniteSpace make_point() { return FiniteSpace({"pt"}, {}); }

}  // namespace ck
