#pragma once

#include "ck/errors.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ck {

// Point subsets of a finite space are bitmasks; bit i is the i-th point in
// the space's canonical point order (sorted identifiers).
using Mask = std::uint64_t;

inline int mask_size(Mask m) { return std::popcount(m); }
inline bool mask_test(Mask m, int i) { return (m >> i) & 1u; }
inline Mask mask_bit(int i) { return Mask{1} << i; }
inline int mask_lowest(Mask m) { return std::countr_zero(m); }

// Visits set bits in ascending order.
template <typename F>
void mask_for_each(Mask m, F&& f) {
    while (m) {
        int i = std::countr_zero(m);
        f(i);
        m &= m - 1;
    }
}

std::vector<int> mask_to_indices(Mask m);

// A finite T0 Alexandrov space encoded by its specialization order:
// x <= y iff x lies in the closure of {y}. Open sets are exactly the
// up-sets of the order; the minimal open neighbourhood of x is up(x).
class FiniteSpace {
public:
    FiniteSpace() = default;

    // Throws InvalidSpace unless `leq` (given as pairs of identifiers) is a
    // partial order on `points` once reflexivity is added.
    FiniteSpace(std::vector<std::string> points,
                const std::vector<std::pair<std::string, std::string>>& leq);

    // Relation given directly as up-masks over an existing point order.
    static FiniteSpace from_upsets(std::vector<std::string> points, std::vector<Mask> up);

    int size() const { return static_cast<int>(points_.size()); }
    Mask all() const { return size() == 64 ? ~Mask{0} : (mask_bit(size()) - 1); }

    const std::vector<std::string>& points() const { return points_; }
    const std::string& name(int i) const { return points_.at(i); }
    int index(const std::string& point) const;  // throws UnknownPoint
    bool has_point(const std::string& point) const { return index_.count(point) > 0; }

    bool leq(int i, int j) const { return mask_test(up_[i], j); }

    // Minimal open neighbourhood of i / closure of {i}.
    Mask up(int i) const { return up_[i]; }
    Mask down(int i) const { return down_[i]; }

    Mask up_closure(Mask s) const;
    Mask down_closure(Mask s) const;
    bool is_open(Mask s) const { return up_closure(s) == s; }
    bool is_closed(Mask s) const { return down_closure(s) == s; }

    // Covering relation of the order (immediate successors of i).
    Mask covers_above(int i) const { return cover_up_[i]; }
    Mask adjacency(int i) const { return cover_up_[i] | cover_down_[i]; }
    Mask comparables(int i) const { return (up_[i] | down_[i]) & ~mask_bit(i); }

    // Topological connectivity of the subspace on s (comparability walk).
    bool subspace_connected(Mask s) const;
    bool connected() const { return size() == 0 || subspace_connected(all()); }
    Mask component_of(int i, Mask s) const;  // comparability component within s

    // Connectivity along the covering graph of the ambient order restricted
    // to s. This is the adjacency notion used by the interval axioms: it is
    // the finite stand-in for connectivity of a discretized continuum.
    bool step_connected(Mask s) const;
    Mask step_component_of(int i, Mask s) const;

    // All open sets (up-sets). Exponential; callers guard the size.
    std::vector<Mask> all_open_sets() const;

    // Induced subspace on s; point identifiers are kept. `back[k]` is the
    // parent index of subspace point k.
    FiniteSpace subspace(Mask s, std::vector<int>* back = nullptr) const;

    bool same_points(const FiniteSpace& other) const { return points_ == other.points_; }

private:
    void finish();  // validates and derives covers

    std::vector<std::string> points_;
    std::map<std::string, int> index_;
    std::vector<Mask> up_;         // up_[i] = { j : i <= j }, includes i
    std::vector<Mask> down_;       // down_[i] = { j : j <= i }
    std::vector<Mask> cover_up_;   // j with i <| j (covering relation)
    std::vector<Mask> cover_down_;
};

// --- Stock spaces used across tests and the gallery ---------------------

// Chain c0 <= c1 <= ... <= c{n-1}.
FiniteSpace make_chain(int n);

// Fence f0 <= f1 >= f2 <= f3 ... (odd positions maximal); the finite model
// of a closed interval.
FiniteSpace make_fence(int n);

// Fence circle on 2n points: even positions minimal, odd maximal, wrapped.
FiniteSpace make_fence_circle(int n);

// The 4-point model of the circle: closed points a,b under open points c,d.
FiniteSpace make_pseudocircle();

// Two-point space with one open point: o open, c generic (c <= o).
FiniteSpace make_sierpinski();

FiniteSpace make_discrete(int n);
FiniteSpace make_point();

}  // namespace ck
