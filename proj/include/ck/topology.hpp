#pragma once

#include "ck/finite_space.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ck {

// Total mapping between finite spaces. Continuity is equivalent to being
// order-preserving for the specialization orders.
class SpaceMap {
public:
    SpaceMap() = default;
    SpaceMap(FiniteSpace source, FiniteSpace target, std::vector<int> assignment);

    // Assignment given by point identifiers.
    SpaceMap(FiniteSpace source, FiniteSpace target,
             const std::vector<std::pair<std::string, std::string>>& assignment);

    const FiniteSpace& source() const { return source_; }
    const FiniteSpace& target() const { return target_; }
    int apply(int i) const { return map_[i]; }
    const std::vector<int>& assignment() const { return map_; }

    Mask image(Mask s) const;
    Mask image() const { return image(source_.all()); }
    Mask preimage(Mask t) const;
    Mask fiber(int y) const;

    bool continuous() const;
    bool surjective() const { return image() == target_.all(); }
    bool injective() const;

private:
    FiniteSpace source_;
    FiniteSpace target_;
    std::vector<int> map_;
};

struct MapReport {
    bool continuous = false;
    bool open = false;
    bool closed = false;
    bool locally_open_onto_image = false;
    bool filtered = false;
};

// Principal filter on `base` generated by `generator`: the filter consists
// of all supersets of the generator. Equality compares the generated filter
// families, which for principal filters is mutual containment of
// generators, not equality of any particular presentation.
struct FilterRep {
    const FiniteSpace* base = nullptr;
    Mask generator = 0;

    bool contains(Mask s) const { return (generator & ~s) == 0; }
    friend bool operator==(const FilterRep& a, const FilterRep& b) {
        return a.contains(b.generator) && b.contains(a.generator);
    }
};

struct Factorization {
    SpaceMap qf;        // open surjection onto the midspace
    FiniteSpace midspace;
    SpaceMap fsharp;    // filtered map from the midspace to the target
};

// Decides each flag exactly. `locally_open_onto_image` holds iff every x
// has an open U with U -> f(U) open in the subspace f(U); since the
// property passes to smaller neighbourhoods it is decided on minimal open
// neighbourhoods. `filtered` additionally requires injectivity of
// x -> (f(x), pushforward of the neighbourhood filter of x).
MapReport classify_map(const SpaceMap& f);

// Image of the neighbourhood filter of x: the principal filter generated
// by f(minimal open neighbourhood of x). Requires f continuous.
FilterRep pushforward_filter(const SpaceMap& f, const std::string& x);
FilterRep pushforward_filter_at(const SpaceMap& f, int x);

// Unique factorization f = fsharp . qf into an open surjection followed by
// a filtered map. Midspace points are equivalence classes under equality of
// (image point, pushforward filter); each class is named by its least
// member. Throws NotLocallyOpen unless f is locally open onto its image.
Factorization factorize(const SpaceMap& f);

// Shortest chain of cover members joining x to y: x in U_first, y in
// U_last, consecutive members intersect. Breadth-first over the nerve of
// the cover; ties resolved to the smallest index sequence. Throws
// NotConnected when no chain exists.
std::vector<int> chain_cover(const FiniteSpace& space, const std::string& x,
                             const std::string& y, const std::vector<Mask>& cover);

}  // namespace ck
