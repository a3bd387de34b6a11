#pragma once

#include "ck/finite_space.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ck {

// Interval-operator structure on a finite carrier: a total symmetric table
// (x,y) -> subset of points with C(x,x) = {x}.
class ConvexityStructure {
public:
    ConvexityStructure() = default;
    ConvexityStructure(FiniteSpace space, std::vector<Mask> table);

    // Table keyed by identifier pairs; missing symmetric entries mirrored.
    ConvexityStructure(FiniteSpace space,
                       const std::map<std::pair<std::string, std::string>, std::vector<std::string>>& table);

    const FiniteSpace& space() const { return space_; }
    Mask interval(int x, int y) const { return table_[x * space_.size() + y]; }
    Mask interval(const std::string& x, const std::string& y) const {
        return interval(space_.index(x), space_.index(y));
    }
    const std::vector<Mask>& table() const { return table_; }

    // A subset is convex when it is closed under the interval operator.
    bool is_convex(Mask s) const;

    bool verified() const { return verified_; }
    void mark_verified(bool v) { verified_ = v; }

private:
    FiniteSpace space_;
    std::vector<Mask> table_;
    bool verified_ = false;
};

struct AxiomViolation {
    std::string axiom;                 // "c1", "c2", "c3", "continuity", "symmetry", "singleton"
    std::vector<std::string> points;   // offending points, canonical order
    std::vector<std::vector<std::string>> sets;  // offending subsets
    std::string detail;
};

struct AxiomReport {
    bool c1 = false;
    bool c2 = false;
    bool c3 = false;
    bool continuity = false;
    bool symmetry = false;
    bool singleton = false;
    std::vector<AxiomViolation> witnesses;

    bool all() const { return c1 && c2 && c3 && continuity && symmetry && singleton; }
};

struct ConvexityConfig {
    int exhaustive_limit = 12;  // carriers up to this size get exhaustive subset checks
    int sample_count = 2000;    // seeded sample size beyond the limit
    std::uint64_t seed = 1;
};

// Inclusion-minimal step-connected supersets of {x,y}. These are exactly
// the vertex sets of induced x-y paths of the covering graph; an interval
// table satisfies the minimality axiom at (x,y) iff this family is a
// single set equal to the table entry.
std::vector<Mask> minimal_connected_supersets(const FiniteSpace& space, int x, int y);

// The forced interval table: entry (x,y) is the unique minimal connected
// superset of {x,y} when one exists. Returns nothing when some pair has
// zero or several minimal supersets (then no table can satisfy the
// minimality axiom).
std::optional<std::vector<Mask>> forced_interval_table(const FiniteSpace& space);

// Structure whose intervals are the forced table; throws InvalidTable when
// the carrier admits none.
ConvexityStructure make_forced_structure(const FiniteSpace& space);

// Validates the axioms:
//   c1          every interval is convex
//   c2          every interval is the unique minimal connected superset of
//               its endpoints (exhaustive for small carriers, sampled above
//               the configured limit)
//   c3          minimal open neighbourhoods are convex (equivalent to a
//               basis of convex opens on a finite carrier)
//   continuity  for the upper topology on subsets: whenever an open U
//               contains C(x,y) there are opens V of x and W of y with
//               C(V x W) inside U; decided on minimal neighbourhoods
// Witnesses list the first violation per axiom in a fixed point order.
// With report=false a symmetry or singleton failure throws InvalidTable.
AxiomReport check_axioms(ConvexityStructure& cs, const ConvexityConfig& cfg = {},
                         bool report = true);

// Least fixed point of A -> A union all intervals of pairs of A.
Mask convex_hull(const ConvexityStructure& cs, Mask a);

// The linear order on interval(x,y) given by z <= t iff z lies in
// interval(x,t); verified linear with least x and greatest y, and the
// decomposition interval(x,y) = interval(x,z) union interval(z,y) for all
// members z. Throws AxiomsNotVerified unless check_axioms passed.
std::vector<int> interval_order(const ConvexityStructure& cs, int x, int y);

// Connectivity of interval(x,y) minus its top endpoint. The degenerate
// x = y case returns true by convention.
bool punctured_interval_connected(const ConvexityStructure& cs, int x, int y);

struct ClosureReport {
    bool holds = true;
    std::optional<Mask> witness;         // convex set whose closure is not convex
    std::optional<Mask> witness_closure;
};

// Checks that closures of convex sets are convex; exhaustive up to the
// configured carrier size, seeded sampling beyond.
ClosureReport closure_preserves_convexity(const ConvexityStructure& cs,
                                          const ConvexityConfig& cfg = {});

struct Star {
    int center = 0;
    Mask ends = 0;
    std::map<int, Mask> rays;  // end -> interval(center, end)
    Mask carrier() const;      // union of rays
};

struct StarReport {
    std::vector<Star> stars;  // maximal stars at the center
    bool star_finite = true;  // always true on a finite carrier
};

// Maximal stars centered at `center`: end sets with pairwise ray
// intersection {center}, maximal with respect to the covered subspace.
StarReport enumerate_stars(const ConvexityStructure& cs, int center);

}  // namespace ck
