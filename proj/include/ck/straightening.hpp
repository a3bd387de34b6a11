#pragma once

#include "ck/models.hpp"

#include <string>
#include <vector>

namespace ck {

struct StraightenStep {
    std::string rule;  // "R1" corner collapse, "R2" chart-trace leap, "R3" refine
    int from = 0;      // replaced breakpoint range [from..to], inclusive ends kept
    int to = 0;
    std::vector<Vec2> interior;  // new interior breakpoints, lift coordinates
    int breakpoints_after = 0;
    int corners_after = 0;
};

struct StraighteningTrace {
    PolyPath initial;  // canonical form of the input
    std::vector<StraightenStep> steps;
    PolyPath final;    // canonical form of the result
    std::string status;  // "converged" | "budget_exhausted"

    bool converged() const { return status == "converged"; }
};

// Inscribes a line path from x to y in a polypath arc: walks the maximal
// chart traces of the arc, places a waypoint at the least parameter of each
// consecutive overlap, and joins waypoints by chart connections. Throws
// NotCovered when the arc escapes the atlas.
PolyPath inscribe_line_path(const PolyPath& arc, const Atlas& atlas);

// Finite carrier version: returns the ordered point walk of a line path
// from x to y inside the connected set `arc`, via a shortest chart chain
// with canonical waypoints.
std::vector<int> inscribe_line_path_finite(const ConvexityStructure& cs, const Atlas& atlas,
                                           Mask arc, int x, int y);

// Removes self-intersections front to back: when a segment meets the
// already built simple prefix, the prefix is cut back at the furthest
// intersection along the segment and the remainder attached there. The
// result is a simple path with the original endpoints.
PolyPath excise_self_intersections(const PolyPath& path, const Atlas& atlas);

// Rule-based straightening to a geodesic. R1 collapses a corner whose
// neighbours share a chart (lift-consistently) to the chart connection; R2
// collapses any longer breakpoint span inside one chart; R3 splits the
// segments flanking a wide corner at nearby points so that R1 applies, and
// only fires when neither rule does. R1/R2 strictly reduce the breakpoint
// count; refinement steps are annotated in the trace. Stops at a fixpoint
// passing the chart-trace minimality check, or when the budget runs out.
StraighteningTrace straighten(const PolyPath& path, const Atlas& atlas, int budget = 10000);

// Applies the recorded steps to the initial path; returns the final
// canonical form. Used to replay and audit traces.
PolyPath replay_trace(const StraighteningTrace& trace, const Atlas& atlas);

// Checks the per-step containment: every replacement breakpoint lies in
// the lift hull of the breakpoints it replaced, and lift displacement is
// conserved (winding conservation on the cylinder).
bool verify_trace_monotone(const StraighteningTrace& trace, const Atlas& atlas);

struct MinimalConvexResult {
    Mask set = 0;
    bool line_path = false;
    std::vector<int> order;  // walk order when the set is a line path
};

// Least-cardinality connected convex subset containing {x,y}, found by an
// ascending exhaustive sweep with canonical tie-breaking; verified to be a
// simple line path. Throws NotConnected when no connected superset exists.
MinimalConvexResult minimal_connected_convex(const ConvexityStructure& cs, int x, int y);

}  // namespace ck
