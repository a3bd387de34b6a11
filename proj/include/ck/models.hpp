#pragma once

#include "ck/convexity.hpp"
#include "ck/geometry.hpp"
#include "ck/topology.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ck {

// Carriers. Cylinder, plane and finite are the primary models; circle and
// segment appear as domains of etale maps (loops and wrapped intervals).
enum class Model { cylinder, plane, finite, circle, segment };

std::string model_name(Model m);
Model model_from_name(const std::string& name);

// Point on the flat cylinder of circumference 1: angular coordinate w in
// [0,1), height h. Exact rationals throughout.
struct CylPoint {
    Rat w;
    Rat h;
    friend bool operator==(const CylPoint& a, const CylPoint& b) {
        return a.w == b.w && a.h == b.h;
    }
};

CylPoint cyl_point(Rat w, Rat h);  // normalizes w into [0,1)

// --- chart regions -------------------------------------------------------

// Open angular strip. Valid charts have width at most 1/2: the largest
// width for which shortest connections inside the strip are unique.
struct StripRegion {
    Rat center;
    Rat width;  // full angular width
    Rat lo() const { return center - width / 2; }
    Rat hi() const { return center + width / 2; }
};

struct PolygonRegion {
    std::vector<Vec2> vertices;  // convex, counterclockwise
};

struct FullPlaneRegion {};

struct FiniteRegion {
    Mask points = 0;  // convex open subset of the finite structure
};

// Open parameter arc of the circle domain (lo < hi, hi - lo < 1) or open
// subinterval of a segment domain.
struct ArcRegion {
    Rat lo;
    Rat hi;
};

using ChartRegion =
    std::variant<StripRegion, PolygonRegion, FullPlaneRegion, FiniteRegion, ArcRegion>;

struct Chart {
    Model model = Model::plane;
    ChartRegion region;
};

// Local convexity structure: an open cover by convexity charts, closed
// under passing to convex open subregions.
struct Atlas {
    Model model = Model::plane;
    std::vector<Chart> charts;
    // Present when model == finite; charts are convex opens of it.
    std::shared_ptr<const ConvexityStructure> finite;
};

Atlas standard_cylinder_atlas();  // four strips of width 1/2 at 0,1/4,1/2,3/4
Atlas full_plane_atlas();
Atlas finite_atlas(ConvexityStructure cs);  // all minimal opens, hull-completed

struct AtlasViolation {
    int chart = -1;
    std::string detail;
    std::vector<std::string> witness;
};

struct AtlasReport {
    bool valid = true;
    std::vector<AtlasViolation> violations;
};

// Chart axioms per chart, cover on the declared domain, and a seeded
// generative check that convex open subregions again behave as charts.
AtlasReport validate_atlas(const Atlas& atlas, std::uint64_t seed = 1);

// --- strips and lifts ----------------------------------------------------

// Integer shift k with w + k inside the open strip, unique when width <= 1.
std::optional<BigInt> strip_shift(const StripRegion& strip, const Rat& w);
bool in_strip(const StripRegion& strip, const Rat& w);

// --- polypaths -----------------------------------------------------------

// Chart-decorated polyline. Breakpoints are model points (cylinder: (w,h);
// plane: (x,y); circle/segment: (t,0)); segment i lies in charts[i] and
// equals that chart's interval between its endpoints.
struct PolyPath {
    Model model = Model::plane;
    std::vector<Vec2> breakpoints;  // cylinder: x = w in [0,1), y = h
    std::vector<int> charts;        // size = breakpoints.size() - 1

    int segments() const { return static_cast<int>(charts.size()); }
    bool constant() const { return breakpoints.size() == 1; }
};

// Validates the polypath invariants against an atlas; throws NotInChart.
void validate_polypath(const PolyPath& path, const Atlas& atlas);

// Lift of the breakpoints to the universal cover (cylinder model): the
// angular coordinate unrolled using each segment's chart; plane paths lift
// to themselves. Exact round trip with the breakpoints.
std::vector<Vec2> polypath_lift(const PolyPath& path, const Atlas& atlas);

// Net integer winding of a cylinder path (lift displacement minus angular
// displacement of the endpoints).
BigInt polypath_winding(const PolyPath& path, const Atlas& atlas);

// The unique shortest connection of two points inside one strip chart,
// computed as the straight lift segment. Throws NotInChart when either
// point is outside or the angular separation reaches 1/2.
PolyPath cyl_interval(const CylPoint& a, const CylPoint& b, const StripRegion& chart,
                      const Atlas& atlas);

struct CylGeodesic {
    PolyPath path;
    bool degenerate = false;  // constant loop (equal endpoints, winding 0)
};

// Closed-form geodesic with prescribed winding: the projection of the lift
// segment (a.w, a.h) -> (b.w + winding, b.h), canonically subdivided at the
// atlas transition angles. Oracle for the straightening engine.
CylGeodesic cyl_geodesic(const CylPoint& a, const CylPoint& b, const BigInt& winding,
                         const Atlas& atlas);

// Canonical form: interior collinear breakpoints merged, then each straight
// run subdivided at the atlas transition angles with canonical charts.
PolyPath canonicalize_polypath(const PolyPath& path, const Atlas& atlas);

// Straight polyline through the given lifted breakpoints (cylinder), with
// canonical subdivision per straight run. Inverse of polypath_lift.
PolyPath polypath_from_lift(const std::vector<Vec2>& lift, const Atlas& atlas);

// Drops interior lift breakpoints that lie forward-collinear between their
// neighbours (folds stay).
std::vector<Vec2> merge_collinear_lift(const std::vector<Vec2>& lift);

// --- model subsets -------------------------------------------------------

struct PolygonSet {
    std::vector<Vec2> vertices;  // closed simple polygon
};

// Closed spiral band around the helix line h = slope*(w + j) + offset
// (all integer j); slope 0 gives a horizontal band. Half-width tau.
struct BandSet {
    Rat slope;
    Rat offset;
    Rat half_width;
};

struct SegmentSet {
    Vec2 a;
    Vec2 b;
    bool closed_a = true;
    bool closed_b = true;
};

struct FiniteSet {
    Mask points = 0;
};

struct SubsetDesc {
    Model model = Model::plane;
    std::variant<PolygonSet, BandSet, SegmentSet, FiniteSet> shape;
};

bool subset_contains(const SubsetDesc& s, const Vec2& p);
bool subset_is_closed(const SubsetDesc& s, const Atlas& atlas);

// --- map descriptors and etale maps --------------------------------------

// The three supported map kinds: finite-space maps, subset inclusions and
// piecewise-exact model maps (loops and wrapped segments onto a horizontal
// circle of the cylinder).
struct MapDesc {
    enum class Kind { finite_map, inclusion, loop, wrap_segment };
    Kind kind = Kind::inclusion;

    std::optional<SpaceMap> fmap;       // finite_map
    std::optional<SubsetDesc> subset;   // inclusion

    BigInt degree = 1;  // loop: t -> (degree*t + phase mod 1, height)
    Rat phase;
    Rat height;
    Rat length;         // wrap_segment: [0,length], t -> (t + phase mod 1, height)
};

struct LocalConvexityReport {
    bool locally_convex = false;
    std::vector<std::string> witnesses;  // failing points, canonical order
};

// Local convexity of a map into a structured target (openness onto the
// image near every point, with image convex inside some chart). For subset
// descriptors this decides local convexity of the subset itself.
LocalConvexityReport is_locally_convex_map(const MapDesc& f, const Atlas& atlas);

// One chart-cover element of an etale map: a domain open mapped
// homeomorphically onto a convex subset of a target chart.
struct CoverElement {
    Mask finite_open = 0;  // finite domains
    Rat lo, hi;            // parameter interval for circle/segment domains
    int target_chart = -1;
};

struct EtaleMap {
    MapDesc map;
    Atlas target;
    std::vector<CoverElement> cover;  // derived when empty
};

struct EtaleReport {
    bool etale = false;
    bool closed = false;
    bool cover_ok = false;
    std::vector<std::string> violations;
};

EtaleReport is_etale(const EtaleMap& e);

// Derives the canonical chart cover of a map (used when none is supplied).
std::vector<CoverElement> derive_cover(const MapDesc& f, const Atlas& target);

// Composition of a circle covering (t -> degree*t + rotation) with a loop.
MapDesc compose_loop(const MapDesc& outer_loop, const BigInt& inner_degree,
                     const Rat& inner_rotation);

struct G1Report {
    bool compact = false;
    std::vector<Vec2> hull;   // model hull description (vertices / reps)
    Mask finite_hull = 0;
    std::string detail;
};

// Compactness of the closed convex hull of a finite point set inside a
// single chart. Throws CrossChartUnsupported when the points span charts.
G1Report check_G1(const Atlas& atlas, const std::vector<Vec2>& points);
G1Report check_G1_finite(const Atlas& atlas, Mask points);

// Maximal parameter interval of a polypath inside one chart (closed
// regions; the path parameter is segment index plus local fraction).
struct ChartTrace {
    int chart = -1;
    Rat lo;
    Rat hi;
};

std::vector<ChartTrace> chart_traces(const PolyPath& path, const Atlas& atlas);

// Point of the path at a given parameter, in lift coordinates.
Vec2 polypath_eval_lift(const std::vector<Vec2>& lift, const Rat& t);

struct G2Report {
    bool holds = false;
    std::optional<PolyPath> witness_shortcut;  // inscribed straight trace
    Mask witness_subset = 0;                   // finite carriers
    std::string detail;
};

// Minimality of a polypath: inside every chart, each maximal trace of the
// path must be the chart connection of its ends; a violation yields the
// straight shortcut as witness.
G2Report check_G2(const PolyPath& path, const Atlas& atlas);

// Finite carriers: exhaustive search for a proper closed connected subset
// containing both generators with chartwise convex image.
G2Report check_G2_finite(const EtaleMap& e, int x, int y);

}  // namespace ck
