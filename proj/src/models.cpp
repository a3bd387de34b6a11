#include "ck/models.hpp"

#include "ck/errors.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace ck {

std::string model_name(Model m) {
    switch (m) {
        case Model::cylinder: return "cylinder";
        case Model::plane: return "plane";
        case Model::finite: return "finite";
        case Model::circle: return "circle";
        case Model::segment: return "segment";
    }
    return "?";
}

Model model_from_name(const std::string& name) {
    if (name == "cylinder") return Model::cylinder;
    if (name == "plane") return Model::plane;
    if (name == "finite") return Model::finite;
    if (name == "circle") return Model::circle;
    if (name == "segment") return Model::segment;
    throw ParseError("unknown model: " + name);
}

CylPoint cyl_point(Rat w, Rat h) { return CylPoint{rat_mod1(w), std::move(h)}; }

// --- strips ----------------------------------------------------------------

std::optional<BigInt> strip_shift(const StripRegion& strip, const Rat& w) {
    // lo < w + k < hi; with width <= 1 at most one integer qualifies.
    Rat lo = strip.lo() - w, hi = strip.hi() - w;
    BigInt k = rat_floor(lo) + 1;
    if (Rat(k) > lo && Rat(k) < hi) return k;
    return std::nullopt;
}

bool in_strip(const StripRegion& strip, const Rat& w) {
    return strip_shift(strip, w).has_value();
}

namespace {

const StripRegion& chart_strip(const Atlas& atlas, int idx) {
    if (idx < 0 || idx >= static_cast<int>(atlas.charts.size()))
        throw NotInChart("chart index out of range");
    const auto* s = std::get_if<StripRegion>(&atlas.charts[idx].region);
    if (!s) throw NotInChart("chart is not an angular strip");
    return *s;
}

// Canonical circular decomposition of a strip atlas: transition angles
// s_0 < ... < s_{m-1} with the arc [s_i, s_{i+1}] inside one designated
// strip. Transitions sit at overlap midpoints of center-sorted strips.
struct CylWalk {
    std::vector<Rat> switches;   // in [s_0, s_0 + 1), ascending
    std::vector<int> arc_chart;  // arc [switches[i], switches[i+1 mod m]] chart

    int arc_of(const Rat& angle) const {
        const int m = static_cast<int>(switches.size());
        Rat a = angle;
        // Normalize into [switches[0], switches[0] + 1).
        a = switches[0] + rat_mod1(a - switches[0]);
        for (int i = 0; i + 1 < m; ++i)
            if (a >= switches[i] && a <= switches[i + 1]) return i;
        return m - 1;
    }
};

CylWalk make_walk(const Atlas& atlas) {
    struct Item {
        Rat center;
        Rat width;
        int idx;
    };
    std::vector<Item> strips;
    for (int i = 0; i < static_cast<int>(atlas.charts.size()); ++i)
        if (const auto* s = std::get_if<StripRegion>(&atlas.charts[i].region))
            strips.push_back({rat_mod1(s->center), s->width, i});
    if (strips.empty()) throw NotCovered("cylinder atlas has no strips");
    std::sort(strips.begin(), strips.end(), [](const Item& a, const Item& b) {
        return a.center != b.center ? a.center < b.center : a.idx < b.idx;
    });

    const int m = static_cast<int>(strips.size());
    CylWalk walk;
    walk.switches.resize(m);
    walk.arc_chart.resize(m);
    for (int i = 0; i < m; ++i) {
        const Item& cur = strips[i];
        const Item& nxt = strips[(i + 1) % m];
        Rat nxt_center = nxt.center + (i + 1 == m ? Rat(1) : Rat(0));
        Rat lo = std::max(cur.center - cur.width / 2, nxt_center - nxt.width / 2);
        Rat hi = std::min(cur.center + cur.width / 2, nxt_center + nxt.width / 2);
        if (!(lo < hi))
            throw NotCovered("atlas strips do not chain around the cylinder");
        walk.switches[(i + 1) % m] = rat_mod1((lo + hi) / 2);
        walk.arc_chart[(i + 1) % m] = nxt.idx;  // arc starting at this switch
    }
    // Re-sort switches ascending, keeping arc assignment aligned.
    std::vector<std::pair<Rat, int>> paired;
    for (int i = 0; i < m; ++i) paired.emplace_back(walk.switches[i], walk.arc_chart[i]);
    std::sort(paired.begin(), paired.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (int i = 0; i < m; ++i) {
        walk.switches[i] = paired[i].first;
        walk.arc_chart[i] = paired[i].second;
    }
    // Each closed arc between consecutive transitions must really sit
    // inside its designated strip.
    for (int i = 0; i < m; ++i) {
        Rat a = walk.switches[i];
        Rat b = (i + 1 < m) ? walk.switches[i + 1] : walk.switches[0] + 1;
        const auto& strip = std::get<StripRegion>(atlas.charts[walk.arc_chart[i]].region);
        auto k = strip_shift(strip, rat_mod1(a));
        bool inside = false;
        if (k) {
            Rat start = rat_mod1(a) + Rat(*k);
            inside = start + (b - a) < strip.hi();
        }
        if (!inside) throw NotCovered("atlas strips do not chain around the cylinder");
    }
    return walk;
}

bool chart_contains_plane(const Chart& chart, const Vec2& p) {
    if (std::holds_alternative<FullPlaneRegion>(chart.region)) return true;
    if (const auto* poly = std::get_if<PolygonRegion>(&chart.region))
        return point_in_convex_interior(p, poly->vertices);
    return false;
}

}  // namespace

// --- atlases ---------------------------------------------------------------

Atlas standard_cylinder_atlas() {
    Atlas a;
    a.model = Model::cylinder;
    for (int i = 0; i < 4; ++i)
        a.charts.push_back({Model::cylinder, StripRegion{rat(i, 4), rat(1, 2)}});
    return a;
}

Atlas full_plane_atlas() {
    Atlas a;
    a.model = Model::plane;
    a.charts.push_back({Model::plane, FullPlaneRegion{}});
    return a;
}

Atlas finite_atlas(ConvexityStructure cs) {
    if (!cs.verified()) {
        ConvexityConfig cfg;
        check_axioms(cs, cfg);
    }
    Atlas a;
    a.model = Model::finite;
    auto shared = std::make_shared<ConvexityStructure>(std::move(cs));
    a.finite = shared;
    const FiniteSpace& sp = shared->space();
    if (sp.size() <= 16) {
        for (Mask s : sp.all_open_sets())
            if (s != 0 && shared->is_convex(s))
                a.charts.push_back({Model::finite, FiniteRegion{s}});
    } else {
        for (int i = 0; i < sp.size(); ++i)
            a.charts.push_back({Model::finite, FiniteRegion{sp.up(i)}});
        a.charts.push_back({Model::finite, FiniteRegion{sp.all()}});
    }
    return a;
}

AtlasReport validate_atlas(const Atlas& atlas, std::uint64_t seed) {
    AtlasReport rep;
    auto fail = [&](int chart, const std::string& detail, std::vector<std::string> w = {}) {
        rep.valid = false;
        rep.violations.push_back({chart, detail, std::move(w)});
    };

    if (atlas.charts.empty()) {
        fail(-1, "atlas has no charts");
        return rep;
    }

    switch (atlas.model) {
        case Model::cylinder: {
            std::vector<std::pair<Rat, Rat>> arcs;  // (lo, hi) with hi - lo = width
            for (int i = 0; i < static_cast<int>(atlas.charts.size()); ++i) {
                const auto* s = std::get_if<StripRegion>(&atlas.charts[i].region);
                if (!s) {
                    fail(i, "cylinder chart is not an angular strip");
                    continue;
                }
                if (!(s->width > 0)) {
                    fail(i, "strip has empty interior");
                    continue;
                }
                if (s->width > rat(1, 2)) {
                    // Two antipodal points fit inside; their two equal-span
                    // lifts make the shortest connection non-unique.
                    Rat p = rat_mod1(s->center - rat(1, 4));
                    Rat q = rat_mod1(s->center + rat(1, 4));
                    fail(i, "strip wider than 1/2 admits antipodal pairs with two shortest connections",
                         {rat_to_string(p), rat_to_string(q)});
                }
                arcs.emplace_back(rat_mod1(s->lo()), rat_mod1(s->lo()) + s->width);
            }
            if (!rep.valid) break;

            // Exact cover check: membership only changes at arc boundaries,
            // so testing boundaries and gaps between them decides the cover.
            std::set<Rat> bounds;
            for (auto& [lo, hi] : arcs) {
                bounds.insert(rat_mod1(lo));
                bounds.insert(rat_mod1(hi));
            }
            auto covered = [&](const Rat& w) {
                for (auto& [lo, hi] : arcs) {
                    Rat shifted = lo + rat_mod1(w - lo);
                    if (shifted > lo && shifted < hi) return true;
                }
                return false;
            };
            std::vector<Rat> probes(bounds.begin(), bounds.end());
            const int nb = static_cast<int>(probes.size());
            for (int i = 0; i < nb; ++i) {
                Rat next = (i + 1 < nb) ? probes[i + 1] : probes[0] + 1;
                Rat mid = (probes[i] + next) / 2;
                if (!covered(probes[i]))
                    fail(-1, "atlas leaves an angle uncovered", {rat_to_string(probes[i])});
                if (!covered(rat_mod1(mid)))
                    fail(-1, "atlas leaves an arc uncovered", {rat_to_string(rat_mod1(mid))});
            }

            // Generative closure check: random convex open subregions of a
            // strip are again charts (width within bound, unique shifts).
            std::mt19937_64 rng(seed);
            for (int i = 0; i < static_cast<int>(atlas.charts.size()); ++i) {
                const auto* s = std::get_if<StripRegion>(&atlas.charts[i].region);
                if (!s) continue;
                for (int t = 0; t < 8; ++t) {
                    long long num = static_cast<long long>(rng() % 64) + 1;
                    Rat frac = rat(num, 128);  // in (0, 1/2]
                    StripRegion sub{s->center, s->width * frac};
                    if (sub.width > rat(1, 2) || !(sub.width > 0))
                        fail(i, "convex open subregion fails the chart conditions");
                    Rat wpt = rat_mod1(sub.center + sub.width / 4);
                    if (!in_strip(*s, wpt) || !in_strip(sub, wpt))
                        fail(i, "subregion sample point escaped its strip");
                }
            }
            break;
        }
        case Model::plane: {
            for (int i = 0; i < static_cast<int>(atlas.charts.size()); ++i) {
                const Chart& c = atlas.charts[i];
                if (std::holds_alternative<FullPlaneRegion>(c.region)) continue;
                const auto* poly = std::get_if<PolygonRegion>(&c.region);
                if (!poly) {
                    fail(i, "plane chart is neither a polygon nor the full plane");
                    continue;
                }
                if (poly->vertices.size() < 3) {
                    fail(i, "polygon chart needs at least three vertices");
                    continue;
                }
                auto reflex = polygon_reflex_vertices(poly->vertices);
                if (!reflex.empty()) {
                    std::vector<std::string> w;
                    for (int r : reflex)
                        w.push_back(rat_to_string(poly->vertices[r].x) + "," +
                                    rat_to_string(poly->vertices[r].y));
                    fail(i, "polygon chart is not convex", std::move(w));
                }
            }
            break;
        }
        case Model::finite: {
            if (!atlas.finite) {
                fail(-1, "finite atlas lacks its structure");
                break;
            }
            if (!atlas.finite->verified())
                fail(-1, "finite structure has not passed the axiom checks");
            const FiniteSpace& sp = atlas.finite->space();
            Mask covered = 0;
            for (int i = 0; i < static_cast<int>(atlas.charts.size()); ++i) {
                const auto* r = std::get_if<FiniteRegion>(&atlas.charts[i].region);
                if (!r) {
                    fail(i, "finite chart is not a point subset");
                    continue;
                }
                if (!sp.is_open(r->points)) fail(i, "finite chart is not open");
                if (!atlas.finite->is_convex(r->points)) fail(i, "finite chart is not convex");
                covered |= r->points;
            }
            if (covered != sp.all()) fail(-1, "finite charts do not cover the carrier");
            break;
        }
        case Model::circle:
        case Model::segment: {
            for (int i = 0; i < static_cast<int>(atlas.charts.size()); ++i) {
                const auto* arc = std::get_if<ArcRegion>(&atlas.charts[i].region);
                if (!arc) {
                    fail(i, "one-dimensional chart is not a parameter arc");
                    continue;
                }
                if (!(arc->lo < arc->hi)) fail(i, "arc has empty interior");
                if (atlas.model == Model::circle && arc->hi - arc->lo >= 1)
                    fail(i, "circle arc wraps onto itself");
            }
            break;
        }
    }
    return rep;
}

// --- polypaths ---------------------------------------------------------------

void validate_polypath(const PolyPath& path, const Atlas& atlas) {
    if (path.breakpoints.empty()) throw NotInChart("polypath has no breakpoints");
    if (path.charts.size() + 1 != path.breakpoints.size() && !path.constant())
        throw NotInChart("polypath chart assignment is not per-segment");
    for (int i = 0; i < path.segments(); ++i) {
        const Vec2& a = path.breakpoints[i];
        const Vec2& b = path.breakpoints[i + 1];
        int ci = path.charts[i];
        if (ci < 0 || ci >= static_cast<int>(atlas.charts.size()))
            throw NotInChart("polypath references a chart outside the atlas");
        const Chart& chart = atlas.charts[ci];
        if (path.model == Model::cylinder) {
            const StripRegion& s = chart_strip(atlas, ci);
            if (!in_strip(s, a.x) || !in_strip(s, b.x))
                throw NotInChart("segment endpoint outside its strip chart");
        } else if (path.model == Model::plane) {
            if (!chart_contains_plane(chart, a) || !chart_contains_plane(chart, b))
                throw NotInChart("segment endpoint outside its plane chart");
        }
    }
}

std::vector<Vec2> polypath_lift(const PolyPath& path, const Atlas& atlas) {
    std::vector<Vec2> lift;
    lift.reserve(path.breakpoints.size());
    if (path.model != Model::cylinder) return path.breakpoints;
    if (path.breakpoints.empty()) return lift;
    Rat u = path.breakpoints[0].x;
    lift.push_back({u, path.breakpoints[0].y});
    for (int i = 0; i < path.segments(); ++i) {
        const StripRegion& s = chart_strip(atlas, path.charts[i]);
        auto ka = strip_shift(s, path.breakpoints[i].x);
        auto kb = strip_shift(s, path.breakpoints[i + 1].x);
        if (!ka || !kb) throw NotInChart("segment endpoint outside its strip chart");
        Rat delta = (path.breakpoints[i + 1].x + Rat(*kb)) - (path.breakpoints[i].x + Rat(*ka));
        u += delta;
        lift.push_back({u, path.breakpoints[i + 1].y});
    }
    return lift;
}

BigInt polypath_winding(const PolyPath& path, const Atlas& atlas) {
    if (path.model != Model::cylinder || path.breakpoints.empty()) return 0;
    auto lift = polypath_lift(path, atlas);
    Rat total = lift.back().x - lift.front().x;
    Rat angular = path.breakpoints.back().x - path.breakpoints.front().x;
    Rat k = total - angular;
    BigInt ki = rat_floor(k);
    if (Rat(ki) != k) throw Error("internal: winding is not an integer");
    return ki;
}

PolyPath polypath_from_lift(const std::vector<Vec2>& lift, const Atlas& atlas) {
    if (lift.empty()) throw NotInChart("empty lift");
    PolyPath out;
    out.model = Model::cylinder;
    if (lift.size() == 1) {
        out.breakpoints.push_back({rat_mod1(lift[0].x), lift[0].y});
        return out;
    }
    CylWalk walk = make_walk(atlas);
    const int m = static_cast<int>(walk.switches.size());

    auto emit_point = [&](const Vec2& p) {
        out.breakpoints.push_back({rat_mod1(p.x), p.y});
    };

    emit_point(lift[0]);
    for (size_t seg = 0; seg + 1 < lift.size(); ++seg) {
        const Vec2& A = lift[seg];
        const Vec2& B = lift[seg + 1];
        if (A.x == B.x) {
            // Vertical segment: one chart, the arc containing the angle.
            if (A.y == B.y) continue;
            int arc = walk.arc_of(A.x);
            emit_point(B);
            out.charts.push_back(walk.arc_chart[arc]);
            continue;
        }
        const bool fwd = B.x > A.x;
        // Crossings of transition angles strictly between A.x and B.x.
        std::vector<Rat> cuts;
        Rat lo = std::min(A.x, B.x), hi = std::max(A.x, B.x);
        for (int i = 0; i < m; ++i) {
            // switches[i] + k in (lo, hi)
            BigInt k = rat_floor(lo - walk.switches[i]) + 1;
            for (Rat v = walk.switches[i] + Rat(k); v < hi; v += 1)
                if (v > lo) cuts.push_back(v);
        }
        std::sort(cuts.begin(), cuts.end());
        if (!fwd) std::reverse(cuts.begin(), cuts.end());

        Vec2 prev = A;
        auto chart_for = [&](const Rat& ua, const Rat& ub) {
            Rat mid = (ua + ub) / 2;
            return walk.arc_chart[walk.arc_of(mid)];
        };
        for (const Rat& cu : cuts) {
            Rat t = (cu - A.x) / (B.x - A.x);
            Vec2 p{cu, A.y + t * (B.y - A.y)};
            emit_point(p);
            out.charts.push_back(chart_for(prev.x, p.x));
            prev = p;
        }
        emit_point(B);
        out.charts.push_back(chart_for(prev.x, B.x));
    }
    return out;
}

// Removes interior breakpoints lying between their neighbours on a common
// straight line (forward collinearity; folds are genuine corners).
std::vector<Vec2> merge_collinear_lift(const std::vector<Vec2>& lift) {
    if (lift.size() <= 2) return lift;
    std::vector<Vec2> out;
    out.push_back(lift.front());
    for (size_t i = 1; i + 1 < lift.size(); ++i) {
        const Vec2& a = out.back();
        const Vec2& b = lift[i];
        const Vec2& c = lift[i + 1];
        Vec2 d1 = b - a, d2 = c - b;
        bool straight = (d1.x * d2.y - d1.y * d2.x) == 0 &&
                        (d1.x * d2.x + d1.y * d2.y) >= 0;
        if (!straight) out.push_back(b);
    }
    out.push_back(lift.back());
    return out;
}

PolyPath canonicalize_polypath(const PolyPath& path, const Atlas& atlas) {
    if (path.model == Model::plane) {
        PolyPath out = path;
        auto merged = merge_collinear_lift(path.breakpoints);
        out.breakpoints = merged;
        out.charts.assign(merged.size() > 1 ? merged.size() - 1 : 0, 0);
        for (size_t i = 0; i + 1 < merged.size(); ++i) {
            int found = -1;
            for (int c = 0; c < static_cast<int>(atlas.charts.size()) && found < 0; ++c)
                if (chart_contains_plane(atlas.charts[c], merged[i]) &&
                    chart_contains_plane(atlas.charts[c], merged[i + 1]))
                    found = c;
            if (found < 0) throw NotInChart("canonical segment fits no plane chart");
            out.charts[i] = found;
        }
        return out;
    }
    auto lift = merge_collinear_lift(polypath_lift(path, atlas));
    return polypath_from_lift(lift, atlas);
}

PolyPath cyl_interval(const CylPoint& a, const CylPoint& b, int chart_index,
                      const Atlas& atlas) {
    const StripRegion& s = chart_strip(atlas, chart_index);
    auto ka = strip_shift(s, a.w);
    auto kb = strip_shift(s, b.w);
    if (!ka || !kb)
        throw NotInChart("point outside the strip (or separation at least 1/2)");
    PolyPath path;
    path.model = Model::cylinder;
    path.breakpoints = {{a.w, a.h}, {b.w, b.h}};
    path.charts = {chart_index};
    if (path.breakpoints[0] == path.breakpoints[1]) {
        path.breakpoints.pop_back();
        path.charts.clear();
    }
    return path;
}

CylGeodesic cyl_geodesic(const CylPoint& a, const CylPoint& b, const BigInt& winding,
                         const Atlas& atlas) {
    CylGeodesic out;
    if (a == b && winding == 0) {
        out.degenerate = true;
        out.path.model = Model::cylinder;
        out.path.breakpoints = {{a.w, a.h}};
        return out;
    }
    std::vector<Vec2> lift{{a.w, a.h}, {b.w + Rat(winding), b.h}};
    out.path = polypath_from_lift(lift, atlas);
    return out;
}

// --- subsets -----------------------------------------------------------------

bool subset_contains(const SubsetDesc& s, const Vec2& p) {
    if (const auto* poly = std::get_if<PolygonSet>(&s.shape))
        return point_in_polygon(p, poly->vertices);
    if (const auto* band = std::get_if<BandSet>(&s.shape)) {
        const Rat w = rat_mod1(p.x), h = p.y;
        if (band->slope == 0) return rat_abs(h - band->offset) <= band->half_width;
        // Need an integer j with |h - slope*(w + j) - offset| <= tau.
        Rat lo = (h - band->offset - band->half_width) / band->slope - w;
        Rat hi = (h - band->offset + band->half_width) / band->slope - w;
        if (lo > hi) std::swap(lo, hi);
        return rat_floor(hi) >= rat_floor(lo) + (Rat(rat_floor(lo)) == lo ? 0 : 1);
    }
    if (const auto* seg = std::get_if<SegmentSet>(&s.shape)) {
        if (!point_on_segment(p, seg->a, seg->b)) return false;
        if (p == seg->a && !seg->closed_a) return false;
        if (p == seg->b && !seg->closed_b) return false;
        return true;
    }
    return false;
}

bool subset_is_closed(const SubsetDesc& s, const Atlas& atlas) {
    if (std::holds_alternative<PolygonSet>(s.shape)) return true;
    if (std::holds_alternative<BandSet>(s.shape)) return true;
    if (const auto* seg = std::get_if<SegmentSet>(&s.shape))
        return seg->closed_a && seg->closed_b;
    if (const auto* fin = std::get_if<FiniteSet>(&s.shape)) {
        if (!atlas.finite) throw Error("finite subset needs a finite atlas");
        return atlas.finite->space().is_closed(fin->points);
    }
    return false;
}

// --- local convexity ----------------------------------------------------------

namespace {

LocalConvexityReport check_finite_map_locally_convex(const SpaceMap& f, const Atlas& atlas) {
    LocalConvexityReport rep;
    if (!atlas.finite) throw Error("finite map needs a finite target atlas");
    const ConvexityStructure& cs = *atlas.finite;
    const FiniteSpace& X = f.source();
    const FiniteSpace& Y = f.target();
    if (!Y.same_points(cs.space()))
        throw Error("target space does not match the atlas structure");

    rep.locally_convex = true;
    for (int x = 0; x < X.size(); ++x) {
        const Mask U = X.up(x);
        const Mask fu = f.image(U);
        bool open_onto = true;
        mask_for_each(U, [&](int v) {
            Mask fv = f.image(X.up(v));
            if ((Y.up_closure(fv) & fu) != fv) open_onto = false;
        });
        bool convex = cs.is_convex(fu);
        bool in_chart = false;
        for (const Chart& c : atlas.charts)
            if (const auto* r = std::get_if<FiniteRegion>(&c.region))
                if ((fu & ~r->points) == 0) {
                    in_chart = true;
                    break;
                }
        if (!(open_onto && convex && in_chart)) {
            rep.locally_convex = false;
            rep.witnesses.push_back(X.name(x));
        }
    }
    return rep;
}

LocalConvexityReport check_subset_locally_convex(const SubsetDesc& sub, const Atlas& atlas) {
    LocalConvexityReport rep;
    rep.locally_convex = true;
    if (const auto* poly = std::get_if<PolygonSet>(&sub.shape)) {
        for (int r : polygon_reflex_vertices(poly->vertices)) {
            rep.locally_convex = false;
            rep.witnesses.push_back(rat_to_string(poly->vertices[r].x) + "," +
                                    rat_to_string(poly->vertices[r].y));
        }
        return rep;
    }
    if (const auto* band = std::get_if<BandSet>(&sub.shape)) {
        // Locally convex iff the branches of the band are separated inside
        // every strip: vertical branch spacing |slope| must exceed 2*tau.
        if (band->slope != 0 && rat_abs(band->slope) <= 2 * band->half_width) {
            rep.locally_convex = false;
            rep.witnesses.push_back("0," + rat_to_string(band->offset + rat_abs(band->slope) / 2));
        }
        return rep;
    }
    if (std::holds_alternative<SegmentSet>(sub.shape)) return rep;
    if (const auto* fin = std::get_if<FiniteSet>(&sub.shape)) {
        if (!atlas.finite) throw Error("finite subset needs a finite atlas");
        const ConvexityStructure& cs = *atlas.finite;
        const FiniteSpace& sp = cs.space();
        std::vector<Mask> convex_opens;
        for (Mask s : sp.all_open_sets())
            if (s != 0 && cs.is_convex(s)) convex_opens.push_back(s);
        mask_for_each(fin->points, [&](int z) {
            bool found = false;
            for (Mask u : convex_opens)
                if (mask_test(u, z) && cs.is_convex(u & fin->points)) {
                    found = true;
                    break;
                }
            if (!found) {
                rep.locally_convex = false;
                rep.witnesses.push_back(sp.name(z));
            }
        });
        return rep;
    }
    throw UnsupportedMapKind("unsupported subset shape");
}

}  // namespace

LocalConvexityReport is_locally_convex_map(const MapDesc& f, const Atlas& atlas) {
    switch (f.kind) {
        case MapDesc::Kind::finite_map:
            if (!f.fmap) throw UnsupportedMapKind("finite map descriptor lacks its map");
            return check_finite_map_locally_convex(*f.fmap, atlas);
        case MapDesc::Kind::inclusion:
            if (!f.subset) throw UnsupportedMapKind("inclusion descriptor lacks its subset");
            return check_subset_locally_convex(*f.subset, atlas);
        case MapDesc::Kind::loop:
        case MapDesc::Kind::wrap_segment: {
            // Piecewise-exact maps onto a horizontal circle: small parameter
            // intervals land homeomorphically on arcs, and arcs are convex
            // inside strips; constant maps land on singletons.
            LocalConvexityReport rep;
            rep.locally_convex = true;
            return rep;
        }
    }
    throw UnsupportedMapKind("unsupported map kind");
}

// --- etale maps -----------------------------------------------------------------

std::vector<CoverElement> derive_cover(const MapDesc& f, const Atlas& target) {
    std::vector<CoverElement> cover;
    switch (f.kind) {
        case MapDesc::Kind::finite_map: {
            const SpaceMap& fm = *f.fmap;
            const FiniteSpace& X = fm.source();
            const FiniteSpace& Y = fm.target();
            if (!target.finite) throw Error("finite map needs a finite target atlas");
            const ConvexityStructure& cs = *target.finite;
            std::set<Mask> seen;
            for (int x = 0; x < X.size(); ++x) {
                Mask U = X.up(x);
                if (seen.count(U)) continue;
                Mask fu = fm.image(U);
                bool injective = mask_size(fu) == mask_size(U);
                bool open_onto = true;
                mask_for_each(U, [&](int v) {
                    Mask fv = fm.image(X.up(v));
                    if ((Y.up_closure(fv) & fu) != fv) open_onto = false;
                });
                if (!injective || !open_onto || !cs.is_convex(fu)) continue;
                int chart = -1;
                for (int c = 0; c < static_cast<int>(target.charts.size()); ++c)
                    if (const auto* r = std::get_if<FiniteRegion>(&target.charts[c].region))
                        if ((fu & ~r->points) == 0) {
                            chart = c;
                            break;
                        }
                if (chart < 0) continue;
                CoverElement e;
                e.finite_open = U;
                e.target_chart = chart;
                cover.push_back(e);
                seen.insert(U);
            }
            return cover;
        }
        case MapDesc::Kind::loop:
        case MapDesc::Kind::wrap_segment: {
            const bool loop = f.kind == MapDesc::Kind::loop;
            const Rat deg = loop ? Rat(f.degree) : Rat(1);
            if (deg == 0) return cover;
            for (int c = 0; c < static_cast<int>(target.charts.size()); ++c) {
                const auto* s = std::get_if<StripRegion>(&target.charts[c].region);
                if (!s) continue;
                // t with deg*t + phase + m inside (lo, hi), per branch m.
                if (loop) {
                    BigInt degree_abs = f.degree < 0 ? BigInt(-f.degree) : f.degree;
                    for (BigInt m = 0; m < degree_abs; ++m) {
                        Rat lo = (s->lo() - f.phase + Rat(m)) / deg;
                        Rat hi = (s->hi() - f.phase + Rat(m)) / deg;
                        if (lo > hi) std::swap(lo, hi);
                        CoverElement e;
                        e.lo = rat_mod1(lo);
                        e.hi = e.lo + (hi - lo);
                        e.target_chart = c;
                        cover.push_back(e);
                    }
                } else {
                    for (BigInt m = rat_floor(-f.phase + s->lo()) - 1;
                         Rat(m) + s->lo() - f.phase <= f.length + 1; ++m) {
                        Rat lo = s->lo() - f.phase + Rat(m);
                        Rat hi = s->hi() - f.phase + Rat(m);
                        Rat clo = std::max(lo, Rat(0));
                        Rat chi = std::min(hi, f.length);
                        if (!(clo < chi)) continue;
                        CoverElement e;
                        e.lo = clo;
                        e.hi = chi;
                        e.target_chart = c;
                        cover.push_back(e);
                    }
                }
            }
            return cover;
        }
        case MapDesc::Kind::inclusion:
            return cover;  // inclusions are handled via local convexity
    }
    return cover;
}

EtaleReport is_etale(const EtaleMap& e) {
    EtaleReport rep;
    const MapDesc& f = e.map;
    switch (f.kind) {
        case MapDesc::Kind::finite_map: {
            const SpaceMap& fm = *f.fmap;
            MapReport flags = classify_map(fm);
            rep.closed = flags.closed && flags.continuous;
            if (!fm.source().connected()) rep.violations.push_back("domain is not connected");
            auto cover = e.cover.empty() ? derive_cover(f, e.target) : e.cover;
            Mask covered = 0;
            for (const auto& el : cover) covered |= el.finite_open;
            rep.cover_ok = covered == fm.source().all();
            if (!rep.cover_ok)
                rep.violations.push_back("chart cover misses part of the domain");
            break;
        }
        case MapDesc::Kind::inclusion: {
            rep.closed = subset_is_closed(*f.subset, e.target);
            if (!rep.closed) rep.violations.push_back("image is not closed");
            auto lc = is_locally_convex_map(f, e.target);
            rep.cover_ok = lc.locally_convex;
            for (const auto& w : lc.witnesses)
                rep.violations.push_back("no convex chart neighbourhood at " + w);
            break;
        }
        case MapDesc::Kind::loop: {
            rep.closed = true;  // compact domain, continuous map
            rep.cover_ok = f.degree != 0;
            if (f.degree == 0)
                rep.violations.push_back("constant loop admits no homeomorphic chart cover");
            break;
        }
        case MapDesc::Kind::wrap_segment: {
            rep.closed = true;
            rep.cover_ok = f.length > 0;
            if (!(f.length > 0)) rep.violations.push_back("wrapped segment has empty domain");
            break;
        }
    }
    rep.etale = rep.closed && rep.cover_ok && rep.violations.empty();
    return rep;
}

MapDesc compose_loop(const MapDesc& outer_loop, const BigInt& inner_degree,
                     const Rat& inner_rotation) {
    if (outer_loop.kind != MapDesc::Kind::loop)
        throw UnsupportedMapKind("composition implemented for loops");
    MapDesc out = outer_loop;
    out.degree = outer_loop.degree * inner_degree;
    out.phase = rat_mod1(outer_loop.phase + Rat(outer_loop.degree) * inner_rotation);
    return out;
}

// --- G1 / G2 ---------------------------------------------------------------------

G1Report check_G1(const Atlas& atlas, const std::vector<Vec2>& points) {
    G1Report rep;
    if (points.empty()) throw Error("G1 needs a non-empty point set");
    if (atlas.model == Model::plane) {
        int chart = -1;
        for (int c = 0; c < static_cast<int>(atlas.charts.size()); ++c) {
            bool all = true;
            for (const Vec2& p : points)
                if (!chart_contains_plane(atlas.charts[c], p)) all = false;
            if (all) {
                chart = c;
                break;
            }
        }
        if (chart < 0) throw CrossChartUnsupported("points span several plane charts");
        rep.hull = convex_hull_points(points);
        rep.compact = true;
        rep.detail = "closed polygonal hull inside one chart";
        return rep;
    }
    if (atlas.model == Model::cylinder) {
        for (int c = 0; c < static_cast<int>(atlas.charts.size()); ++c) {
            const auto* s = std::get_if<StripRegion>(&atlas.charts[c].region);
            if (!s) continue;
            std::vector<Vec2> reps;
            bool all = true;
            for (const Vec2& p : points) {
                auto k = strip_shift(*s, p.x);
                if (!k) {
                    all = false;
                    break;
                }
                reps.push_back({p.x + Rat(*k), p.y});
            }
            if (!all) continue;
            rep.hull = convex_hull_points(reps);
            rep.compact = true;
            rep.detail = "closed hull of the strip lift";
            return rep;
        }
        throw CrossChartUnsupported("points fit no single strip chart");
    }
    throw CrossChartUnsupported("G1 on this model uses the finite overload");
}

G1Report check_G1_finite(const Atlas& atlas, Mask points) {
    if (!atlas.finite) throw Error("finite G1 needs a finite atlas");
    const ConvexityStructure& cs = *atlas.finite;
    bool inside = false;
    for (const Chart& c : atlas.charts)
        if (const auto* r = std::get_if<FiniteRegion>(&c.region))
            if ((points & ~r->points) == 0) inside = true;
    if (!inside) throw CrossChartUnsupported("points fit no single finite chart");
    G1Report rep;
    rep.finite_hull = cs.space().down_closure(convex_hull(cs, points));
    rep.compact = true;  // finite carriers are compact
    rep.detail = "finite hull closure";
    return rep;
}

Vec2 polypath_eval_lift(const std::vector<Vec2>& lift, const Rat& t) {
    const int nseg = static_cast<int>(lift.size()) - 1;
    int i = rat_floor(t).convert_to<int>();
    if (i >= nseg) i = nseg - 1;
    if (i < 0) i = 0;
    Rat s = t - Rat(i);
    return lift[i] + s * (lift[i + 1] - lift[i]);
}

std::vector<ChartTrace> chart_traces(const PolyPath& path, const Atlas& atlas) {
    std::vector<ChartTrace> out;
    if (path.breakpoints.size() < 2) return out;
    const auto lift = polypath_lift(path, atlas);
    const int nseg = path.segments();

    for (int c = 0; c < static_cast<int>(atlas.charts.size()); ++c) {
        std::vector<ChartTrace> traces;
        for (int i = 0; i < nseg; ++i) {
            const Vec2& A = lift[i];
            const Vec2& B = lift[i + 1];
            if (path.model == Model::cylinder) {
                const auto* s = std::get_if<StripRegion>(&atlas.charts[c].region);
                if (!s) continue;
                // u in [lo + k, hi + k] for each integer branch k.
                Rat ulo = std::min(A.x, B.x), uhi = std::max(A.x, B.x);
                for (BigInt k = rat_floor(ulo - s->hi()); Rat(k) + s->lo() <= uhi; ++k) {
                    Rat blo = s->lo() + Rat(k), bhi = s->hi() + Rat(k);
                    Rat clo = std::max(ulo, blo), chi = std::min(uhi, bhi);
                    if (clo > chi) continue;
                    Rat t0, t1;
                    if (A.x == B.x) {
                        t0 = Rat(i);
                        t1 = Rat(i) + 1;
                    } else {
                        t0 = Rat(i) + (clo - A.x) / (B.x - A.x);
                        t1 = Rat(i) + (chi - A.x) / (B.x - A.x);
                        if (t0 > t1) std::swap(t0, t1);
                    }
                    traces.push_back({c, t0, t1});
                }
            } else if (path.model == Model::plane) {
                const Chart& chart = atlas.charts[c];
                if (std::holds_alternative<FullPlaneRegion>(chart.region)) {
                    traces.push_back({c, Rat(i), Rat(i) + 1});
                } else if (const auto* poly = std::get_if<PolygonRegion>(&chart.region)) {
                    // Clip the segment by the convex polygon (closed).
                    Rat t0(0), t1(1);
                    bool empty = false;
                    const auto& vs = poly->vertices;
                    const int sign = polygon_is_ccw(vs) ? 1 : -1;
                    for (size_t e2 = 0; e2 < vs.size() && !empty; ++e2) {
                        const Vec2& p = vs[e2];
                        const Vec2& q = vs[(e2 + 1) % vs.size()];
                        Rat fa = Rat(sign) * cross(p, q, A);
                        Rat fb = Rat(sign) * cross(p, q, B);
                        if (fa < 0 && fb < 0) empty = true;
                        else if (fa < 0 || fb < 0) {
                            Rat t = fa / (fa - fb);
                            if (fa < 0) t0 = std::max(t0, t);
                            else t1 = std::min(t1, t);
                        }
                    }
                    if (!empty && t0 <= t1) traces.push_back({c, Rat(i) + t0, Rat(i) + t1});
                }
            }
        }
        std::sort(traces.begin(), traces.end(), [](const ChartTrace& a, const ChartTrace& b) {
            return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
        });
        for (const ChartTrace& t : traces) {
            if (!out.empty() && out.back().chart == c && t.lo <= out.back().hi)
                out.back().hi = std::max(out.back().hi, t.hi);
            else
                out.push_back(t);
        }
    }
    return out;
}

G2Report check_G2(const PolyPath& path, const Atlas& atlas) {
    G2Report rep;
    if (path.constant() || path.breakpoints.size() < 2) {
        rep.holds = true;
        rep.detail = "constant path";
        return rep;
    }
    const auto lift = polypath_lift(path, atlas);

    // Every maximal chart trace must be straight in lift coordinates.
    for (const ChartTrace& t : chart_traces(path, atlas)) {
        if (t.lo == t.hi) continue;
        Vec2 P = polypath_eval_lift(lift, t.lo), Q = polypath_eval_lift(lift, t.hi);
        bool straight = true;
        Rat prev_param(-1);
        for (int i = 1; i < static_cast<int>(lift.size()) - 1; ++i) {
            Rat ti(i);
            if (ti <= t.lo || ti >= t.hi) continue;
            if (!point_on_segment(lift[i], P, Q)) {
                straight = false;
                break;
            }
            auto par = segment_parameter(lift[i], P, Q);
            if (!par || *par < prev_param) {
                straight = false;
                break;
            }
            prev_param = *par;
        }
        if (!straight) {
            rep.holds = false;
            rep.detail = "chart trace admits a straight shortcut";
            if (path.model == Model::cylinder)
                rep.witness_shortcut = polypath_from_lift({P, Q}, atlas);
            else {
                PolyPath w;
                w.model = Model::plane;
                w.breakpoints = {P, Q};
                w.charts = {t.chart};
                rep.witness_shortcut = w;
            }
            return rep;
        }
    }
    rep.holds = true;
    rep.detail = "every chart trace is the chart connection of its ends";
    return rep;
}

G2Report check_G2_finite(const EtaleMap& e, int x, int y) {
    G2Report rep;
    if (e.map.kind != MapDesc::Kind::finite_map)
        throw UnsupportedMapKind("finite G2 requires a finite-space map");
    const SpaceMap& fm = *e.map.fmap;
    const FiniteSpace& X = fm.source();
    if (X.size() > 20) throw Error("finite G2 enumeration limited to 20 points");
    if (!e.target.finite) throw Error("finite G2 needs a finite target atlas");
    const ConvexityStructure& cs = *e.target.finite;
    auto cover = e.cover.empty() ? derive_cover(e.map, e.target) : e.cover;

    const Mask need = mask_bit(x) | mask_bit(y);
    const Mask full = X.all();
    for (Mask a = 0; a <= full; ++a) {
        if (a == full) break;
        if ((a & need) != need) continue;
        if (!X.is_closed(a) || !X.subspace_connected(a)) continue;
        bool chartwise = true;
        for (const auto& el : cover)
            if (!cs.is_convex(fm.image(a & el.finite_open))) chartwise = false;
        if (!chartwise) continue;
        rep.holds = false;
        rep.witness_subset = a;
        rep.detail = "proper closed connected chartwise-convex subset contains both generators";
        return rep;
    }
    rep.holds = true;
    rep.detail = "no proper closed connected subset carries both generators";
    return rep;
}

}  // namespace ck
