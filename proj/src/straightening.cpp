#include "ck/straightening.hpp"

#include "ck/errors.hpp"

#include <algorithm>

namespace ck {

namespace {

// Smallest chart whose region contains both lift points with one coherent
// shift (so the straight connection stays in the chart and keeps the lift).
std::optional<int> chart_for_lift_pair(const Atlas& atlas, Model model, const Vec2& a,
                                       const Vec2& b) {
    for (int c = 0; c < static_cast<int>(atlas.charts.size()); ++c) {
        const Chart& chart = atlas.charts[c];
        if (model == Model::cylinder) {
            const auto* s = std::get_if<StripRegion>(&chart.region);
            if (!s) continue;
            Rat lo = std::min(a.x, b.x), hi = std::max(a.x, b.x);
            // need k with strip.lo < lo + k and hi + k < strip.hi
            BigInt k = rat_floor(s->lo() - lo) + 1;
            if (Rat(k) > s->lo() - lo && hi + Rat(k) < s->hi()) return c;
        } else if (model == Model::plane) {
            bool ina = false, inb = false;
            if (std::holds_alternative<FullPlaneRegion>(chart.region)) ina = inb = true;
            if (const auto* poly = std::get_if<PolygonRegion>(&chart.region)) {
                ina = point_in_convex_interior(a, poly->vertices);
                inb = point_in_convex_interior(b, poly->vertices);
            }
            if (ina && inb) return c;
        }
    }
    return std::nullopt;
}

bool forward_collinear(const Vec2& a, const Vec2& b, const Vec2& c) {
    Vec2 d1 = b - a, d2 = c - b;
    return (d1.x * d2.y - d1.y * d2.x) == 0 && (d1.x * d2.x + d1.y * d2.y) >= 0;
}

bool genuine_corner(const Vec2& a, const Vec2& b, const Vec2& c) {
    return !forward_collinear(a, b, c);
}

int count_corners(const std::vector<Vec2>& lift) {
    int corners = 0;
    for (size_t i = 1; i + 1 < lift.size(); ++i)
        if (genuine_corner(lift[i - 1], lift[i], lift[i + 1])) ++corners;
    return corners;
}

bool interior_on_segment_in_order(const std::vector<Vec2>& lift, int i, int j) {
    Rat prev(-1);
    for (int k = i + 1; k < j; ++k) {
        if (!point_on_segment(lift[k], lift[i], lift[j])) return false;
        auto t = segment_parameter(lift[k], lift[i], lift[j]);
        if (!t || *t < prev) return false;
        prev = *t;
    }
    return true;
}

bool point_in_hull(const Vec2& p, const std::vector<Vec2>& pts) {
    auto hull = convex_hull_points(pts);
    if (hull.empty()) return false;
    if (hull.size() == 1) return p == hull[0];
    if (hull.size() == 2) return point_on_segment(p, hull[0], hull[1]);
    return point_in_polygon(p, hull);
}

PolyPath rebuild(const std::vector<Vec2>& lift, Model model, const Atlas& atlas) {
    if (model == Model::cylinder) return polypath_from_lift(lift, atlas);
    PolyPath out;
    out.model = model;
    out.breakpoints = lift;
    if (lift.size() > 1) {
        out.charts.assign(lift.size() - 1, 0);
        for (size_t i = 0; i + 1 < lift.size(); ++i) {
            auto c = chart_for_lift_pair(atlas, model, lift[i], lift[i + 1]);
            if (!c) throw NotInChart("segment fits no chart");
            out.charts[i] = *c;
        }
    }
    return out;
}

}  // namespace

PolyPath inscribe_line_path(const PolyPath& arc, const Atlas& atlas) {
    if (arc.breakpoints.size() < 2) return arc;
    auto traces = chart_traces(arc, atlas);
    const auto lift = polypath_lift(arc, atlas);
    const Rat T(arc.segments());

    // Greedy walk over the maximal chart traces; each hop extends the
    // covered parameter range as far as possible (ties to smaller charts).
    std::vector<ChartTrace> chain;
    Rat reach(0);
    Rat covered_from(0);
    for (;;) {
        const ChartTrace* best = nullptr;
        for (const auto& t : traces) {
            if (t.lo > covered_from) continue;
            if (t.hi <= reach) continue;
            if (!best || t.hi > best->hi || (t.hi == best->hi && t.chart < best->chart))
                best = &t;
        }
        if (!best) throw NotCovered("arc escapes the atlas charts");
        chain.push_back(*best);
        reach = best->hi;
        covered_from = best->hi;
        if (reach >= T) break;
    }

    std::vector<Vec2> pts;
    std::vector<int> charts;
    pts.push_back(lift.front());
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
        // Waypoint inside the overlap of consecutive chain members.
        Rat mid = (chain[k + 1].lo + chain[k].hi) / 2;
        pts.push_back(polypath_eval_lift(lift, mid));
        charts.push_back(chain[k].chart);
    }
    pts.push_back(lift.back());
    charts.push_back(chain.back().chart);

    PolyPath out;
    out.model = arc.model;
    out.charts = charts;
    for (const Vec2& p : pts)
        out.breakpoints.push_back(arc.model == Model::cylinder ? Vec2{rat_mod1(p.x), p.y} : p);
    validate_polypath(out, atlas);
    return out;
}

std::vector<int> inscribe_line_path_finite(const ConvexityStructure& cs, const Atlas& atlas,
                                           Mask arc, int x, int y) {
    if (!mask_test(arc, x) || !mask_test(arc, y)) throw UnknownPoint("endpoint outside the arc");
    std::vector<Mask> cover;
    for (const Chart& c : atlas.charts)
        if (const auto* r = std::get_if<FiniteRegion>(&c.region))
            if (r->points & arc) cover.push_back(r->points & arc);
    Mask covered = 0;
    for (Mask m : cover) covered |= m;
    if ((arc & ~covered) != 0) throw NotCovered("arc escapes the atlas charts");

    // Shortest chain over the nerve, smallest index sequence.
    std::vector<int> chain;
    {
        // Reuse the nerve walk by hand (masks live in the parent space).
        const int m = static_cast<int>(cover.size());
        std::vector<int> dist(m, -1);
        std::vector<int> queue;
        for (int i = 0; i < m; ++i)
            if (mask_test(cover[i], y)) {
                dist[i] = 0;
                queue.push_back(i);
            }
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int u = queue[qi];
            for (int v = 0; v < m; ++v)
                if (dist[v] < 0 && v != u && (cover[u] & cover[v])) {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
        }
        int best = -1;
        for (int i = 0; i < m; ++i)
            if (mask_test(cover[i], x) && dist[i] >= 0 &&
                (best < 0 || dist[i] < dist[best] || (dist[i] == dist[best] && i < best)))
                best = i;
        if (best < 0) throw NotConnected("no chart chain joins the endpoints in the arc");
        chain.push_back(best);
        int cur = best;
        while (dist[cur] > 0) {
            for (int v = 0; v < m; ++v)
                if (v != cur && dist[v] == dist[cur] - 1 && (cover[cur] & cover[v])) {
                    chain.push_back(v);
                    cur = v;
                    break;
                }
        }
    }

    // Waypoints: least point of each overlap; join with interval walks.
    std::vector<int> waypoints{x};
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
        Mask overlap = cover[chain[k]] & cover[chain[k + 1]];
        waypoints.push_back(mask_lowest(overlap));
    }
    waypoints.push_back(y);

    std::vector<int> walk;
    for (size_t k = 0; k + 1 < waypoints.size(); ++k) {
        auto leg = interval_order(cs, waypoints[k], waypoints[k + 1]);
        if (!walk.empty()) leg.erase(leg.begin());
        walk.insert(walk.end(), leg.begin(), leg.end());
    }
    return walk;
}

PolyPath excise_self_intersections(const PolyPath& path, const Atlas& atlas) {
    if (path.breakpoints.size() < 3) return canonicalize_polypath(path, atlas);
    const auto input = merge_collinear_lift(polypath_lift(path, atlas));

    std::vector<Vec2> prefix{input[0]};
    Rat shift(0);  // accumulated angular shift applied to remaining input

    for (size_t seg = 0; seg + 1 < input.size(); ++seg) {
        Vec2 B{input[seg + 1].x + shift, input[seg + 1].y};
        int guard = 4 * static_cast<int>(input.size()) + 16;
        for (;;) {
            if (--guard < 0) throw Error("internal: excision did not settle");
            const Vec2 A = prefix.back();
            if (A == B) break;
            // Furthest model intersection of [A,B] with the prefix.
            std::optional<Rat> best_t;
            size_t best_seg = 0;
            Vec2 best_point{Rat(0), Rat(0)};  // on the prefix (lift coords)
            Rat best_shift(0);
            for (size_t s = 0; s + 1 < prefix.size(); ++s) {
                const Vec2& C = prefix[s];
                const Vec2& D = prefix[s + 1];
                std::vector<Rat> shifts{Rat(0)};
                if (path.model == Model::cylinder) {
                    BigInt klo = rat_floor(std::min(A.x, B.x) - std::max(C.x, D.x)) - 1;
                    BigInt khi = rat_floor(std::max(A.x, B.x) - std::min(C.x, D.x)) + 1;
                    shifts.clear();
                    for (BigInt k = klo; k <= khi; ++k) shifts.push_back(Rat(k));
                }
                for (const Rat& j : shifts) {
                    Vec2 Cs{C.x + j, C.y}, Ds{D.x + j, D.y};
                    auto hit = segment_intersection(A, B, Cs, Ds);
                    if (!hit) continue;
                    Vec2 pt = hit->overlap ? (segment_parameter(hit->overlap_a, A, B) >
                                                      segment_parameter(hit->overlap_b, A, B)
                                                  ? hit->overlap_a
                                                  : hit->overlap_b)
                                           : hit->point;
                    auto t = segment_parameter(pt, A, B);
                    if (!t) continue;
                    Vec2 on_prefix{pt.x - j, pt.y};
                    // The junction with the prefix tip is not a crossing.
                    if (*t == 0 && on_prefix == prefix.back()) continue;
                    if (!best_t || *t > *best_t) {
                        best_t = *t;
                        best_seg = s;
                        best_point = on_prefix;
                        best_shift = j;
                    }
                }
            }
            if (!best_t) {
                prefix.push_back(B);
                break;
            }
            // Cut the prefix back to the intersection and continue there.
            prefix.resize(best_seg + 1);
            if (prefix.back() != best_point) prefix.push_back(best_point);
            shift -= best_shift;
            B = Vec2{B.x - best_shift, B.y};
            if (prefix.back() == B) break;
            // Loop once more: the remainder may still touch the prefix.
        }
    }

    return rebuild(merge_collinear_lift(prefix), path.model, atlas);
}

StraighteningTrace straighten(const PolyPath& path, const Atlas& atlas, int budget) {
    StraighteningTrace trace;
    trace.initial = canonicalize_polypath(path, atlas);
    const Model model = path.model;

    std::vector<Vec2> lift = polypath_lift(trace.initial, atlas);
    const Rat sixteenth = rat(1, 16);

    auto record = [&](const std::string& rule, int from, int to, std::vector<Vec2> interior) {
        StraightenStep st;
        st.rule = rule;
        st.from = from;
        st.to = to;
        st.interior = std::move(interior);
        st.breakpoints_after = static_cast<int>(lift.size());
        st.corners_after = count_corners(lift);
        trace.steps.push_back(std::move(st));
    };

    int steps = 0;
    bool out_of_budget = false;
    while (true) {
        if (steps >= budget) {
            out_of_budget = count_corners(lift) > 0;
            break;
        }
        const int n = static_cast<int>(lift.size());
        bool fired = false;

        // R1: collapse one corner whose neighbours share a chart.
        for (int i = 1; i + 1 < n && !fired; ++i) {
            if (forward_collinear(lift[i - 1], lift[i], lift[i + 1])) {
                lift.erase(lift.begin() + i);
                record("R1", i - 1, i + 1, {});
                fired = true;
                break;
            }
            if (chart_for_lift_pair(atlas, model, lift[i - 1], lift[i + 1])) {
                lift.erase(lift.begin() + i);
                record("R1", i - 1, i + 1, {});
                fired = true;
            }
        }
        if (fired) {
            ++steps;
            continue;
        }

        // R2: collapse a longer span whose ends share a chart.
        for (int i = 0; i + 2 < n && !fired; ++i)
            for (int j = i + 2; j < n && !fired; ++j) {
                if (!chart_for_lift_pair(atlas, model, lift[i], lift[j])) continue;
                if (interior_on_segment_in_order(lift, i, j)) continue;
                lift.erase(lift.begin() + i + 1, lift.begin() + j);
                record("R2", i, j, {});
                fired = true;
            }
        if (fired) {
            ++steps;
            continue;
        }

        // R3: refine around the leftmost wide corner so that R1 applies.
        if (model == Model::cylinder) {
            for (int i = 1; i + 1 < n && !fired; ++i) {
                if (!genuine_corner(lift[i - 1], lift[i], lift[i + 1])) continue;
                std::vector<Vec2> interior;
                auto split_toward = [&](const Vec2& flank) -> std::optional<Vec2> {
                    Rat du = lift[i].x - flank.x;
                    if (rat_abs(du) <= sixteenth) return std::nullopt;
                    Rat target = lift[i].x - (du > 0 ? sixteenth : -sixteenth);
                    Rat t = (target - flank.x) / (lift[i].x - flank.x);
                    return flank + t * (lift[i] - flank);
                };
                auto left = split_toward(lift[i - 1]);
                auto right = split_toward(lift[i + 1]);
                if (!left && !right) continue;
                if (left) interior.push_back(*left);
                interior.push_back(lift[i]);
                if (right) interior.push_back(*right);
                std::vector<Vec2> repl = interior;
                lift.erase(lift.begin() + i);
                lift.insert(lift.begin() + i, repl.begin(), repl.end());
                record("R3", i - 1, i + 1, std::move(repl));
                fired = true;
            }
        }
        if (!fired) break;
        ++steps;
    }

    trace.final = canonicalize_polypath(rebuild(lift, model, atlas), atlas);
    G2Report g2 = check_G2(trace.final, atlas);
    trace.status = (!out_of_budget && g2.holds) ? "converged" : "budget_exhausted";
    return trace;
}

PolyPath replay_trace(const StraighteningTrace& trace, const Atlas& atlas) {
    std::vector<Vec2> lift = polypath_lift(trace.initial, atlas);
    for (const auto& st : trace.steps) {
        if (st.from < 0 || st.to >= static_cast<int>(lift.size()) || st.from >= st.to)
            throw Error("trace step range out of bounds");
        std::vector<Vec2> next(lift.begin(), lift.begin() + st.from + 1);
        next.insert(next.end(), st.interior.begin(), st.interior.end());
        next.insert(next.end(), lift.begin() + st.to, lift.end());
        lift = std::move(next);
    }
    return canonicalize_polypath(rebuild(lift, trace.initial.model, atlas), atlas);
}

bool verify_trace_monotone(const StraighteningTrace& trace, const Atlas& atlas) {
    std::vector<Vec2> lift = polypath_lift(trace.initial, atlas);
    for (const auto& st : trace.steps) {
        if (st.from < 0 || st.to >= static_cast<int>(lift.size()) || st.from >= st.to)
            return false;
        std::vector<Vec2> replaced(lift.begin() + st.from, lift.begin() + st.to + 1);
        for (const Vec2& p : st.interior)
            if (!point_in_hull(p, replaced)) return false;
        std::vector<Vec2> next(lift.begin(), lift.begin() + st.from + 1);
        next.insert(next.end(), st.interior.begin(), st.interior.end());
        next.insert(next.end(), lift.begin() + st.to, lift.end());
        lift = std::move(next);
    }
    // Endpoints (and with them the winding) never move.
    auto initial = polypath_lift(trace.initial, atlas);
    return lift.front() == initial.front() && lift.back() == initial.back();
}

MinimalConvexResult minimal_connected_convex(const ConvexityStructure& cs, int x, int y) {
    const FiniteSpace& sp = cs.space();
    if (sp.size() > 20) throw Error("exhaustive sweep limited to 20 points");
    const Mask need = mask_bit(x) | mask_bit(y);
    const Mask full = sp.all();

    std::optional<Mask> best;
    for (Mask s = 0;; ++s) {
        if ((s & need) == need && sp.step_connected(s) && cs.is_convex(s)) {
            if (!best || mask_size(s) < mask_size(*best)) best = s;
        }
        if (s == full) break;
    }
    if (!best) throw NotConnected("no connected convex set contains both points");

    MinimalConvexResult out;
    out.set = *best;

    // Certify the line-path shape: the covering graph restricted to the
    // set is a simple x-y path.
    if (x == y) {
        out.line_path = (*best == mask_bit(x));
        out.order = {x};
        return out;
    }
    Mask s = *best;
    out.line_path = true;
    int cur = x, prev = -1;
    out.order.push_back(x);
    while (cur != y) {
        Mask next = sp.adjacency(cur) & s & ~(prev >= 0 ? mask_bit(prev) : 0);
        if (mask_size(next) != 1) {
            out.line_path = false;
            break;
        }
        prev = cur;
        cur = mask_lowest(next);
        out.order.push_back(cur);
    }
    if (out.line_path && mask_size(s) != static_cast<int>(out.order.size()))
        out.line_path = false;
    return out;
}

}  // namespace ck
