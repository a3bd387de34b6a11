#include "ck/geometry.hpp"

#include <algorithm>

namespace ck {

bool point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    if (orientation(a, b, p) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

std::optional<Rat> segment_parameter(const Vec2& p, const Vec2& a, const Vec2& b) {
    if (!point_on_segment(p, a, b)) return std::nullopt;
    Vec2 d = b - a;
    if (d.x != 0) return Rat((p.x - a.x) / d.x);
    if (d.y != 0) return Rat((p.y - a.y) / d.y);
    return Rat(0);  // degenerate segment, p == a == b
}

std::optional<SegmentHit> segment_intersection(const Vec2& a0, const Vec2& a1,
                                               const Vec2& b0, const Vec2& b1) {
    const int d1 = orientation(b0, b1, a0);
    const int d2 = orientation(b0, b1, a1);
    const int d3 = orientation(a0, a1, b0);
    const int d4 = orientation(a0, a1, b1);

    if (d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0) {
        // Collinear: project to the dominant axis and intersect ranges.
        auto key = [&](const Vec2& p) -> Rat {
            return (a1.x != a0.x || b1.x != b0.x) ? p.x : p.y;
        };
        Vec2 lo_a = a0, hi_a = a1, lo_b = b0, hi_b = b1;
        if (key(hi_a) < key(lo_a)) std::swap(lo_a, hi_a);
        if (key(hi_b) < key(lo_b)) std::swap(lo_b, hi_b);
        Vec2 lo = key(lo_a) < key(lo_b) ? lo_b : lo_a;
        Vec2 hi = key(hi_a) < key(hi_b) ? hi_a : hi_b;
        if (key(hi) < key(lo)) return std::nullopt;
        SegmentHit hit;
        hit.point = lo;
        hit.overlap = key(lo) < key(hi);
        hit.overlap_a = lo;
        hit.overlap_b = hi;
        return hit;
    }

    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        // Proper crossing; solve for the parameter on [a0,a1].
        Rat denom = (a1.x - a0.x) * (b1.y - b0.y) - (a1.y - a0.y) * (b1.x - b0.x);
        Rat t = ((b0.x - a0.x) * (b1.y - b0.y) - (b0.y - a0.y) * (b1.x - b0.x)) / denom;
        SegmentHit hit;
        hit.point = a0 + t * (a1 - a0);
        hit.overlap = false;
        hit.overlap_a = hit.overlap_b = hit.point;
        return hit;
    }

    // Touching cases: an endpoint lying on the other segment.
    for (const Vec2& p : {a0, a1})
        if (point_on_segment(p, b0, b1)) {
            SegmentHit hit;
            hit.point = p;
            hit.overlap = false;
            hit.overlap_a = hit.overlap_b = p;
            return hit;
        }
    for (const Vec2& p : {b0, b1})
        if (point_on_segment(p, a0, a1)) {
            SegmentHit hit;
            hit.point = p;
            hit.overlap = false;
            hit.overlap_a = hit.overlap_b = p;
            return hit;
        }
    return std::nullopt;
}

std::vector<Vec2> convex_hull_points(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const int n = static_cast<int>(pts.size());
    if (n <= 2) return pts;
    std::vector<Vec2> h(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && orientation(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (int i = n - 2, lower = k + 1; i >= 0; --i) {
        while (k >= lower && orientation(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

Rat polygon_signed_area2(const std::vector<Vec2>& poly) {
    Rat s = 0;
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
        const Vec2& p = poly[i];
        const Vec2& q = poly[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    return s;
}

bool polygon_is_ccw(const std::vector<Vec2>& poly) { return polygon_signed_area2(poly) > 0; }

std::vector<int> polygon_reflex_vertices(const std::vector<Vec2>& poly) {
    const int n = static_cast<int>(poly.size());
    const int sign = polygon_is_ccw(poly) ? 1 : -1;
    std::vector<int> reflex;
    for (int i = 0; i < n; ++i) {
        const Vec2& prev = poly[(i + n - 1) % n];
        const Vec2& cur = poly[i];
        const Vec2& next = poly[(i + 1) % n];
        if (sign * orientation(prev, cur, next) < 0) reflex.push_back(i);
    }
    return reflex;
}

bool polygon_is_convex(const std::vector<Vec2>& poly) {
    return polygon_reflex_vertices(poly).empty();
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i)
        if (point_on_segment(p, poly[i], poly[(i + 1) % n])) return true;
    // Exact ray cast towards +x.
    bool inside = false;
    for (int i = 0; i < n; ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            Rat xi = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xi) inside = !inside;
        }
    }
    return inside;
}

bool segment_in_polygon(const Vec2& a, const Vec2& b, const std::vector<Vec2>& poly) {
    if (!point_in_polygon(a, poly) || !point_in_polygon(b, poly)) return false;
    if (a == b) return true;

    // Split at every contact with the boundary, then test the midpoint of
    // each piece; exact arithmetic keeps the split points precise.
    std::vector<Rat> cuts{Rat(0), Rat(1)};
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
        auto hit = segment_intersection(a, b, poly[i], poly[(i + 1) % n]);
        if (!hit) continue;
        if (hit->overlap) {
            if (auto t = segment_parameter(hit->overlap_a, a, b)) cuts.push_back(*t);
            if (auto t = segment_parameter(hit->overlap_b, a, b)) cuts.push_back(*t);
        } else if (auto t = segment_parameter(hit->point, a, b)) {
            cuts.push_back(*t);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        Rat mid = (cuts[i] + cuts[i + 1]) / 2;
        if (!point_in_polygon(a + mid * (b - a), poly)) return false;
    }
    return true;
}

bool point_in_convex_interior(const Vec2& p, const std::vector<Vec2>& poly) {
    const int n = static_cast<int>(poly.size());
    const int sign = polygon_is_ccw(poly) ? 1 : -1;
    for (int i = 0; i < n; ++i)
        if (sign * orientation(poly[i], poly[(i + 1) % n], p) <= 0) return false;
    return true;
}

}  // namespace ck
