#pragma once

#include "ck/rational.hpp"

#include <optional>
#include <vector>

namespace ck {

struct Vec2 {
    Rat x;
    Rat y;

    friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(const Rat& s, const Vec2& a) { return {s * a.x, s * a.y}; }
    friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Vec2& a, const Vec2& b) { return !(a == b); }
    friend bool operator<(const Vec2& a, const Vec2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    }
};

inline Rat cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Sign of the turn o->a->b: +1 left, -1 right, 0 collinear.
inline int orientation(const Vec2& o, const Vec2& a, const Vec2& b) {
    Rat c = cross(o, a, b);
    return c > 0 ? 1 : (c < 0 ? -1 : 0);
}

bool point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b);

// Parameter t in [0,1] with p = a + t (b - a), when p lies on the segment.
std::optional<Rat> segment_parameter(const Vec2& p, const Vec2& a, const Vec2& b);

struct SegmentHit {
    Vec2 point;      // a representative intersection point
    bool overlap;    // true when the segments share a whole subsegment
    Vec2 overlap_a;  // endpoints of the shared subsegment when overlap
    Vec2 overlap_b;
};

// Exact intersection of closed segments [a0,a1] and [b0,b1].
std::optional<SegmentHit> segment_intersection(const Vec2& a0, const Vec2& a1,
                                               const Vec2& b0, const Vec2& b1);

// Convex hull, counterclockwise, no three collinear output points.
std::vector<Vec2> convex_hull_points(std::vector<Vec2> pts);

// Simple polygon helpers. Vertices are listed without repetition of the
// first vertex; edges close cyclically.
Rat polygon_signed_area2(const std::vector<Vec2>& poly);  // twice the signed area
bool polygon_is_ccw(const std::vector<Vec2>& poly);
bool polygon_is_convex(const std::vector<Vec2>& poly);

// Vertex indices where the interior angle is reflex (CCW orientation
// normalized internally).
std::vector<int> polygon_reflex_vertices(const std::vector<Vec2>& poly);

// Point membership in a closed simple polygon (boundary counts).
bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly);

// Whether the closed segment [a,b] stays inside the closed simple polygon.
bool segment_in_polygon(const Vec2& a, const Vec2& b, const std::vector<Vec2>& poly);

// Strict interior test against a convex polygon.
bool point_in_convex_interior(const Vec2& p, const std::vector<Vec2>& poly);

}  // namespace ck
