#pragma once
//
// Project : hgraded
// Module  : geometry.hpp
// Purpose : planar points and axes-parallel boxes (diameter/distance in the
//           Euclidean norm)
//

#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace hgraded {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return std::sqrt(dot(a, a)); }

// Nonempty axes-parallel box, lo <= hi componentwise.
struct Box2 {
    Vec2 lo{0.0, 0.0};
    Vec2 hi{0.0, 0.0};

    double diam() const { return norm2(hi - lo); }

    Vec2 center() const { return {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)}; }

    void expand(Vec2 p) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }

    void expand(const Box2& b) {
        expand(b.lo);
        expand(b.hi);
    }

    static Box2 point(Vec2 p) { return {p, p}; }
};

inline double dist(const Box2& a, const Box2& b) {
    double dx = std::max({a.lo.x - b.hi.x, b.lo.x - a.hi.x, 0.0});
    double dy = std::max({a.lo.y - b.hi.y, b.lo.y - a.hi.y, 0.0});
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace hgraded
