#pragma once

#include <cmath>

namespace extlab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
};

inline Vec2 operator*(double c, const Vec2& v) { return {c * v.x, c * v.y}; }

inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

}  // namespace extlab
