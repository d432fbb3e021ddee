#pragma once

#include <cmath>

namespace vem {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double x_, double y_) : x(x_), y(y_) {}

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    Point2 operator/(double s) const { return {x / s, y / s}; }
    Point2& operator+=(const Point2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
};

inline Point2 operator*(double s, const Point2& p) { return p * s; }

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }

/// z-component of the 2D cross product a x b.
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }

inline double norm(const Point2& p) { return std::hypot(p.x, p.y); }

inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }

/// Right-hand normal of a direction vector: for a counterclockwise cell
/// boundary traversal this points outward.
inline Point2 right_normal(const Point2& t) { return {t.y, -t.x}; }

}  // namespace vem
