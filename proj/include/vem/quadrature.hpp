#pragma once

#include <vector>

#include "vem/geometry.hpp"
#include "vem/mesh.hpp"

namespace vem {

struct QuadratureRule {
    std::vector<Point2> points;
    std::vector<double> weights;
    int exactness_degree = 0;

    double integrate(const auto& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * f(points[i]);
        return s;
    }
};

/// Gauss-Legendre nodes/weights on [-1,1], exact to degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Rule on the segment a-b, exact for polynomials (restricted to the segment)
/// of the requested degree.
QuadratureRule edge_rule(const Point2& a, const Point2& b, int degree);

/// Rule on a triangle, exact to `degree` (collapsed tensor Gauss).
QuadratureRule triangle_rule(const Point2& p0, const Point2& p1, const Point2& p2, int degree);

/// Rule on a simple polygon: fan triangulation from the centroid when the cell
/// is star-shaped with respect to it, otherwise from a kernel point. Throws if
/// the kernel is empty.
QuadratureRule polygon_rule(const std::vector<Point2>& poly, int degree);

/// Convenience overload for a mesh cell.
QuadratureRule polygon_rule(const PolygonalMesh& mesh, int cell, int degree);

}  // namespace vem
