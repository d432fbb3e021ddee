#include "vem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace vem {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    nodes.resize(n);
    weights.resize(n);
    // Newton iteration from the Chebyshev-based initial guess; converges to
    // machine precision in a handful of steps.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

QuadratureRule edge_rule(const Point2& a, const Point2& b, int degree) {
    if (degree < 0) throw std::invalid_argument("edge_rule: degree must be >= 0");
    const int n = degree / 2 + 1;
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    QuadratureRule rule;
    rule.exactness_degree = 2 * n - 1;
    const double half_len = 0.5 * distance(a, b);
    const Point2 mid = (a + b) * 0.5;
    const Point2 dir = (b - a) * 0.5;
    for (int i = 0; i < n; ++i) {
        rule.points.push_back(mid + dir * x[i]);
        rule.weights.push_back(w[i] * half_len);
    }
    return rule;
}

QuadratureRule triangle_rule(const Point2& p0, const Point2& p1, const Point2& p2, int degree) {
    if (degree < 0) throw std::invalid_argument("triangle_rule: degree must be >= 0");
    // Collapse the unit square onto the reference triangle via
    // (u,v) -> (u(1-v), uv); the Jacobian u raises the u-degree by one.
    const int nu = (degree + 2) / 2 + 1;
    const int nv = (degree + 1) / 2 + 1;
    std::vector<double> xu, wu, xv, wv;
    gauss_legendre(nu, xu, wu);
    gauss_legendre(nv, xv, wv);

    const Point2 e1 = p1 - p0, e2 = p2 - p0;
    const double jac = cross(e1, e2);  // 2*area, signed

    QuadratureRule rule;
    rule.exactness_degree = degree;
    for (int i = 0; i < nu; ++i) {
        const double u = 0.5 * (xu[i] + 1.0);
        for (int j = 0; j < nv; ++j) {
            const double v = 0.5 * (xv[j] + 1.0);
            const double r = u * (1.0 - v), s = u * v;  // reference coords
            rule.points.push_back(p0 + e1 * r + e2 * s);
            rule.weights.push_back(0.25 * wu[i] * wv[j] * u * jac);
        }
    }
    return rule;
}

QuadratureRule polygon_rule(const std::vector<Point2>& poly, int degree) {
    if (degree < 0) throw std::invalid_argument("polygon_rule: degree must be >= 0");
    if (poly.size() < 3) throw std::invalid_argument("polygon_rule: need at least 3 vertices");

    double area2 = 0.0;
    Point2 centroid{0.0, 0.0};
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % poly.size()];
        const double w = cross(a, b);
        area2 += w;
        centroid += (a + b) * w;
    }
    centroid = centroid / (3.0 * area2);

    // Fan apex must see the whole polygon: the centroid works for cells
    // star-shaped with respect to it (D1 meshes); otherwise use a kernel point.
    Point2 apex = centroid;
    bool apex_ok = true;
    for (std::size_t i = 0; i < poly.size() && apex_ok; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % poly.size()];
        apex_ok = cross(b - a, apex - a) > 0.0;
    }
    if (!apex_ok) {
        const auto kern = polygon_kernel(poly);
        if (kern.empty())
            throw std::invalid_argument("polygon_rule: cell is not star-shaped (empty kernel)");
        apex = max_inscribed_circle(kern).first;
    }

    QuadratureRule rule;
    rule.exactness_degree = degree;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const QuadratureRule tri =
            triangle_rule(apex, poly[i], poly[(i + 1) % poly.size()], degree);
        rule.points.insert(rule.points.end(), tri.points.begin(), tri.points.end());
        rule.weights.insert(rule.weights.end(), tri.weights.begin(), tri.weights.end());
    }
    return rule;
}

QuadratureRule polygon_rule(const PolygonalMesh& mesh, int cell, int degree) {
    return polygon_rule(mesh.cell_polygon(cell), degree);
}

}  // namespace vem
