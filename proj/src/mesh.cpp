#include "vem/mesh.hpp"

#include "vem/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace vem {

namespace {

double polygon_signed_area(const std::vector<Point2>& poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % poly.size()];
        s += cross(a, b);
    }
    return 0.5 * s;
}

Point2 polygon_centroid(const std::vector<Point2>& poly, double area) {
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % poly.size()];
        const double w = cross(a, b);
        cx += (a.x + b.x) * w;
        cy += (a.y + b.y) * w;
    }
    return {cx / (6.0 * area), cy / (6.0 * area)};
}

double polygon_diameter(const std::vector<Point2>& poly) {
    double d = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j)
            d = std::max(d, distance(poly[i], poly[j]));
    return d;
}

bool segments_intersect(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

bool polygon_is_simple(const std::vector<Point2>& poly) {
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            // skip adjacent segments (they share an endpoint)
            if (j == i || (j + 1) % m == i || (i + 1) % m == j) continue;
            if (segments_intersect(poly[i], poly[(i + 1) % m], poly[j], poly[(j + 1) % m]))
                return false;
        }
    }
    return true;
}

bool point_on_segment(const Point2& p, const Point2& a, const Point2& b, double tol) {
    const Point2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a) <= tol;
    const double t = dot(p - a, ab) / len2;
    if (t < -tol || t > 1.0 + tol) return false;
    const Point2 proj = a + ab * std::clamp(t, 0.0, 1.0);
    return distance(p, proj) <= tol;
}

bool point_in_polygon(const Point2& p, const std::vector<Point2>& poly, double tol) {
    for (std::size_t i = 0; i < poly.size(); ++i)
        if (point_on_segment(p, poly[i], poly[(i + 1) % poly.size()], tol)) return true;
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point2& a = poly[i];
        const Point2& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

}  // namespace

std::vector<Point2> PolygonalMesh::cell_polygon(int k) const {
    const Cell& c = cells[k];
    std::vector<Point2> poly;
    poly.reserve(c.vertices.size());
    for (int v : c.vertices) poly.push_back(vertices[v]);
    return poly;
}

int PolygonalMesh::locate_cell(const Point2& p) const {
    const double tol = 1e-12 * std::max(mesh_size, 1.0);
    for (std::size_t k = 0; k < cells.size(); ++k)
        if (point_in_polygon(p, cell_polygon(static_cast<int>(k)), tol))
            return static_cast<int>(k);
    return -1;
}

double PolygonalMesh::total_area() const {
    double s = 0.0;
    for (const Cell& c : cells) s += c.area;
    return s;
}

// --- MeshBuilder --------------------------------------------------------------

int MeshBuilder::add_vertex(const Point2& p) {
    vertices_.push_back(p);
    return static_cast<int>(vertices_.size()) - 1;
}

int MeshBuilder::add_vertex_snapped(const Point2& p, double tol) {
    // Linear scans would be quadratic; bucket by a tol-sized grid and probe the
    // 3x3 neighborhood so near-boundary pairs still meet.
    if (snap_tol_ != tol) {
        snap_tol_ = tol;
        buckets_.clear();
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            const Point2& v = vertices_[i];
            buckets_[{static_cast<long long>(std::floor(v.x / tol)),
                      static_cast<long long>(std::floor(v.y / tol))}]
                .push_back(static_cast<int>(i));
        }
    }
    const long long ix = static_cast<long long>(std::floor(p.x / tol));
    const long long iy = static_cast<long long>(std::floor(p.y / tol));
    for (long long dx = -1; dx <= 1; ++dx) {
        for (long long dy = -1; dy <= 1; ++dy) {
            auto it = buckets_.find({ix + dx, iy + dy});
            if (it == buckets_.end()) continue;
            for (int id : it->second)
                if (distance(vertices_[id], p) <= tol) return id;
        }
    }
    vertices_.push_back(p);
    const int id = static_cast<int>(vertices_.size()) - 1;
    buckets_[{ix, iy}].push_back(id);
    return id;
}

void MeshBuilder::add_cell(std::vector<int> vertex_loop) {
    // drop consecutive duplicates (snapping can collapse short edges)
    std::vector<int> loop;
    for (int v : vertex_loop) {
        if (loop.empty() || loop.back() != v) loop.push_back(v);
    }
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    if (loop.size() < 3) throw std::invalid_argument("MeshBuilder: cell with fewer than 3 vertices");
    cell_loops_.push_back(std::move(loop));
}

PolygonalMesh MeshBuilder::build() const {
    PolygonalMesh mesh;
    mesh.vertices = vertices_;

    std::map<std::pair<int, int>, int> edge_of_pair;
    std::vector<int> incidence;  // cells seen per edge

    for (const auto& loop : cell_loops_) {
        Cell cell;
        cell.vertices = loop;

        std::vector<Point2> poly;
        poly.reserve(loop.size());
        for (int v : loop) poly.push_back(vertices_[v]);

        const double signed_area = polygon_signed_area(poly);
        if (signed_area <= 0.0)
            throw std::invalid_argument("MeshBuilder: cell loop not counterclockwise / zero area");
        if (!polygon_is_simple(poly))
            throw std::invalid_argument("MeshBuilder: self-intersecting cell polygon");

        cell.area = signed_area;
        cell.centroid = polygon_centroid(poly, signed_area);
        cell.diameter = polygon_diameter(poly);

        for (std::size_t i = 0; i < loop.size(); ++i) {
            const int a = loop[i];
            const int b = loop[(i + 1) % loop.size()];
            const auto key = std::minmax(a, b);
            auto it = edge_of_pair.find(key);
            int edge_id;
            int sign;
            if (it == edge_of_pair.end()) {
                Edge e;
                e.v0 = a;
                e.v1 = b;
                const Point2 t = vertices_[b] - vertices_[a];
                e.length = norm(t);
                if (e.length <= 0.0) throw std::invalid_argument("MeshBuilder: zero-length edge");
                e.normal = right_normal(t / e.length);
                e.midpoint = (vertices_[a] + vertices_[b]) * 0.5;
                edge_id = static_cast<int>(mesh.edges.size());
                mesh.edges.push_back(e);
                edge_of_pair.emplace(key, edge_id);
                incidence.push_back(1);
                sign = +1;
            } else {
                edge_id = it->second;
                const Edge& e = mesh.edges[edge_id];
                if (incidence[edge_id] >= 2)
                    throw std::invalid_argument("MeshBuilder: edge shared by more than two cells");
                if (e.v0 != b || e.v1 != a)
                    throw std::invalid_argument("MeshBuilder: inconsistent edge orientation");
                ++incidence[edge_id];
                sign = -1;
            }
            cell.edges.push_back(edge_id);
            cell.signs.push_back(sign);
        }
        mesh.cells.push_back(std::move(cell));
    }

    for (std::size_t e = 0; e < mesh.edges.size(); ++e)
        mesh.edges[e].boundary = (incidence[e] == 1);

    mesh.mesh_size = 0.0;
    for (const Cell& c : mesh.cells) mesh.mesh_size = std::max(mesh.mesh_size, c.diameter);
    return mesh;
}

// --- structured generators ----------------------------------------------------

PolygonalMesh build_square_mesh(int n, const AxisRect& domain) {
    if (n < 1) throw std::invalid_argument("build_square_mesh: n must be >= 1");
    MeshBuilder b;
    const double dx = domain.width() / n, dy = domain.height() / n;
    std::vector<int> id((n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            id[j * (n + 1) + i] = b.add_vertex({domain.x0 + i * dx, domain.y0 + j * dy});
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            b.add_cell({id[j * (n + 1) + i], id[j * (n + 1) + i + 1],
                        id[(j + 1) * (n + 1) + i + 1], id[(j + 1) * (n + 1) + i]});
        }
    }
    return b.build();
}

PolygonalMesh build_triangular_mesh(int n, const AxisRect& domain) {
    if (n < 1) throw std::invalid_argument("build_triangular_mesh: n must be >= 1");
    MeshBuilder b;
    const double dx = domain.width() / n, dy = domain.height() / n;
    std::vector<int> id((n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            id[j * (n + 1) + i] = b.add_vertex({domain.x0 + i * dx, domain.y0 + j * dy});
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = id[j * (n + 1) + i], v10 = id[j * (n + 1) + i + 1];
            const int v11 = id[(j + 1) * (n + 1) + i + 1], v01 = id[(j + 1) * (n + 1) + i];
            b.add_cell({v00, v10, v11});
            b.add_cell({v00, v11, v01});
        }
    }
    return b.build();
}

PolygonalMesh build_concave_mesh(int n, const AxisRect& domain) {
    if (n < 1) throw std::invalid_argument("build_concave_mesh: n must be >= 1");
    // Each grid square is cut by a Z-shaped polyline through (3/4,1/3) and
    // (1/4,2/3), producing two congruent non-convex hexagons. Vertices live on
    // the integer lattice (quarters in x, thirds in y) so shared vertices
    // dedupe exactly.
    MeshBuilder b;
    std::map<std::pair<int, int>, int> id;
    const auto vtx = [&](int xi, int yi) {
        auto it = id.find({xi, yi});
        if (it != id.end()) return it->second;
        const Point2 p{domain.x0 + domain.width() * xi / (4.0 * n),
                       domain.y0 + domain.height() * yi / (3.0 * n)};
        const int v = b.add_vertex(p);
        id.emplace(std::make_pair(xi, yi), v);
        return v;
    };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int x = 4 * i, y = 3 * j;
            b.add_cell({vtx(x, y), vtx(x + 2, y), vtx(x + 3, y + 1), vtx(x + 1, y + 2),
                        vtx(x + 2, y + 3), vtx(x, y + 3)});
            b.add_cell({vtx(x + 2, y), vtx(x + 4, y), vtx(x + 4, y + 3), vtx(x + 2, y + 3),
                        vtx(x + 1, y + 2), vtx(x + 3, y + 1)});
        }
    }
    return b.build();
}

// --- Voronoi ------------------------------------------------------------------

namespace {

std::vector<Point2> clip_halfplane(const std::vector<Point2>& poly, const Point2& mid,
                                   const Point2& dir) {
    // keep f(x) = (x - mid) . dir <= 0
    std::vector<Point2> out;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % m];
        const double fa = dot(a - mid, dir);
        const double fb = dot(b - mid, dir);
        if (fa <= 0.0) out.push_back(a);
        if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
            const double t = fa / (fa - fb);
            out.push_back(a + (b - a) * t);
        }
    }
    return out;
}

std::vector<std::vector<Point2>> voronoi_cells(const std::vector<Point2>& seeds,
                                               const AxisRect& domain) {
    const std::size_t n = seeds.size();
    std::vector<std::vector<Point2>> cells(n);
    std::vector<std::pair<double, int>> by_dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Point2> poly = {{domain.x0, domain.y0},
                                    {domain.x1, domain.y0},
                                    {domain.x1, domain.y1},
                                    {domain.x0, domain.y1}};
        for (std::size_t j = 0; j < n; ++j)
            by_dist[j] = {j == i ? -1.0 : distance(seeds[i], seeds[j]), static_cast<int>(j)};
        std::sort(by_dist.begin(), by_dist.end());
        for (const auto& [d, j] : by_dist) {
            if (j == static_cast<int>(i)) continue;
            double radius = 0.0;
            for (const Point2& p : poly) radius = std::max(radius, distance(seeds[i], p));
            if (d > 2.0 * radius) break;  // no farther seed can cut the cell
            poly = clip_halfplane(poly, (seeds[i] + seeds[j]) * 0.5, seeds[j] - seeds[i]);
            if (poly.size() < 3) throw std::invalid_argument("voronoi: degenerate cell (coincident seeds?)");
        }
        cells[i] = std::move(poly);
    }
    return cells;
}

}  // namespace

PolygonalMesh build_voronoi_from_seeds(std::vector<Point2> seeds, const AxisRect& domain,
                                       int lloyd_iters) {
    if (seeds.empty()) throw std::invalid_argument("voronoi: need at least one seed");
    if (lloyd_iters < 0) throw std::invalid_argument("voronoi: lloyd_iters must be >= 0");
    for (const Point2& s : seeds)
        if (!domain.contains(s)) throw std::invalid_argument("voronoi: seed outside domain");

    std::vector<std::vector<Point2>> cells;
    for (int it = 0; it <= lloyd_iters; ++it) {
        cells = voronoi_cells(seeds, domain);
        if (it == lloyd_iters) break;
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            const double a = polygon_signed_area(cells[i]);
            seeds[i] = polygon_centroid(cells[i], a);
        }
    }

    const double scale = std::max(domain.width(), domain.height());
    for (std::size_t i = 0; i < seeds.size(); ++i)
        for (std::size_t j = i + 1; j < seeds.size(); ++j)
            if (distance(seeds[i], seeds[j]) < 1e-12 * scale)
                throw std::invalid_argument("voronoi: coincident seeds after relaxation");

    MeshBuilder b;
    const double tol = 1e-9 * scale;
    for (const auto& poly : cells) {
        std::vector<int> loop;
        loop.reserve(poly.size());
        for (const Point2& p : poly) loop.push_back(b.add_vertex_snapped(p, tol));
        b.add_cell(std::move(loop));
    }
    return b.build();
}

PolygonalMesh build_voronoi_mesh(int n_seeds, VoronoiMode mode, int lloyd_iters,
                                 std::uint64_t rng_seed, const AxisRect& domain) {
    if (n_seeds < 1) throw std::invalid_argument("build_voronoi_mesh: n_seeds must be >= 1");
    std::vector<Point2> seeds;
    seeds.reserve(n_seeds);
    if (mode == VoronoiMode::structured) {
        const int m = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n_seeds))));
        if (m * m != n_seeds)
            throw std::invalid_argument("build_voronoi_mesh: structured mode needs a square seed count");
        const double amp = 0.4;  // cells; pattern vanishes at m = 2
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < m; ++i) {
                const double u = (i + 0.5) / m, v = (j + 0.5) / m;
                const double jx = amp / m * std::sin(2.0 * M_PI * v) * std::cos(2.0 * M_PI * u);
                const double jy = amp / m * std::sin(2.0 * M_PI * u) * std::cos(2.0 * M_PI * v);
                seeds.push_back({domain.x0 + domain.width() * (u + jx),
                                 domain.y0 + domain.height() * (v + jy)});
            }
        }
    } else {
        SplitMix64 rng(rng_seed);
        for (int i = 0; i < n_seeds; ++i) {
            const double u = rng.uniform(), v = rng.uniform();
            seeds.push_back({domain.x0 + domain.width() * u, domain.y0 + domain.height() * v});
        }
    }
    return build_voronoi_from_seeds(std::move(seeds), domain, lloyd_iters);
}

// --- quality ------------------------------------------------------------------

std::vector<Point2> polygon_kernel(const std::vector<Point2>& poly) {
    std::vector<Point2> kern = poly;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m && kern.size() >= 3; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % m];
        // keep left side of a->b: cross(b-a, x-a) >= 0, i.e. (x-a).dir <= 0
        // with dir the right-hand normal of (b-a).
        kern = clip_halfplane(kern, a, right_normal(b - a));
    }
    if (kern.size() < 3) return {};
    if (std::abs(polygon_signed_area(kern)) <= 0.0) return {};
    return kern;
}

std::pair<Point2, double> max_inscribed_circle(const std::vector<Point2>& poly) {
    const std::size_t m = poly.size();
    if (m < 3) return {{}, 0.0};
    // Chebyshev center: max r s.t. n_i . x - r >= n_i . a_i for inward unit
    // normals n_i. The optimum activates three constraints; enumerate triples.
    std::vector<Point2> nrm(m);
    std::vector<double> off(m);
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % m];
        const Point2 t = (b - a) / distance(a, b);
        nrm[i] = {-t.y, t.x};  // inward for ccw
        off[i] = dot(nrm[i], a);
        scale = std::max(scale, distance(a, b));
    }
    double best_r = 0.0;
    Point2 best_c{};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            for (std::size_t k = j + 1; k < m; ++k) {
                // solve [n; -1] [x y r]^T = off for the three rows
                const double A[3][4] = {{nrm[i].x, nrm[i].y, -1.0, off[i]},
                                        {nrm[j].x, nrm[j].y, -1.0, off[j]},
                                        {nrm[k].x, nrm[k].y, -1.0, off[k]}};
                double M[3][4];
                std::copy(&A[0][0], &A[0][0] + 12, &M[0][0]);
                // Gaussian elimination with partial pivoting
                bool singular = false;
                for (int col = 0; col < 3 && !singular; ++col) {
                    int piv = col;
                    for (int r = col + 1; r < 3; ++r)
                        if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
                    if (std::abs(M[piv][col]) < 1e-14) {
                        singular = true;
                        break;
                    }
                    std::swap_ranges(M[col], M[col] + 4, M[piv]);
                    for (int r = 0; r < 3; ++r) {
                        if (r == col) continue;
                        const double f = M[r][col] / M[col][col];
                        for (int c2 = col; c2 < 4; ++c2) M[r][c2] -= f * M[col][c2];
                    }
                }
                if (singular) continue;
                const Point2 x{M[0][3] / M[0][0], M[1][3] / M[1][1]};
                const double r = M[2][3] / M[2][2];
                if (r <= best_r) continue;
                bool feasible = true;
                for (std::size_t q = 0; q < m && feasible; ++q)
                    feasible = dot(nrm[q], x) - off[q] >= r - 1e-10 * scale;
                if (feasible) {
                    best_r = r;
                    best_c = x;
                }
            }
        }
    }
    return {best_c, best_r};
}

bool is_convex_polygon(const std::vector<Point2>& poly) {
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point2& a = poly[i];
        const Point2& b = poly[(i + 1) % m];
        const Point2& c = poly[(i + 2) % m];
        if (cross(b - a, c - b) < 0.0) return false;
    }
    return true;
}

MeshQualityReport check_quality(const PolygonalMesh& mesh, double rho0) {
    MeshQualityReport rep;
    rep.rho_star = 1.0;
    rep.min_edge_ratio = 1.0;
    rep.uniformity = 1.0;
    for (std::size_t k = 0; k < mesh.cells.size(); ++k) {
        const Cell& cell = mesh.cells[k];
        const auto poly = mesh.cell_polygon(static_cast<int>(k));
        const auto kern = polygon_kernel(poly);
        const double rho = kern.empty() ? 0.0 : max_inscribed_circle(kern).second;
        const double d1 = rho / cell.diameter;

        double min_edge = cell.diameter;
        for (int e : cell.edges) min_edge = std::min(min_edge, mesh.edges[e].length);
        const double d2 = min_edge / cell.diameter;

        rep.rho_star = std::min(rep.rho_star, std::min(d1, d2));
        rep.min_edge_ratio = std::min(rep.min_edge_ratio, d2);
        rep.uniformity = std::min(rep.uniformity, cell.diameter / mesh.mesh_size);
        if (d1 < rho0) rep.violations.emplace_back(static_cast<int>(k), "D1 star-shapedness");
        if (d2 < rho0) rep.violations.emplace_back(static_cast<int>(k), "D2 short edge");
    }
    return rep;
}

// --- interchange format ---------------------------------------------------------

void write_mesh(std::ostream& os, const PolygonalMesh& mesh) {
    char buf[64];
    os << "vem-mesh v1\n";
    os << "vertices " << mesh.vertices.size() << "\n";
    for (const Point2& p : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
        os << buf;
    }
    os << "edges " << mesh.edges.size() << "\n";
    for (const Edge& e : mesh.edges)
        os << e.v0 << ' ' << e.v1 << ' ' << (e.boundary ? 1 : 0) << "\n";
    os << "cells " << mesh.cells.size() << "\n";
    for (const Cell& c : mesh.cells) {
        os << c.edges.size();
        for (std::size_t i = 0; i < c.edges.size(); ++i) os << ' ' << c.edges[i] << ' ' << c.signs[i];
        os << "\n";
    }
}

void write_mesh_file(const std::string& path, const PolygonalMesh& mesh) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_mesh_file: cannot open " + path);
    write_mesh(os, mesh);
}

PolygonalMesh read_mesh(std::istream& is) {
    std::string magic, version;
    is >> magic >> version;
    if (magic != "vem-mesh" || version != "v1")
        throw std::runtime_error("read_mesh: not a vem-mesh v1 file");

    std::string section;
    std::size_t n = 0;
    PolygonalMesh mesh;

    is >> section >> n;
    if (section != "vertices") throw std::runtime_error("read_mesh: expected vertices section");
    mesh.vertices.resize(n);
    for (Point2& p : mesh.vertices) is >> p.x >> p.y;

    is >> section >> n;
    if (section != "edges") throw std::runtime_error("read_mesh: expected edges section");
    mesh.edges.resize(n);
    for (Edge& e : mesh.edges) {
        int bnd = 0;
        is >> e.v0 >> e.v1 >> bnd;
        e.boundary = bnd != 0;
        const Point2 t = mesh.vertices[e.v1] - mesh.vertices[e.v0];
        e.length = norm(t);
        e.normal = right_normal(t / e.length);
        e.midpoint = (mesh.vertices[e.v0] + mesh.vertices[e.v1]) * 0.5;
    }

    is >> section >> n;
    if (section != "cells") throw std::runtime_error("read_mesh: expected cells section");
    mesh.cells.resize(n);
    for (Cell& c : mesh.cells) {
        std::size_t ne = 0;
        is >> ne;
        c.edges.resize(ne);
        c.signs.resize(ne);
        for (std::size_t i = 0; i < ne; ++i) is >> c.edges[i] >> c.signs[i];
        c.vertices.clear();
        for (std::size_t i = 0; i < ne; ++i) {
            const Edge& e = mesh.edges[c.edges[i]];
            c.vertices.push_back(c.signs[i] > 0 ? e.v0 : e.v1);
        }
        std::vector<Point2> poly;
        for (int v : c.vertices) poly.push_back(mesh.vertices[v]);
        c.area = polygon_signed_area(poly);
        if (!(c.area > 0.0)) throw std::runtime_error("read_mesh: nonpositive cell area");
        c.centroid = polygon_centroid(poly, c.area);
        c.diameter = polygon_diameter(poly);
    }
    if (!is) throw std::runtime_error("read_mesh: truncated file");
    mesh.mesh_size = 0.0;
    for (const Cell& c : mesh.cells) mesh.mesh_size = std::max(mesh.mesh_size, c.diameter);
    return mesh;
}

PolygonalMesh read_mesh_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_mesh_file: cannot open " + path);
    return read_mesh(is);
}

}  // namespace vem
