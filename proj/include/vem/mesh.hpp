#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "vem/geometry.hpp"

namespace vem {

/// Oriented mesh edge. The reference direction runs v0 -> v1; `normal` is the
/// unit right-hand normal of that direction. A cell traversing the edge with
/// orientation sign +1 has `normal` as its outward normal, with -1 the
/// opposite.
struct Edge {
    int v0 = -1;
    int v1 = -1;
    Point2 normal;
    double length = 0.0;
    bool boundary = false;
    Point2 midpoint;
};

struct Cell {
    std::vector<int> edges;       ///< edge ids, counterclockwise loop
    std::vector<int> signs;       ///< +1 if the loop traverses the edge v0->v1
    std::vector<int> vertices;    ///< counterclockwise vertex loop
    double area = 0.0;
    Point2 centroid;
    double diameter = 0.0;
};

struct PolygonalMesh {
    std::vector<Point2> vertices;
    std::vector<Edge> edges;
    std::vector<Cell> cells;
    double mesh_size = 0.0;  ///< h = max cell diameter

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t edge_count() const { return edges.size(); }
    std::size_t cell_count() const { return cells.size(); }

    /// Outward unit normal of edge `le` (local index) of cell `k`.
    Point2 outward_normal(int k, int le) const {
        const Cell& c = cells[k];
        return edges[c.edges[le]].normal * static_cast<double>(c.signs[le]);
    }

    /// Counterclockwise vertex coordinates of cell `k`.
    std::vector<Point2> cell_polygon(int k) const;

    /// Index of the cell containing `p` (boundary points match the lowest
    /// incident cell id). Returns -1 when outside.
    int locate_cell(const Point2& p) const;

    double total_area() const;
};

struct AxisRect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    bool contains(const Point2& p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
};

/// Assembles a PolygonalMesh from per-cell counterclockwise vertex loops.
/// Shared edges are identified by their unordered vertex pair.
class MeshBuilder {
  public:
    int add_vertex(const Point2& p);
    /// Adds a vertex, reusing any existing vertex within `tol` (snap-dedup for
    /// generators that compute shared corners independently, e.g. Voronoi).
    int add_vertex_snapped(const Point2& p, double tol);
    void add_cell(std::vector<int> vertex_loop);
    PolygonalMesh build() const;

  private:
    std::vector<Point2> vertices_;
    std::vector<std::vector<int>> cell_loops_;
    double snap_tol_ = -1.0;
    std::map<std::pair<long long, long long>, std::vector<int>> buckets_;
};

// --- generators --------------------------------------------------------------

PolygonalMesh build_square_mesh(int n, const AxisRect& domain = {});
PolygonalMesh build_triangular_mesh(int n, const AxisRect& domain = {});
PolygonalMesh build_concave_mesh(int n, const AxisRect& domain = {});

enum class VoronoiMode { structured, random };

PolygonalMesh build_voronoi_mesh(int n_seeds, VoronoiMode mode, int lloyd_iters,
                                 std::uint64_t rng_seed, const AxisRect& domain = {});

/// Clipped Voronoi tessellation of `domain` for explicit seed points, with
/// optional Lloyd relaxation. Building block of build_voronoi_mesh.
PolygonalMesh build_voronoi_from_seeds(std::vector<Point2> seeds, const AxisRect& domain,
                                       int lloyd_iters = 0);

// --- quality -----------------------------------------------------------------

struct MeshQualityReport {
    double rho_star = 0.0;        ///< min over cells of kernel inradius / h_K
    double min_edge_ratio = 0.0;  ///< min over cells of min_e h_e / h_K
    double uniformity = 0.0;      ///< min_K h_K / h
    std::vector<std::pair<int, std::string>> violations;  ///< (cell id, failed check)
};

MeshQualityReport check_quality(const PolygonalMesh& mesh, double rho0);

/// Kernel of a polygon (intersection of the edge half-planes); empty result
/// means the polygon is not star-shaped.
std::vector<Point2> polygon_kernel(const std::vector<Point2>& poly);

/// Chebyshev center of a convex polygon: (center, inradius).
std::pair<Point2, double> max_inscribed_circle(const std::vector<Point2>& poly);

bool is_convex_polygon(const std::vector<Point2>& poly);

// --- interchange format ------------------------------------------------------

void write_mesh(std::ostream& os, const PolygonalMesh& mesh);
void write_mesh_file(const std::string& path, const PolygonalMesh& mesh);
PolygonalMesh read_mesh(std::istream& is);
PolygonalMesh read_mesh_file(const std::string& path);

}  // namespace vem
