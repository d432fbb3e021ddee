#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vem/mesh.hpp"
#include "vem/rng.hpp"
#include "vem/spaces.hpp"

using namespace vem;

namespace {

Eigen::VectorXd constant_velocity_dofs(const PolygonalMesh& mesh, int cell,
                                       const Eigen::Vector2d& v) {
    const Cell& K = mesh.cells[cell];
    Eigen::VectorXd dofs(K.edges.size());
    for (std::size_t i = 0; i < K.edges.size(); ++i) {
        const Edge& e = mesh.edges[K.edges[i]];
        dofs[i] = v[0] * e.normal.x + v[1] * e.normal.y;
    }
    return dofs;
}

Eigen::VectorXd affine_concentration_dofs(const PolygonalMesh& mesh, int cell, double a, double b,
                                          double c) {
    // edge mean of an affine function is its midpoint value
    const Cell& K = mesh.cells[cell];
    Eigen::VectorXd dofs(K.edges.size());
    for (std::size_t i = 0; i < K.edges.size(); ++i) {
        const Point2& m = mesh.edges[K.edges[i]].midpoint;
        dofs[i] = a + b * m.x + c * m.y;
    }
    return dofs;
}

std::vector<PolygonalMesh> sample_meshes() {
    std::vector<PolygonalMesh> meshes;
    meshes.push_back(build_square_mesh(4));
    meshes.push_back(build_triangular_mesh(4));
    meshes.push_back(build_concave_mesh(3));
    meshes.push_back(build_voronoi_mesh(16, VoronoiMode::structured, 0, 1));
    meshes.push_back(build_voronoi_mesh(16, VoronoiMode::random, 3, 8));
    return meshes;
}

}  // namespace

TEST_CASE("layout counts") {
    const PolygonalMesh m2 = build_square_mesh(2);
    const SpaceLayout l2 = build_layout(m2);
    CHECK(l2.velocity_dofs == 12);
    CHECK(l2.n_boundary_velocity() == 8);
    CHECK(l2.pressure_dofs == 4);
    CHECK(l2.concentration_dofs == 12);

    const SpaceLayout l1 = build_layout(build_square_mesh(1));
    CHECK(l1.velocity_dofs == 4);
    CHECK(l1.pressure_dofs == 1);
    CHECK(l1.concentration_dofs == 4);

    const SpaceLayout lt = build_layout(build_triangular_mesh(1));
    CHECK(lt.velocity_dofs == 5);
    CHECK(lt.pressure_dofs == 2);

    CHECK_THROWS_AS(build_layout(m2, 1), std::logic_error);
    CHECK_THROWS_AS(build_element_operators(m2, 0, 1), std::logic_error);
}

TEST_CASE("velocity projector on the unit square") {
    const PolygonalMesh mesh = build_square_mesh(1);
    const ElementOperators ops = build_element_operators(mesh, 0);

    // constant field (1,0): fluxes +-1 on the vertical edges, 0 on horizontal
    const Eigen::VectorXd vx = constant_velocity_dofs(mesh, 0, {1.0, 0.0});
    const Eigen::Vector2d proj = ops.pi0_velocity * vx;
    CHECK(proj[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(proj[1]) < 1e-14);
    CHECK(std::abs(ops.div_functional * vx) < 1e-14);

    // all outward fluxes 1: divergence theorem gives sum h_e / |K| = 4
    const Eigen::VectorXd outward = Eigen::VectorXd::Ones(4);
    CHECK(ops.div_functional * outward == doctest::Approx(4.0).epsilon(1e-14));

    // stabilization kernel annihilates constants
    CHECK((ops.stab_kernel_v * vx).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("divergence of a linear field on a pentagon") {
    MeshBuilder b;
    const int v0 = b.add_vertex({0.0, 0.0});
    const int v1 = b.add_vertex({1.0, 0.0});
    const int v2 = b.add_vertex({1.2, 0.8});
    const int v3 = b.add_vertex({0.5, 1.3});
    const int v4 = b.add_vertex({-0.2, 0.7});
    b.add_cell({v0, v1, v2, v3, v4});
    const PolygonalMesh mesh = b.build();
    const ElementOperators ops = build_element_operators(mesh, 0);

    // dofs of v = (x, y): the edge mean of a linear normal trace is its
    // midpoint value
    Eigen::VectorXd dofs(5);
    for (int i = 0; i < 5; ++i) {
        const Edge& e = mesh.edges[mesh.cells[0].edges[i]];
        dofs[i] = e.midpoint.x * e.normal.x + e.midpoint.y * e.normal.y;
    }
    CHECK(ops.div_functional * dofs == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("concentration projectors on the unit square") {
    const PolygonalMesh mesh = build_square_mesh(1);
    const ElementOperators ops = build_element_operators(mesh, 0);

    // z = x: edge means (0.5, 1, 0.5, 0)
    const Eigen::VectorXd zx = affine_concentration_dofs(mesh, 0, 0.0, 1.0, 0.0);
    const Eigen::Vector3d coeff = ops.pi_nabla_c * zx;
    for (const Point2& v : mesh.vertices)
        CHECK(ElementOperators::eval_p1(coeff, v, mesh.cells[0].centroid,
                                        mesh.cells[0].diameter) ==
              doctest::Approx(v.x).epsilon(1e-13));

    // z = 1
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
    const Eigen::Vector3d cone = ops.pi_nabla_c * ones;
    CHECK(cone[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(cone[1]) < 1e-14);
    CHECK(std::abs(cone[2]) < 1e-14);
    CHECK((ops.pi0_grad_c * ones).norm() < 1e-14);
}

TEST_CASE("projected gradient of an affine on a chevron cell") {
    const PolygonalMesh mesh = build_concave_mesh(1);
    const ElementOperators ops = build_element_operators(mesh, 0);
    const Eigen::VectorXd dofs = affine_concentration_dofs(mesh, 0, 0.0, 1.0, 2.0);
    const Eigen::Vector2d grad = ops.pi0_grad_c * dofs;
    CHECK(grad[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(grad[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("projector consistency across families") {
    SplitMix64 rng(31);
    for (const PolygonalMesh& mesh : sample_meshes()) {
        for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
            const ElementOperators ops = build_element_operators(mesh, static_cast<int>(k));
            const Cell& K = mesh.cells[k];

            // velocity: P0^2 reproduction and kernel annihilation
            const Eigen::Vector2d v{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            const Eigen::VectorXd vd = constant_velocity_dofs(mesh, static_cast<int>(k), v);
            CHECK((ops.pi0_velocity * vd - v).lpNorm<Eigen::Infinity>() < 1e-12);
            CHECK((ops.stab_kernel_v * vd).lpNorm<Eigen::Infinity>() < 1e-12);

            // concentration: P1 reproduction and kernel annihilation
            const double a = rng.uniform(-1, 1), bx = rng.uniform(-1, 1), cy = rng.uniform(-1, 1);
            const Eigen::VectorXd zd =
                affine_concentration_dofs(mesh, static_cast<int>(k), a, bx, cy);
            const Eigen::Vector3d coeff = ops.pi_nabla_c * zd;
            for (int v_id : K.vertices) {
                const Point2& p = mesh.vertices[v_id];
                CHECK(ElementOperators::eval_p1(coeff, p, K.centroid, K.diameter) ==
                      doctest::Approx(a + bx * p.x + cy * p.y).epsilon(1e-11));
            }
            CHECK((ops.stab_kernel_c_grad * zd).lpNorm<Eigen::Infinity>() < 1e-12);
            CHECK((ops.stab_kernel_c_l2 * zd).lpNorm<Eigen::Infinity>() < 1e-12);

            // enhancement identity at k = 0
            CHECK((ops.pi0_c - ops.pi_nabla_c).lpNorm<Eigen::Infinity>() == 0.0);
        }
    }
}

TEST_CASE("elliptic projector satisfies its defining system") {
    SplitMix64 rng(77);
    for (const PolygonalMesh& mesh : sample_meshes()) {
        const int k = static_cast<int>(rng.next() % mesh.cell_count());
        const ElementOperators ops = build_element_operators(mesh, k);
        const Cell& K = mesh.cells[k];

        Eigen::VectorXd z(ops.m);
        for (int i = 0; i < ops.m; ++i) z[i] = rng.uniform(-1, 1);
        const Eigen::Vector3d coeff = ops.pi_nabla_c * z;

        // for p1 in {xi, eta}: int_K grad(Pi z).grad(p1) = sum_e sign h_e
        // (n_e . grad p1) dof_e
        const double hK = K.diameter;
        const Eigen::Vector2d grad_proj{coeff[1] / hK, coeff[2] / hK};
        Eigen::Vector2d boundary = Eigen::Vector2d::Zero();
        for (std::size_t i = 0; i < K.edges.size(); ++i) {
            const Edge& e = mesh.edges[K.edges[i]];
            boundary[0] += K.signs[i] * e.length * e.normal.x / hK * z[i];
            boundary[1] += K.signs[i] * e.length * e.normal.y / hK * z[i];
        }
        CHECK(K.area * grad_proj[0] / hK == doctest::Approx(boundary[0]).epsilon(1e-12));
        CHECK(K.area * grad_proj[1] / hK == doctest::Approx(boundary[1]).epsilon(1e-12));

        // boundary-average condition
        double lhs = 0.0, rhs = 0.0, perim = 0.0;
        for (std::size_t i = 0; i < K.edges.size(); ++i) {
            const Edge& e = mesh.edges[K.edges[i]];
            lhs += e.length * ElementOperators::eval_p1(coeff, e.midpoint, K.centroid, hK);
            rhs += e.length * z[i];
            perim += e.length;
        }
        CHECK(lhs / perim == doctest::Approx(rhs / perim).epsilon(1e-12));
    }
}
