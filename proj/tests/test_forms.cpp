#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vem/forms.hpp"
#include "vem/rng.hpp"

using namespace vem;

namespace {

CoefficientSet unit_coefficients() {
    CoefficientSet co;
    co.A = [](double, const Point2&) { return 1.0; };
    co.b = [](double c, const Point2&) { return c + 2.0; };
    co.d = [](double c, const Point2&) { return c + 2.0; };
    co.phi = [](const Point2&) { return 1.0; };
    co.dispersion = DispersionParams{0.02, 1.0, 1.0};
    return co;
}

// Hand-assembled operators of the unit square cell (edges: bottom, right,
// top, left; h_K = sqrt(2), centroid (1/2,1/2)):
//   pi0_velocity       P  = [[0, 1/2, 0, -1/2], [-1/2, 0, 1/2, 0]]
//   pi0_grad_c         G  = [[0, 1, 0, -1], [-1, 0, 1, 0]]
//   pi_nabla_c rows       = ([1/4 x4], sqrt2*[0,1,0,-1], sqrt2*[-1,0,1,0])
//   velocity stab      Sv = (I-DP)'(I-DP) = 1/2 * {(0,2),(1,3) pairs}
//   concentration stab Sc = Kc'Kc = 1/4 * alternating +-1 pattern
Eigen::Matrix4d unit_square_Ah_oracle() {
    Eigen::Matrix4d ah;
    ah << 0.75, 0.0, 0.25, 0.0,  //
        0.0, 0.75, 0.0, 0.25,    //
        0.25, 0.0, 0.75, 0.0,    //
        0.0, 0.25, 0.0, 0.75;
    return ah;
}

Eigen::Matrix4d alternating_pattern() {
    Eigen::Matrix4d s;
    s << 1, -1, 1, -1, -1, 1, -1, 1, 1, -1, 1, -1, -1, 1, -1, 1;
    return s;
}

Eigen::Matrix4d unit_square_Mh_oracle() {
    Eigen::Matrix4d consistency = Eigen::Matrix4d::Constant(0.0625);
    Eigen::Matrix4d a1;  // (1/24) alpha1' alpha1, alpha1 = sqrt2*[0,1,0,-1]
    a1 << 0, 0, 0, 0, 0, 1, 0, -1, 0, 0, 0, 0, 0, -1, 0, 1;
    Eigen::Matrix4d a2;
    a2 << 1, 0, -1, 0, 0, 0, 0, 0, -1, 0, 1, 0, 0, 0, 0, 0;
    consistency += (a1 + a2) / 12.0;
    return consistency + 0.25 * alternating_pattern();
}

Eigen::Matrix4d unit_square_GtG() {
    Eigen::Matrix4d g;
    g << 1, 0, -1, 0, 0, 1, 0, -1, -1, 0, 1, 0, 0, -1, 0, 1;
    return g;
}

Eigen::VectorXd affine_dofs(const CellContext& ctx, double a, double b, double c) {
    const Cell& K = ctx.mesh->cells[ctx.cell];
    Eigen::VectorXd dofs(K.edges.size());
    for (std::size_t i = 0; i < K.edges.size(); ++i) {
        const Point2& m = ctx.mesh->edges[K.edges[i]].midpoint;
        dofs[i] = a + b * m.x + c * m.y;
    }
    return dofs;
}

Eigen::VectorXd constant_flux_dofs(const CellContext& ctx, const Eigen::Vector2d& v) {
    const Cell& K = ctx.mesh->cells[ctx.cell];
    Eigen::VectorXd dofs(K.edges.size());
    for (std::size_t i = 0; i < K.edges.size(); ++i) {
        const Edge& e = ctx.mesh->edges[K.edges[i]];
        dofs[i] = v[0] * e.normal.x + v[1] * e.normal.y;
    }
    return dofs;
}

}  // namespace

TEST_CASE("dispersion tensor") {
    const Eigen::Matrix2d at_rest =
        dispersion_tensor(Eigen::Vector2d::Zero(), {0.02, 1.0, 1.0}, 1.0);
    CHECK((at_rest - 0.02 * Eigen::Matrix2d::Identity()).norm() < 1e-15);

    // isotropic when d_l == d_t: |u| + d_m times identity
    const Eigen::Matrix2d iso = dispersion_tensor({3.0, 4.0}, {0.02, 1.0, 1.0}, 1.0);
    CHECK((iso - 5.02 * Eigen::Matrix2d::Identity()).norm() < 1e-12);

    // pure longitudinal: projector onto the flow direction
    const Eigen::Matrix2d aniso = dispersion_tensor({1.0, 0.0}, {0.0, 1.0, 0.0}, 1.0);
    Eigen::Matrix2d expected;
    expected << 1.0, 0.0, 0.0, 0.0;
    CHECK((aniso - expected).norm() < 1e-14);
}

TEST_CASE("compressibility coefficients") {
    CHECK(coeff_d_b(0.0, 2.0, 4.0, 0.5) ==
          std::pair<double, double>{0.5 * 4.0, 0.0});
    const auto [d1, b1] = coeff_d_b(1.0, 2.0, 4.0, 1.0);
    CHECK(d1 == doctest::Approx(2.0));
    CHECK(b1 == doctest::Approx(0.0));
    const auto [d, b] = coeff_d_b(0.5, 2.0, 4.0, 1.0);
    CHECK(d == doctest::Approx(3.0));
    CHECK(b == doctest::Approx(-0.5));
}

TEST_CASE("velocity form on the unit square matches the dense oracle") {
    const PolygonalMesh mesh = build_square_mesh(1);
    const CellContext ctx = make_cell_context(mesh, 0);
    const CoefficientSet co = unit_coefficients();

    const Eigen::VectorXd c0 = Eigen::VectorXd::Zero(4);
    const Eigen::MatrixXd Ah = local_Ah(ctx, co, c0);
    CHECK((Ah - unit_square_Ah_oracle()).lpNorm<Eigen::Infinity>() < 1e-12);

    // constant velocity: stabilization contributes nothing
    const Eigen::VectorXd vd = constant_flux_dofs(ctx, {0.3, -1.1});
    const double energy = vd.dot(Ah * vd);
    CHECK(energy == doctest::Approx(0.3 * 0.3 + 1.1 * 1.1).epsilon(1e-12));  // |K| |v|^2
}

TEST_CASE("nu_A tracks the projected concentration mean exactly") {
    const PolygonalMesh mesh = build_square_mesh(1);
    const CellContext ctx = make_cell_context(mesh, 0);
    CoefficientSet co = unit_coefficients();
    co.A = [](double c, const Point2&) { return 1.0 / (c + 2.0); };

    for (double kappa : {0.0, 0.7, 2.5}) {
        const Eigen::VectorXd cd = Eigen::VectorXd::Constant(4, kappa);
        const Eigen::MatrixXd Ah = local_Ah(ctx, co, cd);
        // A constant on the cell: Ah = A(kappa) * (P'P + |K| Sv)
        CHECK((Ah - unit_square_Ah_oracle() / (kappa + 2.0)).lpNorm<Eigen::Infinity>() < 1e-13);
    }
}

TEST_CASE("divergence coupling row") {
    const PolygonalMesh mesh = build_square_mesh(1);
    const CellContext ctx = make_cell_context(mesh, 0);
    const Eigen::RowVectorXd B = local_B(ctx);

    CHECK(B * Eigen::VectorXd::Ones(4) == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK(std::abs(B * constant_flux_dofs(ctx, {1.0, 0.0})) < 1e-14);

    // scaling the cell by s scales the entries by s
    const PolygonalMesh scaled = build_square_mesh(1, AxisRect{0, 0, 3, 3});
    const Eigen::RowVectorXd Bs = local_B(make_cell_context(scaled, 0));
    CHECK((Bs - 3.0 * B).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("pressure mass") {
    const PolygonalMesh mesh = build_square_mesh(1);
    const CellContext ctx = make_cell_context(mesh, 0);
    CoefficientSet co = unit_coefficients();

    CoefficientSet unit_d = co;
    unit_d.d = [](double, const Point2&) { return 1.0; };
    CHECK(local_Wh(ctx, unit_d, Eigen::VectorXd::Zero(4)) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(local_Wh(ctx, co, Eigen::VectorXd::Zero(4)) == doctest::Approx(2.0).epsilon(1e-14));

    const Eigen::VectorXd cx = affine_dofs(ctx, 0.0, 1.0, 0.0);
    CHECK(local_Wh(ctx, co, cx) == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("concentration mass matches the dense oracle") {
    const PolygonalMesh mesh = build_square_mesh(1);
    const CellContext ctx = make_cell_context(mesh, 0);
    const Eigen::MatrixXd Mh = local_Mh(ctx, unit_coefficients());
    CHECK((Mh - unit_square_Mh_oracle()).lpNorm<Eigen::Infinity>() < 1e-12);

    // mass of constants: 1' Mh 1 = |K|, stabilization inert on constants
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
    CHECK(ones.dot(Mh * ones) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("diffusion form matches the dense oracle at zero velocity") {
    const PolygonalMesh mesh = build_square_mesh(1);
    const CellContext ctx = make_cell_context(mesh, 0);
    const Eigen::MatrixXd Dh =
        local_Dh(ctx, unit_coefficients(), Eigen::VectorXd::Zero(4));
    const Eigen::Matrix4d oracle =
        0.02 * unit_square_GtG() + 0.02 * 0.25 * alternating_pattern();
    CHECK((Dh - oracle).lpNorm<Eigen::Infinity>() < 1e-13);
}

TEST_CASE("convection form against the closed-form integral") {
    const PolygonalMesh mesh = build_square_mesh(1);
    const CellContext ctx = make_cell_context(mesh, 0);

    const Eigen::VectorXd u = constant_flux_dofs(ctx, {1.0, 0.0});
    const Eigen::MatrixXd Th = local_Th(ctx, u);

    // c affine: u . grad c = dc/dx, so Th c = (dc/dx) int_K Pi z = 0.25 dc/dx
    const Eigen::VectorXd c = affine_dofs(ctx, 0.4, 1.7, -0.9);
    const Eigen::VectorXd rhs = Th * c;
    for (int j = 0; j < 4; ++j) CHECK(rhs[j] == doctest::Approx(0.25 * 1.7).epsilon(1e-13));
}

TEST_CASE("pressure-time coupling column") {
    const PolygonalMesh mesh = build_square_mesh(1);
    const CellContext ctx = make_cell_context(mesh, 0);
    const Eigen::VectorXd Kh = local_Kh(ctx, unit_coefficients(), Eigen::VectorXd::Zero(4));
    for (int j = 0; j < 4; ++j) CHECK(Kh[j] == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("source contributions") {
    const PolygonalMesh mesh = build_square_mesh(1);
    const CellContext ctx = make_cell_context(mesh, 0);
    CoefficientSet co = unit_coefficients();

    SUBCASE("zero source") {
        const SourceContribution s = local_source_q(ctx, co, 0.0);
        CHECK(s.pressure_rhs == 0.0);
        CHECK(s.reaction.lpNorm<Eigen::Infinity>() == 0.0);
        CHECK(s.transport_rhs.lpNorm<Eigen::Infinity>() == 0.0);
    }
    SUBCASE("unit source") {
        co.q = [](const Point2&, double) { return 1.0; };
        const SourceContribution s = local_source_q(ctx, co, 0.0);
        CHECK(s.pressure_rhs == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("polynomial source against a high-order oracle") {
        co.q = [](const Point2& p, double t) { return p.x * p.x * p.x * p.y + t; };
        co.c_hat = [](const Point2&, double) { return 1.0; };
        const SourceContribution s = local_source_q(ctx, co, 0.25);
        const QuadratureRule fine = polygon_rule(mesh, 0, 16);
        const double oracle =
            fine.integrate([&](const Point2& p) { return co.q(p, 0.25); });
        CHECK(s.pressure_rhs == doctest::Approx(oracle).epsilon(1e-13));
    }
}

TEST_CASE("patch identities with polynomial data") {
    const PolygonalMesh mesh = build_square_mesh(1);
    const CellContext ctx = make_cell_context(mesh, 0);
    const CoefficientSet co = unit_coefficients();

    // mass of two affines integrates exactly
    const double a1 = 0.3, b1 = -1.2, c1 = 0.8, a2 = 1.1, b2 = 0.4, c2 = -0.6;
    const Eigen::VectorXd z1 = affine_dofs(ctx, a1, b1, c1);
    const Eigen::VectorXd z2 = affine_dofs(ctx, a2, b2, c2);
    const double exact_mass = a1 * a2 + (a1 * b2 + a2 * b1) / 2 + (a1 * c2 + a2 * c1) / 2 +
                              b1 * b2 / 3 + c1 * c2 / 3 + (b1 * c2 + b2 * c1) / 4;
    CHECK(z1.dot(local_Mh(ctx, co) * z2) == doctest::Approx(exact_mass).epsilon(1e-12));

    // diffusion of two affines at zero velocity: 0.02 * grad.grad
    const double exact_diff = 0.02 * (b1 * b2 + c1 * c2);
    CHECK(z1.dot(local_Dh(ctx, co, Eigen::VectorXd::Zero(4)) * z2) ==
          doctest::Approx(exact_diff).epsilon(1e-12));
}

TEST_CASE("SPD and stabilization-consistency across families") {
    const PolygonalMesh meshes[] = {
        build_square_mesh(3),
        build_triangular_mesh(3),
        build_concave_mesh(2),
        build_voronoi_mesh(9, VoronoiMode::structured, 0, 1),
        build_voronoi_mesh(9, VoronoiMode::random, 3, 5),
    };
    CoefficientSet co = unit_coefficients();
    co.A = [](double c, const Point2&) { return 1.0 / (std::abs(c) + 2.0); };
    SplitMix64 rng(4);

    for (const PolygonalMesh& mesh : meshes) {
        for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
            const CellContext ctx = make_cell_context(mesh, static_cast<int>(k));
            Eigen::VectorXd c_rand(ctx.ops.m), u_rand(ctx.ops.m);
            for (int i = 0; i < ctx.ops.m; ++i) {
                c_rand[i] = rng.uniform(-1, 1);
                u_rand[i] = rng.uniform(-1, 1);
            }

            const Eigen::MatrixXd Ah = local_Ah(ctx, co, c_rand);
            const Eigen::MatrixXd Mh = local_Mh(ctx, co);
            const Eigen::MatrixXd Dh = local_Dh(ctx, co, u_rand);

            for (const Eigen::MatrixXd* M : {&Ah, &Mh, &Dh}) {
                CHECK((*M - M->transpose()).lpNorm<Eigen::Infinity>() <
                      1e-12 * M->lpNorm<Eigen::Infinity>());
            }
            // mass and velocity forms are strictly positive definite
            for (const Eigen::MatrixXd* M : {&Ah, &Mh}) {
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(*M);
                CHECK(eig.eigenvalues().minCoeff() > 0.0);
            }
            // the diffusion form is coercive in the H1 seminorm: constants are
            // its exact kernel, everything else strictly positive
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Dh);
            CHECK(eig.eigenvalues().minCoeff() > -1e-12 * Dh.lpNorm<Eigen::Infinity>());
            CHECK(eig.eigenvalues()[1] > 0.0);
            CHECK((Dh * Eigen::VectorXd::Ones(ctx.ops.m)).lpNorm<Eigen::Infinity>() <
                  1e-12 * Dh.lpNorm<Eigen::Infinity>());
        }
    }
}
