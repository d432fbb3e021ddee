#include "vem/spaces.hpp"

#include <stdexcept>

namespace vem {

namespace {
void require_lowest_order(int degree, const char* where) {
    if (degree < 0) throw std::invalid_argument(std::string(where) + ": degree must be >= 0");
    if (degree > 0)
        throw std::logic_error(std::string(where) +
                               ": only the lowest-order space (degree 0) is implemented");
}
}  // namespace

SpaceLayout build_layout(const PolygonalMesh& mesh, int degree) {
    require_lowest_order(degree, "build_layout");
    SpaceLayout layout;
    layout.degree = degree;
    layout.velocity_dofs = mesh.edge_count();
    layout.pressure_dofs = mesh.cell_count();
    layout.concentration_dofs = mesh.edge_count();
    layout.velocity_boundary.resize(mesh.edge_count());
    for (std::size_t e = 0; e < mesh.edge_count(); ++e)
        layout.velocity_boundary[e] = mesh.edges[e].boundary;
    return layout;
}

ElementOperators build_element_operators(const PolygonalMesh& mesh, int cell, int degree) {
    require_lowest_order(degree, "build_element_operators");

    const Cell& K = mesh.cells[cell];
    const int m = static_cast<int>(K.edges.size());
    const double area = K.area;
    const double hK = K.diameter;
    const Point2 xc = K.centroid;

    ElementOperators ops;
    ops.cell = cell;
    ops.m = m;

    // --- velocity: divergence functional and L2 projection onto constants.
    // div v = (1/|K|) sum_e sign*h_e*dof_e; the componentwise projection uses
    // int_K v_i = -int_K x_i div v + int_bd x_i (v.n), where v.n is constant on
    // each edge for the lowest-order space.
    ops.div_functional.resize(m);
    ops.pi0_velocity.resize(2, m);
    for (int le = 0; le < m; ++le) {
        const Edge& e = mesh.edges[K.edges[le]];
        const double sh = K.signs[le] * e.length;
        ops.div_functional[le] = sh / area;
        ops.pi0_velocity(0, le) = sh * (e.midpoint.x - xc.x) / area;
        ops.pi0_velocity(1, le) = sh * (e.midpoint.y - xc.y) / area;
    }

    // DOFs of a constant vector field: dof_e(p) = p . n_e (global normal).
    Eigen::MatrixXd const_dofs(m, 2);
    for (int le = 0; le < m; ++le) {
        const Edge& e = mesh.edges[K.edges[le]];
        const_dofs(le, 0) = e.normal.x;
        const_dofs(le, 1) = e.normal.y;
    }
    ops.stab_kernel_v = Eigen::MatrixXd::Identity(m, m) - const_dofs * ops.pi0_velocity;

    // --- concentration: elliptic projection onto P1.
    // Gradient part: |K| grad(Pi z) = sum_e sign*h_e*n_e*dof_e (also the L2
    // projection of grad z); constant part fixed by the boundary average.
    ops.pi0_grad_c.resize(2, m);
    double perimeter = 0.0;
    for (int le = 0; le < m; ++le) {
        const Edge& e = mesh.edges[K.edges[le]];
        const double sh = K.signs[le] * e.length;
        ops.pi0_grad_c(0, le) = sh * e.normal.x / area;
        ops.pi0_grad_c(1, le) = sh * e.normal.y / area;
        perimeter += e.length;
    }

    ops.pi_nabla_c.resize(3, m);
    ops.pi_nabla_c.row(1) = hK * ops.pi0_grad_c.row(0);
    ops.pi_nabla_c.row(2) = hK * ops.pi0_grad_c.row(1);
    // constant part: boundary mean of z minus boundary mean of the gradient part
    for (int le = 0; le < m; ++le)
        ops.pi_nabla_c(0, le) = mesh.edges[K.edges[le]].length / perimeter;
    for (int le = 0; le < m; ++le) {
        const Edge& e = mesh.edges[K.edges[le]];
        const double xi = (e.midpoint.x - xc.x) / hK;
        const double eta = (e.midpoint.y - xc.y) / hK;
        ops.pi_nabla_c.row(0) -= (e.length / perimeter) *
                                 (xi * ops.pi_nabla_c.row(1) + eta * ops.pi_nabla_c.row(2));
    }

    // Enhancement at k=0: the L2 projection onto P1 coincides with the elliptic
    // projection, which also makes the P0 projection (the cell mean) computable.
    ops.pi0_c = ops.pi_nabla_c;

    // DOFs of an affine p1: the mean over an edge is the midpoint value.
    Eigen::MatrixXd p1_dofs(m, 3);
    for (int le = 0; le < m; ++le) {
        const Edge& e = mesh.edges[K.edges[le]];
        p1_dofs(le, 0) = 1.0;
        p1_dofs(le, 1) = (e.midpoint.x - xc.x) / hK;
        p1_dofs(le, 2) = (e.midpoint.y - xc.y) / hK;
    }
    ops.stab_kernel_c_grad = Eigen::MatrixXd::Identity(m, m) - p1_dofs * ops.pi_nabla_c;
    ops.stab_kernel_c_l2 = Eigen::MatrixXd::Identity(m, m) - p1_dofs * ops.pi0_c;

    return ops;
}

}  // namespace vem
