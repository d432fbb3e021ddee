#pragma once

#include <Eigen/Dense>
#include <vector>

#include "vem/mesh.hpp"

namespace vem {

/// Global DOF maps for the lowest-order spaces: one edge-mean normal flux per
/// edge (velocity), one cell mean per cell (pressure), one edge mean per edge
/// (concentration).
struct SpaceLayout {
    int degree = 0;
    std::size_t velocity_dofs = 0;       ///< == edge count
    std::size_t pressure_dofs = 0;       ///< == cell count
    std::size_t concentration_dofs = 0;  ///< == edge count
    std::vector<bool> velocity_boundary;  ///< flagged for the essential u.n = 0 condition

    std::size_t n_boundary_velocity() const {
        std::size_t n = 0;
        for (bool b : velocity_boundary) n += b ? 1 : 0;
        return n;
    }
};

SpaceLayout build_layout(const PolygonalMesh& mesh, int degree = 0);

/// Per-cell projector and stabilization matrices, all indexed by the cell's
/// local edge ordering (m = number of edges).
///
/// Scaled monomial basis on the cell: {1, (x-xc)/hK, (y-yc)/hK}.
struct ElementOperators {
    int cell = -1;
    int m = 0;  ///< number of edges / local DOFs per scalar edge space

    Eigen::Matrix<double, 2, Eigen::Dynamic> pi0_velocity;  ///< DOFs -> constant vector
    Eigen::RowVectorXd div_functional;                      ///< DOFs -> constant divergence
    Eigen::Matrix<double, 3, Eigen::Dynamic> pi_nabla_c;    ///< DOFs -> P1 coefficients
    Eigen::Matrix<double, 2, Eigen::Dynamic> pi0_grad_c;    ///< DOFs -> constant gradient
    Eigen::Matrix<double, 3, Eigen::Dynamic> pi0_c;         ///< == pi_nabla_c at k=0 (enhancement)

    Eigen::MatrixXd stab_kernel_v;       ///< (I - Pi)    on velocity DOFs
    Eigen::MatrixXd stab_kernel_c_l2;    ///< (I - Pi0_1) on concentration DOFs
    Eigen::MatrixXd stab_kernel_c_grad;  ///< (I - Pi^nabla_1) on concentration DOFs

    /// Value of the projected concentration polynomial at x for the
    /// coefficient vector coeff = pi_nabla_c * dofs.
    static double eval_p1(const Eigen::Vector3d& coeff, const Point2& x, const Point2& xc,
                          double hK) {
        return coeff[0] + coeff[1] * (x.x - xc.x) / hK + coeff[2] * (x.y - xc.y) / hK;
    }
};

ElementOperators build_element_operators(const PolygonalMesh& mesh, int cell, int degree = 0);

}  // namespace vem
