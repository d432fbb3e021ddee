#pragma once

#include <Eigen/Dense>
#include <functional>

#include "vem/mesh.hpp"
#include "vem/quadrature.hpp"
#include "vem/spaces.hpp"

namespace vem {

struct DispersionParams {
    double d_m = 0.0;  ///< molecular diffusion
    double d_l = 0.0;  ///< longitudinal dispersion
    double d_t = 0.0;  ///< transversal dispersion
};

/// D(u) = phi [ d_m I + |u| ( d_l E(u) + d_t (I - E(u)) ) ] with
/// E(u) = u u^T / |u|^2, extended continuously by dropping the E-term at u = 0.
Eigen::Matrix2d dispersion_tensor(const Eigen::Vector2d& u, const DispersionParams& params,
                                  double phi);

/// Compressibility coefficients d(c) = phi (z1 c + z2 (1-c)) and
/// b(c) = phi c (z1 - (z1 c + z2 (1-c))).
std::pair<double, double> coeff_d_b(double c, double z1, double z2, double phi);

/// Physical coefficient laws of the model. `A` is the reciprocal mobility
/// a^{-1}(c,x) appearing in the velocity form. Presets may override b, d
/// directly instead of routing through coeff_d_b.
struct CoefficientSet {
    std::function<double(double c, const Point2& x)> A;
    std::function<double(double c, const Point2& x)> b;
    std::function<double(double c, const Point2& x)> d;
    std::function<double(const Point2& x)> phi;
    DispersionParams dispersion;

    std::function<double(const Point2& x, double t)> q;      ///< distributed flow source
    std::function<double(const Point2& x, double t)> c_hat;  ///< injected concentration
    /// manufactured transport right-hand side; when set, the reaction/injection
    /// pair (qc,z)-(q chat,z) is replaced by (f,z)_h
    std::function<double(const Point2& x, double t)> f;
    /// optional gravity-like vector in u = -a(c)(grad p - gamma(c))
    std::function<Eigen::Vector2d(double c, const Point2& x)> gamma;

    bool has_f() const { return static_cast<bool>(f); }
};

/// Everything the local builders need for one cell, built once per cell per
/// assembly pass.
struct CellContext {
    const PolygonalMesh* mesh = nullptr;
    int cell = -1;
    ElementOperators ops;
    QuadratureRule rule;  ///< polygon rule of the configured exactness degree

    double area = 0.0;
    double hK = 0.0;
    Point2 xc;

    /// scaled monomial values (1, xi, eta) at x
    Eigen::Vector3d monomials(const Point2& x) const {
        return {1.0, (x.x - xc.x) / hK, (x.y - xc.y) / hK};
    }
    /// projected concentration value at x for local DOFs z
    double projected_c(const Eigen::VectorXd& z, const Point2& x) const {
        const Eigen::Vector3d coeff = ops.pi_nabla_c * z;
        return coeff.dot(monomials(x));
    }
};

CellContext make_cell_context(const PolygonalMesh& mesh, int cell, int quad_degree = 8);

// --- local matrices of the discrete forms -------------------------------------

/// Velocity form: consistency int_K A(Pi c) Pi u . Pi v + nu_A S_A on the
/// projector kernel.
Eigen::MatrixXd local_Ah(const CellContext& ctx, const CoefficientSet& coeffs,
                         const Eigen::VectorXd& c_dofs);

/// Divergence coupling row: B(v, 1_K) = -int_K div v.
Eigen::RowVectorXd local_B(const CellContext& ctx);

/// Pressure mass: int_K d(Pi c) dx (P0 trial and test).
double local_Wh(const CellContext& ctx, const CoefficientSet& coeffs,
                const Eigen::VectorXd& c_dofs);

/// Concentration mass with dofi-dofi stabilization.
Eigen::MatrixXd local_Mh(const CellContext& ctx, const CoefficientSet& coeffs);

/// Pressure-time coupling column: int_K b(Pi c) Pi z dx.
Eigen::VectorXd local_Kh(const CellContext& ctx, const CoefficientSet& coeffs,
                         const Eigen::VectorXd& c_dofs);

/// Convection: int_K (Pi u . Pi grad c) Pi z dx.
Eigen::MatrixXd local_Th(const CellContext& ctx, const Eigen::VectorXd& u_dofs);

/// Diffusion-dispersion with dofi-dofi stabilization (no |K| factor).
Eigen::MatrixXd local_Dh(const CellContext& ctx, const CoefficientSet& coeffs,
                         const Eigen::VectorXd& u_dofs);

struct SourceContribution {
    double pressure_rhs = 0.0;      ///< int_K q dx
    Eigen::MatrixXd reaction;       ///< int_K q (Pi c)(Pi z) dx
    Eigen::VectorXd transport_rhs;  ///< int_K q c_hat (Pi z) dx
};

SourceContribution local_source_q(const CellContext& ctx, const CoefficientSet& coeffs, double t);

/// Manufactured transport source: int_K f (Pi z) dx.
Eigen::VectorXd local_transport_f(const CellContext& ctx, const CoefficientSet& coeffs, double t);

/// Velocity right-hand side from gamma: int_K gamma(Pi c) dx, to be applied
/// through pi0_velocity^T.
Eigen::Vector2d local_gamma_integral(const CellContext& ctx, const CoefficientSet& coeffs,
                                     const Eigen::VectorXd& c_dofs);

}  // namespace vem
