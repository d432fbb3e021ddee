#include "vem/forms.hpp"

#include <cmath>
#include <stdexcept>

namespace vem {

Eigen::Matrix2d dispersion_tensor(const Eigen::Vector2d& u, const DispersionParams& params,
                                  double phi) {
    const double speed = u.norm();
    Eigen::Matrix2d D = (params.d_m + speed * params.d_t) * Eigen::Matrix2d::Identity();
    if (speed > 0.0) D += (params.d_l - params.d_t) / speed * (u * u.transpose());
    return phi * D;
}

std::pair<double, double> coeff_d_b(double c, double z1, double z2, double phi) {
    const double d = phi * (z1 * c + z2 * (1.0 - c));
    const double b = phi * c * (z1 - (z1 * c + z2 * (1.0 - c)));
    return {d, b};
}

CellContext make_cell_context(const PolygonalMesh& mesh, int cell, int quad_degree) {
    CellContext ctx;
    ctx.mesh = &mesh;
    ctx.cell = cell;
    ctx.ops = build_element_operators(mesh, cell);
    ctx.rule = polygon_rule(mesh, cell, quad_degree);
    const Cell& K = mesh.cells[cell];
    ctx.area = K.area;
    ctx.hK = K.diameter;
    ctx.xc = K.centroid;
    return ctx;
}

namespace {

double mean_phi(const CellContext& ctx, const CoefficientSet& coeffs) {
    double s = 0.0;
    for (std::size_t i = 0; i < ctx.rule.points.size(); ++i)
        s += ctx.rule.weights[i] * coeffs.phi(ctx.rule.points[i]);
    return s / ctx.area;
}

}  // namespace

Eigen::MatrixXd local_Ah(const CellContext& ctx, const CoefficientSet& coeffs,
                         const Eigen::VectorXd& c_dofs) {
    const ElementOperators& ops = ctx.ops;
    const Eigen::Vector3d c_coeff = ops.pi_nabla_c * c_dofs;

    double intA = 0.0;
    for (std::size_t i = 0; i < ctx.rule.points.size(); ++i) {
        const Point2& x = ctx.rule.points[i];
        intA += ctx.rule.weights[i] * coeffs.A(c_coeff.dot(ctx.monomials(x)), x);
    }

    const double c_mean = c_coeff[0];  // scaled monomials have zero cell mean
    const double nu = std::abs(coeffs.A(c_mean, ctx.xc));

    return intA * (ops.pi0_velocity.transpose() * ops.pi0_velocity) +
           nu * ctx.area * (ops.stab_kernel_v.transpose() * ops.stab_kernel_v);
}

Eigen::RowVectorXd local_B(const CellContext& ctx) { return -ctx.area * ctx.ops.div_functional; }

double local_Wh(const CellContext& ctx, const CoefficientSet& coeffs,
                const Eigen::VectorXd& c_dofs) {
    const Eigen::Vector3d c_coeff = ctx.ops.pi_nabla_c * c_dofs;
    double s = 0.0;
    for (std::size_t i = 0; i < ctx.rule.points.size(); ++i) {
        const Point2& x = ctx.rule.points[i];
        s += ctx.rule.weights[i] * coeffs.d(c_coeff.dot(ctx.monomials(x)), x);
    }
    return s;
}

Eigen::MatrixXd local_Mh(const CellContext& ctx, const CoefficientSet& coeffs) {
    const ElementOperators& ops = ctx.ops;
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < ctx.rule.points.size(); ++i) {
        const Eigen::Vector3d mono = ctx.monomials(ctx.rule.points[i]);
        H += ctx.rule.weights[i] * coeffs.phi(ctx.rule.points[i]) * (mono * mono.transpose());
    }
    const double nu = std::abs(mean_phi(ctx, coeffs));
    return ops.pi0_c.transpose() * H * ops.pi0_c +
           nu * ctx.area * (ops.stab_kernel_c_l2.transpose() * ops.stab_kernel_c_l2);
}

Eigen::VectorXd local_Kh(const CellContext& ctx, const CoefficientSet& coeffs,
                         const Eigen::VectorXd& c_dofs) {
    const Eigen::Vector3d c_coeff = ctx.ops.pi_nabla_c * c_dofs;
    Eigen::Vector3d w = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < ctx.rule.points.size(); ++i) {
        const Point2& x = ctx.rule.points[i];
        const Eigen::Vector3d mono = ctx.monomials(x);
        w += ctx.rule.weights[i] * coeffs.b(c_coeff.dot(mono), x) * mono;
    }
    return ctx.ops.pi0_c.transpose() * w;
}

Eigen::MatrixXd local_Th(const CellContext& ctx, const Eigen::VectorXd& u_dofs) {
    const ElementOperators& ops = ctx.ops;
    const Eigen::Vector2d u_bar = ops.pi0_velocity * u_dofs;
    // (Pi u . Pi grad c) is constant, so only the mean of Pi z enters:
    // int_K Pi z_j = |K| * alpha0_j.
    const Eigen::RowVectorXd conv = u_bar.transpose() * ops.pi0_grad_c;
    const Eigen::VectorXd test_means = ctx.area * ops.pi0_c.row(0).transpose();
    return test_means * conv;
}

Eigen::MatrixXd local_Dh(const CellContext& ctx, const CoefficientSet& coeffs,
                         const Eigen::VectorXd& u_dofs) {
    const ElementOperators& ops = ctx.ops;
    const Eigen::Vector2d u_bar = ops.pi0_velocity * u_dofs;
    const double phi_bar = mean_phi(ctx, coeffs);
    const Eigen::Matrix2d D = dispersion_tensor(u_bar, coeffs.dispersion, phi_bar);
    const double nu = std::abs(phi_bar) * (coeffs.dispersion.d_m +
                                           coeffs.dispersion.d_t * u_bar.norm());
    return ctx.area * (ops.pi0_grad_c.transpose() * D * ops.pi0_grad_c) +
           nu * (ops.stab_kernel_c_grad.transpose() * ops.stab_kernel_c_grad);
}

SourceContribution local_source_q(const CellContext& ctx, const CoefficientSet& coeffs,
                                  double t) {
    SourceContribution out;
    const int m = ctx.ops.m;
    out.reaction = Eigen::MatrixXd::Zero(m, m);
    out.transport_rhs = Eigen::VectorXd::Zero(m);
    if (!coeffs.q) return out;

    Eigen::Matrix3d Hq = Eigen::Matrix3d::Zero();
    Eigen::Vector3d wqc = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < ctx.rule.points.size(); ++i) {
        const Point2& x = ctx.rule.points[i];
        const double qv = coeffs.q(x, t);
        out.pressure_rhs += ctx.rule.weights[i] * qv;
        const Eigen::Vector3d mono = ctx.monomials(x);
        Hq += ctx.rule.weights[i] * qv * (mono * mono.transpose());
        if (coeffs.c_hat) wqc += ctx.rule.weights[i] * qv * coeffs.c_hat(x, t) * mono;
    }
    out.reaction = ctx.ops.pi0_c.transpose() * Hq * ctx.ops.pi0_c;
    out.transport_rhs = ctx.ops.pi0_c.transpose() * wqc;
    return out;
}

Eigen::VectorXd local_transport_f(const CellContext& ctx, const CoefficientSet& coeffs,
                                  double t) {
    Eigen::Vector3d w = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < ctx.rule.points.size(); ++i) {
        const Point2& x = ctx.rule.points[i];
        w += ctx.rule.weights[i] * coeffs.f(x, t) * ctx.monomials(x);
    }
    return ctx.ops.pi0_c.transpose() * w;
}

Eigen::Vector2d local_gamma_integral(const CellContext& ctx, const CoefficientSet& coeffs,
                                     const Eigen::VectorXd& c_dofs) {
    if (!coeffs.gamma) return Eigen::Vector2d::Zero();
    const Eigen::Vector3d c_coeff = ctx.ops.pi_nabla_c * c_dofs;
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < ctx.rule.points.size(); ++i) {
        const Point2& x = ctx.rule.points[i];
        g += ctx.rule.weights[i] * coeffs.gamma(c_coeff.dot(ctx.monomials(x)), x);
    }
    return g;
}

}  // namespace vem
