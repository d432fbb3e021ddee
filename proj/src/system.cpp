#include "vem/system.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vem/quadrature.hpp"

namespace vem {

std::vector<PlacedWell> place_wells(const PolygonalMesh& mesh, const std::vector<Well>& wells) {
    std::vector<PlacedWell> placed;
    placed.reserve(wells.size());
    for (const Well& w : wells) {
        const int cell = mesh.locate_cell(w.location);
        if (cell < 0) {
            std::ostringstream msg;
            msg << "place_wells: location (" << w.location.x << ", " << w.location.y
                << ") outside the mesh";
            throw std::invalid_argument(msg.str());
        }
        placed.push_back({w, cell});
    }
    return placed;
}

std::vector<CellContext> build_cell_contexts(const PolygonalMesh& mesh, int quad_degree) {
    std::vector<CellContext> contexts;
    contexts.reserve(mesh.cell_count());
    for (std::size_t k = 0; k < mesh.cell_count(); ++k)
        contexts.push_back(make_cell_context(mesh, static_cast<int>(k), quad_degree));
    return contexts;
}

namespace {

Eigen::VectorXd gather(const Eigen::VectorXd& global, const std::vector<int>& ids) {
    Eigen::VectorXd local(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) local[i] = global[ids[i]];
    return local;
}

/// moment matrix int_K m_i m_j dx of the scaled monomials
Eigen::Matrix3d monomial_moments(const CellContext& ctx) {
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
    for (std::size_t i = 0; i < ctx.rule.points.size(); ++i) {
        const Eigen::Vector3d mono = ctx.monomials(ctx.rule.points[i]);
        H += ctx.rule.weights[i] * (mono * mono.transpose());
    }
    return H;
}

}  // namespace

FlowSystem assemble_flow(const PolygonalMesh& mesh, const SpaceLayout& layout,
                         const std::vector<CellContext>& contexts, const CoefficientSet& coeffs,
                         const std::vector<PlacedWell>& wells, const SimulationState& state_prev,
                         double tau, double t_n) {
    if (tau <= 0.0) throw std::invalid_argument("assemble_flow: tau must be positive");

    FlowSystem flow;
    flow.velocity_index.assign(layout.velocity_dofs, -1);
    for (std::size_t e = 0; e < layout.velocity_dofs; ++e) {
        if (layout.velocity_boundary[e]) {
            flow.system.constrained.emplace_back(static_cast<int>(e), 0.0);
        } else {
            flow.velocity_index[e] = flow.n_free_velocity++;
        }
    }
    const int dim = flow.n_free_velocity + static_cast<int>(layout.pressure_dofs);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    std::vector<Triplet> trips;

    for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
        const CellContext& ctx = contexts[k];
        const Cell& K = mesh.cells[k];
        const int m = ctx.ops.m;
        const int prow = flow.pressure_index(static_cast<int>(k));

        const Eigen::VectorXd c_loc = gather(state_prev.c_dofs, K.edges);
        const Eigen::MatrixXd Ah = local_Ah(ctx, coeffs, c_loc);
        const Eigen::RowVectorXd B = local_B(ctx);
        const double W = local_Wh(ctx, coeffs, c_loc);
        if (!(W > 0.0))
            throw SolverError("assemble_flow: nonpositive pressure mass on cell " +
                              std::to_string(k));

        Eigen::VectorXd rhs_v = Eigen::VectorXd::Zero(m);
        if (coeffs.gamma) {
            const Eigen::Vector2d G = local_gamma_integral(ctx, coeffs, c_loc);
            rhs_v = ctx.ops.pi0_velocity.transpose() * G;
        }

        // velocity rows: Ah u + B^T p = rhs_v
        for (int j = 0; j < m; ++j) {
            const int row = flow.velocity_index[K.edges[j]];
            if (row < 0) continue;
            for (int i = 0; i < m; ++i) {
                const int col = flow.velocity_index[K.edges[i]];
                if (col < 0) continue;
                trips.push_back({row, col, Ah(j, i)});
            }
            trips.push_back({row, prow, B[j]});
            rhs[row] += rhs_v[j];
        }

        // pressure row (sign flipped for symmetry): B u - (W/tau) p = -(q + W p_prev / tau)
        for (int i = 0; i < m; ++i) {
            const int col = flow.velocity_index[K.edges[i]];
            if (col < 0) continue;
            trips.push_back({prow, col, B[i]});
        }
        trips.push_back({prow, prow, -W / tau});

        double q_int = 0.0;
        if (coeffs.q) {
            for (std::size_t i = 0; i < ctx.rule.points.size(); ++i)
                q_int += ctx.rule.weights[i] * coeffs.q(ctx.rule.points[i], t_n);
        }
        rhs[prow] = -(q_int + W / tau * state_prev.p_dofs[k]);
    }

    for (const PlacedWell& w : wells) {
        const int prow = flow.pressure_index(w.host_cell);
        rhs[prow] -= w.well.rate;
    }

    flow.system.matrix = assemble(dim, dim, std::move(trips));
    flow.system.rhs = std::move(rhs);
    return flow;
}

SparseSystem assemble_transport(const PolygonalMesh& mesh, const SpaceLayout& layout,
                                const std::vector<CellContext>& contexts,
                                const CoefficientSet& coeffs,
                                const std::vector<PlacedWell>& wells, const Eigen::VectorXd& u_n,
                                const Eigen::VectorXd& p_n, const Eigen::VectorXd& p_prev,
                                const Eigen::VectorXd& c_prev, double tau, double t_n) {
    if (tau <= 0.0) throw std::invalid_argument("assemble_transport: tau must be positive");

    const int dim = static_cast<int>(layout.concentration_dofs);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    std::vector<Triplet> trips;

    for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
        const CellContext& ctx = contexts[k];
        const Cell& K = mesh.cells[k];
        const int m = ctx.ops.m;

        const Eigen::VectorXd u_loc = gather(u_n, K.edges);
        const Eigen::VectorXd c_loc = gather(c_prev, K.edges);

        const Eigen::MatrixXd Mh = local_Mh(ctx, coeffs);
        Eigen::MatrixXd lhs = Mh / tau;
        lhs += local_Th(ctx, u_loc);
        lhs += local_Dh(ctx, coeffs, u_loc);

        Eigen::VectorXd cell_rhs = Mh * c_loc / tau;

        const double dtp = (p_n[k] - p_prev[k]) / tau;
        cell_rhs -= local_Kh(ctx, coeffs, c_loc) * dtp;

        if (coeffs.has_f()) {
            cell_rhs += local_transport_f(ctx, coeffs, t_n);
        } else {
            const SourceContribution src = local_source_q(ctx, coeffs, t_n);
            lhs += src.reaction;
            cell_rhs += src.transport_rhs;
        }

        for (int j = 0; j < m; ++j) {
            const int row = K.edges[j];
            for (int i = 0; i < m; ++i) trips.push_back({row, K.edges[i], lhs(j, i)});
            rhs[row] += cell_rhs[j];
        }
    }

    // wells: injector cells carry the reaction (q c, z) and the (q c_hat, z)
    // source; producer contributions cancel because c_hat = c at sinks.
    for (const PlacedWell& w : wells) {
        if (w.well.rate <= 0.0) continue;
        const CellContext& ctx = contexts[w.host_cell];
        const Cell& K = mesh.cells[w.host_cell];
        const Eigen::MatrixXd reaction =
            (w.well.rate / ctx.area) *
            (ctx.ops.pi0_c.transpose() * monomial_moments(ctx) * ctx.ops.pi0_c);
        const Eigen::VectorXd src =
            w.well.rate * w.well.injected_concentration * ctx.ops.pi0_c.row(0).transpose();
        for (int j = 0; j < ctx.ops.m; ++j) {
            const int row = K.edges[j];
            for (int i = 0; i < ctx.ops.m; ++i)
                trips.push_back({row, K.edges[i], reaction(j, i)});
            rhs[row] += src[j];
        }
    }

    SparseSystem sys;
    sys.matrix = assemble(dim, dim, std::move(trips));
    sys.rhs = std::move(rhs);
    return sys;
}

SimulationState solve_flow_step(const PolygonalMesh& mesh, const SpaceLayout& layout,
                                const std::vector<CellContext>& contexts,
                                const CoefficientSet& coeffs,
                                const std::vector<PlacedWell>& wells,
                                const SimulationState& state_prev, double tau, double t_n,
                                const SolveOptions& solver) {
    const FlowSystem flow =
        assemble_flow(mesh, layout, contexts, coeffs, wells, state_prev, tau, t_n);
    const Eigen::VectorXd x = solve(flow.system.matrix, flow.system.rhs, solver);

    SimulationState state = state_prev;
    state.t = t_n;
    state.u_dofs = Eigen::VectorXd::Zero(layout.velocity_dofs);
    for (std::size_t e = 0; e < layout.velocity_dofs; ++e)
        if (flow.velocity_index[e] >= 0) state.u_dofs[e] = x[flow.velocity_index[e]];
    state.p_dofs.resize(layout.pressure_dofs);
    for (std::size_t k = 0; k < layout.pressure_dofs; ++k)
        state.p_dofs[k] = x[flow.pressure_index(static_cast<int>(k))];
    return state;
}

std::vector<SimulationState> time_loop(const PolygonalMesh& mesh, const SpaceLayout& layout,
                                       const std::vector<CellContext>& contexts,
                                       const CoefficientSet& coeffs,
                                       const std::vector<PlacedWell>& wells,
                                       const SimulationState& initial,
                                       const TimeLoopConfig& config) {
    if (config.n_steps < 1) throw std::invalid_argument("time_loop: need at least one step");
    if (config.tau <= 0.0) throw std::invalid_argument("time_loop: tau must be positive");

    std::vector<SimulationState> emitted;
    SimulationState state = initial;

    for (int n = 1; n <= config.n_steps; ++n) {
        const double t_n = initial.t + n * config.tau;
        SimulationState next;
        try {
            next = solve_flow_step(mesh, layout, contexts, coeffs, wells, state, config.tau, t_n,
                                   config.solver);

            SparseSystem transport =
                assemble_transport(mesh, layout, contexts, coeffs, wells, next.u_dofs,
                                   next.p_dofs, state.p_dofs, state.c_dofs, config.tau, t_n);
            next.c_dofs = solve(transport.matrix, transport.rhs, config.solver);

            if (config.kh_fixed_point) {
                // optional fixed-point pass on the K_h coefficient: replace the
                // lagged concentration by the latest iterate and re-solve.
                for (int it = 0; it < config.kh_max_iters; ++it) {
                    SparseSystem iter_sys = assemble_transport(
                        mesh, layout, contexts, coeffs, wells, next.u_dofs, next.p_dofs,
                        state.p_dofs, state.c_dofs, config.tau, t_n);
                    // swap in K_h evaluated at the current iterate
                    Eigen::VectorXd correction = Eigen::VectorXd::Zero(iter_sys.rhs.size());
                    for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
                        const Cell& K = mesh.cells[k];
                        const double dtp = (next.p_dofs[k] - state.p_dofs[k]) / config.tau;
                        const Eigen::VectorXd lagged =
                            local_Kh(contexts[k], coeffs, gather(state.c_dofs, K.edges));
                        const Eigen::VectorXd current =
                            local_Kh(contexts[k], coeffs, gather(next.c_dofs, K.edges));
                        for (int j = 0; j < contexts[k].ops.m; ++j)
                            correction[K.edges[j]] += (lagged[j] - current[j]) * dtp;
                    }
                    iter_sys.rhs += correction;
                    const Eigen::VectorXd c_new = solve(iter_sys.matrix, iter_sys.rhs,
                                                        config.solver);
                    const double delta = (c_new - next.c_dofs).lpNorm<Eigen::Infinity>();
                    next.c_dofs = c_new;
                    if (delta < 1e-12) break;
                }
            }
        } catch (const SolverError& err) {
            std::ostringstream msg;
            msg << "time_loop: step " << n << " (t = " << t_n << ") failed: " << err.what();
            throw SolverError(msg.str());
        }
        next.step_index = n;
        state = std::move(next);
        if (config.on_step) config.on_step(state);
        if (config.output_stride > 0 && n % config.output_stride == 0 && n != config.n_steps)
            emitted.push_back(state);
    }
    emitted.push_back(state);
    return emitted;
}

SimulationState set_initial(const PolygonalMesh& mesh, const SpaceLayout& layout,
                            const ScalarField& c0, const ScalarField& p0, const VectorField* u0) {
    SimulationState state;
    state.t = 0.0;
    state.step_index = 0;

    state.c_dofs.resize(layout.concentration_dofs);
    state.u_dofs = Eigen::VectorXd::Zero(layout.velocity_dofs);
    for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
        const Edge& edge = mesh.edges[e];
        const QuadratureRule rule =
            edge_rule(mesh.vertices[edge.v0], mesh.vertices[edge.v1], 8);
        state.c_dofs[e] = rule.integrate(c0) / edge.length;
        if (u0 != nullptr && !layout.velocity_boundary[e]) {
            const Eigen::Vector2d n{edge.normal.x, edge.normal.y};
            state.u_dofs[e] =
                rule.integrate([&](const Point2& x) { return (*u0)(x).dot(n); }) / edge.length;
        }
    }

    state.p_dofs.resize(layout.pressure_dofs);
    for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
        const QuadratureRule rule = polygon_rule(mesh, static_cast<int>(k), 8);
        state.p_dofs[k] = rule.integrate(p0) / mesh.cells[k].area;
    }
    return state;
}

double flow_mass_balance_defect(const PolygonalMesh& mesh,
                                const std::vector<CellContext>& contexts,
                                const CoefficientSet& coeffs, const std::vector<PlacedWell>& wells,
                                const SimulationState& state_prev,
                                const SimulationState& state_new, double tau, double t_n) {
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
        const Eigen::VectorXd c_loc = gather(state_prev.c_dofs, mesh.cells[k].edges);
        const double W = local_Wh(contexts[k], coeffs, c_loc);
        lhs += W * (state_new.p_dofs[k] - state_prev.p_dofs[k]) / tau;
        if (coeffs.q) {
            for (std::size_t i = 0; i < contexts[k].rule.points.size(); ++i)
                rhs += contexts[k].rule.weights[i] * coeffs.q(contexts[k].rule.points[i], t_n);
        }
    }
    for (const PlacedWell& w : wells) rhs += w.well.rate;
    return std::abs(lhs - rhs);
}

// --- config file ---------------------------------------------------------------

SimConfig parse_sim_config(std::istream& is) {
    SimConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);

        if (key == "family") cfg.family = value;
        else if (key == "level") cfg.level = std::stoi(value);
        else if (key == "tau") cfg.tau = std::stod(value);
        else if (key == "T") cfg.T = std::stod(value);
        else if (key == "preset") cfg.preset = value;
        else if (key == "solver_tol") cfg.solver_tol = std::stod(value);
        else if (key == "output_stride") cfg.output_stride = std::stoi(value);
        else if (key == "output_dir") cfg.output_dir = value;
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "kh_fixed_point") cfg.kh_fixed_point = std::stoi(value) != 0;
        else
            throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key '" +
                                     key + "'");
    }
    return cfg;
}

SimConfig load_sim_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_sim_config: cannot open " + path);
    return parse_sim_config(is);
}

}  // namespace vem
