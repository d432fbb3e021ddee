#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vem/forms.hpp"
#include "vem/linalg.hpp"

namespace vem {

struct SimulationState {
    Eigen::VectorXd u_dofs;
    Eigen::VectorXd p_dofs;
    Eigen::VectorXd c_dofs;
    double t = 0.0;
    int step_index = 0;
};

struct SparseSystem {
    CsrMatrix matrix;
    Eigen::VectorXd rhs;
    std::vector<std::pair<int, double>> constrained;  ///< eliminated (dof, value)
};

/// Flow saddle-point system over (u, p). Unknown ordering: free (interior)
/// velocity DOFs first, then all pressure DOFs. Boundary fluxes are eliminated
/// to honor u.n = 0.
struct FlowSystem {
    SparseSystem system;
    std::vector<int> velocity_index;  ///< edge -> system row, -1 if constrained
    int n_free_velocity = 0;

    int pressure_index(int cell) const { return n_free_velocity + cell; }
};

struct Well {
    Point2 location;
    double rate = 0.0;                    ///< positive injects, negative produces
    double injected_concentration = 0.0;  ///< used at injectors only
};

struct PlacedWell {
    Well well;
    int host_cell = -1;
};

/// Distributes each well over the unique cell containing its location
/// (boundary/corner locations snap to the lowest incident cell id).
std::vector<PlacedWell> place_wells(const PolygonalMesh& mesh, const std::vector<Well>& wells);

/// State-independent per-cell data, built once per mesh and reused by every
/// assembly pass.
std::vector<CellContext> build_cell_contexts(const PolygonalMesh& mesh, int quad_degree = 8);

FlowSystem assemble_flow(const PolygonalMesh& mesh, const SpaceLayout& layout,
                         const std::vector<CellContext>& contexts, const CoefficientSet& coeffs,
                         const std::vector<PlacedWell>& wells, const SimulationState& state_prev,
                         double tau, double t_n);

SparseSystem assemble_transport(const PolygonalMesh& mesh, const SpaceLayout& layout,
                                const std::vector<CellContext>& contexts,
                                const CoefficientSet& coeffs,
                                const std::vector<PlacedWell>& wells, const Eigen::VectorXd& u_n,
                                const Eigen::VectorXd& p_n, const Eigen::VectorXd& p_prev,
                                const Eigen::VectorXd& c_prev, double tau, double t_n);

/// Solves the flow step and writes (u, p) at t_n into a fresh state.
SimulationState solve_flow_step(const PolygonalMesh& mesh, const SpaceLayout& layout,
                                const std::vector<CellContext>& contexts,
                                const CoefficientSet& coeffs,
                                const std::vector<PlacedWell>& wells,
                                const SimulationState& state_prev, double tau, double t_n,
                                const SolveOptions& solver = {});

struct TimeLoopConfig {
    double tau = 0.0;
    int n_steps = 0;
    SolveOptions solver;
    bool kh_fixed_point = false;  ///< re-assemble K_h with the latest c iterate
    int kh_max_iters = 5;
    int output_stride = 0;  ///< also emit every k-th intermediate state when > 0
    std::function<void(const SimulationState&)> on_step;  ///< called after every step
};

/// Backward-Euler decoupled scheme: per step, flow solve with lagged
/// concentration, then the linear transport solve with the fresh velocity.
/// Returns the emitted states (final state always included).
std::vector<SimulationState> time_loop(const PolygonalMesh& mesh, const SpaceLayout& layout,
                                       const std::vector<CellContext>& contexts,
                                       const CoefficientSet& coeffs,
                                       const std::vector<PlacedWell>& wells,
                                       const SimulationState& initial,
                                       const TimeLoopConfig& config);

using ScalarField = std::function<double(const Point2&)>;
using VectorField = std::function<Eigen::Vector2d(const Point2&)>;

/// DOF interpolation of initial data: edge means for c0, cell means for p0,
/// edge-normal means for an optional analytic u0 (zero otherwise).
SimulationState set_initial(const PolygonalMesh& mesh, const SpaceLayout& layout,
                            const ScalarField& c0, const ScalarField& p0,
                            const VectorField* u0 = nullptr);

/// | sum_K W_h d_t p - int q | of the flow equation at one accepted step; the
/// divergence terms telescope to the boundary where u.n = 0.
double flow_mass_balance_defect(const PolygonalMesh& mesh,
                                const std::vector<CellContext>& contexts,
                                const CoefficientSet& coeffs, const std::vector<PlacedWell>& wells,
                                const SimulationState& state_prev,
                                const SimulationState& state_new, double tau, double t_n);

// --- configuration file (key=value) -------------------------------------------

struct SimConfig {
    std::string family = "square";  ///< square|triangle|concave|voronoi-s|voronoi-r
    int level = 1;
    double tau = 0.02;
    double T = 0.1;
    std::string preset = "example1";  ///< example1|test1..test4|custom
    double solver_tol = 1e-11;
    int output_stride = 0;
    std::string output_dir = ".";
    std::uint64_t seed = 1;
    bool kh_fixed_point = false;
};

SimConfig parse_sim_config(std::istream& is);
SimConfig load_sim_config(const std::string& path);

}  // namespace vem
