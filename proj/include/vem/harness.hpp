#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vem/system.hpp"

namespace vem {

/// Manufactured problem with closed-form exact fields and matching sources for
/// the generalized system (gravity-like gamma and direct transport source f).
struct ManufacturedProblem {
    CoefficientSet coeffs;  ///< includes the derived q and f
    double T = 0.1;
    AxisRect domain;

    std::function<double(const Point2&, double)> exact_c;
    std::function<double(const Point2&, double)> exact_p;
    std::function<Eigen::Vector2d(const Point2&, double)> exact_u;
};

/// The ideal test case: polynomial concentration/velocity, pressure quadratic
/// in c, coefficient laws c+2, isotropic dispersion |u| + 0.02 on (0,1)^2.
ManufacturedProblem example1();

struct SourceValidation {
    double max_q_defect = 0.0;
    double max_f_defect = 0.0;
    int samples = 0;
    bool passed(double tol = 1e-6) const { return max_q_defect <= tol && max_f_defect <= tol; }
};

/// Checks the closed-form q and f against central finite differences of the
/// exact fields at random interior samples. Gate for every convergence run.
SourceValidation validate_sources(const ManufacturedProblem& problem, int n_samples = 1000,
                                  double fd_step = 1e-5, std::uint64_t rng_seed = 20240901);

struct FieldErrors {
    // relative L2 errors (the convention of the reference tables)
    double err_u = 0.0;
    double err_p = 0.0;
    double err_c = 0.0;
    // absolute L2 errors and the exact-solution norms at state.t
    double abs_u = 0.0, abs_p = 0.0, abs_c = 0.0;
    double norm_u = 0.0, norm_p = 0.0, norm_c = 0.0;
};

/// L2 errors of the projected discrete fields against the exact solution at
/// state.t, integrated cellwise with the given quadrature exactness. The
/// relative members fall back to the absolute ones when the exact norm
/// vanishes.
FieldErrors compute_errors(const PolygonalMesh& mesh, const std::vector<CellContext>& contexts,
                           const SimulationState& state, const ManufacturedProblem& problem,
                           int quad_degree = 8);

enum class MeshFamily { square, triangle, concave, voronoi_structured, voronoi_random };

MeshFamily parse_family(const std::string& name);
std::string family_name(MeshFamily family);

/// Mesh of the given family at refinement level 1,2,...; `seed` feeds the
/// random Voronoi family only.
PolygonalMesh build_family_mesh(MeshFamily family, int level, std::uint64_t seed = 1);

struct ConvergenceRow {
    double h = 0.0;
    double tau = 0.0;
    double err_u = 0.0, order_u = 0.0;
    double err_p = 0.0, order_p = 0.0;
    double err_c = 0.0, order_c = 0.0;  ///< orders NaN on the first row
};

/// log(err_prev/err_cur) / log(h_prev/h_cur); the plain log2 error ratio when
/// h halves exactly.
double convergence_order(double err_prev, double err_cur, double h_prev, double h_cur);

struct ConvergenceStudy {
    MeshFamily family{};
    std::vector<ConvergenceRow> rows;
    SourceValidation validation;
    std::string note;  ///< diagnostic when a level's solve failed
};

/// Runs the manufactured convergence study: tau halves with every level and
/// reaches T in an integer number of steps. The source-validation gate runs
/// first and failure aborts the study.
ConvergenceStudy run_convergence(MeshFamily family, int levels, double tau0,
                                 std::uint64_t seed = 1,
                                 const SolveOptions& solver = {});

void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study);
std::string convergence_csv(const ConvergenceStudy& study);

// --- field export ---------------------------------------------------------------

enum class FieldFormat { csv, vtk };

/// CSV: one row per cell (centroid, concentration at centroid, pressure,
/// velocity). VTK: legacy ASCII unstructured polygons with cell data.
void export_field(const PolygonalMesh& mesh, const std::vector<CellContext>& contexts,
                  const SimulationState& state, FieldFormat format, const std::string& path);

/// Point evaluation of the reconstructed fields.
class FieldSampler {
  public:
    FieldSampler(const PolygonalMesh& mesh, const std::vector<CellContext>& contexts,
                 const SimulationState& state);
    /// piecewise-affine concentration; NaN outside the mesh
    double concentration(const Point2& x) const;

  private:
    const PolygonalMesh& mesh_;
    const std::vector<CellContext>& contexts_;
    const SimulationState& state_;
};

// --- well tests (realistic case) -------------------------------------------------

CoefficientSet well_test_coefficients(int test_id);
std::vector<Well> well_test_wells();
AxisRect well_test_domain();

struct WellTestResult {
    PolygonalMesh mesh;
    std::vector<CellContext> contexts;
    SimulationState at_3_years;   ///< t = 1080 days
    SimulationState at_10_years;  ///< t = 3600 days
    double symmetry_metric = -1.0;       ///< max |c(x,y) - c(y,x)|; square meshes only
    double circularity_rel_std = -1.0;   ///< c = 0.5 level-set radius spread at 3 years
};

/// Runs one of the four benchmark well tests on `mesh_kind` in
/// {triangle512, square32}, exporting concentration snapshots at both
/// checkpoint times into out_dir (empty = no export).
WellTestResult run_well_test(int test_id, const std::string& mesh_kind, double tau_days = 36.0,
                             const std::string& out_dir = "");

/// max |c(x,y) - c(y,x)| over the edge pairing induced by swapping coordinates;
/// requires a swap-symmetric mesh.
double diagonal_symmetry_metric(const PolygonalMesh& mesh, const Eigen::VectorXd& c_dofs,
                                const AxisRect& domain);

/// Relative standard deviation of the c = `level` crossing radius along rays
/// from `origin`.
double level_set_radius_rel_std(const FieldSampler& sampler, const Point2& origin,
                                const AxisRect& domain, double level, int n_rays = 25);

/// Distance from `origin` along `direction` at which c crosses `level`
/// (-1 when no crossing is found).
double front_distance(const FieldSampler& sampler, const Point2& origin, const Point2& direction,
                      double max_distance, double level);

/// Executes a parsed simulation config (harness presets + system time loop).
/// Returns the process exit code contract: 0 only if all gates pass.
int run_from_config(const SimConfig& cfg);

}  // namespace vem
