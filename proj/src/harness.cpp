#include "vem/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "vem/rng.hpp"

namespace vem {

// --- Example 1 (manufactured) ----------------------------------------------------

namespace {

double bump(double s) {
    const double w = s * (s - 1.0);
    return w * w;  // s^2 (s-1)^2
}
double bump_d(double s) { return 2.0 * s * (s - 1.0) * (2.0 * s - 1.0); }
double bump_dd(double s) { return 12.0 * s * s - 12.0 * s + 2.0; }

double ex1_c(const Point2& x, double t) { return t * t * (bump(x.x) + bump(x.y)); }

Eigen::Vector2d ex1_u(const Point2& x, double t) {
    return {t * t * bump_d(x.x), t * t * bump_d(x.y)};
}

double ex1_p(const Point2& x, double t) {
    const double c = ex1_c(x, t);
    return -0.5 * c * c - 2.0 * c + (17.0 / 6300.0) * t * t * t * t + (2.0 / 15.0) * t * t;
}

double ex1_dpdt(const Point2& x, double t) {
    const double c = ex1_c(x, t);
    const double c_t = 2.0 * t * (bump(x.x) + bump(x.y));
    return -(c + 2.0) * c_t + (17.0 / 1575.0) * t * t * t + (4.0 / 15.0) * t;
}

double ex1_q(const Point2& x, double t) {
    const double c = ex1_c(x, t);
    const double div_u = t * t * (bump_dd(x.x) + bump_dd(x.y));
    return (c + 2.0) * ex1_dpdt(x, t) + div_u;
}

double ex1_f(const Point2& x, double t) {
    const double c = ex1_c(x, t);
    const double c_t = 2.0 * t * (bump(x.x) + bump(x.y));
    const Eigen::Vector2d u = ex1_u(x, t);
    const double speed = u.norm();
    const double lap_c = t * t * (bump_dd(x.x) + bump_dd(x.y));  // grad c = u
    // div(D(u) grad c) = (0.02 + |u|) lap c + (grad|u|) . u
    double grad_speed_dot_u = 0.0;
    if (speed > 0.0)
        grad_speed_dot_u =
            t * t * (u[0] * u[0] * bump_dd(x.x) + u[1] * u[1] * bump_dd(x.y)) / speed;
    const double diffusion = (0.02 + speed) * lap_c + grad_speed_dot_u;
    return c_t + (c + 2.0) * ex1_dpdt(x, t) + speed * speed - diffusion;
}

}  // namespace

ManufacturedProblem example1() {
    ManufacturedProblem prob;
    prob.T = 0.1;
    prob.domain = AxisRect{0.0, 0.0, 1.0, 1.0};
    prob.exact_c = ex1_c;
    prob.exact_p = ex1_p;
    prob.exact_u = ex1_u;

    CoefficientSet& co = prob.coeffs;
    // The weak form carries the reciprocal mobility A = a^{-1}; the exact
    // fields satisfy u = -(1/(c+2)) grad p, so A(c) = c + 2 here.
    co.A = [](double c, const Point2&) { return c + 2.0; };
    co.b = [](double c, const Point2&) { return c + 2.0; };
    co.d = [](double c, const Point2&) { return c + 2.0; };
    co.phi = [](const Point2&) { return 1.0; };
    co.dispersion = DispersionParams{0.02, 1.0, 1.0};
    co.q = ex1_q;
    co.f = ex1_f;
    return prob;
}

SourceValidation validate_sources(const ManufacturedProblem& problem, int n_samples,
                                  double fd_step, std::uint64_t rng_seed) {
    const CoefficientSet& co = problem.coeffs;
    const double h = fd_step;
    SplitMix64 rng(rng_seed);
    SourceValidation out;

    const auto grad_c_fd = [&](const Point2& x, double t) {
        return Eigen::Vector2d{
            (problem.exact_c({x.x + h, x.y}, t) - problem.exact_c({x.x - h, x.y}, t)) / (2 * h),
            (problem.exact_c({x.x, x.y + h}, t) - problem.exact_c({x.x, x.y - h}, t)) / (2 * h)};
    };
    // dispersive flux D(u) grad c from the exact fields, with the gradient
    // itself finite-differenced (keeps the oracle independent of grad c = u
    // identities the closed forms might exploit)
    const auto flux = [&](const Point2& x, double t) {
        const Eigen::Vector2d u = problem.exact_u(x, t);
        const Eigen::Matrix2d D = dispersion_tensor(u, co.dispersion, co.phi(x));
        return Eigen::Vector2d{D * grad_c_fd(x, t)};
    };

    // displacement-field kinks (|u| = 0) make the dispersive flux merely
    // Lipschitz there; keep FD stencils away from them
    const auto near_kink = [&](const Point2& x) {
        const double margin = 0.02;
        const auto near_set = [margin](double s) {
            return std::abs(s) < margin || std::abs(s - 0.5) < margin ||
                   std::abs(s - 1.0) < margin;
        };
        return near_set(x.x) && near_set(x.y);
    };

    while (out.samples < n_samples) {
        const Point2 x{rng.uniform(problem.domain.x0, problem.domain.x1),
                       rng.uniform(problem.domain.y0, problem.domain.y1)};
        if (near_kink(x)) continue;
        const double t = rng.uniform(0.01, problem.T);
        ++out.samples;

        const double c = problem.exact_c(x, t);
        const Eigen::Vector2d u = problem.exact_u(x, t);

        const double dpdt =
            (problem.exact_p(x, t + h) - problem.exact_p(x, t - h)) / (2 * h);
        const double dcdt =
            (problem.exact_c(x, t + h) - problem.exact_c(x, t - h)) / (2 * h);
        const double div_u = (problem.exact_u({x.x + h, x.y}, t)[0] -
                              problem.exact_u({x.x - h, x.y}, t)[0]) /
                                 (2 * h) +
                             (problem.exact_u({x.x, x.y + h}, t)[1] -
                              problem.exact_u({x.x, x.y - h}, t)[1]) /
                                 (2 * h);
        const double div_flux =
            (flux({x.x + h, x.y}, t)[0] - flux({x.x - h, x.y}, t)[0]) / (2 * h) +
            (flux({x.x, x.y + h}, t)[1] - flux({x.x, x.y - h}, t)[1]) / (2 * h);

        const double q_fd = co.d(c, x) * dpdt + div_u;
        const double f_fd =
            co.phi(x) * dcdt + co.b(c, x) * dpdt + u.dot(grad_c_fd(x, t)) - div_flux;

        out.max_q_defect = std::max(out.max_q_defect, std::abs(q_fd - co.q(x, t)));
        out.max_f_defect = std::max(out.max_f_defect, std::abs(f_fd - co.f(x, t)));
    }
    return out;
}

FieldErrors compute_errors(const PolygonalMesh& mesh, const std::vector<CellContext>& contexts,
                           const SimulationState& state, const ManufacturedProblem& problem,
                           int quad_degree) {
    FieldErrors err;
    const double t = state.t;
    for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
        const CellContext& ctx = contexts[k];
        const Cell& K = mesh.cells[k];

        Eigen::VectorXd u_loc(ctx.ops.m), c_loc(ctx.ops.m);
        for (int i = 0; i < ctx.ops.m; ++i) {
            u_loc[i] = state.u_dofs[K.edges[i]];
            c_loc[i] = state.c_dofs[K.edges[i]];
        }
        const Eigen::Vector2d u_bar = ctx.ops.pi0_velocity * u_loc;
        const Eigen::Vector3d c_coeff = ctx.ops.pi_nabla_c * c_loc;
        const double p_val = state.p_dofs[k];

        const QuadratureRule rule =
            quad_degree == 8 ? ctx.rule : polygon_rule(mesh, static_cast<int>(k), quad_degree);
        for (std::size_t i = 0; i < rule.points.size(); ++i) {
            const Point2& x = rule.points[i];
            const double w = rule.weights[i];
            const Eigen::Vector2d ue = problem.exact_u(x, t);
            const double pe = problem.exact_p(x, t);
            const double ce = problem.exact_c(x, t);
            err.abs_u += w * (ue - u_bar).squaredNorm();
            err.abs_p += w * (pe - p_val) * (pe - p_val);
            const double dc = ce - c_coeff.dot(ctx.monomials(x));
            err.abs_c += w * dc * dc;
            err.norm_u += w * ue.squaredNorm();
            err.norm_p += w * pe * pe;
            err.norm_c += w * ce * ce;
        }
    }
    err.abs_u = std::sqrt(err.abs_u);
    err.abs_p = std::sqrt(err.abs_p);
    err.abs_c = std::sqrt(err.abs_c);
    err.norm_u = std::sqrt(err.norm_u);
    err.norm_p = std::sqrt(err.norm_p);
    err.norm_c = std::sqrt(err.norm_c);
    err.err_u = err.norm_u > 0.0 ? err.abs_u / err.norm_u : err.abs_u;
    err.err_p = err.norm_p > 0.0 ? err.abs_p / err.norm_p : err.abs_p;
    err.err_c = err.norm_c > 0.0 ? err.abs_c / err.norm_c : err.abs_c;
    return err;
}

// --- mesh families ----------------------------------------------------------------

MeshFamily parse_family(const std::string& name) {
    if (name == "square") return MeshFamily::square;
    if (name == "triangle") return MeshFamily::triangle;
    if (name == "concave") return MeshFamily::concave;
    if (name == "voronoi-s") return MeshFamily::voronoi_structured;
    if (name == "voronoi-r") return MeshFamily::voronoi_random;
    throw std::invalid_argument("unknown mesh family '" + name + "'");
}

std::string family_name(MeshFamily family) {
    switch (family) {
        case MeshFamily::square: return "square";
        case MeshFamily::triangle: return "triangle";
        case MeshFamily::concave: return "concave";
        case MeshFamily::voronoi_structured: return "voronoi-s";
        case MeshFamily::voronoi_random: return "voronoi-r";
    }
    return "?";
}

PolygonalMesh build_family_mesh(MeshFamily family, int level, std::uint64_t seed) {
    if (level < 1) throw std::invalid_argument("build_family_mesh: level must be >= 1");
    const int two_pow = 1 << (level - 1);
    switch (family) {
        case MeshFamily::square: return build_square_mesh(4 * two_pow);
        case MeshFamily::triangle: return build_triangular_mesh(2 * two_pow);
        case MeshFamily::concave: return build_concave_mesh(2 * two_pow);
        case MeshFamily::voronoi_structured: {
            const int m = 2 * two_pow;
            return build_voronoi_mesh(m * m, VoronoiMode::structured, 0, seed);
        }
        case MeshFamily::voronoi_random: {
            const int m = 2 * two_pow;
            return build_voronoi_mesh(m * m, VoronoiMode::random, 3, seed);
        }
    }
    throw std::logic_error("unreachable");
}

double convergence_order(double err_prev, double err_cur, double h_prev, double h_cur) {
    return std::log(err_prev / err_cur) / std::log(h_prev / h_cur);
}

ConvergenceStudy run_convergence(MeshFamily family, int levels, double tau0, std::uint64_t seed,
                                 const SolveOptions& solver) {
    if (levels < 2) throw std::invalid_argument("run_convergence: need at least 2 levels");
    if (tau0 <= 0.0) throw std::invalid_argument("run_convergence: tau0 must be positive");

    const ManufacturedProblem problem = example1();

    ConvergenceStudy study;
    study.family = family;
    study.validation = validate_sources(problem);
    if (!study.validation.passed())
        throw std::runtime_error("run_convergence: source validation gate failed");

    for (int level = 1; level <= levels; ++level) {
        const PolygonalMesh mesh = build_family_mesh(family, level, seed);
        const SpaceLayout layout = build_layout(mesh);
        const std::vector<CellContext> contexts = build_cell_contexts(mesh);

        const double tau = tau0 / (1 << (level - 1));
        const int n_steps = static_cast<int>(std::llround(problem.T / tau));

        SimulationState initial = set_initial(
            mesh, layout, [&](const Point2& x) { return problem.exact_c(x, 0.0); },
            [&](const Point2& x) { return problem.exact_p(x, 0.0); });

        TimeLoopConfig cfg;
        cfg.tau = tau;
        cfg.n_steps = n_steps;
        cfg.solver = solver;

        ConvergenceRow row;
        row.h = mesh.mesh_size;
        row.tau = tau;
        try {
            const std::vector<SimulationState> states =
                time_loop(mesh, layout, contexts, problem.coeffs, {}, initial, cfg);
            const FieldErrors err = compute_errors(mesh, contexts, states.back(), problem);
            row.err_u = err.err_u;
            row.err_p = err.err_p;
            row.err_c = err.err_c;
        } catch (const SolverError& err) {
            // annotate the failed level and stop refining
            row.err_u = row.err_p = row.err_c = std::nan("");
            row.order_u = row.order_p = row.order_c = std::nan("");
            study.note = "level " + std::to_string(level) + ": " + err.what();
            study.rows.push_back(row);
            break;
        }
        if (study.rows.empty()) {
            row.order_u = row.order_p = row.order_c = std::nan("");
        } else {
            const ConvergenceRow& prev = study.rows.back();
            row.order_u = convergence_order(prev.err_u, row.err_u, prev.h, row.h);
            row.order_p = convergence_order(prev.err_p, row.err_p, prev.h, row.h);
            row.order_c = convergence_order(prev.err_c, row.err_c, prev.h, row.h);
        }
        study.rows.push_back(row);
    }
    return study;
}

void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study) {
    os << "h,tau,err_u,order_u,err_p,order_p,err_c,order_c\n";
    char buf[256];
    for (const ConvergenceRow& r : study.rows) {
        const auto order = [](double v) {
            if (std::isnan(v)) return std::string("-");
            char b[32];
            std::snprintf(b, sizeof b, "%.4f", v);
            return std::string(b);
        };
        std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6e,%s,%.6e,%s,%.6e,%s\n", r.h, r.tau, r.err_u,
                      order(r.order_u).c_str(), r.err_p, order(r.order_p).c_str(), r.err_c,
                      order(r.order_c).c_str());
        os << buf;
    }
}

std::string convergence_csv(const ConvergenceStudy& study) {
    std::ostringstream os;
    write_convergence_csv(os, study);
    return os.str();
}

// --- field export -------------------------------------------------------------------

namespace {

struct CellFields {
    double c_centroid;
    double p;
    Eigen::Vector2d u;
};

CellFields cell_fields(const PolygonalMesh& mesh, const std::vector<CellContext>& contexts,
                       const SimulationState& state, int k) {
    const CellContext& ctx = contexts[k];
    const Cell& K = mesh.cells[k];
    Eigen::VectorXd u_loc(ctx.ops.m), c_loc(ctx.ops.m);
    for (int i = 0; i < ctx.ops.m; ++i) {
        u_loc[i] = state.u_dofs[K.edges[i]];
        c_loc[i] = state.c_dofs[K.edges[i]];
    }
    CellFields f;
    f.c_centroid = (ctx.ops.pi_nabla_c * c_loc)[0];  // monomials vanish at the centroid
    f.p = state.p_dofs[k];
    f.u = ctx.ops.pi0_velocity * u_loc;
    return f;
}

}  // namespace

void export_field(const PolygonalMesh& mesh, const std::vector<CellContext>& contexts,
                  const SimulationState& state, FieldFormat format, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("export_field: cannot open " + path);
    char buf[256];

    if (format == FieldFormat::csv) {
        os << "x,y,c,p,ux,uy\n";
        for (std::size_t k = 0; k < mesh.cell_count(); ++k) {
            const CellFields f = cell_fields(mesh, contexts, state, static_cast<int>(k));
            const Point2& xc = mesh.cells[k].centroid;
            std::snprintf(buf, sizeof buf, "%.9e,%.9e,%.9e,%.9e,%.9e,%.9e\n", xc.x, xc.y,
                          f.c_centroid, f.p, f.u[0], f.u[1]);
            os << buf;
        }
        return;
    }

    os << "# vtk DataFile Version 3.0\n";
    os << "vem-miscible fields t=" << state.t << "\n";
    os << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << mesh.vertex_count() << " double\n";
    for (const Point2& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "%.9e %.9e 0\n", v.x, v.y);
        os << buf;
    }
    std::size_t list_size = 0;
    for (const Cell& c : mesh.cells) list_size += c.vertices.size() + 1;
    os << "CELLS " << mesh.cell_count() << ' ' << list_size << "\n";
    for (const Cell& c : mesh.cells) {
        os << c.vertices.size();
        for (int v : c.vertices) os << ' ' << v;
        os << "\n";
    }
    os << "CELL_TYPES " << mesh.cell_count() << "\n";
    for (std::size_t k = 0; k < mesh.cell_count(); ++k) os << "7\n";  // VTK_POLYGON

    os << "CELL_DATA " << mesh.cell_count() << "\n";
    os << "SCALARS concentration double 1\nLOOKUP_TABLE default\n";
    std::vector<CellFields> fields;
    fields.reserve(mesh.cell_count());
    for (std::size_t k = 0; k < mesh.cell_count(); ++k)
        fields.push_back(cell_fields(mesh, contexts, state, static_cast<int>(k)));
    for (const CellFields& f : fields) {
        std::snprintf(buf, sizeof buf, "%.9e\n", f.c_centroid);
        os << buf;
    }
    os << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (const CellFields& f : fields) {
        std::snprintf(buf, sizeof buf, "%.9e\n", f.p);
        os << buf;
    }
    os << "VECTORS velocity double\n";
    for (const CellFields& f : fields) {
        std::snprintf(buf, sizeof buf, "%.9e %.9e 0\n", f.u[0], f.u[1]);
        os << buf;
    }
}

FieldSampler::FieldSampler(const PolygonalMesh& mesh, const std::vector<CellContext>& contexts,
                           const SimulationState& state)
    : mesh_(mesh), contexts_(contexts), state_(state) {}

double FieldSampler::concentration(const Point2& x) const {
    const int k = mesh_.locate_cell(x);
    if (k < 0) return std::nan("");
    const CellContext& ctx = contexts_[k];
    const Cell& K = mesh_.cells[k];
    Eigen::VectorXd c_loc(ctx.ops.m);
    for (int i = 0; i < ctx.ops.m; ++i) c_loc[i] = state_.c_dofs[K.edges[i]];
    return (ctx.ops.pi_nabla_c * c_loc).dot(ctx.monomials(x));
}

// --- well tests ------------------------------------------------------------------------

AxisRect well_test_domain() { return AxisRect{0.0, 0.0, 1000.0, 1000.0}; }

CoefficientSet well_test_coefficients(int test_id) {
    if (test_id < 1 || test_id > 4)
        throw std::invalid_argument("well_test_coefficients: test_id must be in 1..4");

    const double M = (test_id == 2 || test_id == 4) ? 41.0 : 1.0;
    const bool split_permeability = test_id >= 3;
    const auto permeability = [split_permeability](const Point2& x) {
        if (!split_permeability) return 1000.0;
        return x.y < 500.0 ? 1000.0 : 400.0;  // high-permeability lower half
    };

    const double phi = 0.1;
    const double c_phi = 1e-6;  // compressibility of the medium

    CoefficientSet co;
    co.A = [permeability, M](double c, const Point2& x) {
        const double cc = std::clamp(c, 0.0, 1.0);
        const double mobility =
            permeability(x) * std::pow(1.0 + (std::pow(M, 0.25) - 1.0) * cc, 4.0);
        return 1.0 / mobility;
    };
    // single compressibility factor for both components: d = phi*c_phi, b = 0
    co.b = [phi, c_phi](double c, const Point2&) {
        return coeff_d_b(c, c_phi, c_phi, phi).second;
    };
    co.d = [phi, c_phi](double c, const Point2&) {
        return coeff_d_b(c, c_phi, c_phi, phi).first;
    };
    co.phi = [phi](const Point2&) { return phi; };
    co.dispersion = DispersionParams{1.0, 0.0, 0.0};
    return co;
}

std::vector<Well> well_test_wells() {
    return {Well{{1000.0, 1000.0}, 30.0, 1.0}, Well{{0.0, 0.0}, -30.0, 0.0}};
}

double diagonal_symmetry_metric(const PolygonalMesh& mesh, const Eigen::VectorXd& c_dofs,
                                const AxisRect& domain) {
    // pair edges through midpoint reflection across the diagonal
    const double scale = std::max(domain.width(), domain.height());
    const double tol = 1e-7 * scale;
    std::map<std::pair<long long, long long>, std::vector<int>> buckets;
    const auto key = [tol](const Point2& p) {
        return std::make_pair(static_cast<long long>(std::floor(p.x / tol)),
                              static_cast<long long>(std::floor(p.y / tol)));
    };
    for (std::size_t e = 0; e < mesh.edge_count(); ++e)
        buckets[key(mesh.edges[e].midpoint)].push_back(static_cast<int>(e));

    double metric = 0.0;
    for (std::size_t e = 0; e < mesh.edge_count(); ++e) {
        const Point2& m = mesh.edges[e].midpoint;
        const Point2 swapped{domain.x0 + (m.y - domain.y0), domain.y0 + (m.x - domain.x0)};
        int partner = -1;
        const auto [ix, iy] = key(swapped);
        for (long long dx = -1; dx <= 1 && partner < 0; ++dx)
            for (long long dy = -1; dy <= 1 && partner < 0; ++dy) {
                auto it = buckets.find({ix + dx, iy + dy});
                if (it == buckets.end()) continue;
                for (int cand : it->second)
                    if (distance(mesh.edges[cand].midpoint, swapped) <= tol) {
                        partner = cand;
                        break;
                    }
            }
        if (partner < 0)
            throw std::invalid_argument("diagonal_symmetry_metric: mesh not swap-symmetric");
        metric = std::max(metric, std::abs(c_dofs[static_cast<int>(e)] - c_dofs[partner]));
    }
    return metric;
}

double front_distance(const FieldSampler& sampler, const Point2& origin, const Point2& direction,
                      double max_distance, double level) {
    const Point2 dir = direction / norm(direction);
    const double step = max_distance / 400.0;
    double prev_r = step * 1e-3;
    double prev_v = sampler.concentration(origin + dir * prev_r);
    if (std::isnan(prev_v) || prev_v < level) return -1.0;
    for (double r = step; r <= max_distance; r += step) {
        const double v = sampler.concentration(origin + dir * r);
        if (std::isnan(v)) break;
        if ((prev_v - level) * (v - level) <= 0.0) {
            // bisect within [prev_r, r]
            double lo = prev_r, hi = r;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double vm = sampler.concentration(origin + dir * mid);
                if ((prev_v - level) * (vm - level) <= 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev_r = r;
        prev_v = v;
    }
    return -1.0;
}

double level_set_radius_rel_std(const FieldSampler& sampler, const Point2& origin,
                                const AxisRect& domain, double level, int n_rays) {
    // admissible angular window: directions that immediately enter the domain
    const double diag = std::hypot(domain.width(), domain.height());
    std::vector<double> radii;
    const double theta0 = std::atan2(domain.y0 + 0.5 * domain.height() - origin.y,
                                     domain.x0 + 0.5 * domain.width() - origin.x);
    for (int k = 0; k < n_rays; ++k) {
        // quarter window around the inward direction for corner wells
        const double theta = theta0 + (k + 0.5) / n_rays * (M_PI / 2.0) - M_PI / 4.0;
        const Point2 dir{std::cos(theta), std::sin(theta)};
        const Point2 probe = origin + dir * (1e-6 * diag);
        if (!domain.contains(probe)) continue;
        const double r = front_distance(sampler, origin, dir, diag, level);
        if (r > 0.0) radii.push_back(r);
    }
    if (radii.size() < 3)
        throw std::runtime_error("level_set_radius_rel_std: level set not found on enough rays");
    double mean = 0.0;
    for (double r : radii) mean += r;
    mean /= radii.size();
    double var = 0.0;
    for (double r : radii) var += (r - mean) * (r - mean);
    var /= radii.size();
    return std::sqrt(var) / mean;
}

WellTestResult run_well_test(int test_id, const std::string& mesh_kind, double tau_days,
                             const std::string& out_dir) {
    const AxisRect domain = well_test_domain();
    WellTestResult result;
    if (mesh_kind == "triangle512")
        result.mesh = build_triangular_mesh(16, domain);
    else if (mesh_kind == "square32")
        result.mesh = build_square_mesh(32, domain);
    else
        throw std::invalid_argument("run_well_test: mesh_kind must be triangle512 or square32");

    const SpaceLayout layout = build_layout(result.mesh);
    result.contexts = build_cell_contexts(result.mesh);
    const CoefficientSet coeffs = well_test_coefficients(test_id);
    const std::vector<PlacedWell> wells = place_wells(result.mesh, well_test_wells());

    SimulationState initial =
        set_initial(result.mesh, layout, [](const Point2&) { return 0.0; },
                    [](const Point2&) { return 3000.0; });  // psia

    const int step_3y = static_cast<int>(std::llround(1080.0 / tau_days));
    const int step_10y = static_cast<int>(std::llround(3600.0 / tau_days));

    TimeLoopConfig cfg;
    cfg.tau = tau_days;
    cfg.n_steps = step_10y;
    cfg.solver.tol = 1e-9;  // psia-scale saddle systems; see README
    cfg.on_step = [&](const SimulationState& s) {
        if (s.step_index == step_3y) result.at_3_years = s;
    };
    const std::vector<SimulationState> states =
        time_loop(result.mesh, layout, result.contexts, coeffs, wells, initial, cfg);
    result.at_10_years = states.back();

    if (test_id <= 2) {
        result.symmetry_metric =
            diagonal_symmetry_metric(result.mesh, result.at_10_years.c_dofs, domain);
    }
    const FieldSampler sampler(result.mesh, result.contexts, result.at_3_years);
    result.circularity_rel_std =
        level_set_radius_rel_std(sampler, {1000.0, 1000.0}, domain, 0.5);

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const std::string base =
            out_dir + "/test" + std::to_string(test_id) + "_" + mesh_kind;
        export_field(result.mesh, result.contexts, result.at_3_years, FieldFormat::csv,
                     base + "_t1080.csv");
        export_field(result.mesh, result.contexts, result.at_3_years, FieldFormat::vtk,
                     base + "_t1080.vtk");
        export_field(result.mesh, result.contexts, result.at_10_years, FieldFormat::csv,
                     base + "_t3600.csv");
        export_field(result.mesh, result.contexts, result.at_10_years, FieldFormat::vtk,
                     base + "_t3600.vtk");
    }
    return result;
}

int run_from_config(const SimConfig& cfg) {
    if (cfg.preset == "example1" || cfg.preset == "custom") {
        const MeshFamily family = parse_family(cfg.family);
        const PolygonalMesh mesh = build_family_mesh(family, cfg.level, cfg.seed);
        const SpaceLayout layout = build_layout(mesh);
        const std::vector<CellContext> contexts = build_cell_contexts(mesh);

        ManufacturedProblem problem = example1();
        if (cfg.preset == "custom") {
            // neutral coefficients, zero data: a solver smoke configuration
            problem.coeffs.q = nullptr;
            problem.coeffs.f = nullptr;
            problem.coeffs.A = [](double, const Point2&) { return 1.0; };
            problem.coeffs.b = [](double, const Point2&) { return 0.0; };
            problem.coeffs.d = [](double, const Point2&) { return 1.0; };
        } else {
            const SourceValidation gate = validate_sources(problem);
            if (!gate.passed()) {
                std::cerr << "source validation gate failed (q defect " << gate.max_q_defect
                          << ", f defect " << gate.max_f_defect << ")\n";
                return 1;
            }
        }

        const int n_steps = static_cast<int>(std::llround(cfg.T / cfg.tau));
        if (std::abs(n_steps * cfg.tau - cfg.T) > 1e-9 * cfg.T) {
            std::cerr << "tau must divide T into an integer number of steps\n";
            return 1;
        }

        SimulationState initial = set_initial(
            mesh, layout, [&](const Point2& x) { return problem.exact_c(x, 0.0); },
            [&](const Point2& x) { return problem.exact_p(x, 0.0); });

        TimeLoopConfig loop;
        loop.tau = cfg.tau;
        loop.n_steps = n_steps;
        loop.solver.tol = cfg.solver_tol;
        loop.kh_fixed_point = cfg.kh_fixed_point;
        loop.output_stride = cfg.output_stride;
        const std::vector<SimulationState> states =
            time_loop(mesh, layout, contexts, problem.coeffs, {}, initial, loop);

        std::filesystem::create_directories(cfg.output_dir);
        int snapshot = 0;
        for (const SimulationState& s : states) {
            const std::string base =
                cfg.output_dir + "/fields_" + std::to_string(snapshot++);
            export_field(mesh, contexts, s, FieldFormat::csv, base + ".csv");
            export_field(mesh, contexts, s, FieldFormat::vtk, base + ".vtk");
        }
        if (cfg.preset == "example1") {
            const FieldErrors err = compute_errors(mesh, contexts, states.back(), problem);
            std::printf("h=%.6f tau=%.6f err_u=%.6e err_p=%.6e err_c=%.6e\n", mesh.mesh_size,
                        cfg.tau, err.err_u, err.err_p, err.err_c);
        }
        return 0;
    }

    if (cfg.preset.rfind("test", 0) == 0 && cfg.preset.size() == 5) {
        const int test_id = cfg.preset[4] - '0';
        const std::string mesh_kind = cfg.family == "triangle" ? "triangle512" : "square32";
        const double tau_days = cfg.tau > 1.0 ? cfg.tau : 36.0;
        run_well_test(test_id, mesh_kind, tau_days, cfg.output_dir);
        return 0;
    }

    std::cerr << "unknown preset '" << cfg.preset << "'\n";
    return 1;
}

}  // namespace vem
