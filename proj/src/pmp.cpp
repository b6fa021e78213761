#include "pmpd/pmp.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pmpd::pmp {
namespace {

void require_cells(const Mesh& mesh, std::size_t size, const char* what) {
    if (size != mesh.num_cells()) {
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(mesh.num_cells()) +
                                    " cell values, got " + std::to_string(size));
    }
}

double finite_g(const integrand::CostIntegrand& g, double v, std::size_t cell) {
    const double gv = g.eval(v);
    if (gv == integrand::kInfinity) {
        throw fem::InfeasibleControl("control value " + std::to_string(v) + " in cell " + std::to_string(cell) +
                                     " is outside dom g (" + g.name() + ")");
    }
    return gv;
}

// Sum of phi over a sorted cell set, in index order.
double sum_over(std::span<const double> phi, const CellSet& set) {
    double s = 0.0;
    for (const auto c : set.cells) s += phi[c];
    return s;
}

// Step from `current` to u + chi_B (ut - u). The objective change is
// assembled from the state of the control change (linearity), which avoids
// subtracting two nearly equal objective values.
Iterate switched_iterate(const ControlProblem& problem, const Iterate& current, const ControlField& utilde,
                         const CellSet& set, std::span<const double> misfit_load) {
    const auto& mesh = problem.mesh();
    const auto& g = problem.integrand();

    ControlField du{Vector(mesh.num_cells(), 0.0)};
    long double cost_change = 0.0L;
    for (const auto c : set.cells) {
        du.values[c] = utilde.values[c] - current.u.values[c];
        cost_change += finite_g(g, utilde.values[c], c) - finite_g(g, current.u.values[c], c);
    }
    const NodalField dy = problem.discretization().solve(fem::control_load(mesh, du));

    long double linear = 0.0L;
    for (std::size_t i = 0; i < dy.values.size(); ++i) linear += static_cast<long double>(dy.values[i]) * misfit_load[i];
    const double quadratic = 0.5 * fem::mass_inner(problem.discretization().mass(), dy.values, dy.values);
    const double delta_j =
        static_cast<double>(linear) + quadratic + static_cast<double>(cost_change * mesh.cell_area());

    Iterate next{switch_on_set(current.u, utilde, set), current.y, current.J + delta_j};
    for (std::size_t i = 0; i < dy.values.size(); ++i) next.y.values[i] += dy.values[i];
    return next;
}

}  // namespace

void AlgorithmConfig::validate() const {
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0,1), got " + std::to_string(beta));
    if (!(sigma > 0.0 && sigma < 1.0)) {
        throw std::invalid_argument("sigma must lie in (0,1), got " + std::to_string(sigma));
    }
    if (!(delta_tol >= 0.0)) throw std::invalid_argument("delta_tol must be nonnegative");
    if (max_outer == 0) throw std::invalid_argument("max_outer must be positive");
    if (!(solver_rel_tol > 0.0)) throw std::invalid_argument("solver_rel_tol must be positive");
}

std::string_view to_string(Termination reason) {
    switch (reason) {
        case Termination::residual_tol: return "residual_tol";
        case Termination::mesh_resolution: return "mesh_resolution";
        case Termination::max_outer: return "max_outer";
    }
    return "unknown";
}

std::string_view to_string(StepMode mode) {
    switch (mode) {
        case StepMode::pmp_armijo: return "pmp-armijo";
        case StepMode::full_step: return "full-step";
    }
    return "unknown";
}

ControlProblem::ControlProblem(Mesh mesh, std::shared_ptr<const integrand::CostIntegrand> g,
                               const std::function<double(double, double)>& target,
                               const DiscretizationOptions& options)
    : disc_(std::move(mesh), options.solver, options.mass), g_(std::move(g)) {
    if (!g_) throw std::invalid_argument("ControlProblem: missing cost integrand");
    target_ = fem::interpolate_target(disc_.mesh(), target);
    if (options.target_boundary == TargetBoundary::zero) {
        for (mesh::VertexIndex v = 0; v < target_.values.size(); ++v) {
            if (disc_.mesh().on_boundary(v)) target_.values[v] = 0.0;
        }
    }
}

double ControlProblem::objective(const NodalField& y, const ControlField& u) const {
    return fem::eval_objective(mesh(), disc_.mass(), y, target_, u, *g_);
}

Iterate make_iterate(const ControlProblem& problem, ControlField u) {
    require_cells(problem.mesh(), u.values.size(), "make_iterate");
    fem::control_cost(problem.mesh(), u, problem.integrand());
    Iterate it{std::move(u), {}, 0.0};
    it.y = problem.discretization().solve_state(it.u);
    it.J = problem.objective(it.y, it.u);
    return it;
}

ControlField candidate_control(const Mesh& mesh, const NodalField& p, const integrand::CostIntegrand& g) {
    const Vector pbar = fem::cell_average(mesh, p);
    ControlField ut{Vector(mesh.num_cells())};
    for (std::size_t c = 0; c < pbar.size(); ++c) ut.values[c] = g.hamiltonian_argmin(pbar[c]).v;
    return ut;
}

Vector phi_cells(const Mesh& mesh, const ControlField& u, const ControlField& utilde, const NodalField& p,
                 const integrand::CostIntegrand& g) {
    require_cells(mesh, u.values.size(), "phi_cells");
    require_cells(mesh, utilde.values.size(), "phi_cells");
    const Vector pbar = fem::cell_average(mesh, p);
    Vector phi(mesh.num_cells());
    for (std::size_t c = 0; c < phi.size(); ++c) {
        const double mu = integrand::hamiltonian(u.values[c], pbar[c], finite_g(g, u.values[c], c));
        const double mt = integrand::hamiltonian(utilde.values[c], pbar[c], finite_g(g, utilde.values[c], c));
        phi[c] = mesh.cell_area() * (mt - mu);
    }
    return phi;
}

double rho(std::span<const double> phi) {
    double s = 0.0;
    for (const double v : phi) s += v;
    return s;
}

std::optional<CellSet> select_set(std::span<const double> phi, double t, const Mesh& mesh) {
    require_cells(mesh, phi.size(), "select_set");
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("select_set: t must lie in (0,1]");
    const double total = rho(phi);
    if (!(total < 0.0)) throw std::invalid_argument("select_set: requires sum of phi < 0");

    // relative slack absorbs rounding in t * |Omega| / |T| when it is an integer
    const auto max_cells =
        static_cast<std::size_t>(std::floor(t * mesh.domain_area() / mesh.cell_area() * (1.0 + 1e-12)));
    if (max_cells == 0) return std::nullopt;

    std::vector<CellIndex> order;
    for (CellIndex c = 0; c < phi.size(); ++c) {
        if (phi[c] < 0.0) order.push_back(c);
    }
    const std::size_t take = std::min(max_cells, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](CellIndex a, CellIndex b) { return phi[a] < phi[b] || (phi[a] == phi[b] && a < b); });
    order.resize(take);
    std::sort(order.begin(), order.end());

    CellSet set{std::move(order), 0.0};
    set.total_area = static_cast<double>(set.size()) * mesh.cell_area();
    if (set.empty() || !(sum_over(phi, set) <= t * total)) return std::nullopt;
    return set;
}

ControlField switch_on_set(const ControlField& u, const ControlField& utilde, const CellSet& set) {
    if (u.values.size() != utilde.values.size()) throw std::invalid_argument("switch_on_set: size mismatch");
    ControlField out = u;
    for (const auto c : set.cells) out.values.at(c) = utilde.values.at(c);
    return out;
}

LineSearchOutcome armijo_search(const ControlProblem& problem, const Iterate& current, const ControlField& utilde,
                                std::span<const double> phi, const AlgorithmConfig& config) {
    const auto& mesh = problem.mesh();
    require_cells(mesh, phi.size(), "armijo_search");
    if (!(rho(phi) < -config.delta_tol)) {
        throw std::logic_error("armijo_search: residual within tolerance, caller must terminate");
    }

    Vector misfit(current.y.values.size());
    for (std::size_t i = 0; i < misfit.size(); ++i) misfit[i] = current.y.values[i] - problem.target().values[i];
    const Vector misfit_load = linalg::spmv(problem.discretization().mass(), misfit);

    if (config.mode == StepMode::full_step) {
        auto set = select_set(phi, 1.0, mesh);
        if (!set) throw std::logic_error("armijo_search: full step found no admissible set");
        Iterate next = switched_iterate(problem, current, utilde, *set, misfit_load);
        const double descent = sum_over(phi, *set);
        return AcceptedStep{1.0, std::move(*set), std::move(next), descent, 1};
    }

    std::size_t trials = 0;
    for (double t = 1.0; t * mesh.domain_area() >= mesh.cell_area(); t *= config.beta) {
        ++trials;
        auto set = select_set(phi, t, mesh);
        if (!set) continue;
        Iterate next = switched_iterate(problem, current, utilde, *set, misfit_load);
        const double descent = sum_over(phi, *set);
        if (next.J - current.J <= config.sigma * descent) {
            return AcceptedStep{t, std::move(*set), std::move(next), descent, trials};
        }
    }
    return MeshResolutionReached{trials};
}

StepResult step(const ControlProblem& problem, const AlgorithmConfig& config, Iterate& current, std::size_t k) {
    const auto& mesh = problem.mesh();
    const auto& g = problem.integrand();

    StepResult result;
    result.adjoint = problem.discretization().solve_adjoint(current.y, problem.target());
    const ControlField utilde = candidate_control(mesh, result.adjoint, g);
    const Vector phi = phi_cells(mesh, current.u, utilde, result.adjoint, g);

    auto& record = result.record;
    record.k = k;
    record.J = current.J;
    record.rho = rho(phi);

    if (std::abs(record.rho) <= config.delta_tol) {
        result.terminated = Termination::residual_tol;
        return result;
    }
    if (k >= config.max_outer) {
        result.terminated = Termination::max_outer;
        return result;
    }

    auto outcome = armijo_search(problem, current, utilde, phi, config);
    if (const auto* stop = std::get_if<MeshResolutionReached>(&outcome)) {
        record.inner_trials = stop->trials;
        result.terminated = Termination::mesh_resolution;
        return result;
    }
    auto& accepted = std::get<AcceptedStep>(outcome);
    record.t_k = accepted.t;
    record.set_measure = accepted.set.total_area;
    record.changed_cells = accepted.set.size();
    record.inner_trials = accepted.trials;
    record.selected_descent = accepted.selected_descent;
    current = std::move(accepted.next);
    return result;
}

RunHistory run(const ControlProblem& problem, const AlgorithmConfig& config, const RunOptions& options) {
    config.validate();
    if (problem.discretization().solver_options().rel_tol != config.solver_rel_tol) {
        throw std::invalid_argument("run: problem was built with a different solver tolerance");
    }
    ControlField u0 = options.initial ? *options.initial : fem::constant_control(problem.mesh(), 0.0);
    Iterate current = make_iterate(problem, std::move(u0));

    RunHistory history;
    for (std::size_t k = 0;; ++k) {
        if (options.keep_iterates) history.iterates.push_back(current.u);
        StepResult result = step(problem, config, current, k);
        history.records.push_back(result.record);
        if (result.terminated) {
            history.reason = *result.terminated;
            history.adjoint = std::move(result.adjoint);
            break;
        }
    }
    history.control = std::move(current.u);
    history.state = std::move(current.y);
    return history;
}

double descent_identity_residual(const ControlProblem& problem, const ControlField& u, const ControlField& utilde,
                                 const CellSet& set) {
    const auto& disc = problem.discretization();
    const Iterate base = make_iterate(problem, u);
    const NodalField p = disc.solve_adjoint(base.y, problem.target());
    const Iterate switched = make_iterate(problem, switch_on_set(u, utilde, set));

    const Vector phi = phi_cells(problem.mesh(), u, utilde, p, problem.integrand());
    Vector dy(base.y.values.size());
    for (std::size_t i = 0; i < dy.size(); ++i) dy[i] = switched.y.values[i] - base.y.values[i];
    const double predicted = sum_over(phi, set) + 0.5 * fem::mass_inner(disc.mass(), dy, dy);
    return std::abs((switched.J - base.J) - predicted);
}

double state_change_norm(const ControlProblem& problem, const ControlField& u, const ControlField& utilde,
                         const CellSet& set) {
    const auto& mesh = problem.mesh();
    require_cells(mesh, u.values.size(), "state_change_norm");
    ControlField du{Vector(mesh.num_cells(), 0.0)};
    for (const auto c : set.cells) du.values.at(c) = utilde.values.at(c) - u.values[c];
    const NodalField dy = problem.discretization().solve_state(du);
    return std::sqrt(fem::mass_inner(problem.discretization().mass(), dy.values, dy.values));
}

double verify_pmp(const Mesh& mesh, const ControlField& u, const NodalField& p, const integrand::CostIntegrand& g) {
    require_cells(mesh, u.values.size(), "verify_pmp");
    const Vector pbar = fem::cell_average(mesh, p);
    double worst = 0.0;
    for (std::size_t c = 0; c < pbar.size(); ++c) {
        const double mu = integrand::hamiltonian(u.values[c], pbar[c], finite_g(g, u.values[c], c));
        worst = std::max(worst, mu - g.hamiltonian_argmin(pbar[c]).m);
    }
    return worst;
}

}  // namespace pmpd::pmp
