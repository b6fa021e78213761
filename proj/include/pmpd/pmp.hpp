#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "pmpd/fem.hpp"
#include "pmpd/integrand.hpp"
#include "pmpd/mesh.hpp"

namespace pmpd::pmp {

using fem::ControlField;
using fem::NodalField;
using linalg::Vector;
using mesh::CellIndex;
using mesh::Mesh;

enum class StepMode {
    pmp_armijo,
    // B = every cell with negative phi, t = 1, no sufficient-decrease test.
    full_step,
};

struct AlgorithmConfig {
    double beta = 0.01;
    double sigma = 0.1;
    double delta_tol = 1e-12;
    std::size_t max_outer = 100;
    double solver_rel_tol = 1e-12;
    StepMode mode = StepMode::pmp_armijo;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Sorted distinct cell indices.
struct CellSet {
    std::vector<CellIndex> cells;
    double total_area = 0.0;

    bool empty() const { return cells.empty(); }
    std::size_t size() const { return cells.size(); }
};

struct IterationRecord {
    std::size_t k = 0;
    double J = 0.0;
    // rho_k = sum_T phi_T <= 0; the logged L1 residual is |rho|.
    double rho = 0.0;
    // Accepted step and set; zero on the final (terminating) record.
    double t_k = 0.0;
    double set_measure = 0.0;
    std::size_t changed_cells = 0;
    std::size_t inner_trials = 0;
    // sum over B_k of phi_T, the right-hand side of the Armijo test before sigma.
    double selected_descent = 0.0;
};

enum class Termination { residual_tol, mesh_resolution, max_outer };

std::string_view to_string(Termination reason);
std::string_view to_string(StepMode mode);

// How the desired state enters on boundary vertices.
enum class TargetBoundary {
    // nodal interpolant everywhere
    interpolate,
    // interpolant restricted to interior vertices (y_d in the same space as y)
    zero,
};

// Defaults: lumped tracking norm with y_d on interior vertices, which
// reproduces the reference objective values of the benchmark.
struct DiscretizationOptions {
    linalg::CgOptions solver{};
    fem::MassKind mass = fem::MassKind::lumped;
    TargetBoundary target_boundary = TargetBoundary::zero;
};

// Discretized problem: mesh and operators, desired state, cost integrand.
class ControlProblem {
public:
    ControlProblem(Mesh mesh, std::shared_ptr<const integrand::CostIntegrand> g,
                   const std::function<double(double, double)>& target, const DiscretizationOptions& options = {});

    const fem::Discretization& discretization() const { return disc_; }
    const Mesh& mesh() const { return disc_.mesh(); }
    const NodalField& target() const { return target_; }
    const integrand::CostIntegrand& integrand() const { return *g_; }

    double objective(const NodalField& y, const ControlField& u) const;

private:
    fem::Discretization disc_;
    std::shared_ptr<const integrand::CostIntegrand> g_;
    NodalField target_;
};

// Current control with its state and objective value.
struct Iterate {
    ControlField u;
    NodalField y;
    double J = 0.0;
};

// Solves the state for u and evaluates J. Throws fem::InfeasibleControl.
Iterate make_iterate(const ControlProblem& problem, ControlField u);

// Cellwise minimizer of v * pbar_T + g(v), pbar_T the cell mean of p.
ControlField candidate_control(const Mesh& mesh, const NodalField& p, const integrand::CostIntegrand& g);

// phi_T = |T| [(ut_T - u_T) pbar_T + g(ut_T) - g(u_T)], evaluated as the
// difference of the two Hamiltonian values so phi_T <= 0 holds exactly
// whenever ut is the pointwise argmin.
Vector phi_cells(const Mesh& mesh, const ControlField& u, const ControlField& utilde, const NodalField& p,
                 const integrand::CostIntegrand& g);

// Sum of phi in cell order.
double rho(std::span<const double> phi);

// Greedy choice of B_t: most negative phi first (ties by index), while
// |B| <= t |Omega|. Returns nullopt unless B is nonempty and
// sum_B phi <= t sum phi. Requires sum phi < 0.
std::optional<CellSet> select_set(std::span<const double> phi, double t, const Mesh& mesh);

// u + chi_B (ut - u)
ControlField switch_on_set(const ControlField& u, const ControlField& utilde, const CellSet& set);

struct AcceptedStep {
    double t = 0.0;
    CellSet set;
    Iterate next;
    double selected_descent = 0.0;
    std::size_t trials = 0;
};

struct MeshResolutionReached {
    std::size_t trials = 0;
};

using LineSearchOutcome = std::variant<AcceptedStep, MeshResolutionReached>;

// Backtracking over t = 1, beta, beta^2, ... with phi taken at `current`.
// Requires rho(phi) < -config.delta_tol (throws std::logic_error otherwise).
LineSearchOutcome armijo_search(const ControlProblem& problem, const Iterate& current, const ControlField& utilde,
                                std::span<const double> phi, const AlgorithmConfig& config);

struct StepResult {
    IterationRecord record;
    NodalField adjoint;
    std::optional<Termination> terminated;
};

// One outer iteration on `current` (updated in place unless terminated).
StepResult step(const ControlProblem& problem, const AlgorithmConfig& config, Iterate& current, std::size_t k);

struct RunHistory {
    std::vector<IterationRecord> records;
    ControlField control;
    NodalField state;
    NodalField adjoint;
    Termination reason = Termination::max_outer;
    // u_k for every record, when requested.
    std::vector<ControlField> iterates;

    std::size_t iterations() const { return records.empty() ? 0 : records.size() - 1; }
    double final_objective() const { return records.back().J; }
    double final_residual() const { return std::abs(records.back().rho); }
};

struct RunOptions {
    std::optional<ControlField> initial;  // default u_0 = 0
    bool keep_iterates = false;
};

RunHistory run(const ControlProblem& problem, const AlgorithmConfig& config, const RunOptions& options = {});

// |[J(u_B) - J(u)] - [sum_B phi + 1/2 (y_B - y)^T M (y_B - y)]|, all terms
// from independent solves.
double descent_identity_residual(const ControlProblem& problem, const ControlField& u, const ControlField& utilde,
                                 const CellSet& set);

// ||y_B - y||_{L2} for u_B = u + chi_B (ut - u).
double state_change_norm(const ControlProblem& problem, const ControlField& u, const ControlField& utilde,
                         const CellSet& set);

// max_T [u_T pbar_T + g(u_T) - min_v (v pbar_T + g(v))] >= 0.
double verify_pmp(const Mesh& mesh, const ControlField& u, const NodalField& p, const integrand::CostIntegrand& g);

}  // namespace pmpd::pmp
