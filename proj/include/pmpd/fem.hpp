#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pmpd/integrand.hpp"
#include "pmpd/linalg.hpp"
#include "pmpd/mesh.hpp"

namespace pmpd::fem {

using linalg::CgOptions;
using linalg::SparseSymMatrix;
using linalg::Vector;
using mesh::Mesh;

// Piecewise-linear field, one value per mesh vertex.
struct NodalField {
    Vector values;
};

// Piecewise-constant field, one value per cell.
struct ControlField {
    Vector values;
};

class InfeasibleControl : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

NodalField zero_nodal(const Mesh& mesh);
ControlField constant_control(const Mesh& mesh, double value);

// Interior vertices in increasing vertex order, and the inverse map
// (vertex -> interior dof, or npos for boundary vertices).
struct DofMap {
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<mesh::VertexIndex> interior;
    std::vector<std::size_t> dof_of_vertex;

    explicit DofMap(const Mesh& mesh);
    Vector restrict(std::span<const double> full) const;
    Vector extend(std::span<const double> interior_values, std::size_t num_vertices) const;
};

// P1 stiffness on interior dofs (homogeneous Dirichlet by elimination).
SparseSymMatrix assemble_stiffness(const Mesh& mesh);

// P1 consistent mass matrix over all vertices.
SparseSymMatrix assemble_mass(const Mesh& mesh);

// Row-sum lumped P1 mass matrix over all vertices (diagonal).
SparseSymMatrix assemble_lumped_mass(const Mesh& mesh);

enum class MassKind { consistent, lumped };

// b_i = sum over cells T containing vertex i of u_T |T| / 3, on all vertices.
Vector control_load(const Mesh& mesh, const ControlField& u);

// Solves K x = rhs restricted to the interior; boundary values are zero.
NodalField solve_dirichlet(const SparseSymMatrix& stiffness, const Mesh& mesh,
                           std::span<const double> full_rhs, const CgOptions& options);

NodalField solve_state(const SparseSymMatrix& stiffness, const Mesh& mesh, const ControlField& u,
                       const CgOptions& options);

// -Delta p = y - y_d, discretized with the full mass matrix on the right.
NodalField solve_adjoint(const SparseSymMatrix& stiffness, const SparseSymMatrix& mass, const Mesh& mesh,
                         const NodalField& y, const NodalField& target, const CgOptions& options);

NodalField interpolate_target(const Mesh& mesh, const std::function<double(double, double)>& f);

// Mean of the three vertex values per cell; |T| times this is the exact integral.
Vector cell_average(const Mesh& mesh, const NodalField& v);

// v^T M w
double mass_inner(const SparseSymMatrix& mass, std::span<const double> v, std::span<const double> w);

// 1/2 (y - y_d)^T M (y - y_d)
double tracking_term(const SparseSymMatrix& mass, const NodalField& y, const NodalField& target);

// sum_T |T| g(u_T); throws InfeasibleControl if any g(u_T) is infinite.
double control_cost(const Mesh& mesh, const ControlField& u, const integrand::CostIntegrand& g);

double eval_objective(const Mesh& mesh, const SparseSymMatrix& mass, const NodalField& y,
                      const NodalField& target, const ControlField& u, const integrand::CostIntegrand& g);

// Desired state 10 x1 sin(5 x1) cos(7 x2).
double reference_target(double x1, double x2);

// Mesh plus the assembled operators shared by all solves on it.
class Discretization {
public:
    Discretization(Mesh mesh, CgOptions options, MassKind mass_kind = MassKind::consistent);

    const Mesh& mesh() const { return mesh_; }
    const SparseSymMatrix& stiffness() const { return stiffness_; }
    const SparseSymMatrix& mass() const { return mass_; }
    const CgOptions& solver_options() const { return options_; }
    MassKind mass_kind() const { return mass_kind_; }

    NodalField solve_state(const ControlField& u) const;
    NodalField solve_adjoint(const NodalField& y, const NodalField& target) const;
    // Dirichlet solve for a load given on all vertices.
    NodalField solve(std::span<const double> full_rhs) const;

private:
    Mesh mesh_;
    CgOptions options_;
    MassKind mass_kind_;
    DofMap dofs_;
    SparseSymMatrix stiffness_;
    SparseSymMatrix mass_;
};

}  // namespace pmpd::fem
