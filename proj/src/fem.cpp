#include "pmpd/fem.hpp"

#include <cmath>
#include <string>

namespace pmpd::fem {
namespace {

void require_nodal(const Mesh& mesh, std::span<const double> v, const char* what) {
    if (v.size() != mesh.num_vertices()) {
        throw std::invalid_argument(std::string(what) + ": nodal field has " + std::to_string(v.size()) +
                                    " values, mesh has " + std::to_string(mesh.num_vertices()) + " vertices");
    }
}

void require_control(const Mesh& mesh, const ControlField& u, const char* what) {
    if (u.values.size() != mesh.num_cells()) {
        throw std::invalid_argument(std::string(what) + ": control has " + std::to_string(u.values.size()) +
                                    " values, mesh has " + std::to_string(mesh.num_cells()) + " cells");
    }
}

}  // namespace

NodalField zero_nodal(const Mesh& mesh) { return {Vector(mesh.num_vertices(), 0.0)}; }

ControlField constant_control(const Mesh& mesh, double value) { return {Vector(mesh.num_cells(), value)}; }

DofMap::DofMap(const Mesh& mesh) : dof_of_vertex(mesh.num_vertices(), npos) {
    for (mesh::VertexIndex v = 0; v < mesh.num_vertices(); ++v) {
        if (!mesh.on_boundary(v)) {
            dof_of_vertex[v] = interior.size();
            interior.push_back(v);
        }
    }
}

Vector DofMap::restrict(std::span<const double> full) const {
    Vector out(interior.size());
    for (std::size_t d = 0; d < interior.size(); ++d) out[d] = full[interior[d]];
    return out;
}

Vector DofMap::extend(std::span<const double> interior_values, std::size_t num_vertices) const {
    Vector out(num_vertices, 0.0);
    for (std::size_t d = 0; d < interior.size(); ++d) out[interior[d]] = interior_values[d];
    return out;
}

SparseSymMatrix assemble_stiffness(const Mesh& mesh) {
    // The 2D P1 stiffness matrix is invariant under uniform scaling, so the
    // element matrices are formed from integer lattice coordinates.
    const DofMap dofs(mesh);
    linalg::MatrixBuilder builder(dofs.interior.size());
    for (const auto& tri : mesh.cells()) {
        std::array<std::array<long, 2>, 3> p{};
        for (int a = 0; a < 3; ++a) p[a] = mesh.lattice(tri[a]);
        std::array<long, 3> bx{}, by{};
        for (int a = 0; a < 3; ++a) {
            const auto& q = p[(a + 1) % 3];
            const auto& r = p[(a + 2) % 3];
            bx[a] = q[1] - r[1];
            by[a] = r[0] - q[0];
        }
        const long twice_area = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        for (int a = 0; a < 3; ++a) {
            const std::size_t da = dofs.dof_of_vertex[tri[a]];
            if (da == DofMap::npos) continue;
            for (int c = 0; c < 3; ++c) {
                const std::size_t dc = dofs.dof_of_vertex[tri[c]];
                if (dc == DofMap::npos) continue;
                const double value =
                    static_cast<double>(bx[a] * bx[c] + by[a] * by[c]) / (2.0 * static_cast<double>(twice_area));
                builder.add(da, dc, value);
            }
        }
    }
    return builder.build();
}

SparseSymMatrix assemble_mass(const Mesh& mesh) {
    linalg::MatrixBuilder builder(mesh.num_vertices());
    const double diag = mesh.cell_area() / 6.0;
    const double off = mesh.cell_area() / 12.0;
    for (const auto& tri : mesh.cells()) {
        for (int a = 0; a < 3; ++a) {
            for (int c = 0; c < 3; ++c) builder.add(tri[a], tri[c], a == c ? diag : off);
        }
    }
    return builder.build();
}

SparseSymMatrix assemble_lumped_mass(const Mesh& mesh) {
    Vector diag(mesh.num_vertices(), 0.0);
    const double share = mesh.cell_area() / 3.0;
    for (const auto& tri : mesh.cells()) {
        for (const auto v : tri) diag[v] += share;
    }
    const std::size_t dim = diag.size();
    std::vector<std::size_t> offsets(dim + 1), cols(dim);
    for (std::size_t i = 0; i <= dim; ++i) offsets[i] = i;
    for (std::size_t i = 0; i < dim; ++i) cols[i] = i;
    return SparseSymMatrix(dim, std::move(offsets), std::move(cols), std::move(diag));
}

Vector control_load(const Mesh& mesh, const ControlField& u) {
    require_control(mesh, u, "control_load");
    Vector load(mesh.num_vertices(), 0.0);
    const double third = mesh.cell_area() / 3.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const double share = u.values[c] * third;
        if (share == 0.0) continue;
        for (const auto v : mesh.cells()[c]) load[v] += share;
    }
    return load;
}

NodalField solve_dirichlet(const SparseSymMatrix& stiffness, const Mesh& mesh, std::span<const double> full_rhs,
                           const CgOptions& options) {
    require_nodal(mesh, full_rhs, "solve_dirichlet");
    const DofMap dofs(mesh);
    if (stiffness.dim() != dofs.interior.size()) {
        throw std::invalid_argument("solve_dirichlet: stiffness matrix does not match mesh");
    }
    const Vector rhs = dofs.restrict(full_rhs);
    const auto result = linalg::cg_solve(stiffness, rhs, options);
    return {dofs.extend(result.x, mesh.num_vertices())};
}

NodalField solve_state(const SparseSymMatrix& stiffness, const Mesh& mesh, const ControlField& u,
                       const CgOptions& options) {
    return solve_dirichlet(stiffness, mesh, control_load(mesh, u), options);
}

NodalField solve_adjoint(const SparseSymMatrix& stiffness, const SparseSymMatrix& mass, const Mesh& mesh,
                         const NodalField& y, const NodalField& target, const CgOptions& options) {
    require_nodal(mesh, y.values, "solve_adjoint");
    require_nodal(mesh, target.values, "solve_adjoint");
    Vector diff(y.values.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = y.values[i] - target.values[i];
    return solve_dirichlet(stiffness, mesh, linalg::spmv(mass, diff), options);
}

NodalField interpolate_target(const Mesh& mesh, const std::function<double(double, double)>& f) {
    NodalField out{Vector(mesh.num_vertices())};
    for (mesh::VertexIndex v = 0; v < mesh.num_vertices(); ++v) {
        const auto& x = mesh.vertex(v);
        const double value = f(x[0], x[1]);
        if (!std::isfinite(value)) {
            throw std::domain_error("interpolate_target: non-finite value at vertex " + std::to_string(v));
        }
        out.values[v] = value;
    }
    return out;
}

Vector cell_average(const Mesh& mesh, const NodalField& v) {
    require_nodal(mesh, v.values, "cell_average");
    Vector out(mesh.num_cells());
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto& tri = mesh.cells()[c];
        out[c] = (v.values[tri[0]] + v.values[tri[1]] + v.values[tri[2]]) / 3.0;
    }
    return out;
}

double mass_inner(const SparseSymMatrix& mass, std::span<const double> v, std::span<const double> w) {
    const Vector mw = linalg::spmv(mass, w);
    long double s = 0.0L;
    for (std::size_t i = 0; i < v.size(); ++i) s += static_cast<long double>(v[i]) * mw[i];
    return static_cast<double>(s);
}

double tracking_term(const SparseSymMatrix& mass, const NodalField& y, const NodalField& target) {
    if (y.values.size() != target.values.size() || y.values.size() != mass.dim()) {
        throw std::invalid_argument("tracking_term: size mismatch");
    }
    Vector e(y.values.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = y.values[i] - target.values[i];
    return 0.5 * mass_inner(mass, e, e);
}

double control_cost(const Mesh& mesh, const ControlField& u, const integrand::CostIntegrand& g) {
    require_control(mesh, u, "control_cost");
    long double s = 0.0L;
    for (std::size_t c = 0; c < u.values.size(); ++c) {
        const double gv = g.eval(u.values[c]);
        if (gv == integrand::kInfinity) {
            throw InfeasibleControl("control value " + std::to_string(u.values[c]) + " in cell " + std::to_string(c) +
                                    " is outside dom g (" + g.name() + ")");
        }
        s += gv;
    }
    return static_cast<double>(s * mesh.cell_area());
}

double eval_objective(const Mesh& mesh, const SparseSymMatrix& mass, const NodalField& y, const NodalField& target,
                      const ControlField& u, const integrand::CostIntegrand& g) {
    const double cost = control_cost(mesh, u, g);
    return tracking_term(mass, y, target) + cost;
}

double reference_target(double x1, double x2) { return 10.0 * x1 * std::sin(5.0 * x1) * std::cos(7.0 * x2); }

Discretization::Discretization(Mesh mesh, CgOptions options, MassKind mass_kind)
    : mesh_(std::move(mesh)),
      options_(options),
      mass_kind_(mass_kind),
      dofs_(mesh_),
      stiffness_(assemble_stiffness(mesh_)),
      mass_(mass_kind == MassKind::lumped ? assemble_lumped_mass(mesh_) : assemble_mass(mesh_)) {}

NodalField Discretization::solve(std::span<const double> full_rhs) const {
    require_nodal(mesh_, full_rhs, "Discretization::solve");
    const auto result = linalg::cg_solve(stiffness_, dofs_.restrict(full_rhs), options_);
    return {dofs_.extend(result.x, mesh_.num_vertices())};
}

NodalField Discretization::solve_state(const ControlField& u) const { return solve(control_load(mesh_, u)); }

NodalField Discretization::solve_adjoint(const NodalField& y, const NodalField& target) const {
    require_nodal(mesh_, y.values, "Discretization::solve_adjoint");
    require_nodal(mesh_, target.values, "Discretization::solve_adjoint");
    Vector diff(y.values.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = y.values[i] - target.values[i];
    return solve(linalg::spmv(mass_, diff));
}

}  // namespace pmpd::fem
