#include <doctest.h>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "pmpd/pmp.hpp"

using namespace pmpd::pmp;
using pmpd::fem::constant_control;
using pmpd::fem::reference_target;
using pmpd::integrand::IntegerQuadratic;

namespace {

std::shared_ptr<const IntegerQuadratic> benchmark_g() { return std::make_shared<IntegerQuadratic>(0.01, 10); }

NodalField constant_nodal(const Mesh& m, double c) { return NodalField{Vector(m.num_vertices(), c)}; }

}  // namespace

TEST_SUITE("pmp") {

TEST_CASE("candidate control") {
    const Mesh m(3);
    const IntegerQuadratic g(0.01, 10);
    for (double v : candidate_control(m, constant_nodal(m, 0.0), g).values) CHECK(v == 0.0);
    for (double v : candidate_control(m, constant_nodal(m, -0.5), g).values) CHECK(v == 10.0);
    // clamped before and after the shift
    for (double v : candidate_control(m, constant_nodal(m, -0.9), g).values) CHECK(v == 10.0);
}

TEST_CASE("phi and rho") {
    const Mesh m(2);
    const IntegerQuadratic g(0.01, 10);
    const auto p = constant_nodal(m, -0.5);
    const auto u = constant_control(m, 0.0);
    auto ut = u;
    ut.values[0] = 10.0;
    const auto phi = phi_cells(m, u, ut, p, g);
    CHECK(phi[0] == doctest::Approx(-0.5625));
    for (std::size_t c = 1; c < phi.size(); ++c) CHECK(phi[c] == 0.0);
    CHECK(rho(phi) == doctest::Approx(-0.5625));

    for (double v : phi_cells(m, u, u, p, g)) CHECK(v == 0.0);
    CHECK(rho(Vector(8, 0.0)) == 0.0);

    const auto full = phi_cells(m, u, candidate_control(m, p, g), p, g);
    double sum = 0.0;
    for (double v : full) {
        CHECK(v <= 0.0);
        sum += v;
    }
    CHECK(rho(full) == sum);
}

TEST_CASE("select_set greedy") {
    const Mesh m(2);  // 8 cells of area 1/8
    const Vector phi{-5, -3, -1, 0, 0, 0, 0, 0};
    auto b = select_set(phi, 0.25, m);
    REQUIRE(b);
    CHECK(b->cells == std::vector<CellIndex>{0, 1});
    CHECK(b->total_area == doctest::Approx(0.25));

    b = select_set(phi, 0.125, m);
    REQUIRE(b);
    CHECK(b->cells == std::vector<CellIndex>{0});

    b = select_set(phi, 1.0, m);
    REQUIRE(b);
    CHECK(b->cells == std::vector<CellIndex>{0, 1, 2});

    CHECK_FALSE(select_set(phi, 0.1, m));
    CHECK_THROWS_AS(select_set(Vector(8, 0.0), 1.0, m), std::invalid_argument);
    CHECK_THROWS_AS(select_set(phi, 1.5, m), std::invalid_argument);

    // ties in phi resolved by cell index
    const Vector tied{0, -2, 0, -2, -2, 0, 0, 0};
    b = select_set(tied, 0.25, m);
    REQUIRE(b);
    CHECK(b->cells == std::vector<CellIndex>{1, 3});
}

TEST_CASE("switch on set") {
    const Mesh m(1);
    const ControlField u{{1, 2}};
    const ControlField ut{{5, 6}};
    CellSet s;
    s.cells = {1};
    CHECK(switch_on_set(u, ut, s).values == Vector{1, 6});
}

TEST_CASE("armijo requires a nonzero residual") {
    const ControlProblem problem(Mesh(4), benchmark_g(), reference_target);
    const auto it = make_iterate(problem, constant_control(problem.mesh(), 0.0));
    const Vector phi(problem.mesh().num_cells(), 0.0);
    CHECK_THROWS_AS(armijo_search(problem, it, it.u, phi, AlgorithmConfig{}), std::logic_error);
}

TEST_CASE("huge delta_tol stops before any step") {
    const ControlProblem problem(Mesh(8), benchmark_g(), reference_target);
    AlgorithmConfig cfg;
    cfg.delta_tol = 1e9;
    const auto h = run(problem, cfg);
    CHECK(h.records.size() == 1);
    CHECK(h.iterations() == 0);
    CHECK(h.reason == Termination::residual_tol);
    CHECK(h.records[0].t_k == 0.0);
}

TEST_CASE("coarse run decreases J and stays feasible") {
    const ControlProblem problem(Mesh(4), benchmark_g(), reference_target);
    const auto h = run(problem, AlgorithmConfig{}, RunOptions{std::nullopt, true});
    REQUIRE(h.records.size() >= 2);
    CHECK(h.iterates.size() == h.records.size());
    for (std::size_t k = 0; k + 1 < h.records.size(); ++k) {
        const auto& r = h.records[k];
        CHECK(r.rho < 0.0);
        CHECK(r.t_k > 0.0);
        CHECK(r.t_k <= 1.0);
        CHECK(h.records[k + 1].J < r.J);
        CHECK(h.records[k + 1].J - r.J <= 0.1 * r.selected_descent);
    }
    for (double v : h.control.values) CHECK(problem.integrand().feasible(v));
}

TEST_CASE("starting at a PMP point terminates immediately") {
    const ControlProblem problem(Mesh(8), benchmark_g(), reference_target);
    const auto first = run(problem, AlgorithmConfig{});
    REQUIRE(first.reason == Termination::residual_tol);
    REQUIRE(first.final_residual() == 0.0);
    const auto again = run(problem, AlgorithmConfig{}, RunOptions{first.control, false});
    CHECK(again.records.size() == 1);
    CHECK(again.reason == Termination::residual_tol);
    CHECK(again.control.values == first.control.values);
    CHECK(verify_pmp(problem.mesh(), first.control, first.adjoint, problem.integrand()) == 0.0);
}

TEST_CASE("descent identity") {
    const ControlProblem problem(Mesh(8), benchmark_g(), reference_target);
    const auto& m = problem.mesh();
    const auto u = constant_control(m, 0.0);
    const auto ut = constant_control(m, 1.0);
    CHECK(descent_identity_residual(problem, u, ut, CellSet{}) == 0.0);
    CellSet all;
    for (std::size_t c = 0; c < m.num_cells(); ++c) all.cells.push_back(c);
    all.total_area = 1.0;
    const double j = make_iterate(problem, u).J;
    CHECK(descent_identity_residual(problem, u, ut, all) <= 1e-8 * std::max(1.0, std::abs(j)));
}

TEST_CASE("verify_pmp detects a worse cell") {
    const ControlProblem problem(Mesh(4), benchmark_g(), reference_target);
    const auto& m = problem.mesh();
    const auto it = make_iterate(problem, constant_control(m, 0.0));
    const auto p = problem.discretization().solve_adjoint(it.y, problem.target());
    auto u = candidate_control(m, p, problem.integrand());
    CHECK(verify_pmp(m, u, p, problem.integrand()) == 0.0);
    u.values[5] = u.values[5] > 0 ? u.values[5] - 1 : u.values[5] + 1;
    CHECK(verify_pmp(m, u, p, problem.integrand()) > 0.0);
}

TEST_CASE("full-step mode keeps iterates feasible") {
    const ControlProblem problem(Mesh(8), benchmark_g(), reference_target);
    AlgorithmConfig cfg;
    cfg.mode = StepMode::full_step;
    cfg.max_outer = 15;
    const auto h = run(problem, cfg, RunOptions{std::nullopt, true});
    CHECK(h.records.size() <= 16);
    for (const auto& u : h.iterates)
        for (double v : u.values) CHECK(problem.integrand().feasible(v));
    for (std::size_t k = 0; k + 1 < h.records.size(); ++k) CHECK(h.records[k].t_k == 1.0);
}

TEST_CASE("config validation") {
    AlgorithmConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.beta = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.sigma = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.solver_rel_tol = 1e-8;
    const ControlProblem problem(Mesh(4), benchmark_g(), reference_target);
    CHECK_THROWS_AS(run(problem, cfg), std::invalid_argument);
}

}
