#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#include "pmpd/mesh.hpp"

using pmpd::mesh::Mesh;

namespace {

double signed_area(const Mesh& m, std::size_t c) {
    const auto& t = m.cell_vertex_indices(c);
    const auto& a = m.vertex(t[0]);
    const auto& b = m.vertex(t[1]);
    const auto& d = m.vertex(t[2]);
    return 0.5 * ((b[0] - a[0]) * (d[1] - a[1]) - (d[0] - a[0]) * (b[1] - a[1]));
}

}  // namespace

TEST_SUITE("mesh") {

TEST_CASE("n=1 has four vertices and two half cells") {
    const Mesh m(1);
    CHECK(m.num_vertices() == 4);
    CHECK(m.num_cells() == 2);
    CHECK(m.cell_area() == 0.5);
    CHECK(signed_area(m, 0) == doctest::Approx(0.5));
    CHECK(signed_area(m, 1) == doctest::Approx(0.5));
}

TEST_CASE("n=1 lower cell uses the three lower-right corners") {
    const Mesh m(1);
    const auto& t = m.cell_vertex_indices(0);
    CHECK(t[0] == 0);
    CHECK(t[1] == 1);
    CHECK(t[2] == 3);
    CHECK_THROWS_AS(m.cell_vertex_indices(2), std::out_of_range);
}

TEST_CASE("n=2 cell 5 is the upper triangle of the lower-left square of row 1") {
    const Mesh m(2);
    const auto& t = m.cell_vertex_indices(5);
    CHECK(t[0] == 3);
    CHECK(t[1] == 7);
    CHECK(t[2] == 6);
}

TEST_CASE("h and cell count") {
    CHECK(Mesh(32).h() == doctest::Approx(4.419417382415922e-2).epsilon(1e-14));
    CHECK(Mesh(32).h() == doctest::Approx(std::sqrt(2.0) / 32.0));
    CHECK(Mesh(1024).num_cells() == 2ul * 1024 * 1024);
    CHECK_THROWS_AS(Mesh(0), std::invalid_argument);
}

TEST_CASE("cells are counterclockwise, distinct, and tile the square") {
    for (std::size_t n : {1u, 2u, 5u, 16u}) {
        const Mesh m(n);
        double total = 0.0;
        for (std::size_t c = 0; c < m.num_cells(); ++c) {
            const auto& t = m.cell_vertex_indices(c);
            CHECK(t[0] != t[1]);
            CHECK(t[1] != t[2]);
            CHECK(t[0] != t[2]);
            const double a = signed_area(m, c);
            CHECK(a == doctest::Approx(m.cell_area()));
            total += a;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(m.domain_area() == 1.0);
    }
}

TEST_CASE("boundary mask marks exactly the vertices on the edges") {
    const Mesh m(7);
    std::size_t count = 0;
    for (std::size_t v = 0; v < m.num_vertices(); ++v) {
        const auto& p = m.vertex(v);
        const bool edge = p[0] == 0.0 || p[0] == 1.0 || p[1] == 0.0 || p[1] == 1.0;
        CHECK(m.on_boundary(v) == edge);
        count += edge;
    }
    CHECK(count == 4 * 7);
}

TEST_CASE("interior vertices touch six cells, lattice matches coordinates") {
    const Mesh m(6);
    std::map<std::size_t, int> valence;
    for (std::size_t c = 0; c < m.num_cells(); ++c)
        for (auto v : m.cell_vertex_indices(c)) ++valence[v];
    for (std::size_t v = 0; v < m.num_vertices(); ++v) {
        if (!m.on_boundary(v)) CHECK(valence[v] == 6);
        const auto ij = m.lattice(v);
        CHECK(m.vertex(v)[0] == doctest::Approx(ij[0] / 6.0));
        CHECK(m.vertex(v)[1] == doctest::Approx(ij[1] / 6.0));
    }
    CHECK(valence[0] == 2);
    CHECK(valence[6] == 1);
}

TEST_CASE("construction is deterministic") {
    CHECK(Mesh(9) == pmpd::mesh::build_unit_square_mesh(9));
}

}
