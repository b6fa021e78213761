#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace pmpd::mesh {

using VertexIndex = std::size_t;
using CellIndex = std::size_t;
using Triangle = std::array<VertexIndex, 3>;
using Point = std::array<double, 2>;

// Uniform triangulation of (0,1)^2. Each of the n*n grid squares is split
// along its lower-left to upper-right diagonal. Squares are numbered
// row-major (x fastest); square s owns cells 2s (lower) and 2s+1 (upper).
// Vertex (i, j) at (i/n, j/n) has index i + j*(n+1).
class Mesh {
public:
    explicit Mesh(std::size_t n);

    std::size_t subdivisions() const { return n_; }
    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_cells() const { return cells_.size(); }

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<Triangle>& cells() const { return cells_; }
    const std::vector<bool>& boundary_mask() const { return boundary_; }

    const Point& vertex(VertexIndex v) const { return vertices_.at(v); }
    bool on_boundary(VertexIndex v) const { return boundary_.at(v); }

    // Throws std::out_of_range for c >= num_cells().
    const Triangle& cell_vertex_indices(CellIndex c) const;

    // Lattice coordinates (i, j) of a vertex.
    std::array<long, 2> lattice(VertexIndex v) const;

    double cell_area() const { return cell_area_; }
    double domain_area() const { return 1.0; }
    // Longest edge, sqrt(2)/n.
    double h() const;

    bool operator==(const Mesh&) const = default;

private:
    std::size_t n_;
    std::vector<Point> vertices_;
    std::vector<Triangle> cells_;
    std::vector<bool> boundary_;
    double cell_area_;
};

Mesh build_unit_square_mesh(std::size_t n);

}  // namespace pmpd::mesh
