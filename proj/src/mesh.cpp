#include "pmpd/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pmpd::mesh {

Mesh::Mesh(std::size_t n) : n_(n) {
    if (n == 0) {
        throw std::invalid_argument("mesh: subdivisions per side must be >= 1");
    }
    const std::size_t side = n + 1;
    const double hx = 1.0 / static_cast<double>(n);

    vertices_.reserve(side * side);
    boundary_.reserve(side * side);
    for (std::size_t j = 0; j < side; ++j) {
        for (std::size_t i = 0; i < side; ++i) {
            // exact endpoints so the boundary test below is exact
            const double x = (i == n) ? 1.0 : static_cast<double>(i) * hx;
            const double y = (j == n) ? 1.0 : static_cast<double>(j) * hx;
            vertices_.push_back({x, y});
            boundary_.push_back(i == 0 || j == 0 || i == n || j == n);
        }
    }

    cells_.reserve(2 * n * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const VertexIndex v00 = i + j * side;
            const VertexIndex v10 = v00 + 1;
            const VertexIndex v01 = v00 + side;
            const VertexIndex v11 = v01 + 1;
            cells_.push_back({v00, v10, v11});
            cells_.push_back({v00, v11, v01});
        }
    }

    cell_area_ = 1.0 / (2.0 * static_cast<double>(n) * static_cast<double>(n));
}

const Triangle& Mesh::cell_vertex_indices(CellIndex c) const {
    if (c >= cells_.size()) {
        throw std::out_of_range("mesh: cell index " + std::to_string(c) + " out of range [0, " +
                                std::to_string(cells_.size()) + ")");
    }
    return cells_[c];
}

std::array<long, 2> Mesh::lattice(VertexIndex v) const {
    const std::size_t side = n_ + 1;
    return {static_cast<long>(v % side), static_cast<long>(v / side)};
}

double Mesh::h() const { return std::sqrt(2.0) / static_cast<double>(n_); }

Mesh build_unit_square_mesh(std::size_t n) { return Mesh(n); }

}  // namespace pmpd::mesh
