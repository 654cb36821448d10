#include "onsflow/grid.hpp"

#include <cmath>
#include <string>

namespace onsflow {

void GridSpec::validate() const {
    if (nx < 4 || ny < 4)
        throw ContractError("GridSpec: nx and ny must be >= 4, got " + std::to_string(nx) + "x" +
                            std::to_string(ny));
    if (!(lx > 0.0) || !(ly > 0.0)) throw ContractError("GridSpec: domain extents must be positive");
    if (bc_x != Bc::Periodic) throw ContractError("GridSpec: x boundary must be periodic");
}

GridSpec make_grid(int nx, int ny, double lx, double ly, Bc bc_y) {
    GridSpec g;
    g.nx = nx;
    g.ny = ny;
    g.lx = lx;
    g.ly = ly;
    g.bc_x = Bc::Periodic;
    g.bc_y = bc_y;
    g.validate();
    return g;
}

void FaceVelocity::enforce_wall() {
    if (!grid.wall_y()) return;
    const int nx = grid.nx;
    for (int i = 0; i < nx; ++i) {
        vy(i, 0) = 0.0;
        vy(i, grid.ny) = 0.0;
    }
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) throw ContractError(std::string(where) + ": fields live on different grids");
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace onsflow
