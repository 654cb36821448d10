#pragma once

#include <cstddef>
#include <vector>

#include "onsflow/errors.hpp"

namespace onsflow {

// Boundary kind per direction. x is always periodic; y may be periodic or a
// solid wall (no-slip velocity, zero normal flux for cell-centered fields).
enum class Bc { Periodic, Wall };

// Uniform 2D MAC grid: scalars at cell centers, velocity components on faces.
struct GridSpec {
    int nx = 0, ny = 0;
    double lx = 1.0, ly = 1.0;
    Bc bc_x = Bc::Periodic;
    Bc bc_y = Bc::Periodic;

    double hx() const { return lx / nx; }
    double hy() const { return ly / ny; }
    double cell_volume() const { return hx() * hy(); }
    double area() const { return lx * ly; }
    int ncells() const { return nx * ny; }
    // y-face row count for the v component (walls store explicit zero rows)
    int nvy() const { return bc_y == Bc::Wall ? ny + 1 : ny; }
    double cell_x(int i) const { return (i + 0.5) * hx(); }
    double cell_y(int j) const { return (j + 0.5) * hy(); }

    bool wall_y() const { return bc_y == Bc::Wall; }
    bool operator==(const GridSpec& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly &&
               bc_x == o.bc_x && bc_y == o.bc_y;
    }

    void validate() const;
};

GridSpec make_grid(int nx, int ny, double lx, double ly, Bc bc_y);

// Cell-centered scalar unknown (phase field, pressure, chemical potential,
// quadratization auxiliary, director components, ...).
struct ScalarField {
    GridSpec grid;
    std::vector<double> a;  // row-major, index j*nx + i

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g, double fill = 0.0)
        : grid(g), a(static_cast<std::size_t>(g.nx) * g.ny, fill) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(j) * grid.nx + i]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(j) * grid.nx + i]; }
    std::size_t size() const { return a.size(); }
    double* data() { return a.data(); }
    const double* data() const { return a.data(); }
};

// MAC staggered velocity: u on x-faces (nx*ny, x wraps), v on y-faces.
// With a wall in y, v carries ny+1 rows and the rows j=0 and j=ny are the
// wall faces, held at exactly zero.
struct FaceVelocity {
    GridSpec grid;
    std::vector<double> u;  // index j*nx + i, face between cells (i-1,j),(i,j)
    std::vector<double> v;  // index j*nx + i, face between cells (i,j-1),(i,j)

    FaceVelocity() = default;
    explicit FaceVelocity(const GridSpec& g, double fu = 0.0, double fv = 0.0)
        : grid(g),
          u(static_cast<std::size_t>(g.nx) * g.ny, fu),
          v(static_cast<std::size_t>(g.nx) * g.nvy(), fv) {
        if (g.wall_y() && fv != 0.0) enforce_wall();
    }

    double& ux(int i, int j) { return u[static_cast<std::size_t>(j) * grid.nx + i]; }
    double ux(int i, int j) const { return u[static_cast<std::size_t>(j) * grid.nx + i]; }
    double& vy(int i, int j) { return v[static_cast<std::size_t>(j) * grid.nx + i]; }
    double vy(int i, int j) const { return v[static_cast<std::size_t>(j) * grid.nx + i]; }

    // Zero the wall-normal faces (no-op on periodic grids).
    void enforce_wall();
};

// Cell-centered two-component vector (director field, molecular field).
struct CCVectorField {
    ScalarField x, y;

    CCVectorField() = default;
    explicit CCVectorField(const GridSpec& g, double fx = 0.0, double fy = 0.0)
        : x(g, fx), y(g, fy) {}
    const GridSpec& grid() const { return x.grid; }
};

// Cell-centered 2x2 tensor (velocity gradient, strain, vorticity).
struct Tensor2Field {
    ScalarField xx, xy, yx, yy;
    explicit Tensor2Field(const GridSpec& g) : xx(g), xy(g), yx(g), yy(g) {}
    Tensor2Field() = default;
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);
bool all_finite(const std::vector<double>& v);

}  // namespace onsflow
