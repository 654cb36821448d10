#pragma once

#include <utility>

#include "onsflow/grid.hpp"

// Discrete differential operators on the MAC grid. The pairs
// (gradient_cc_to_face, divergence_face_to_cc) and the composed laplacian are
// summation-by-parts adjoints under the volume-weighted inner products, and
// convect_B is skew by construction, so the discrete energy balances close to
// round-off. All operators are pure: inputs in, new field out.

namespace onsflow {

// 5-point Laplacian of a cell-centered field. Periodic in x; y per grid
// (periodic wrap or zero-normal-derivative ghost reflection at walls).
ScalarField laplacian(const ScalarField& f);

// Centered two-point gradient onto faces. Wall faces carry 0 (no normal flux).
FaceVelocity gradient_cc_to_face(const ScalarField& f);

// Conservative face-difference divergence per cell.
ScalarField divergence_face_to_cc(const FaceVelocity& w);

// Skew-symmetric convection B(v,u) = (v.grad u + div(v u)) / 2, realized as
// (F - F^T)/2 with F the conservative flux form, so <B(v,u), u> = 0 exactly.
FaceVelocity convect_B(const FaceVelocity& v, const FaceVelocity& u);

// Conservative scalar transport div(u f) with f interpolated to faces.
ScalarField convect_scalar(const FaceVelocity& u, const ScalarField& f);

// Full velocity gradient tensor at cell centers:
// xx = du/dx, xy = du/dy, yx = dv/dx, yy = dv/dy.
Tensor2Field velocity_gradient(const FaceVelocity& u);

// Strain D = (G + G^T)/2 and vorticity W = (G - G^T)/2 of the cell tensor.
std::pair<Tensor2Field, Tensor2Field> strain_and_vorticity(const FaceVelocity& u);

// Volume-weighted inner products.
double inner(const ScalarField& f, const ScalarField& g);
double inner(const FaceVelocity& a, const FaceVelocity& b);
double inner(const CCVectorField& a, const CCVectorField& b);

// Vector Laplacian of a velocity field with no-slip ghost reflection at walls
// (wall-normal faces untouched, kept zero).
FaceVelocity laplacian_velocity(const FaceVelocity& w);

// Discrete squared gradient seminorms, exact quadratic forms of the
// corresponding Laplacians: grad_norm_sq(f) == -<laplacian(f), f> and
// grad_norm_sq(u) == -<laplacian_velocity(u), u>.
double grad_norm_sq(const ScalarField& f);
double grad_norm_sq(const FaceVelocity& u);

// Face interpolation of a cell-centered scalar multiplied onto a face field,
// i.e. (I_face f) .* w. Shared by scalar transport and capillary forcing so
// their discrete pairing cancels identically.
FaceVelocity face_scale_by_cc(const ScalarField& f, const FaceVelocity& w);

// Face-to-center interpolation of the velocity.
CCVectorField cc_velocity(const FaceVelocity& u);

// Centered derivatives of a cell-centered field at cell centers.
// d/dy uses zero-normal-derivative ghosts at walls (even reflection).
ScalarField dx_cc(const ScalarField& f);
ScalarField dy_cc(const ScalarField& f);

// Small field algebra helpers.
ScalarField lincomb(double a, const ScalarField& f, double b, const ScalarField& g);
FaceVelocity lincomb(double a, const FaceVelocity& f, double b, const FaceVelocity& g);
CCVectorField lincomb(double a, const CCVectorField& f, double b, const CCVectorField& g);
ScalarField mul(const ScalarField& f, const ScalarField& g);

double field_max_abs(const ScalarField& f);
double field_max_abs(const FaceVelocity& u);
// Compensated integral <f, 1> (used for mass bookkeeping).
double field_integral(const ScalarField& f);
double field_mean(const ScalarField& f);

namespace detail {
// Raw-pointer Laplacians shared with the linear solvers; layouts match
// ScalarField / FaceVelocity storage. The y-face version writes zero rows at
// walls (those degrees of freedom are handled as identity by the solvers).
void lap_cc(const GridSpec& g, const double* f, double* out);
void lap_xface(const GridSpec& g, const double* f, double* out);
void lap_yface(const GridSpec& g, const double* f, double* out);
}  // namespace detail

}  // namespace onsflow
