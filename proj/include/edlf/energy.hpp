#pragma once

#include <vector>

#include "edlf/grid.hpp"

namespace edlf {

// Discrete Dirichlet energy of the cone-valued map:
//   E = h * sum over 6-neighbor forward edges of edge_sq_distance(w_i, w_j)
//     + h^3 * sum over nodes of psi(|w_i|)          (when a potential is set)
// Edges exist between pairs of non-exterior nodes; the per-edge sign is
// re-evaluated on every call.
double total_energy(const LineFieldState& state);

// Exact gradient of total_energy with respect to interior node values.
// BoundaryFixed and Exterior nodes get zero. The s-direction term uses the
// subgradient convention at the vertex: nodes with |w| below
// 1e-14 * (boundary max s) contribute no s-direction component.
void energy_gradient(const LineFieldState& state, std::vector<Vec3>& grad);

// One fused pass computing both; returns the energy.
double energy_and_gradient(const LineFieldState& state, std::vector<Vec3>& grad);

// Scale against which gradient norms are measured: (energy / h) / |w|_2 over
// interior nodes. Relative gradient norm = |grad|_2 / gradient_scale.
double gradient_scale(const LineFieldState& state, double energy);

// Directional derivative of total_energy along the radial perturbation
// delta w_i = phi_i * w_i. phi must vanish on BoundaryFixed nodes. Exact zero
// for a critical point of the discrete energy.
double radial_variation_residual(const LineFieldState& state, const std::vector<double>& phi);

// |radial_variation_residual| / (|phi|_2 * |w|_2 * gradient_scale); comparable
// to the solver's relative gradient tolerance.
double radial_variation_residual_normalized(const LineFieldState& state,
                                            const std::vector<double>& phi);

// Norm of the discrete divergence of the stress-energy tensor
// 2 grad u (x) grad u - |grad u|^2 id, built from sign-aligned central
// differences of the embedded field. Zero where the two-deep stencil does not
// fit. O(h) small on minimized smooth regions; order one near defects.
std::vector<double> stationarity_residual(const LineFieldState& state);

}  // namespace edlf
