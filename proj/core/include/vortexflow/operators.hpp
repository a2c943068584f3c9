#pragma once

#include "vortexflow/grid.hpp"

namespace vortexflow {

/// Two-point differences onto the staggered faces: ux(i,j) = (f(i+1,j) - f(i,j)) / h.
/// The wall faces (i = n-1 for ux, j = n-1 for uy) carry zero.
VectorField gradient(const ScalarField& f);

/// Centered cell gradient, one-sided on the boundary ring.
VectorField gradient_centered(const ScalarField& f);

/// Divergence of either staggering. Face fields use the compact difference,
/// so divergence(gradient(f)) is exactly laplacian5(f) on interior nodes.
/// Cell fields use centered differences (one-sided on the boundary ring).
ScalarField divergence(const VectorField& v);

/// Five-point Laplacian. Boundary nodes use zero-gradient ghost values,
/// which coincides with divergence(gradient(f)) everywhere.
ScalarField laplacian5(const ScalarField& f);

}  // namespace vortexflow
