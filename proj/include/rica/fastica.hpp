#pragma once

#include <cstdint>

#include "rica/core.hpp"
#include "rica/data_model.hpp"

namespace rica {

struct FastIcaResult {
  Matrix rotation;  // rows are unmixing directions; orthogonal
  bool converged = false;
  int sweeps = 0;   // fixed-point iterations summed over units
};

/// Deflation FastICA with the tanh nonlinearity on identity-covariance data.
/// Each unit is Gram-Schmidt orthogonalized against the previous ones and
/// normalized after every update; the stacked result is symmetrically
/// re-orthonormalized. A unit that fails to converge in `max_sweeps`
/// iterations keeps its last iterate and clears `converged`.
FastIcaResult fastica_baseline(const Dataset& whitened, std::uint64_t seed, double tol = 1e-6,
                               int max_sweeps = 200);

}  // namespace rica
