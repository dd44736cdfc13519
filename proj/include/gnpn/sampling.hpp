#pragma once

#include <cstddef>

#include "gnpn/graphgen.hpp"
#include "gnpn/matcore.hpp"
#include "gnpn/rng.hpp"

namespace gnpn {

/// n rows of N(0, sigma): L z with L the Cholesky factor of sigma and z
/// filled row by row from the stream.
SampleBatch sample_gaussian(const SymmetricMatrix& sigma, std::size_t n, RngStream& rng);

/// Same with sigma = gamma_rho^{-1}.
SampleBatch sample_gaussian(const PrecisionModel& model, std::size_t n, RngStream& rng);

}  // namespace gnpn
