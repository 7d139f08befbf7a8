#pragma once

#include <cstdint>
#include <random>

#include "opconvex/hermitian.hpp"

namespace opconvex {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; decorrelates consecutive seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Per-item seed from (master seed, item index). Items seeded this way can
/// be evaluated in any order and still reproduce a serial run.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// rows x cols matrix with i.i.d. standard complex Gaussian entries
/// (real and imaginary parts N(0, 1/2)).
ComplexMatrix complex_gaussian(Rng& rng, int rows, int cols);

/// Columns of a rows x cols (rows >= cols) matrix with orthonormal columns,
/// Haar distributed: QR of a complex Gaussian with the phases of R's
/// diagonal moved into Q.
ComplexMatrix haar_isometry(Rng& rng, int rows, int cols);

ComplexMatrix haar_unitary(Rng& rng, int dim);

}  // namespace opconvex
