#pragma once

#include <cstdint>
#include <span>

#include "mskit/graph.hpp"
#include "mskit/numeric.hpp"

// Data-parallel inner loops. `serial` is the reference implementation kept
// for testing; `omp` is what the library calls. Both produce identical
// results: each output row is reduced in the same order.
namespace mskit::kernels {

namespace serial {

/// y[i] = sum of x[j] over j in rows.row(i); rows with mask[i] == 0 get 0.
/// An empty mask selects every row.
void gather_sum(const Csr& rows, std::span<const BigInt> x, std::span<BigInt> y,
                std::span<const std::uint8_t> mask = {});

/// y[i] = sum of x[j] over j in rows.row(i), plus shift * x[i].
void spmv(const Csr& rows, std::span<const double> x, std::span<double> y, double shift = 0.0);

}  // namespace serial

namespace omp {

void gather_sum(const Csr& rows, std::span<const BigInt> x, std::span<BigInt> y,
                std::span<const std::uint8_t> mask = {});

void spmv(const Csr& rows, std::span<const double> x, std::span<double> y, double shift = 0.0);

}  // namespace omp

using omp::gather_sum;
using omp::spmv;

}  // namespace mskit::kernels
