#include "mskit/kernels.hpp"

#include <omp.h>

namespace mskit::kernels::omp {

void gather_sum(const Csr& rows, std::span<const BigInt> x, std::span<BigInt> y, std::span<const std::uint8_t> mask) {
  const auto n = static_cast<std::int64_t>(rows.rows());
  // Row cost varies with in-degree and operand size.
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < n; ++i) {
    BigInt& acc = y[i];
    acc = 0;
    if (!mask.empty() && !mask[i]) continue;
    for (std::uint32_t j : rows.row(static_cast<std::size_t>(i))) acc += x[j];
  }
}

void spmv(const Csr& rows, std::span<const double> x, std::span<double> y, double shift) {
  const auto n = static_cast<std::int64_t>(rows.rows());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    double acc = shift * x[i];
    for (std::uint32_t j : rows.row(static_cast<std::size_t>(i))) acc += x[j];
    y[i] = acc;
  }
}

}  // namespace mskit::kernels::omp
