#include "mskit/kernels.hpp"

namespace mskit::kernels::serial {

void gather_sum(const Csr& rows, std::span<const BigInt> x, std::span<BigInt> y, std::span<const std::uint8_t> mask) {
  const std::size_t n = rows.rows();
  for (std::size_t i = 0; i < n; ++i) {
    BigInt& acc = y[i];
    acc = 0;
    if (!mask.empty() && !mask[i]) continue;
    for (std::uint32_t j : rows.row(i)) acc += x[j];
  }
}

void spmv(const Csr& rows, std::span<const double> x, std::span<double> y, double shift) {
  const std::size_t n = rows.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = shift * x[i];
    for (std::uint32_t j : rows.row(i)) acc += x[j];
    y[i] = acc;
  }
}

}  // namespace mskit::kernels::serial
