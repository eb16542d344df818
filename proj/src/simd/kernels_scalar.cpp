#include "kernels_internal.hpp"

namespace afrac::simd::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpay_scalar(const double* x, double beta, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void toeplitz_scalar(const double* band, const double* v, std::size_t n,
                     const std::uint8_t* mask, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask[i]) continue;
        out[i] += dot_scalar(band + (n - 1 - i), v, n);
    }
}

void csr_scalar(std::size_t rows, const std::int64_t* row_ptr, const std::int32_t* cols,
                const double* vals, const double* x, double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += vals[k] * x[cols[k]];
        y[r] = s;
    }
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k{Isa::scalar, "scalar", dot_scalar, axpy_scalar,
                           xpay_scalar, toeplitz_scalar, csr_scalar};
    return k;
}

}  // namespace afrac::simd::detail
