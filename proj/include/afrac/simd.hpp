#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

// Platform detection for the vector kernels. The AVX2 translation unit is
// compiled with its own target flags; availability is decided at runtime.
#if defined(__x86_64__) || defined(_M_X64)
#define AFRAC_SIMD_X86 1
#else
#define AFRAC_SIMD_X86 0
#endif

namespace afrac::simd {

enum class Isa { scalar, avx2 };

struct Kernels {
    Isa isa;
    const char* name;
    // sum a[i]*b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y += alpha*x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // y = x + beta*y
    void (*xpay)(const double* x, double beta, double* y, std::size_t n);
    // Symmetric Toeplitz product on one grid line: for every i with mask[i] != 0,
    // out[i] += sum_j band[n-1+j-i]*v[j]. band has length 2n-1.
    void (*toeplitz)(const double* band, const double* v, std::size_t n,
                     const std::uint8_t* mask, double* out);
    // y = A*x for a CSR matrix
    void (*csr_spmv)(std::size_t rows, const std::int64_t* row_ptr, const std::int32_t* cols,
                     const double* vals, const double* x, double* y);
};

bool supported(Isa isa);
Isa best_available();
const Kernels& kernels(Isa isa);

// The kernel table used by the library. Defaults to best_available(), or to the
// value of AFRAC_SIMD (scalar|avx2|auto) when set.
const Kernels& active();
void select(Isa isa);
Isa parse_isa(const std::string& name);

}  // namespace afrac::simd
