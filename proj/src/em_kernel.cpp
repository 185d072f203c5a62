#include "em_kernel.hpp"

namespace bkm::detail {

FlatPolynomial::FlatPolynomial(const Polynomial& p) : dim(p.dimension()) {
    for (const auto& [exp, c] : p.terms()) {
        coeffs.push_back(c);
        for (std::size_t d = 0; d < dim; ++d) exponents.push_back(exp[d]);
    }
}

namespace {

#if defined(__GNUC__)
#define BKM_ALWAYS_INLINE [[gnu::always_inline]] inline
#else
#define BKM_ALWAYS_INLINE inline
#endif

BKM_ALWAYS_INLINE void evaluate_block(const FlatPolynomial& poly, std::size_t n, const double* x, double* out,
                                      double* term) {
    constexpr std::size_t B = kPathBlock;
    for (std::size_t p = 0; p < n; ++p) out[p] = 0.0;
    for (std::size_t t = 0; t < poly.coeffs.size(); ++t) {
        const double c = poly.coeffs[t];
        for (std::size_t p = 0; p < n; ++p) term[p] = c;
        const int* e = &poly.exponents[t * poly.dim];
        for (std::size_t d = 0; d < poly.dim; ++d) {
            const double* xd = x + d * B;
            for (int k = 0; k < e[d]; ++k) {
                for (std::size_t p = 0; p < n; ++p) term[p] *= xd[p];
            }
        }
        for (std::size_t p = 0; p < n; ++p) out[p] += term[p];
    }
}

BKM_ALWAYS_INLINE void em_step_body(const EmBlock& blk, double* x, const double* z, double* scratch) {
    constexpr std::size_t B = kPathBlock;
    const std::size_t n = blk.paths;
    double* dx = scratch;
    double* term = scratch + blk.dim * B;
    for (std::size_t i = 0; i < blk.dim; ++i) {
        double* dxi = dx + i * B;
        evaluate_block(blk.drift[i], n, x, dxi, term);
        // term <- (B z)_i
        for (std::size_t p = 0; p < n; ++p) term[p] = 0.0;
        for (std::size_t j = 0; j <= i; ++j) {
            const double bij = blk.noise[i * blk.dim + j];
            const double* zj = z + j * B;
            for (std::size_t p = 0; p < n; ++p) term[p] += bij * zj[p];
        }
        for (std::size_t p = 0; p < n; ++p) dxi[p] = dxi[p] * blk.dt + term[p] * blk.sqrt_dt;
    }
    for (std::size_t i = 0; i < blk.dim; ++i) {
        for (std::size_t p = 0; p < n; ++p) x[i * B + p] += dx[i * B + p];
    }
}

void em_step_scalar(const EmBlock& blk, double* x, const double* z, double* scratch) {
    em_step_body(blk, x, z, scratch);
}

#if defined(__x86_64__) && defined(__GNUC__)
#define BKM_HAVE_AVX2_KERNEL 1
[[gnu::target("avx2")]] void em_step_avx2(const EmBlock& blk, double* x, const double* z, double* scratch) {
    em_step_body(blk, x, z, scratch);
}
#else
#define BKM_HAVE_AVX2_KERNEL 0
#endif

}  // namespace

KernelIsa detect_kernel_isa() {
#if BKM_HAVE_AVX2_KERNEL
    if (__builtin_cpu_supports("avx2")) return KernelIsa::Avx2;
#endif
    return KernelIsa::Scalar;
}

const char* kernel_isa_name(KernelIsa isa) { return isa == KernelIsa::Avx2 ? "avx2" : "scalar"; }

void em_step(KernelIsa isa, const EmBlock& block, double* x, const double* z, double* scratch) {
#if BKM_HAVE_AVX2_KERNEL
    if (isa == KernelIsa::Avx2) {
        em_step_avx2(block, x, z, scratch);
        return;
    }
#else
    (void)isa;
#endif
    em_step_scalar(block, x, z, scratch);
}

}  // namespace bkm::detail
