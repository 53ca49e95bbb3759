#include "fntrs/transform.hpp"

#include <memory>
#include <mutex>
#include <utility>

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#include <immintrin.h>
#endif

#include "fntrs/errors.hpp"
#include "fntrs/instrument.hpp"

namespace fntrs {

namespace {

std::uint32_t log2_of(std::uint32_t n) {
    std::uint32_t lg = 0;
    while ((1u << lg) < n) ++lg;
    return lg;
}

void check_size(const TransformPlan& plan, std::size_t len) {
    if (len != plan.size)
        throw SizeMismatch("transform: input length does not match plan size");
}

}  // namespace

TransformPlan::TransformPlan(std::uint32_t n)
    : size(n),
      root(gf::root_of_unity(n)),
      inverse_root(gf::root_of_unity(n, true)),
      size_inverse(gf::inv(n % gf::prime)) {
    twiddles.resize(n / 2);
    inverse_twiddles.resize(n / 2);
    Fe w = 1, wi = 1;
    for (std::uint32_t j = 0; j < n / 2; ++j) {
        twiddles[j] = w;
        inverse_twiddles[j] = wi;
        w = gf::mul(w, root);
        wi = gf::mul(wi, inverse_root);
    }
    bit_reversal.resize(n);
    const std::uint32_t bits = log2_of(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t r = 0;
        for (std::uint32_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
        bit_reversal[i] = r;
    }
    stage_twiddles.resize(n > 1 ? n - 1 : 0);
    stage_inverse_twiddles.resize(n > 1 ? n - 1 : 0);
    std::size_t off = 0;
    for (std::uint32_t len = n; len >= 2; len >>= 1) {
        const std::uint32_t half = len >> 1;
        const std::uint32_t stride = n / len;
        for (std::uint32_t j = 0; j < half; ++j) {
            stage_twiddles[off + j] = twiddles[j * stride];
            stage_inverse_twiddles[off + j] = inverse_twiddles[j * stride];
        }
        off += half;
    }
}

const TransformPlan& plan_for(std::uint32_t n) {
    if (n == 0 || n > 65536 || (n & (n - 1)) != 0)
        throw InvalidTransformSize("plan_for: size must be a power of two in [1, 65536]");
    static std::mutex mu;
    static std::unique_ptr<TransformPlan> plans[17];
    const std::uint32_t lg = log2_of(n);
    std::lock_guard<std::mutex> lock(mu);
    if (!plans[lg]) plans[lg] = std::make_unique<TransformPlan>(n);
    return *plans[lg];
}

namespace {

// Butterfly multiply: w is a stage twiddle, so w < 2^16 and the product
// a * w < 2^32 is exact in 32-bit arithmetic. Reduction as in gf::mul.
inline Fe mul_tw(Fe a, Fe w) noexcept {
    const Fe prod = a * w;
    const Fe lo = prod & 0xFFFFu;
    const Fe hi = prod >> 16;
    const Fe r = lo + gf::prime - hi;
    return r >= gf::prime ? r - gf::prime : r;
}

// Decimation in frequency: natural-order input, bit-reversed output.
void dif_core_scalar(Fe* d, std::uint32_t n, const Fe* stages) {
    for (std::uint32_t len = n; len >= 2; len >>= 1) {
        const std::uint32_t half = len >> 1;
        const Fe* tw = stages + (n - len);
        for (std::uint32_t base = 0; base < n; base += len) {
            Fe* lo = d + base;
            Fe* hi = lo + half;
            for (std::uint32_t j = 0; j < half; ++j) {
                const Fe u = lo[j], v = hi[j];
                lo[j] = gf::add(u, v);
                hi[j] = mul_tw(gf::sub(u, v), tw[j]);
            }
        }
    }
}

// Decimation in time: bit-reversed input, natural-order output.
void dit_core_scalar(Fe* d, std::uint32_t n, const Fe* stages) {
    for (std::uint32_t len = 2; len <= n; len <<= 1) {
        const std::uint32_t half = len >> 1;
        const Fe* tw = stages + (n - len);
        for (std::uint32_t base = 0; base < n; base += len) {
            Fe* lo = d + base;
            Fe* hi = lo + half;
            for (std::uint32_t j = 0; j < half; ++j) {
                const Fe u = lo[j];
                const Fe v = mul_tw(hi[j], tw[j]);
                lo[j] = gf::add(u, v);
                hi[j] = gf::sub(u, v);
            }
        }
    }
}

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define FNTRS_AVX2_KERNELS 1

#define FNTRS_AVX2 __attribute__((target("avx2")))

// Lane-wise field arithmetic on canonical values (<= 65536) in uint32 lanes.
// reduce_once maps x in [0, 2p) to x mod p: x - p wraps for x < p, so the
// unsigned min always picks the representative in [0, p).
FNTRS_AVX2 inline __m256i v_reduce(__m256i x, __m256i p) {
    return _mm256_min_epu32(x, _mm256_sub_epi32(x, p));
}

FNTRS_AVX2 inline __m256i v_add(__m256i a, __m256i b, __m256i p) {
    return v_reduce(_mm256_add_epi32(a, b), p);
}

FNTRS_AVX2 inline __m256i v_sub(__m256i a, __m256i b, __m256i p) {
    return v_reduce(_mm256_add_epi32(_mm256_sub_epi32(a, b), p), p);
}

// w lanes must be < 2^16 (stage twiddles are), so mullo is the exact product.
FNTRS_AVX2 inline __m256i v_mul_tw(__m256i a, __m256i w, __m256i p, __m256i m16) {
    const __m256i prod = _mm256_mullo_epi32(a, w);
    const __m256i lo = _mm256_and_si256(prod, m16);
    const __m256i hi = _mm256_srli_epi32(prod, 16);
    return v_reduce(_mm256_add_epi32(_mm256_sub_epi32(lo, hi), p), p);
}

// The three narrowest stages work inside one 8-lane register via vpermd and
// blends; together with the wide stages (half >= 8, unit-stride twiddles)
// this covers any n >= 16 without scalar loops.
FNTRS_AVX2 void dif_core_avx2(Fe* d, std::uint32_t n, const Fe* stages) {
    const __m256i p = _mm256_set1_epi32(static_cast<int>(gf::prime));
    const __m256i m16 = _mm256_set1_epi32(0xFFFF);
    for (std::uint32_t len = n; len >= 16; len >>= 1) {
        const std::uint32_t half = len >> 1;
        const Fe* tw = stages + (n - len);
        for (std::uint32_t base = 0; base < n; base += len) {
            Fe* lo = d + base;
            Fe* hi = lo + half;
            for (std::uint32_t j = 0; j < half; j += 8) {
                const __m256i u = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lo + j));
                const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(hi + j));
                const __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(tw + j));
                _mm256_storeu_si256(reinterpret_cast<__m256i*>(lo + j), v_add(u, v, p));
                _mm256_storeu_si256(reinterpret_cast<__m256i*>(hi + j),
                                    v_mul_tw(v_sub(u, v, p), w, p, m16));
            }
        }
    }
    const Fe* tw8 = stages + (n - 8);
    const Fe* tw4 = stages + (n - 4);
    const __m256i w8 = _mm256_setr_epi32(1, 1, 1, 1, static_cast<int>(tw8[0]),
                                         static_cast<int>(tw8[1]), static_cast<int>(tw8[2]),
                                         static_cast<int>(tw8[3]));
    const __m256i w4 = _mm256_setr_epi32(1, 1, static_cast<int>(tw4[0]),
                                         static_cast<int>(tw4[1]), 1, 1,
                                         static_cast<int>(tw4[0]), static_cast<int>(tw4[1]));
    const __m256i pu8 = _mm256_setr_epi32(0, 1, 2, 3, 0, 1, 2, 3);
    const __m256i pv8 = _mm256_setr_epi32(4, 5, 6, 7, 4, 5, 6, 7);
    const __m256i pu4 = _mm256_setr_epi32(0, 1, 0, 1, 4, 5, 4, 5);
    const __m256i pv4 = _mm256_setr_epi32(2, 3, 2, 3, 6, 7, 6, 7);
    const __m256i pu2 = _mm256_setr_epi32(0, 0, 2, 2, 4, 4, 6, 6);
    const __m256i pv2 = _mm256_setr_epi32(1, 1, 3, 3, 5, 5, 7, 7);
    for (std::uint32_t base = 0; base < n; base += 8) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(d + base));
        __m256i u = _mm256_permutevar8x32_epi32(x, pu8);
        __m256i v = _mm256_permutevar8x32_epi32(x, pv8);
        x = _mm256_blend_epi32(v_add(u, v, p), v_sub(u, v, p), 0xF0);
        x = v_mul_tw(x, w8, p, m16);
        u = _mm256_permutevar8x32_epi32(x, pu4);
        v = _mm256_permutevar8x32_epi32(x, pv4);
        x = _mm256_blend_epi32(v_add(u, v, p), v_sub(u, v, p), 0xCC);
        x = v_mul_tw(x, w4, p, m16);
        u = _mm256_permutevar8x32_epi32(x, pu2);
        v = _mm256_permutevar8x32_epi32(x, pv2);
        x = _mm256_blend_epi32(v_add(u, v, p), v_sub(u, v, p), 0xAA);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(d + base), x);
    }
}

FNTRS_AVX2 void dit_core_avx2(Fe* d, std::uint32_t n, const Fe* stages) {
    const __m256i p = _mm256_set1_epi32(static_cast<int>(gf::prime));
    const __m256i m16 = _mm256_set1_epi32(0xFFFF);
    const Fe* tw8 = stages + (n - 8);
    const Fe* tw4 = stages + (n - 4);
    const __m256i w8 = _mm256_setr_epi32(static_cast<int>(tw8[0]), static_cast<int>(tw8[1]),
                                         static_cast<int>(tw8[2]), static_cast<int>(tw8[3]),
                                         static_cast<int>(tw8[0]), static_cast<int>(tw8[1]),
                                         static_cast<int>(tw8[2]), static_cast<int>(tw8[3]));
    const __m256i w4 = _mm256_setr_epi32(static_cast<int>(tw4[0]), static_cast<int>(tw4[1]),
                                         static_cast<int>(tw4[0]), static_cast<int>(tw4[1]),
                                         static_cast<int>(tw4[0]), static_cast<int>(tw4[1]),
                                         static_cast<int>(tw4[0]), static_cast<int>(tw4[1]));
    const __m256i pu8 = _mm256_setr_epi32(0, 1, 2, 3, 0, 1, 2, 3);
    const __m256i pv8 = _mm256_setr_epi32(4, 5, 6, 7, 4, 5, 6, 7);
    const __m256i pu4 = _mm256_setr_epi32(0, 1, 0, 1, 4, 5, 4, 5);
    const __m256i pv4 = _mm256_setr_epi32(2, 3, 2, 3, 6, 7, 6, 7);
    const __m256i pu2 = _mm256_setr_epi32(0, 0, 2, 2, 4, 4, 6, 6);
    const __m256i pv2 = _mm256_setr_epi32(1, 1, 3, 3, 5, 5, 7, 7);
    for (std::uint32_t base = 0; base < n; base += 8) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(d + base));
        __m256i u = _mm256_permutevar8x32_epi32(x, pu2);
        __m256i v = _mm256_permutevar8x32_epi32(x, pv2);
        x = _mm256_blend_epi32(v_add(u, v, p), v_sub(u, v, p), 0xAA);
        u = _mm256_permutevar8x32_epi32(x, pu4);
        v = v_mul_tw(_mm256_permutevar8x32_epi32(x, pv4), w4, p, m16);
        x = _mm256_blend_epi32(v_add(u, v, p), v_sub(u, v, p), 0xCC);
        u = _mm256_permutevar8x32_epi32(x, pu8);
        v = v_mul_tw(_mm256_permutevar8x32_epi32(x, pv8), w8, p, m16);
        x = _mm256_blend_epi32(v_add(u, v, p), v_sub(u, v, p), 0xF0);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(d + base), x);
    }
    for (std::uint32_t len = 16; len <= n; len <<= 1) {
        const std::uint32_t half = len >> 1;
        const Fe* tw = stages + (n - len);
        for (std::uint32_t base = 0; base < n; base += len) {
            Fe* lo = d + base;
            Fe* hi = lo + half;
            for (std::uint32_t j = 0; j < half; j += 8) {
                const __m256i u = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lo + j));
                const __m256i w = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(tw + j));
                const __m256i v = v_mul_tw(
                    _mm256_loadu_si256(reinterpret_cast<const __m256i*>(hi + j)), w, p, m16);
                _mm256_storeu_si256(reinterpret_cast<__m256i*>(lo + j), v_add(u, v, p));
                _mm256_storeu_si256(reinterpret_cast<__m256i*>(hi + j), v_sub(u, v, p));
            }
        }
    }
}

bool cpu_has_avx2() {
    static const bool has = __builtin_cpu_supports("avx2");
    return has;
}
#endif  // FNTRS_AVX2_KERNELS

void dif_core(std::span<Fe> d, std::uint32_t n, const TransformPlan& plan) {
#ifdef FNTRS_AVX2_KERNELS
    if (n >= 16 && cpu_has_avx2()) {
        dif_core_avx2(d.data(), n, plan.stage_twiddles.data());
        return;
    }
#endif
    dif_core_scalar(d.data(), n, plan.stage_twiddles.data());
}

void dit_core(std::span<Fe> d, std::uint32_t n, const TransformPlan& plan) {
#ifdef FNTRS_AVX2_KERNELS
    if (n >= 16 && cpu_has_avx2()) {
        dit_core_avx2(d.data(), n, plan.stage_inverse_twiddles.data());
        return;
    }
#endif
    dit_core_scalar(d.data(), n, plan.stage_inverse_twiddles.data());
}

void permute(const TransformPlan& plan, std::span<Fe> d) {
    for (std::uint32_t i = 0; i < plan.size; ++i) {
        std::uint32_t j = plan.bit_reversal[i];
        if (i < j) std::swap(d[i], d[j]);
    }
}

}  // namespace

void dif_forward(const TransformPlan& plan, std::span<Fe> data) {
    check_size(plan, data.size());
    note_fnt_execution(plan.size);
    if (plan.size >= 2) dif_core(data, plan.size, plan);
}

void dit_inverse_unscaled(const TransformPlan& plan, std::span<Fe> data) {
    check_size(plan, data.size());
    note_fnt_execution(plan.size);
    if (plan.size >= 2) dit_core(data, plan.size, plan);
}

std::vector<Fe> fnt_forward(const TransformPlan& plan, std::span<const Fe> a) {
    check_size(plan, a.size());
    std::vector<Fe> out(a.begin(), a.end());
    note_fnt_execution(plan.size);
    if (plan.size >= 2) {
        dif_core(out, plan.size, plan);
        permute(plan, out);
    }
    return out;
}

std::vector<Fe> fnt_inverse(const TransformPlan& plan, std::span<const Fe> a) {
    check_size(plan, a.size());
    std::vector<Fe> out(a.begin(), a.end());
    note_fnt_execution(plan.size);
    if (plan.size >= 2) {
        permute(plan, out);
        dit_core(out, plan.size, plan);
    }
    for (auto& x : out) x = gf::mul(x, plan.size_inverse);
    return out;
}

std::vector<Fe> naive_dft(Fe root, std::span<const Fe> a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<Fe> out(n);
    const Fe r = inverse ? gf::inv(root) : root;
    for (std::size_t j = 0; j < n; ++j) {
        Fe rj = gf::pow(r, j);
        Fe acc = 0, w = 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc = gf::add(acc, gf::mul(a[i], w));
            w = gf::mul(w, rj);
        }
        out[j] = acc;
    }
    if (inverse && n > 0) {
        const Fe ninv = gf::inv(static_cast<Fe>(n % gf::prime));
        for (auto& x : out) x = gf::mul(x, ninv);
    }
    return out;
}

}  // namespace fntrs
