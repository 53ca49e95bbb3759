#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fntrs/field.hpp"

namespace fntrs {

// Precomputed state for one FNT size. Immutable after construction and
// freely shareable between threads.
struct TransformPlan {
    std::uint32_t size;                  // power of two, 1..65536
    Fe root;                             // element of exact order size
    Fe inverse_root;
    Fe size_inverse;                     // 1/size mod p
    std::vector<Fe> twiddles;            // root^j,         j < size/2
    std::vector<Fe> inverse_twiddles;    // root^-j,        j < size/2
    std::vector<std::uint32_t> bit_reversal;

    // Twiddles regrouped per butterfly stage for unit-stride access: the
    // stage with block length len holds root^(j*size/len) for j < len/2,
    // starting at offset size - len. Every entry is < 2^16 (the exponent
    // never reaches size/2, where the root powers hit -1), which the
    // transform kernels exploit to keep products inside 32 bits.
    std::vector<Fe> stage_twiddles;
    std::vector<Fe> stage_inverse_twiddles;

    explicit TransformPlan(std::uint32_t n);
};

// Cached plan for size n (power of two <= 65536). Throws InvalidTransformSize.
const TransformPlan& plan_for(std::uint32_t n);

// Forward transform: A_j = sum_i a_i r^(ij), natural order in and out.
// Input length must equal plan.size (SizeMismatch otherwise).
std::vector<Fe> fnt_forward(const TransformPlan& plan, std::span<const Fe> a);

// Inverse transform: a_j = (1/n) sum_i A_i r^(-ij).
std::vector<Fe> fnt_inverse(const TransformPlan& plan, std::span<const Fe> a);

// In-place cores for convolution work. dif_forward leaves the spectrum in
// bit-reversed order; dit_inverse consumes bit-reversed order and does not
// apply the 1/n factor. Pointwise products between dif_forward outputs are
// position-consistent, so the pair composes without any reordering pass.
void dif_forward(const TransformPlan& plan, std::span<Fe> data);
void dit_inverse_unscaled(const TransformPlan& plan, std::span<Fe> data);

// Literal O(n^2) evaluation of the transform sums, used as a test oracle.
// root must have order a.size(); applies the 1/n factor when inverse is set.
std::vector<Fe> naive_dft(Fe root, std::span<const Fe> a, bool inverse = false);

}  // namespace fntrs
