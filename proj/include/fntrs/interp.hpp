#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "fntrs/field.hpp"
#include "fntrs/poly.hpp"

namespace fntrs::interp {

// Position-only decode state for points x_i = r^(z_i) in the size-n transform
// domain. Building one costs a few transforms; reusing it leaves only the
// cheap per-codeword steps, which is the point: erasure positions are stable
// across many codewords.
struct DecodePlan {
    std::uint32_t n = 0;                     // domain size, power of two
    std::uint32_t k = 0;
    std::vector<std::uint32_t> positions;    // z_i in the order values must follow
    poly::SubproductTree a_tree;             // leaves (x - x_i); root A, degree k
    std::vector<Fe> aprime_at_x_inv;         // 1/A'(x_i), aligned with positions

    // Forward spectrum of A at size product_size = next power of two >= 2k,
    // reused by every interpolation's final product. Absent (product_size 0)
    // when 2k exceeds the largest transform; the product then splits instead.
    std::uint32_t product_size = 0;
    std::vector<Fe> a_fnt;

    const poly::Poly& a() const { return a_tree.root(); }
};

// Steps that depend only on the erasure positions: A from a subproduct tree,
// its derivative, and A'(x_i) for every point via one geometric-sequence
// evaluation over the whole domain. positions must be distinct and < n.
// Throws TooFewPositions, PositionOutOfRange, DuplicatePosition,
// InvalidTransformSize.
DecodePlan build_plan(std::uint32_t n, std::span<const std::uint32_t> positions);

// LRU-cached plans (16 entries), keyed by (n, position set). The cached
// plan's positions are canonicalized to ascending order — align values
// accordingly when interpolating.
std::shared_ptr<const DecodePlan> plan_for(std::uint32_t n,
                                           std::span<const std::uint32_t> positions);

// The unique P with deg(P) < k and P(x_i) = values[i]. Per-codeword steps:
// scale by 1/A'(x_i), evaluate the resulting sparse polynomial on the
// negative geometric sequence, negate into the series S, and keep the first
// k coefficients of A*S. values.size() must equal plan.k (SizeMismatch).
poly::Poly interpolate(const DecodePlan& plan, std::span<const Fe> values);

// Classical quadratic interpolation, used as the reference everywhere and as
// the production path for small k. Runs no transforms at all. Throws
// DuplicatePoint.
poly::Poly lagrange_oracle(std::span<const std::pair<Fe, Fe>> points);

}  // namespace fntrs::interp
