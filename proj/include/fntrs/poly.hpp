#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fntrs/field.hpp"

namespace fntrs::poly {

// Coefficients in ascending degree. Canonical form has no trailing zeros;
// the zero polynomial is the empty vector.
using Poly = std::vector<Fe>;

void normalize(Poly& p);

// Degree of a canonical polynomial; the zero polynomial reports -1.
inline long degree(const Poly& p) { return static_cast<long>(p.size()) - 1; }

// Multiplication tiers. All produce identical exact products; mul() picks a
// tier from the product length (schoolbook below 32, Karatsuba below 64,
// transform-based from 64 up). The transform tier is bounded by the largest
// transform the field supports and throws ProductTooLarge past 65536
// product coefficients.
struct MulTuning {
    std::size_t schoolbook_below = 32;
    std::size_t karatsuba_below = 64;
};

Poly mul_schoolbook(std::span<const Fe> a, std::span<const Fe> b);
Poly mul_karatsuba(std::span<const Fe> a, std::span<const Fe> b);
Poly mul_fnt(std::span<const Fe> a, std::span<const Fe> b);
Poly mul(std::span<const Fe> a, std::span<const Fe> b, const MulTuning& tuning = {});

// First `count` coefficients of a*b. Splits the operands when the full
// product would exceed the transform bound, so it works for any count <= 65536.
Poly mul_low(std::span<const Fe> a, std::span<const Fe> b, std::size_t count,
             const MulTuning& tuning = {});

// Coefficients of degrees n-1 .. 2n-2 of a*b, where a has exactly n
// coefficients and b exactly 2n-1 (n a power of two). Computed with
// size-2n transforms instead of the 4n a full product would need.
std::vector<Fe> middle_product(std::span<const Fe> a, std::span<const Fe> b);

// Formal derivative, coefficient i scaled by i mod p.
Poly derivative(std::span<const Fe> a);

Fe eval_horner(std::span<const Fe> a, Fe x);

// Binary tree of partial products of (x - x_j). levels[0] holds the leaves,
// each level pairs adjacent nodes (an odd node is carried up unchanged),
// and the last level's single entry is the full product, degree k.
struct SubproductTree {
    std::vector<std::vector<Poly>> levels;

    const Poly& root() const { return levels.back().front(); }
};

SubproductTree build_subproduct_tree(std::span<const Fe> points);

}  // namespace fntrs::poly
