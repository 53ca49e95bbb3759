#include "fntrs/poly.hpp"

#include <algorithm>
#include <cassert>

#include "fntrs/errors.hpp"
#include "fntrs/transform.hpp"

namespace fntrs::poly {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

// Raw convolution of the given coefficient ranges: full length la+lb-1, no
// trailing-zero stripping. The recursion below works on slices that are not
// canonical, so only the public entry points normalize.
std::vector<Fe> school_raw(std::span<const Fe> a, std::span<const Fe> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Fe> out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = gf::add(out[i + j], gf::mul(a[i], b[j]));
    }
    return out;
}

void sub_prefix(std::vector<Fe>& acc, const std::vector<Fe>& v) {
    assert(v.size() <= acc.size());
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] = gf::sub(acc[i], v[i]);
}

void add_at(std::vector<Fe>& acc, const std::vector<Fe>& v, std::size_t offset) {
    assert(offset + v.size() <= acc.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        acc[offset + i] = gf::add(acc[offset + i], v[i]);
}

std::vector<Fe> kara_raw(std::span<const Fe> a, std::span<const Fe> b) {
    if (a.empty() || b.empty()) return {};
    if (std::min(a.size(), b.size()) <= 16) return school_raw(a, b);

    std::size_t m = (std::max(a.size(), b.size()) + 1) / 2;
    std::span<const Fe> a0 = a.first(std::min(m, a.size()));
    std::span<const Fe> a1 = a.subspan(a0.size());
    std::span<const Fe> b0 = b.first(std::min(m, b.size()));
    std::span<const Fe> b1 = b.subspan(b0.size());

    std::vector<Fe> z0 = kara_raw(a0, b0);
    std::vector<Fe> z2 = kara_raw(a1, b1);

    std::vector<Fe> as(std::max(a0.size(), a1.size()), 0);
    for (std::size_t i = 0; i < a0.size(); ++i) as[i] = a0[i];
    for (std::size_t i = 0; i < a1.size(); ++i) as[i] = gf::add(as[i], a1[i]);
    std::vector<Fe> bs(std::max(b0.size(), b1.size()), 0);
    for (std::size_t i = 0; i < b0.size(); ++i) bs[i] = b0[i];
    for (std::size_t i = 0; i < b1.size(); ++i) bs[i] = gf::add(bs[i], b1[i]);

    // z1 - z0 - z2 = a0*b1 + a1*b0. The raw z1 can run one slot past the
    // output when the split is uneven, but those top slots cancel exactly,
    // so strip them before placing.
    std::vector<Fe> z1 = kara_raw(as, bs);
    sub_prefix(z1, z0);
    sub_prefix(z1, z2);
    while (!z1.empty() && z1.back() == 0) z1.pop_back();

    std::vector<Fe> out(a.size() + b.size() - 1, 0);
    add_at(out, z0, 0);
    add_at(out, z1, m);
    add_at(out, z2, 2 * m);
    return out;
}

std::vector<Fe> fnt_raw(std::span<const Fe> a, std::span<const Fe> b) {
    if (a.empty() || b.empty()) return {};
    std::size_t len = a.size() + b.size() - 1;
    if (len > 65536) throw ProductTooLarge("product needs " + std::to_string(len) +
                                           " coefficients, transform limit is 65536");
    std::size_t m = next_pow2(len);
    const TransformPlan& plan = plan_for(static_cast<std::uint32_t>(m));

    std::vector<Fe> fa(m, 0), fb(m, 0);
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    dif_forward(plan, fa);
    dif_forward(plan, fb);
    // Both spectra carry the same bit-reversed order, so the pointwise
    // product feeds the inverse core directly; 1/m is folded in here.
    for (std::size_t i = 0; i < m; ++i)
        fa[i] = gf::mul(gf::mul(fa[i], fb[i]), plan.size_inverse);
    dit_inverse_unscaled(plan, fa);
    fa.resize(len);
    return fa;
}

}  // namespace

void normalize(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly mul_schoolbook(std::span<const Fe> a, std::span<const Fe> b) {
    Poly out = school_raw(a, b);
    normalize(out);
    return out;
}

Poly mul_karatsuba(std::span<const Fe> a, std::span<const Fe> b) {
    Poly out = kara_raw(a, b);
    normalize(out);
    return out;
}

Poly mul_fnt(std::span<const Fe> a, std::span<const Fe> b) {
    Poly out = fnt_raw(a, b);
    normalize(out);
    return out;
}

Poly mul(std::span<const Fe> a, std::span<const Fe> b, const MulTuning& tuning) {
    if (a.empty() || b.empty()) return {};
    std::size_t len = a.size() + b.size() - 1;
    Poly out;
    if (len < tuning.schoolbook_below)
        out = school_raw(a, b);
    else if (len < tuning.karatsuba_below)
        out = kara_raw(a, b);
    else
        out = fnt_raw(a, b);
    normalize(out);
    return out;
}

Poly mul_low(std::span<const Fe> a, std::span<const Fe> b, std::size_t count,
             const MulTuning& tuning) {
    std::span<const Fe> at = a.first(std::min(count, a.size()));
    std::span<const Fe> bt = b.first(std::min(count, b.size()));
    if (at.empty() || bt.empty()) return {};

    std::size_t len = at.size() + bt.size() - 1;
    if (len <= 65536) {
        Poly out = mul(at, bt, tuning);
        if (out.size() > count) out.resize(count);
        normalize(out);
        return out;
    }

    // Too long for one transform: split both operands at h and drop the
    // high*high part, which only touches degrees >= 2h >= count.
    std::size_t h = (count + 1) / 2;
    std::span<const Fe> alo = at.first(std::min(h, at.size()));
    std::span<const Fe> ahi = at.subspan(alo.size());
    std::span<const Fe> blo = bt.first(std::min(h, bt.size()));
    std::span<const Fe> bhi = bt.subspan(blo.size());

    Poly out = mul(alo, blo, tuning);
    out.resize(count, 0);
    Poly cross1 = mul_low(alo, bhi, count - h, tuning);
    Poly cross2 = mul_low(ahi, blo, count - h, tuning);
    add_at(out, cross1, h);
    add_at(out, cross2, h);
    normalize(out);
    return out;
}

std::vector<Fe> middle_product(std::span<const Fe> a, std::span<const Fe> b) {
    std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw SizeMismatch("middle product needs a power-of-two short operand, got " +
                           std::to_string(n));
    if (b.size() != 2 * n - 1)
        throw SizeMismatch("middle product long operand must have " +
                           std::to_string(2 * n - 1) + " entries, got " +
                           std::to_string(b.size()));
    std::size_t m = 2 * n;
    if (m > 65536)
        throw ProductTooLarge("middle product needs a size-" + std::to_string(m) +
                              " transform, limit is 65536");
    const TransformPlan& plan = plan_for(static_cast<std::uint32_t>(m));

    // Cyclic convolution of size 2n. The acyclic product of the two operands
    // tops out at degree 3n-3, so for output degrees n-1..2n-2 the wrapped
    // contributions (degree >= j+2n) do not exist and the slice is exact.
    std::vector<Fe> fa(m, 0), fb(m, 0);
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    dif_forward(plan, fa);
    dif_forward(plan, fb);
    for (std::size_t i = 0; i < m; ++i)
        fa[i] = gf::mul(gf::mul(fa[i], fb[i]), plan.size_inverse);
    dit_inverse_unscaled(plan, fa);

    return std::vector<Fe>(fa.begin() + (n - 1), fa.begin() + (2 * n - 1));
}

Poly derivative(std::span<const Fe> a) {
    if (a.size() <= 1) return {};
    Poly out(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i)
        out[i - 1] = gf::mul(a[i], static_cast<Fe>(i % gf::prime));
    normalize(out);
    return out;
}

Fe eval_horner(std::span<const Fe> a, Fe x) {
    Fe acc = 0;
    for (std::size_t i = a.size(); i-- > 0;) acc = gf::add(gf::mul(acc, x), a[i]);
    return acc;
}

SubproductTree build_subproduct_tree(std::span<const Fe> points) {
    if (points.empty()) throw Error("subproduct tree needs at least one point");
    {
        std::vector<Fe> sorted(points.begin(), points.end());
        std::sort(sorted.begin(), sorted.end());
        auto dup = std::adjacent_find(sorted.begin(), sorted.end());
        if (dup != sorted.end())
            throw DuplicatePoint("point " + std::to_string(*dup) + " repeats");
    }

    SubproductTree tree;
    std::vector<Poly> level;
    level.reserve(points.size());
    for (Fe x : points) level.push_back(Poly{gf::neg(x), 1});
    tree.levels.push_back(std::move(level));

    while (tree.levels.back().size() > 1) {
        const std::vector<Poly>& prev = tree.levels.back();
        std::vector<Poly> next;
        next.reserve((prev.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < prev.size(); i += 2)
            next.push_back(mul(prev[i], prev[i + 1]));
        if (prev.size() % 2 == 1) next.push_back(prev.back());
        tree.levels.push_back(std::move(next));
    }
    return tree;
}

}  // namespace fntrs::poly
