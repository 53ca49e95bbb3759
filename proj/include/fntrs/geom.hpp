#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "fntrs/field.hpp"

namespace fntrs::geom {

// Precomputed chirp sequence for evaluating polynomials on the geometric
// points root^0 .. root^(n-1): b_i = root^(t_i) with t_i = i(i-1)/2, the
// exponents reduced mod 65536 (the multiplicative group order).
//
// At n = 65536 the chirp route would need size-131072 transforms, which the
// field cannot supply; those tables carry full_domain = true and no b data,
// and evaluation falls back to a single full-size transform instead.
struct ChirpTable {
    std::uint32_t n = 0;
    Fe root = 1;
    bool full_domain = false;
    std::vector<Fe> b;          // 2n-1 entries
    std::vector<Fe> b_inverse;  // n entries, 1/b_i
    std::vector<Fe> b_fnt;      // forward spectrum of b at size 2n, reused per eval
};

// root must have multiplicative order >= n; n a power of two <= 65536
// (InvalidTransformSize otherwise).
ChirpTable build_chirp(std::uint32_t n, Fe root);

// Cached table, keyed by (n, root). Tables are immutable once published.
std::shared_ptr<const ChirpTable> chirp_for(std::uint32_t n, Fe root);

// (a(root^0), a(root^1), ..., a(root^(n-1))). Needs a.size() <= n
// (SizeMismatch). One middle product against the chirp sequence; with the
// table's cached spectrum that is 2 transforms of size 2n per call.
std::vector<Fe> geom_eval(std::span<const Fe> a, const ChirpTable& table);

// (a(r^-1), a(r^-2), ..., a(r^-n)) for r = root: the negative-direction
// geometric sequence, shifted one step. Scales coefficient i by r^-i and
// reuses the cached (n, 1/root) chirp table.
std::vector<Fe> geom_eval_negative(std::span<const Fe> a, std::uint32_t n, Fe root);

}  // namespace fntrs::geom
