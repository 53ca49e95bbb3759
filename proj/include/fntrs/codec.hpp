#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fntrs/field.hpp"
#include "fntrs/instrument.hpp"

namespace fntrs::codec {

// (n, k) erasure code over the size-n_domain transform domain. n_domain is
// the least power of two >= n; encoding evaluates on the full domain and
// keeps the first n outputs (puncturing), so any n in [k, 65536] works.
struct CodeParams {
    std::uint32_t k = 0;
    std::uint32_t n = 0;
    std::uint32_t n_domain = 0;
    bool systematic = true;

    // Validates 1 <= k <= n <= 65536 (SizeMismatch otherwise).
    static CodeParams make(std::uint32_t k, std::uint32_t n, bool systematic = true);
};

struct Symbol {
    std::uint32_t position = 0;  // in [0, n)
    Fe value = 0;

    friend bool operator==(const Symbol&, const Symbol&) = default;
};

// A received (possibly punctured) codeword: any subset of the n encoded
// symbols, in any order. Positions must be distinct.
using Codeword = std::vector<Symbol>;

// Algorithm selection. Auto picks the quadratic path for k <= 256 and the
// transform path above; the explicit values force one side (outputs are
// bit-identical either way).
enum class Path { Auto, Fast, Direct };

inline constexpr std::uint32_t direct_path_max_k = 256;

// One forward transform of the zero-padded source; output j is s(r^j).
std::vector<Fe> encode_nonsystematic(const CodeParams& params, std::span<const Fe> source);

// Recover the source coefficients from any k received symbols. Uses the k
// lowest received positions; with every domain position present (and
// n == n_domain) it is a single inverse transform. Throws NotEnoughSymbols,
// DuplicatePosition, PositionOutOfRange.
std::vector<Fe> decode_nonsystematic(const CodeParams& params, const Codeword& received,
                                     Path path = Path::Auto);

// Systematic encoding: interpolate the source at positions 0..k-1 into
// intermediate symbols, then transform. Output positions 0..k-1 carry the
// source verbatim.
std::vector<Fe> encode_systematic(const CodeParams& params, std::span<const Fe> source,
                                  Path path = Path::Auto);

// Systematic decoding: copies the source straight out when positions 0..k-1
// all arrived; otherwise rebuilds the intermediate polynomial from the k
// lowest received positions and re-evaluates.
std::vector<Fe> decode_systematic(const CodeParams& params, const Codeword& received,
                                  Path path = Path::Auto);

// Quadratic reference encoders/decoder. Same outputs as their fast
// counterparts; no dependence on the interpolation pipeline.
std::vector<Fe> encode_systematic_direct(const CodeParams& params,
                                         std::span<const Fe> source);
// Intermediate symbols by classical interpolation, then one transform:
// exactly 1 FNT of size n_domain regardless of k.
std::vector<Fe> encode_systematic_intermediate_direct(const CodeParams& params,
                                                      std::span<const Fe> source);
std::vector<Fe> decode_direct(const CodeParams& params, const Codeword& received);

}  // namespace fntrs::codec
