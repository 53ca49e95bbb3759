#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fntrs/field.hpp"

namespace fntrs::shardio {

// Source symbols of one chunk, striped row-major: stripe t holds the words
// t*k .. t*k+k-1 of the input, the tail zero-padded. Each code position then
// maps to one shard across all stripes, so erasure positions stay stable for
// the whole chunk.
struct SymbolMatrix {
    std::uint32_t k = 0;
    std::uint32_t stripes = 0;
    std::vector<Fe> cells;  // stripes * k entries

    Fe at(std::uint32_t stripe, std::uint32_t i) const {
        return cells[static_cast<std::size_t>(stripe) * k + i];
    }
};

// Consecutive 2-byte big-endian words become symbols (always < 65536); a
// final odd byte is padded with zero.
SymbolMatrix symbolize(std::span<const std::uint8_t> data, std::uint32_t k);

// Inverse of symbolize, truncated to original_length bytes. The length must
// be exactly consistent with the matrix shape (LengthMismatch).
std::vector<std::uint8_t> desymbolize(const SymbolMatrix& m, std::uint64_t original_length);

// Identity of one shard. On the wire n = 65536 travels as 0 in its 16-bit
// field; k has no such escape, so k = 65536 is not representable in a shard
// header and is rejected at write time.
struct ShardInfo {
    std::uint64_t chunk_id = 0;
    std::uint32_t k = 0;
    std::uint32_t n = 0;
    std::uint32_t shard_index = 0;  // in [0, n)
    bool systematic = true;

    friend bool operator==(const ShardInfo&, const ShardInfo&) = default;
};

struct ReadShard {
    ShardInfo info;
    std::vector<Fe> payload;
};

// Header (magic "FNTC", version 1, ids and counts, all big-endian), then the
// payload as 16-bit words. A payload value of 65536 is written as 0x0000 and
// its index recorded in the header's escape list. Throws TooManyEscapes past
// 65535 escapes and SizeMismatch for unrepresentable fields.
std::vector<std::uint8_t> write_shard(const ShardInfo& info, std::span<const Fe> payload);

// Exact inverse of write_shard. Rejects malformed input with BadMagic,
// BadVersion, TruncatedShard, MalformedHeader (inconsistent fields, trailing
// bytes), or MalformedEscapes (unordered, out of range, or pointing at a
// nonzero word). Accepted bytes always re-serialize identically.
ReadShard read_shard(std::span<const std::uint8_t> bytes);

// Everything needed to reassemble a chunk from its shards.
struct ChunkManifest {
    std::uint64_t chunk_id = 0;
    std::uint64_t original_length = 0;
    std::uint32_t k = 0;
    std::uint32_t n = 0;
    std::uint32_t stripes = 0;
    bool systematic = true;

    friend bool operator==(const ChunkManifest&, const ChunkManifest&) = default;
};

std::vector<std::uint8_t> write_manifest(const ChunkManifest& m);
ChunkManifest read_manifest(std::span<const std::uint8_t> bytes);

std::string shard_filename(std::uint64_t chunk_id, std::uint32_t shard_index);
std::string manifest_filename(std::uint64_t chunk_id);

}  // namespace fntrs::shardio
