#include "fntrs/shardio.hpp"

#include <cstdio>

#include "fntrs/errors.hpp"

namespace fntrs::shardio {

namespace {

constexpr char kShardMagic[4] = {'F', 'N', 'T', 'C'};
constexpr char kManifestMagic[4] = {'F', 'N', 'T', 'M'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kFlagSystematic = 0x01;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

// Cursor over an incoming byte stream; every read checks the remainder.
struct Reader {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    void need(std::size_t count) const {
        if (pos + count > bytes.size())
            throw TruncatedShard("need " + std::to_string(count) + " more bytes at offset " +
                                 std::to_string(pos) + ", have " +
                                 std::to_string(bytes.size() - pos));
    }
    std::uint8_t u8() {
        need(1);
        return bytes[pos++];
    }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = (std::uint16_t(bytes[pos]) << 8) | bytes[pos + 1];
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | bytes[pos + i];
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | bytes[pos + i];
        pos += 8;
        return v;
    }
    void expect_magic(const char (&magic)[4]) {
        need(4);
        for (int i = 0; i < 4; ++i)
            if (bytes[pos + i] != static_cast<std::uint8_t>(magic[i]))
                throw BadMagic("unrecognized file magic");
        pos += 4;
    }
};

// 16-bit wire encoding of n with 0 standing in for 65536.
std::uint16_t n_to_wire(std::uint32_t n) {
    if (n == 65536) return 0;
    return static_cast<std::uint16_t>(n);
}

std::uint32_t n_from_wire(std::uint16_t wire) { return wire == 0 ? 65536u : wire; }

}  // namespace

SymbolMatrix symbolize(std::span<const std::uint8_t> data, std::uint32_t k) {
    if (k == 0) throw SizeMismatch("symbolize needs k >= 1");
    SymbolMatrix m;
    m.k = k;
    const std::size_t words = (data.size() + 1) / 2;
    m.stripes = static_cast<std::uint32_t>((words + k - 1) / k);
    m.cells.assign(static_cast<std::size_t>(m.stripes) * k, 0);
    for (std::size_t w = 0; w < words; ++w) {
        std::uint32_t hi = data[2 * w];
        std::uint32_t lo = (2 * w + 1 < data.size()) ? data[2 * w + 1] : 0;
        m.cells[w] = (hi << 8) | lo;
    }
    return m;
}

std::vector<std::uint8_t> desymbolize(const SymbolMatrix& m, std::uint64_t original_length) {
    const std::uint64_t capacity = std::uint64_t(m.stripes) * m.k * 2;
    if (original_length > capacity)
        throw LengthMismatch("length " + std::to_string(original_length) +
                             " exceeds matrix capacity " + std::to_string(capacity));
    const std::uint64_t words = (original_length + 1) / 2;
    const std::uint64_t needed_stripes = m.k == 0 ? 0 : (words + m.k - 1) / m.k;
    if (needed_stripes != m.stripes)
        throw LengthMismatch("length " + std::to_string(original_length) + " implies " +
                             std::to_string(needed_stripes) + " stripes, matrix has " +
                             std::to_string(m.stripes));

    std::vector<std::uint8_t> out(original_length);
    for (std::uint64_t b = 0; b < original_length; ++b) {
        Fe word = m.cells[b / 2];
        out[b] = static_cast<std::uint8_t>((b % 2 == 0) ? (word >> 8) : word);
    }
    return out;
}

std::vector<std::uint8_t> write_shard(const ShardInfo& info, std::span<const Fe> payload) {
    if (info.k < 1 || info.k > 65535)
        throw SizeMismatch("shard header k must be in [1, 65535], got " +
                           std::to_string(info.k));
    if (info.n < info.k || info.n > 65536)
        throw SizeMismatch("shard header n must be in [k, 65536], got " +
                           std::to_string(info.n));
    if (info.shard_index >= info.n)
        throw SizeMismatch("shard index " + std::to_string(info.shard_index) +
                           " not below n = " + std::to_string(info.n));
    if (payload.size() > 0xFFFFFFFFull)
        throw SizeMismatch("payload too long for a shard");

    std::vector<std::uint32_t> escapes;
    for (std::size_t i = 0; i < payload.size(); ++i) {
        if (payload[i] > 65536)
            throw SizeMismatch("payload value " + std::to_string(payload[i]) +
                               " outside the field");
        if (payload[i] == 65536) escapes.push_back(static_cast<std::uint32_t>(i));
    }
    if (escapes.size() > 65535)
        throw TooManyEscapes(std::to_string(escapes.size()) +
                             " escaped symbols in one shard, limit is 65535");

    std::vector<std::uint8_t> out;
    out.reserve(26 + 4 * escapes.size() + 2 * payload.size());
    out.insert(out.end(), kShardMagic, kShardMagic + 4);
    out.push_back(kVersion);
    put_u64(out, info.chunk_id);
    put_u16(out, static_cast<std::uint16_t>(info.k));
    put_u16(out, n_to_wire(info.n));
    put_u16(out, static_cast<std::uint16_t>(info.shard_index));
    out.push_back(info.systematic ? kFlagSystematic : 0);
    put_u32(out, static_cast<std::uint32_t>(payload.size()));
    put_u16(out, static_cast<std::uint16_t>(escapes.size()));
    for (std::uint32_t e : escapes) put_u32(out, e);
    for (Fe v : payload) put_u16(out, v == 65536 ? 0 : static_cast<std::uint16_t>(v));
    return out;
}

ReadShard read_shard(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    r.expect_magic(kShardMagic);
    if (std::uint8_t version = r.u8(); version != kVersion)
        throw BadVersion("shard version " + std::to_string(version) + ", expected " +
                         std::to_string(kVersion));

    ReadShard s;
    s.info.chunk_id = r.u64();
    s.info.k = r.u16();
    s.info.n = n_from_wire(r.u16());
    s.info.shard_index = r.u16();
    std::uint8_t flags = r.u8();
    if (flags & ~kFlagSystematic)
        throw MalformedHeader("unknown flag bits set: " + std::to_string(flags));
    s.info.systematic = flags & kFlagSystematic;
    const std::uint32_t payload_symbols = r.u32();
    const std::uint16_t escape_count = r.u16();

    if (s.info.k == 0) throw MalformedHeader("shard header has k = 0");
    if (s.info.n < s.info.k)
        throw MalformedHeader("shard header has n = " + std::to_string(s.info.n) +
                              " below k = " + std::to_string(s.info.k));
    if (s.info.shard_index >= s.info.n)
        throw MalformedHeader("shard index " + std::to_string(s.info.shard_index) +
                              " not below n = " + std::to_string(s.info.n));

    std::vector<std::uint32_t> escapes(escape_count);
    for (auto& e : escapes) e = r.u32();
    for (std::size_t i = 0; i < escapes.size(); ++i) {
        if (escapes[i] >= payload_symbols)
            throw MalformedEscapes("escape position " + std::to_string(escapes[i]) +
                                   " not below payload size " +
                                   std::to_string(payload_symbols));
        if (i > 0 && escapes[i] <= escapes[i - 1])
            throw MalformedEscapes("escape positions not strictly increasing");
    }

    r.need(std::size_t{2} * payload_symbols);  // before allocating anything that big
    s.payload.resize(payload_symbols);
    for (auto& v : s.payload) v = r.u16();
    if (r.pos != bytes.size())
        throw MalformedHeader(std::to_string(bytes.size() - r.pos) +
                              " trailing bytes after the payload");

    for (std::uint32_t e : escapes) {
        if (s.payload[e] != 0)
            throw MalformedEscapes("escape at position " + std::to_string(e) +
                                   " points at a nonzero word");
        s.payload[e] = 65536;
    }
    return s;
}

std::vector<std::uint8_t> write_manifest(const ChunkManifest& m) {
    if (m.k < 1 || m.k > 65535)
        throw SizeMismatch("manifest k must be in [1, 65535], got " + std::to_string(m.k));
    if (m.n < m.k || m.n > 65536)
        throw SizeMismatch("manifest n must be in [k, 65536], got " + std::to_string(m.n));
    if (m.original_length > std::uint64_t(m.stripes) * m.k * 2)
        throw LengthMismatch("manifest length " + std::to_string(m.original_length) +
                             " exceeds stripe capacity");

    std::vector<std::uint8_t> out;
    out.reserve(30);
    out.insert(out.end(), kManifestMagic, kManifestMagic + 4);
    out.push_back(kVersion);
    put_u64(out, m.chunk_id);
    put_u64(out, m.original_length);
    put_u16(out, static_cast<std::uint16_t>(m.k));
    put_u16(out, n_to_wire(m.n));
    put_u32(out, m.stripes);
    out.push_back(m.systematic ? kFlagSystematic : 0);
    return out;
}

ChunkManifest read_manifest(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    r.expect_magic(kManifestMagic);
    if (std::uint8_t version = r.u8(); version != kVersion)
        throw BadVersion("manifest version " + std::to_string(version) + ", expected " +
                         std::to_string(kVersion));
    ChunkManifest m;
    m.chunk_id = r.u64();
    m.original_length = r.u64();
    m.k = r.u16();
    m.n = n_from_wire(r.u16());
    m.stripes = r.u32();
    std::uint8_t flags = r.u8();
    if (flags & ~kFlagSystematic)
        throw MalformedHeader("unknown flag bits set: " + std::to_string(flags));
    m.systematic = flags & kFlagSystematic;
    if (r.pos != bytes.size())
        throw MalformedHeader(std::to_string(bytes.size() - r.pos) +
                              " trailing bytes after the manifest");

    if (m.k == 0) throw MalformedHeader("manifest has k = 0");
    if (m.n < m.k) throw MalformedHeader("manifest has n below k");
    if (m.original_length > std::uint64_t(m.stripes) * m.k * 2)
        throw MalformedHeader("manifest length exceeds stripe capacity");
    return m;
}

std::string shard_filename(std::uint64_t chunk_id, std::uint32_t shard_index) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx.%u.fnt",
                  static_cast<unsigned long long>(chunk_id), shard_index);
    return buf;
}

std::string manifest_filename(std::uint64_t chunk_id) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%016llx.manifest.fnt",
                  static_cast<unsigned long long>(chunk_id));
    return buf;
}

}  // namespace fntrs::shardio
