#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "fntrs/errors.hpp"
#include "fntrs/field.hpp"
#include "fntrs/shardio.hpp"

using namespace fntrs;
using shardio::ChunkManifest;
using shardio::ShardInfo;
using shardio::SymbolMatrix;

namespace {

std::vector<std::uint8_t> random_bytes(std::size_t len, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dist(0, 255);
    std::vector<std::uint8_t> v(len);
    for (auto& b : v) b = static_cast<std::uint8_t>(dist(rng));
    return v;
}

}  // namespace

TEST_SUITE("shardio") {

TEST_CASE("symbolize basics") {
    std::vector<std::uint8_t> data{0x00, 0x05, 0x00, 0x07};
    SymbolMatrix m = shardio::symbolize(data, 2);
    CHECK(m.stripes == 1);
    CHECK(m.cells == std::vector<Fe>{5, 7});

    SymbolMatrix empty = shardio::symbolize(std::vector<std::uint8_t>{}, 4);
    CHECK(empty.stripes == 0);
    CHECK(empty.cells.empty());

    std::vector<std::uint8_t> odd{0xFF, 0xFF, 0x01};
    SymbolMatrix mo = shardio::symbolize(odd, 2);
    CHECK(mo.stripes == 1);
    CHECK(mo.cells == std::vector<Fe>{65535, 256});
}

TEST_CASE("symbolize lays out stripes row-major with zero fill") {
    std::vector<std::uint8_t> data{0xAA, 0xBB, 0xCC, 0xDD, 0xEE};
    SymbolMatrix m = shardio::symbolize(data, 2);
    CHECK(m.stripes == 2);
    CHECK(m.at(0, 0) == 0xAABB);
    CHECK(m.at(0, 1) == 0xCCDD);
    CHECK(m.at(1, 0) == 0xEE00);
    CHECK(m.at(1, 1) == 0);
}

TEST_CASE("desymbolize inverts symbolize") {
    for (std::size_t len = 0; len <= 1000; ++len) {
        std::vector<std::uint8_t> data = random_bytes(len, 9000 + len);
        SymbolMatrix m = shardio::symbolize(data, 7);
        CHECK(shardio::desymbolize(m, len) == data);
    }
}

TEST_CASE("desymbolize validates the claimed length") {
    SymbolMatrix m = shardio::symbolize(random_bytes(20, 1), 3);  // 10 words, 4 stripes
    CHECK_THROWS_AS(shardio::desymbolize(m, 100), const LengthMismatch&);
    CHECK_THROWS_AS(shardio::desymbolize(m, 2), const LengthMismatch&);
}

TEST_CASE("shard bytes match the frozen layout") {
    ShardInfo info{0x0102030405060708ull, 2, 4, 1, true};
    std::vector<Fe> payload{5, 65536, 7};
    std::vector<std::uint8_t> bytes = shardio::write_shard(info, payload);

    const std::uint8_t want[] = {
        0x46, 0x4e, 0x54, 0x43, 0x01,                          // magic, version
        0x01, 0x02, 0x03, 0x04, 0x05, 0x06, 0x07, 0x08,        // chunk id
        0x00, 0x02, 0x00, 0x04, 0x00, 0x01, 0x01,              // k, n, index, flags
        0x00, 0x00, 0x00, 0x03,                                // payload symbols
        0x00, 0x01, 0x00, 0x00, 0x00, 0x01,                    // escapes: one, at 1
        0x00, 0x05, 0x00, 0x00, 0x00, 0x07};                   // payload words
    CHECK(bytes == std::vector<std::uint8_t>(want, want + sizeof(want)));

    auto back = shardio::read_shard(bytes);
    CHECK(back.info == info);
    CHECK(back.payload == payload);
}

TEST_CASE("payload without escapes has escape_count zero") {
    ShardInfo info{1, 1, 2, 0, false};
    std::vector<Fe> payload{1, 2, 3};
    std::vector<std::uint8_t> bytes = shardio::write_shard(info, payload);
    CHECK(bytes.size() == 26 + 6);
    CHECK(bytes[24] == 0);  // escape count high byte
    CHECK(bytes[25] == 0);
    auto back = shardio::read_shard(bytes);
    CHECK(back.info.systematic == false);
    CHECK(back.payload == payload);
}

TEST_CASE("round trips with forced top values and random payloads") {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<std::uint32_t> npick(1, 200);
        std::uint32_t n = npick(rng);
        std::uniform_int_distribution<std::uint32_t> kpick(1, n);
        ShardInfo info;
        info.chunk_id = rng();
        info.n = n;
        info.k = kpick(rng);
        info.shard_index = std::uniform_int_distribution<std::uint32_t>(0, n - 1)(rng);
        info.systematic = trial % 2;

        std::uniform_int_distribution<std::uint32_t> len(0, 50);
        std::vector<Fe> payload(len(rng));
        std::uniform_int_distribution<Fe> value(0, 65536);
        for (Fe& v : payload) v = value(rng);
        if (!payload.empty()) payload[0] = 65536;  // force at least one escape

        std::vector<std::uint8_t> bytes = shardio::write_shard(info, payload);
        auto back = shardio::read_shard(bytes);
        CHECK(back.info == info);
        CHECK(back.payload == payload);
        // canonical: re-serialization is byte-identical
        CHECK(shardio::write_shard(back.info, back.payload) == bytes);
    }
}

TEST_CASE("write_shard validation") {
    std::vector<Fe> payload{1};
    CHECK_THROWS_AS(shardio::write_shard({1, 0, 4, 0, true}, payload),
                    const SizeMismatch&);
    CHECK_THROWS_AS(shardio::write_shard({1, 65536, 65536, 0, true}, payload),
                    const SizeMismatch&);  // k = 65536 has no wire encoding
    CHECK_THROWS_AS(shardio::write_shard({1, 2, 4, 4, true}, payload),
                    const SizeMismatch&);  // index out of range
    std::vector<Fe> bad{70000};
    CHECK_THROWS_AS(shardio::write_shard({1, 2, 4, 0, true}, bad), const SizeMismatch&);
}

TEST_CASE("n = 65536 travels as zero and comes back") {
    ShardInfo info{42, 100, 65536, 65535, true};
    std::vector<std::uint8_t> bytes = shardio::write_shard(info, std::vector<Fe>{9});
    CHECK(bytes[15] == 0);  // n field high byte
    CHECK(bytes[16] == 0);
    CHECK(shardio::read_shard(bytes).info.n == 65536);
}

TEST_CASE("read_shard rejects malformed input with the right classes") {
    ShardInfo info{7, 2, 4, 1, true};
    std::vector<Fe> payload{5, 65536, 7};
    const std::vector<std::uint8_t> good = shardio::write_shard(info, payload);

    {
        auto bad = good;
        bad[0] = 'X';
        CHECK_THROWS_AS(shardio::read_shard(bad), const BadMagic&);
    }
    {
        auto bad = good;
        bad[4] = 9;
        CHECK_THROWS_AS(shardio::read_shard(bad), const BadVersion&);
    }
    {
        auto bad = good;
        bad.resize(bad.size() - 3);
        CHECK_THROWS_AS(shardio::read_shard(bad), const TruncatedShard&);
        CHECK_THROWS_AS(shardio::read_shard(std::vector<std::uint8_t>{}),
                        const TruncatedShard&);
        CHECK_THROWS_AS(shardio::read_shard(std::vector<std::uint8_t>(good.begin(),
                                                                      good.begin() + 11)),
                        const TruncatedShard&);
    }
    {
        auto bad = good;
        bad.push_back(0);  // trailing byte
        CHECK_THROWS_AS(shardio::read_shard(bad), const MalformedHeader&);
    }
    {
        auto bad = good;
        bad[13] = 0;
        bad[14] = 0;  // k = 0
        CHECK_THROWS_AS(shardio::read_shard(bad), const MalformedHeader&);
    }
    {
        auto bad = good;
        bad[17] = 0x10;  // shard_index = 4096 >= n
        CHECK_THROWS_AS(shardio::read_shard(bad), const MalformedHeader&);
    }
    {
        auto bad = good;
        bad[19] = 0xFF;  // undefined flag bits
        CHECK_THROWS_AS(shardio::read_shard(bad), const MalformedHeader&);
    }
    {
        auto bad = good;
        bad[29] = 0x09;  // escape position 9 >= payload_symbols 3
        CHECK_THROWS_AS(shardio::read_shard(bad), const MalformedEscapes&);
    }
    {
        auto bad = good;
        bad[33] = 0x01;  // escaped word not zero on the wire
        CHECK_THROWS_AS(shardio::read_shard(bad), const MalformedEscapes&);
    }
    {
        // huge payload_symbols with no data behind it must not allocate
        auto bad = good;
        bad[20] = 0xFF;
        bad[21] = 0xFF;
        bad[22] = 0xFF;
        bad[23] = 0xFF;
        CHECK_THROWS_AS(shardio::read_shard(bad), const TruncatedShard&);
    }
}

TEST_CASE("escape ordering is enforced") {
    // two escapes, deliberately swapped on the wire
    ShardInfo info{7, 2, 4, 1, true};
    std::vector<Fe> payload{65536, 5, 65536};
    auto bytes = shardio::write_shard(info, payload);
    // escape list lives at offsets 26..33: positions 0 and 2
    std::swap(bytes[26 + 3], bytes[30 + 3]);
    CHECK_THROWS_AS(shardio::read_shard(bytes), const MalformedEscapes&);
}

TEST_CASE("fuzzed corruptions never crash and always throw library errors") {
    ShardInfo info{99, 3, 9, 4, true};
    std::vector<Fe> payload{65536, 123, 456, 65536, 0};
    const std::vector<std::uint8_t> good = shardio::write_shard(info, payload);
    std::mt19937 rng(5);
    int rejected = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        auto fuzzed = good;
        std::uniform_int_distribution<int> mode(0, 2);
        switch (mode(rng)) {
            case 0: {  // flip random bytes
                std::uniform_int_distribution<std::size_t> pos(0, fuzzed.size() - 1);
                for (int i = 0; i < 3; ++i)
                    fuzzed[pos(rng)] = static_cast<std::uint8_t>(rng());
                break;
            }
            case 1:  // truncate
                fuzzed.resize(std::uniform_int_distribution<std::size_t>(
                    0, fuzzed.size() - 1)(rng));
                break;
            default:  // extend with junk
                for (int i = 0; i < 5; ++i)
                    fuzzed.push_back(static_cast<std::uint8_t>(rng()));
                break;
        }
        try {
            auto s = shardio::read_shard(fuzzed);
            // parse succeeded: the bytes must be canonical
            CHECK(shardio::write_shard(s.info, s.payload) == fuzzed);
        } catch (const Error&) {
            ++rejected;
        }
    }
    CHECK(rejected > 0);
}

TEST_CASE("manifest round trip and layout") {
    ChunkManifest m{0xDEADBEEF12345678ull, 12345, 16, 40, 386, true};
    std::vector<std::uint8_t> bytes = shardio::write_manifest(m);
    CHECK(bytes.size() == 30);
    CHECK(bytes[0] == 'F');
    CHECK(bytes[3] == 'M');
    CHECK(shardio::read_manifest(bytes) == m);

    ChunkManifest top{1, 0, 1, 65536, 0, false};
    auto tb = shardio::write_manifest(top);
    CHECK(shardio::read_manifest(tb).n == 65536);
}

TEST_CASE("manifest validation") {
    ChunkManifest m{1, 100, 4, 8, 2, true};  // capacity 16 bytes < 100
    CHECK_THROWS_AS(shardio::write_manifest(m), const LengthMismatch&);

    ChunkManifest ok{1, 16, 4, 8, 2, true};
    auto bytes = shardio::write_manifest(ok);
    {
        auto bad = bytes;
        bad[3] = 'C';  // shard magic on a manifest
        CHECK_THROWS_AS(shardio::read_manifest(bad), const BadMagic&);
    }
    {
        auto bad = bytes;
        bad.resize(10);
        CHECK_THROWS_AS(shardio::read_manifest(bad), const TruncatedShard&);
    }
    {
        auto bad = bytes;
        bad[4] = 2;
        CHECK_THROWS_AS(shardio::read_manifest(bad), const BadVersion&);
    }
}

TEST_CASE("filenames") {
    CHECK(shardio::shard_filename(0x0102030405060708ull, 17) ==
          "0102030405060708.17.fnt");
    CHECK(shardio::shard_filename(0, 0) == "0000000000000000.0.fnt");
    CHECK(shardio::manifest_filename(0xFFull) == "00000000000000ff.manifest.fnt");
}

}  // TEST_SUITE
