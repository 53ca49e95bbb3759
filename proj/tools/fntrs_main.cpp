#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fntrs/codec.hpp"
#include "fntrs/errors.hpp"
#include "fntrs/field.hpp"
#include "fntrs/instrument.hpp"
#include "fntrs/interp.hpp"
#include "fntrs/shardio.hpp"

namespace fs = std::filesystem;
using namespace fntrs;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

codec::Path to_path(const std::string& s) {
    if (s == "fast") return codec::Path::Fast;
    if (s == "direct") return codec::Path::Direct;
    return codec::Path::Auto;
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    in.seekg(0, std::ios::end);
    auto len = in.tellg();
    if (len < 0) throw std::runtime_error("cannot read " + path.string());
    std::vector<std::uint8_t> data(static_cast<std::size_t>(len));
    in.seekg(0);
    if (!data.empty()) {
        in.read(reinterpret_cast<char*>(data.data()),
                static_cast<std::streamsize>(data.size()));
        if (!in) throw std::runtime_error("cannot read " + path.string());
    }
    return data;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

// Runs fn(t) for every stripe t, on up to `jobs` threads. Stripes are
// independent, so workers just pull the next index. Transform tallies land in
// per-worker counters (the measurement scope is per-thread) and are merged
// into `counter` afterwards.
template <typename Fn>
void for_each_stripe(std::uint32_t stripes, unsigned jobs, FntCounter& counter, Fn&& fn) {
    unsigned workers = static_cast<unsigned>(
        std::min<std::uint64_t>(std::max(1u, jobs), std::max<std::uint32_t>(1, stripes)));
    if (workers <= 1) {
        FntScope scope(counter);
        for (std::uint32_t t = 0; t < stripes; ++t) fn(t);
        return;
    }
    std::vector<FntCounter> parts(workers);
    std::atomic<std::uint32_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            FntScope scope(parts[w]);
            for (;;) {
                std::uint32_t t = next.fetch_add(1);
                if (t >= stripes) return;
                try {
                    fn(t);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
    for (const auto& part : parts) counter.merge(part);
}

// ---------------------------------------------------------------------------
// encode

int cmd_encode(const std::string& input, const std::string& outdir, std::uint32_t k,
               std::uint32_t n, bool systematic, codec::Path path, unsigned jobs,
               std::uint64_t seed) {
    const auto data = read_file(input);
    const auto params = codec::CodeParams::make(k, n, systematic);
    const shardio::SymbolMatrix m = shardio::symbolize(data, k);
    const std::uint64_t chunk_id = seed;

    std::vector<Fe> enc(static_cast<std::size_t>(m.stripes) * n);
    FntCounter counter;
    const auto t0 = Clock::now();
    for_each_stripe(m.stripes, jobs, counter, [&](std::uint32_t t) {
        std::span<const Fe> src(m.cells.data() + static_cast<std::size_t>(t) * k, k);
        std::vector<Fe> row = systematic ? codec::encode_systematic(params, src, path)
                                         : codec::encode_nonsystematic(params, src);
        std::copy(row.begin(), row.end(), enc.begin() + static_cast<std::size_t>(t) * n);
    });
    const double secs = std::max(seconds_since(t0), 1e-9);

    fs::create_directories(outdir);
    shardio::ShardInfo info{chunk_id, k, n, 0, systematic};
    std::vector<Fe> payload(m.stripes);
    for (std::uint32_t j = 0; j < n; ++j) {
        for (std::uint32_t t = 0; t < m.stripes; ++t)
            payload[t] = enc[static_cast<std::size_t>(t) * n + j];
        info.shard_index = j;
        write_file(fs::path(outdir) / shardio::shard_filename(chunk_id, j),
                   shardio::write_shard(info, payload));
    }
    const shardio::ChunkManifest manifest{chunk_id, data.size(), k, n, m.stripes,
                                          systematic};
    const std::string mname = shardio::manifest_filename(chunk_id);
    write_file(fs::path(outdir) / mname, shardio::write_manifest(manifest));

    const double symbols = static_cast<double>(m.stripes) * k;
    std::printf("encode: %llu bytes, k=%u n=%u stripes=%u %s\n",
                static_cast<unsigned long long>(data.size()), k, n, m.stripes,
                systematic ? "systematic" : "non-systematic");
    std::printf("encode: %.3f s, %.0f symbols/s, %.2f MB/s\n", secs, symbols / secs,
                static_cast<double>(data.size()) / secs / 1e6);
    std::printf("encode: %llu transforms, %.2f FNT_%u equivalents per stripe\n",
                static_cast<unsigned long long>(counter.total()),
                m.stripes ? counter.equivalents(params.n_domain) / m.stripes : 0.0,
                params.n_domain);
    std::printf("encode: wrote %u shards and %s to %s\n", n, mname.c_str(),
                outdir.c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// decode

fs::path resolve_manifest(const fs::path& p) {
    if (!fs::is_directory(p)) return p;
    fs::path found;
    int count = 0;
    for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() &&
            entry.path().filename().string().ends_with(".manifest.fnt")) {
            found = entry.path();
            ++count;
        }
    }
    if (count == 0) throw std::runtime_error("no *.manifest.fnt in " + p.string());
    if (count > 1)
        throw std::runtime_error("multiple manifests in " + p.string() +
                                 "; pass one explicitly");
    return found;
}

int cmd_decode(const std::string& input, const std::string& output, codec::Path path,
               unsigned jobs) {
    const fs::path mpath = resolve_manifest(input);
    const auto manifest = shardio::read_manifest(read_file(mpath));
    const fs::path dir = mpath.has_parent_path() ? mpath.parent_path() : fs::path(".");
    const auto params =
        codec::CodeParams::make(manifest.k, manifest.n, manifest.systematic);

    std::vector<std::uint32_t> positions;
    std::vector<std::vector<Fe>> payloads;
    for (std::uint32_t j = 0; j < manifest.n; ++j) {
        const fs::path sp = dir / shardio::shard_filename(manifest.chunk_id, j);
        std::error_code ec;
        if (!fs::exists(sp, ec)) continue;
        try {
            auto s = shardio::read_shard(read_file(sp));
            if (s.info.chunk_id != manifest.chunk_id || s.info.k != manifest.k ||
                s.info.n != manifest.n || s.info.systematic != manifest.systematic ||
                s.info.shard_index != j || s.payload.size() != manifest.stripes) {
                std::fprintf(stderr, "warning: %s does not match the manifest, skipping\n",
                             sp.string().c_str());
                continue;
            }
            positions.push_back(j);
            payloads.push_back(std::move(s.payload));
        } catch (const Error& e) {
            std::fprintf(stderr, "warning: %s unreadable (%s), skipping\n",
                         sp.string().c_str(), e.what());
        }
    }
    if (positions.size() < manifest.k)
        throw NotEnoughShards("not enough shards: found " +
                              std::to_string(positions.size()) + ", required " +
                              std::to_string(manifest.k));

    shardio::SymbolMatrix m;
    m.k = manifest.k;
    m.stripes = manifest.stripes;
    m.cells.resize(static_cast<std::size_t>(m.stripes) * m.k);
    FntCounter counter;
    const auto t0 = Clock::now();
    for_each_stripe(m.stripes, jobs, counter, [&](std::uint32_t t) {
        codec::Codeword received(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i)
            received[i] = {positions[i], payloads[i][t]};
        std::vector<Fe> src = manifest.systematic
                                  ? codec::decode_systematic(params, received, path)
                                  : codec::decode_nonsystematic(params, received, path);
        std::copy(src.begin(), src.end(),
                  m.cells.begin() + static_cast<std::size_t>(t) * m.k);
    });
    const double secs = std::max(seconds_since(t0), 1e-9);

    const auto data = shardio::desymbolize(m, manifest.original_length);
    write_file(output, data);
    std::printf("decode: wrote %llu bytes to %s from %zu shards\n",
                static_cast<unsigned long long>(data.size()), output.c_str(),
                positions.size());
    std::printf("decode: %.3f s, %.2f MB/s, %llu transforms\n", secs,
                static_cast<double>(data.size()) / secs / 1e6,
                static_cast<unsigned long long>(counter.total()));
    return 0;
}

// ---------------------------------------------------------------------------
// bench

std::vector<Fe> random_symbols(std::uint32_t count, std::mt19937_64& rng) {
    std::vector<Fe> v(count);
    for (Fe& x : v) x = static_cast<Fe>(rng() % 65537);
    return v;
}

template <typename Op>
void bench_line(const char* variant, const codec::CodeParams& params, int reps, Op&& op) {
    op();  // warm-up: builds transform plans, chirp tables, decode plans
    FntCounter counter;
    const auto t0 = Clock::now();
    {
        FntScope scope(counter);
        for (int r = 0; r < reps; ++r) op();
    }
    const double per_op = std::max(seconds_since(t0) / reps, 1e-12);
    const double bytes = 2.0 * params.k;
    std::printf("%s,%u,%u,%llu,%.9f,%.3f,%.3f\n", variant, params.k, params.n,
                static_cast<unsigned long long>(2ull * params.k), per_op,
                bytes / per_op / 1e6, counter.equivalents(params.n_domain) / reps);
}

int cmd_bench(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& sizes,
              int reps, codec::Path path, std::uint64_t seed) {
    std::printf("variant,k,n,bytes,seconds,MBps,fnt_equivalents\n");
    std::mt19937_64 rng(seed);
    for (const auto& [k, n] : sizes) {
        const auto sys = codec::CodeParams::make(k, n, true);
        const auto nonsys = codec::CodeParams::make(k, n, false);
        const auto source = random_symbols(k, rng);

        bench_line("encode_nonsystematic", nonsys, reps,
                   [&] { codec::encode_nonsystematic(nonsys, source); });
        bench_line("encode_systematic", sys, reps,
                   [&] { codec::encode_systematic(sys, source, path); });

        // No-shortcut reception: position 0 erased, survivors 1..k (when n > k).
        codec::Codeword rx_non(k), rx_sys(k);
        const auto enc_non = codec::encode_nonsystematic(nonsys, source);
        const auto enc_sys = codec::encode_systematic(sys, source, path);
        const std::uint32_t shift = (n > k) ? 1 : 0;
        for (std::uint32_t i = 0; i < k; ++i) {
            rx_non[i] = {i + shift, enc_non[i + shift]};
            rx_sys[i] = {i + shift, enc_sys[i + shift]};
        }
        bench_line("decode_nonsystematic", nonsys, reps,
                   [&] { codec::decode_nonsystematic(nonsys, rx_non, path); });
        bench_line("decode_systematic", sys, reps,
                   [&] { codec::decode_systematic(sys, rx_sys, path); });
    }
    return 0;
}

// ---------------------------------------------------------------------------
// selftest

std::vector<std::uint32_t> sample_positions(std::mt19937_64& rng, std::uint32_t k,
                                            std::uint32_t n) {
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(k);
    return all;
}

bool selftest_mds(std::mt19937_64& rng) {
    bool ok = true;
    const std::pair<std::uint32_t, std::uint32_t> configs[] = {
        {4, 2}, {8, 4}, {8, 5}, {16, 12}};
    for (const auto& [n, k] : configs) {
        const auto sys = codec::CodeParams::make(k, n, true);
        const auto nonsys = codec::CodeParams::make(k, n, false);
        const auto source = random_symbols(k, rng);
        const auto enc_sys = codec::encode_systematic(sys, source);
        const auto enc_non = codec::encode_nonsystematic(nonsys, source);
        std::uint64_t patterns = 0, failures = 0;
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (static_cast<std::uint32_t>(std::popcount(mask)) < k) continue;
            ++patterns;
            codec::Codeword rx_sys, rx_non;
            for (std::uint32_t j = 0; j < n; ++j) {
                if (!(mask & (1u << j))) continue;
                rx_sys.push_back({j, enc_sys[j]});
                rx_non.push_back({j, enc_non[j]});
            }
            if (codec::decode_systematic(sys, rx_sys, codec::Path::Fast) != source ||
                codec::decode_direct(sys, rx_sys) != source ||
                codec::decode_nonsystematic(nonsys, rx_non, codec::Path::Fast) != source ||
                codec::decode_direct(nonsys, rx_non) != source)
                ++failures;
        }
        std::printf("selftest: mds (%u,%u): %llu patterns, %llu failures\n", n, k,
                    static_cast<unsigned long long>(patterns),
                    static_cast<unsigned long long>(failures));
        ok = ok && failures == 0;
    }
    return ok;
}

bool selftest_oracle(std::mt19937_64& rng, int instances) {
    int passed = 0;
    for (int i = 0; i < instances; ++i) {
        const std::uint32_t k = 1 + static_cast<std::uint32_t>(rng() % 128);
        std::uint32_t nd = std::bit_ceil(k);
        if ((rng() & 1) && nd < 1024) nd <<= 1;
        if (nd < 2) nd = 2;

        bool good = true;

        // Fast interpolation against the quadratic oracle on random points.
        const auto positions = sample_positions(rng, k, nd);
        const auto values = random_symbols(k, rng);
        const auto plan = interp::build_plan(nd, positions);
        poly::Poly fast = interp::interpolate(plan, values);
        const Fe r = gf::root_of_unity(nd, false);
        std::vector<std::pair<Fe, Fe>> points(k);
        for (std::uint32_t j = 0; j < k; ++j)
            points[j] = {gf::pow(r, positions[j]), values[j]};
        poly::Poly oracle = interp::lagrange_oracle(points);
        fast.resize(k, 0);
        oracle.resize(k, 0);
        good = good && fast == oracle;

        // Every encoder/decoder variant pair agrees bit for bit.
        const std::uint32_t n = k + static_cast<std::uint32_t>(rng() % (512 - k + 1));
        const auto sys = codec::CodeParams::make(k, n, true);
        const auto nonsys = codec::CodeParams::make(k, n, false);
        const auto source = random_symbols(k, rng);
        const auto enc_sys = codec::encode_systematic(sys, source, codec::Path::Fast);
        good = good && enc_sys == codec::encode_systematic_direct(sys, source);
        good = good && enc_sys == codec::encode_systematic_intermediate_direct(sys, source);
        const auto enc_non = codec::encode_nonsystematic(nonsys, source);

        const auto keep = sample_positions(rng, k, n);
        codec::Codeword rx_sys(k), rx_non(k);
        for (std::uint32_t j = 0; j < k; ++j) {
            rx_sys[j] = {keep[j], enc_sys[keep[j]]};
            rx_non[j] = {keep[j], enc_non[keep[j]]};
        }
        good = good &&
               codec::decode_systematic(sys, rx_sys, codec::Path::Fast) == source &&
               codec::decode_direct(sys, rx_sys) == source &&
               codec::decode_nonsystematic(nonsys, rx_non, codec::Path::Fast) == source &&
               codec::decode_direct(nonsys, rx_non) == source;

        passed += good;
    }
    std::printf("selftest: oracle equivalence: %d/%d instances ok\n", passed, instances);
    return passed == instances;
}

int cmd_selftest(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const bool ok = selftest_mds(rng) & static_cast<int>(selftest_oracle(rng, 100));
    std::printf("selftest: %s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"(n, k) Reed-Solomon erasure coding over GF(65537) via the Fermat number transform"};
    app.require_subcommand(1);

    std::uint32_t k = 0, n = 0;
    bool systematic = true;
    std::string path_str = "auto";
    unsigned jobs = 1;
    std::uint64_t seed = 1;
    std::string input, output = ".";
    std::vector<std::uint32_t> grid;
    int reps = 5;
    int rc = 0;

    const auto path_check = CLI::IsMember({"auto", "fast", "direct"});

    auto* enc = app.add_subcommand("encode", "Split a file into n erasure-coded shards");
    enc->add_option("input", input, "File to encode")->required();
    enc->add_option("-o,--out", output, "Output directory (default .)");
    enc->add_option("-k,--k", k, "Source symbols per stripe")->required();
    enc->add_option("-n,--n", n, "Total shards")->required();
    enc->add_flag("--systematic,!--non-systematic", systematic,
                  "Keep the source verbatim in shards 0..k-1 (default on)");
    enc->add_option("--path", path_str, "Algorithm: auto, fast, or direct")
        ->check(path_check);
    enc->add_option("--jobs", jobs, "Worker threads for stripe processing");
    enc->add_option("--seed", seed, "Determines the chunk id");
    enc->callback([&] {
        if (k < 1 || k > n || n > 65536)
            throw CLI::ValidationError("encode", "need 1 <= k <= n <= 65536");
        if (k == 65536)
            throw CLI::ValidationError("encode",
                                       "k = 65536 does not fit the shard header");
        rc = cmd_encode(input, output, k, n, systematic, to_path(path_str), jobs, seed);
    });

    auto* dec = app.add_subcommand("decode", "Reconstruct a file from surviving shards");
    dec->add_option("input", input, "Manifest file, or a directory holding one")
        ->required();
    dec->add_option("-o,--out", output, "Reconstructed output file")->required();
    dec->add_option("--path", path_str, "Algorithm: auto, fast, or direct")
        ->check(path_check);
    dec->add_option("--jobs", jobs, "Worker threads for stripe processing");
    dec->callback([&] { rc = cmd_decode(input, output, to_path(path_str), jobs); });

    auto* ben = app.add_subcommand("bench",
                                   "Time all encoder/decoder variants, CSV to stdout");
    ben->add_option("--grid", grid, "Comma-separated k values (n = 2k each)")
        ->delimiter(',');
    ben->add_option("-k,--k", k, "Single size: source symbols (default n/2)");
    ben->add_option("-n,--n", n, "Single size: total symbols (default 2k)");
    ben->add_option("--reps", reps, "Repetitions per measurement")
        ->check(CLI::PositiveNumber);
    ben->add_option("--path", path_str, "Algorithm: auto, fast, or direct")
        ->check(path_check);
    ben->add_option("--seed", seed, "Seed for benchmark payloads");
    ben->callback([&] {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> sizes;
        if (!grid.empty()) {
            for (std::uint32_t g : grid) {
                if (g < 1 || g > 32768)
                    throw CLI::ValidationError("bench",
                                               "grid k values must be in [1, 32768]");
                sizes.emplace_back(g, 2 * g);
            }
        } else if (k == 0 && n == 0) {
            sizes = {{256, 512}, {1024, 2048}, {4096, 8192}};
        } else {
            if (n == 0) n = 2 * k;
            if (k == 0) k = n / 2;
            if (k < 1 || k > n || n > 65536)
                throw CLI::ValidationError("bench", "need 1 <= k <= n <= 65536");
            sizes = {{k, n}};
        }
        rc = cmd_bench(sizes, reps, to_path(path_str), seed);
    });

    auto* self = app.add_subcommand("selftest",
                                    "Run MDS-exhaustive and oracle-equivalence suites");
    self->add_option("--seed", seed, "Seed for randomized instances");
    self->callback([&] { rc = cmd_selftest(seed); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return rc;
}
