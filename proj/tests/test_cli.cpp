// End-to-end checks of the fntrs binary: round trips across awkward file
// sizes, exhaustive deletion coverage for a small code, exit codes, and the
// bench output shape. argv[1] is the path to the CLI under test.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#ifdef __unix__
#include <sys/wait.h>
#endif

#include "fntrs/shardio.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::printf("FAIL: %s\n", what.c_str());
    }
}

int run(const std::string& cmd) {
    const int st = std::system(cmd.c_str());
#ifdef __unix__
    if (WIFEXITED(st)) return WEXITSTATUS(st);
    return -1;
#else
    return st;
#endif
}

std::vector<std::uint8_t> read_all(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_random(const fs::path& p, std::size_t len, std::mt19937_64& rng) {
    std::ofstream out(p, std::ios::binary);
    for (std::size_t i = 0; i < len; ++i) out.put(static_cast<char>(rng() & 0xFF));
}

std::string count_lines(const fs::path& p) {
    std::ifstream in(p);
    std::string line, first;
    int count = 0;
    while (std::getline(in, line)) {
        if (count == 0) first = line;
        ++count;
    }
    return first + "#" + std::to_string(count);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::printf("usage: %s <path-to-fntrs>\n", argv[0]);
        return 1;
    }
    const std::string cli = argv[1];
    std::mt19937_64 rng(4242);
    const fs::path work = fs::temp_directory_path() / "fntrs_cli_e2e";
    fs::remove_all(work);
    fs::create_directories(work);

    // Round trips across file sizes, including empty, one byte, odd lengths,
    // and multiple stripes; alternate systematic and non-systematic.
    const std::size_t sizes[] = {0, 1, 3, 65, 4096, 100001};
    int idx = 0;
    for (std::size_t len : sizes) {
        const bool systematic = idx++ % 2 == 0;
        const fs::path in = work / ("in" + std::to_string(len));
        const fs::path dir = work / ("s" + std::to_string(len));
        const fs::path out = work / ("out" + std::to_string(len));
        write_random(in, len, rng);
        const std::uint64_t seed = 1000 + len;
        std::string enc = cli + " encode " + in.string() + " -o " + dir.string() +
                          " --k 4 --n 8 --seed " + std::to_string(seed) +
                          (systematic ? "" : " --non-systematic") + " > /dev/null";
        check(run(enc) == 0, "encode exit 0 for size " + std::to_string(len));
        // drop the allowed four shards
        for (std::uint32_t j : {0u, 3u, 5u, 6u})
            fs::remove(dir / fntrs::shardio::shard_filename(seed, j));
        std::string dec = cli + " decode " + dir.string() + " -o " + out.string() +
                          " > /dev/null";
        check(run(dec) == 0, "decode exit 0 for size " + std::to_string(len));
        check(read_all(out) == read_all(in),
              "round trip identical for size " + std::to_string(len));
    }

    // Exhaustive: k=4, n=8, every way of deleting four shards must decode.
    {
        const fs::path in = work / "exh.bin";
        const fs::path dir = work / "exh_shards";
        write_random(in, 10240, rng);
        const std::uint64_t seed = 9999;
        check(run(cli + " encode " + in.string() + " -o " + dir.string() +
                  " --k 4 --n 8 --seed " + std::to_string(seed) + " > /dev/null") == 0,
              "exhaustive encode");
        const auto original = read_all(in);
        const std::string mname = fntrs::shardio::manifest_filename(seed);
        int patterns = 0, bad = 0;
        for (std::uint32_t mask = 0; mask < 256; ++mask) {
            if (__builtin_popcount(mask) != 4) continue;
            ++patterns;
            const fs::path rdir = work / "exh_round";
            fs::remove_all(rdir);
            fs::create_directories(rdir);
            fs::create_hard_link(dir / mname, rdir / mname);
            for (std::uint32_t j = 0; j < 8; ++j)
                if (mask & (1u << j)) {
                    const auto s = fntrs::shardio::shard_filename(seed, j);
                    fs::create_hard_link(dir / s, rdir / s);
                }
            const fs::path out = work / "exh.out";
            if (run(cli + " decode " + rdir.string() + " -o " + out.string() +
                    " > /dev/null") != 0 ||
                read_all(out) != original)
                ++bad;
        }
        check(patterns == 70 && bad == 0, "all 70 four-shard deletions decode");
    }

    // Exit codes: 1 for usage problems, 2 for data problems.
    {
        const fs::path in = work / "in1";
        check(run(cli + " encode " + in.string() +
                  " --k 9 --n 4 -o x 2> /dev/null") == 1,
              "k > n is a usage error (exit 1)");
        check(run(cli + " --bogus 2> /dev/null") == 1, "unknown flag exits 1");
        check(run(cli + " 2> /dev/null") == 1, "missing subcommand exits 1");
        check(run(cli + " encode /does/not/exist --k 2 --n 4 -o " +
                  (work / "x").string() + " 2> /dev/null") == 2,
              "unreadable input is a data error (exit 2)");

        // fewer than k surviving shards: exit 2 and a found/required message
        const fs::path dir = work / "few";
        write_random(in, 5000, rng);
        run(cli + " encode " + in.string() + " -o " + dir.string() +
            " --k 4 --n 8 --seed 31337 > /dev/null");
        for (std::uint32_t j : {0u, 1u, 2u, 4u, 6u})
            fs::remove(dir / fntrs::shardio::shard_filename(31337, j));
        const fs::path errfile = work / "err.txt";
        const int code = run(cli + " decode " + dir.string() + " -o " +
                             (work / "few.out").string() + " 2> " + errfile.string());
        check(code == 2, "not enough shards exits 2");
        const auto err = read_all(errfile);
        const std::string text(err.begin(), err.end());
        check(text.find("found 3") != std::string::npos &&
                  text.find("required 4") != std::string::npos,
              "error message lists found/required counts");
    }

    // Bench: header plus one line per variant, parseable shape.
    {
        const fs::path csv = work / "bench.csv";
        check(run(cli + " bench --grid 16 --reps 2 > " + csv.string()) == 0,
              "bench exits 0");
        check(count_lines(csv) == "variant,k,n,bytes,seconds,MBps,fnt_equivalents#5",
              "bench emits the CSV header and four variant lines");
    }

    check(run(cli + " selftest --seed 7 > /dev/null") == 0, "selftest passes");

    fs::remove_all(work);
    if (failures == 0) std::printf("cli e2e: all checks passed\n");
    return failures == 0 ? 0 : 1;
}
