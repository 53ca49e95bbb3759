#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>

namespace fntrs {

// Tally of executed transforms, bucketed by size (powers of two, 1..65536).
class FntCounter {
public:
    void record(std::size_t size) noexcept { counts_[log2_size(size)]++; }

    std::uint64_t count(std::size_t size) const noexcept { return counts_[log2_size(size)]; }

    std::uint64_t total() const noexcept {
        std::uint64_t t = 0;
        for (auto c : counts_) t += c;
        return t;
    }

    // Work normalized to transforms of size base: a size-m FNT counts as m/base,
    // so a size-2n transform counts as two size-n ones.
    double equivalents(std::size_t base) const noexcept {
        double t = 0.0;
        for (std::size_t i = 0; i < counts_.size(); ++i)
            t += static_cast<double>(counts_[i]) * static_cast<double>(std::size_t{1} << i);
        return t / static_cast<double>(base);
    }

    // Fold another counter in, e.g. per-worker tallies after a parallel run.
    void merge(const FntCounter& other) noexcept {
        for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    }

    std::map<std::size_t, std::uint64_t> snapshot() const {
        std::map<std::size_t, std::uint64_t> m;
        for (std::size_t i = 0; i < counts_.size(); ++i)
            if (counts_[i]) m.emplace(std::size_t{1} << i, counts_[i]);
        return m;
    }

private:
    static std::size_t log2_size(std::size_t size) noexcept {
        std::size_t lg = 0;
        while ((std::size_t{1} << lg) < size) ++lg;
        return lg;
    }

    std::array<std::uint64_t, 17> counts_{};
};

// RAII measurement scope. While alive on a thread, every FNT executed on that
// thread is recorded into the given counter (and into any enclosing scope's).
// Scopes on different threads are independent, so concurrent encodes do not
// mix counts. The counter outlives the scope, so results stay readable.
class FntScope {
public:
    explicit FntScope(FntCounter& counter);
    ~FntScope();
    FntScope(const FntScope&) = delete;
    FntScope& operator=(const FntScope&) = delete;

private:
    friend void note_fnt_execution(std::size_t) noexcept;
    FntCounter& counter_;
    FntScope* prev_;
};

// Called by the transform layer once per executed transform.
void note_fnt_execution(std::size_t size) noexcept;

}  // namespace fntrs
