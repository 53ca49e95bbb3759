#include <doctest.h>

#include <random>
#include <vector>

#include "fntrs/errors.hpp"
#include "fntrs/field.hpp"
#include "fntrs/poly.hpp"

using namespace fntrs;
using poly::Poly;

namespace {

Poly random_poly(std::size_t coeffs, std::uint32_t seed, bool canonical = true) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<Fe> dist(0, 65536);
    Poly p(coeffs);
    for (Fe& c : p) c = dist(rng);
    if (canonical && !p.empty() && p.back() == 0) p.back() = 1;
    return p;
}

}  // namespace

TEST_SUITE("poly") {

TEST_CASE("schoolbook basics") {
    CHECK(poly::mul_schoolbook(Poly{1, 1}, Poly{1, 1}) == Poly{1, 2, 1});
    CHECK(poly::mul_schoolbook(Poly{1, 2}, Poly{}) == Poly{});
    CHECK(poly::mul_schoolbook(Poly{3, 1, 4, 1, 5, 9, 2}, Poly{2, 7, 1, 8, 2, 8}) ==
          Poly{6, 23, 18, 55, 35, 112, 96, 97, 92, 74, 76, 16});
}

TEST_CASE("all tiers agree across the dispatch range") {
    // degrees 1..300 straddle both dispatch thresholds
    std::mt19937 rng(42);
    std::uniform_int_distribution<std::size_t> len(1, 301);
    for (int trial = 0; trial < 60; ++trial) {
        Poly a = random_poly(len(rng), 9000 + trial);
        Poly b = random_poly(len(rng), 9500 + trial);
        Poly want = poly::mul_schoolbook(a, b);
        CHECK(poly::mul_karatsuba(a, b) == want);
        CHECK(poly::mul_fnt(a, b) == want);
        CHECK(poly::mul(a, b) == want);
    }
}

TEST_CASE("degree adds for nonzero operands") {
    Poly a = random_poly(17, 1), b = random_poly(23, 2);
    CHECK(poly::degree(poly::mul(a, b)) == poly::degree(a) + poly::degree(b));
}

TEST_CASE("products just below and above tier thresholds are identical") {
    for (std::size_t la : {15, 16, 17, 31, 32, 33, 63, 64, 65}) {
        Poly a = random_poly(la, la);
        Poly b = random_poly(la, la + 100);
        CHECK(poly::mul(a, b) == poly::mul_schoolbook(a, b));
    }
}

TEST_CASE("transform tier rejects oversized products") {
    Poly a(40000, 1), b(40000, 1);
    CHECK_THROWS_AS(poly::mul_fnt(a, b), const ProductTooLarge&);
}

TEST_CASE("mul_low truncates and splits") {
    Poly a = random_poly(200, 3), b = random_poly(150, 4);
    Poly full = poly::mul_schoolbook(a, b);
    for (std::size_t count : {1u, 77u, 349u, 400u}) {
        Poly want(full.begin(), full.begin() + std::min<std::size_t>(count, full.size()));
        poly::normalize(want);
        CHECK(poly::mul_low(a, b, count) == want);
    }
}

TEST_CASE("mul_low handles products past the transform bound") {
    // 40000 x 40000 coefficients: full product impossible in one transform
    Poly a = random_poly(40000, 5), b = random_poly(40000, 6);
    Poly got = poly::mul_low(a, b, 40000);
    // spot-check coefficients against the direct convolution sum
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, 39999);
    for (int t = 0; t < 20; ++t) {
        std::size_t idx = pick(rng);
        Fe want = 0;
        for (std::size_t i = (idx >= b.size() ? idx - b.size() + 1 : 0);
             i <= idx && i < a.size(); ++i)
            want = gf::add(want, gf::mul(a[i], b[idx - i]));
        CHECK((idx < got.size() ? got[idx] : 0) == want);
    }
}

TEST_CASE("middle product examples") {
    CHECK(poly::middle_product(Poly{1, 1}, Poly{1, 2, 3}) == Poly{3, 5});
    CHECK(poly::middle_product(Poly{9}, Poly{8}) == Poly{72});
}

TEST_CASE("middle product equals the middle slice of the full product") {
    for (std::size_t n = 1; n <= 256; n <<= 1) {
        Poly a = random_poly(n, 300 + n, false);
        Poly b = random_poly(2 * n - 1, 400 + n, false);
        Poly full = poly::mul_schoolbook(a, b);
        full.resize(a.size() + b.size() - 1, 0);  // undo normalization for slicing
        Poly want(full.begin() + (n - 1), full.begin() + (2 * n - 1));
        CHECK(poly::middle_product(a, b) == want);
    }
}

TEST_CASE("middle product validates operand shapes") {
    CHECK_THROWS_AS(poly::middle_product(Poly{1, 2, 3}, Poly{1, 2, 3, 4, 5}),
                    const SizeMismatch&);
    CHECK_THROWS_AS(poly::middle_product(Poly{1, 2}, Poly{1, 2}), const SizeMismatch&);
    CHECK_THROWS_AS(poly::middle_product(Poly{}, Poly{}), const SizeMismatch&);
}

TEST_CASE("derivative") {
    CHECK(poly::derivative(Poly{65536, 0, 1}) == Poly{0, 2});
    CHECK(poly::derivative(Poly{5}) == Poly{});
    CHECK(poly::derivative(Poly{}) == Poly{});
    Poly p = random_poly(21, 8);
    Poly d = poly::derivative(p);
    for (std::size_t i = 1; i < p.size(); ++i)
        CHECK(d[i - 1] == gf::mul(p[i], static_cast<Fe>(i)));
}

TEST_CASE("horner evaluation") {
    CHECK(poly::eval_horner(Poly{5, 7}, 1) == 12);
    CHECK(poly::eval_horner(Poly{5, 7}, 0) == 5);
    CHECK(poly::eval_horner(Poly{5, 7}, 65536) == 65535);
    CHECK(poly::eval_horner(Poly{}, 1234) == 0);
}

TEST_CASE("subproduct tree root is the full product") {
    CHECK(poly::build_subproduct_tree(std::vector<Fe>{1, 65536}).root() ==
          Poly{65536, 0, 1});
    CHECK(poly::build_subproduct_tree(std::vector<Fe>{7}).root() == Poly{65530, 1});

    std::mt19937 rng(10);
    std::uniform_int_distribution<Fe> dist(0, 65536);
    std::vector<Fe> points;
    while (points.size() < 8) {
        Fe x = dist(rng);
        if (std::count(points.begin(), points.end(), x) == 0) points.push_back(x);
    }
    Poly want{1};
    for (Fe x : points) want = poly::mul_schoolbook(want, Poly{gf::neg(x), 1});
    auto tree = poly::build_subproduct_tree(points);
    CHECK(tree.root() == want);
    CHECK(poly::degree(tree.root()) == 8);
    for (Fe x : points) CHECK(poly::eval_horner(tree.root(), x) == 0);
    CHECK(poly::eval_horner(tree.root(), 12345) != 0);  // not an input point
}

TEST_CASE("subproduct tree with odd and non-power-of-two point counts") {
    for (std::size_t k : {3u, 5u, 6u, 7u, 13u}) {
        std::vector<Fe> points;
        for (std::size_t i = 0; i < k; ++i) points.push_back(static_cast<Fe>(100 + 17 * i));
        auto tree = poly::build_subproduct_tree(points);
        CHECK(poly::degree(tree.root()) == static_cast<long>(k));
        for (Fe x : points) CHECK(poly::eval_horner(tree.root(), x) == 0);
        CHECK(tree.levels.front().size() == k);
        CHECK(tree.levels.back().size() == 1);
    }
}

TEST_CASE("subproduct tree rejects duplicates") {
    CHECK_THROWS_AS(poly::build_subproduct_tree(std::vector<Fe>{4, 9, 4}),
                    const DuplicatePoint&);
}

}  // TEST_SUITE
