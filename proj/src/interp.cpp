#include "fntrs/interp.hpp"

#include <algorithm>
#include <list>
#include <mutex>

#include "fntrs/errors.hpp"
#include "fntrs/geom.hpp"
#include "fntrs/transform.hpp"

namespace fntrs::interp {

namespace {

std::uint32_t next_pow2(std::uint32_t n) {
    std::uint32_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

}  // namespace

DecodePlan build_plan(std::uint32_t n, std::span<const std::uint32_t> positions) {
    if (positions.empty()) throw TooFewPositions("no positions to build a plan from");
    if (n == 0 || n > 65536 || (n & (n - 1)) != 0)
        throw InvalidTransformSize("plan domain must be a power of two in [1, 65536]");
    for (std::uint32_t z : positions)
        if (z >= n)
            throw PositionOutOfRange("position " + std::to_string(z) +
                                     " not below domain size " + std::to_string(n));
    {
        std::vector<std::uint32_t> sorted(positions.begin(), positions.end());
        std::sort(sorted.begin(), sorted.end());
        auto dup = std::adjacent_find(sorted.begin(), sorted.end());
        if (dup != sorted.end())
            throw DuplicatePosition("position " + std::to_string(*dup) + " repeats");
    }

    DecodePlan plan;
    plan.n = n;
    plan.k = static_cast<std::uint32_t>(positions.size());
    plan.positions.assign(positions.begin(), positions.end());

    const Fe r = gf::root_of_unity(n);
    std::vector<Fe> points(plan.k);
    for (std::uint32_t i = 0; i < plan.k; ++i) points[i] = gf::pow(r, plan.positions[i]);

    plan.a_tree = poly::build_subproduct_tree(points);
    poly::Poly aprime = poly::derivative(plan.a());

    // A' evaluated over the full geometric sequence; the wanted points are a
    // gather of the z_i entries. A' has k <= n coefficients, so it fits.
    auto chirp = geom::chirp_for(n, r);
    std::vector<Fe> aprime_all = geom::geom_eval(aprime, *chirp);
    plan.aprime_at_x_inv.resize(plan.k);
    for (std::uint32_t i = 0; i < plan.k; ++i)
        plan.aprime_at_x_inv[i] = gf::inv(aprime_all[plan.positions[i]]);

    const std::uint32_t product_len = 2 * plan.k;  // deg(A*S) + 1 = 2k
    if (product_len <= 65536) {
        plan.product_size = next_pow2(product_len);
        const TransformPlan& tplan = fntrs::plan_for(plan.product_size);
        plan.a_fnt.assign(plan.a().begin(), plan.a().end());
        plan.a_fnt.resize(plan.product_size, 0);
        dif_forward(tplan, plan.a_fnt);
    }
    return plan;
}

std::shared_ptr<const DecodePlan> plan_for(std::uint32_t n,
                                           std::span<const std::uint32_t> positions) {
    using Key = std::pair<std::uint32_t, std::vector<std::uint32_t>>;
    static std::mutex mu;
    static std::list<std::pair<Key, std::shared_ptr<const DecodePlan>>> lru;
    constexpr std::size_t capacity = 16;

    Key key{n, {positions.begin(), positions.end()}};
    std::sort(key.second.begin(), key.second.end());

    {
        std::lock_guard<std::mutex> lock(mu);
        for (auto it = lru.begin(); it != lru.end(); ++it)
            if (it->first == key) {
                lru.splice(lru.begin(), lru, it);
                return lru.front().second;
            }
    }
    // Build outside the lock: plans are expensive and concurrent misses for
    // different keys should not serialize. A racing duplicate build is
    // harmless (both results are equivalent; one becomes the cached copy).
    auto plan = std::make_shared<const DecodePlan>(build_plan(n, key.second));
    std::lock_guard<std::mutex> lock(mu);
    for (auto it = lru.begin(); it != lru.end(); ++it)
        if (it->first == key) {
            lru.splice(lru.begin(), lru, it);
            return lru.front().second;
        }
    lru.emplace_front(std::move(key), plan);
    if (lru.size() > capacity) lru.pop_back();
    return plan;
}

poly::Poly interpolate(const DecodePlan& plan, std::span<const Fe> values) {
    if (values.size() != plan.k)
        throw SizeMismatch("interpolate: got " + std::to_string(values.size()) +
                           " values for " + std::to_string(plan.k) + " positions");

    // step 4: w_i = v_i / A'(x_i), placed at exponent z_i of the sparse N'
    std::vector<Fe> nprime(plan.n, 0);
    for (std::uint32_t i = 0; i < plan.k; ++i)
        nprime[plan.positions[i]] = gf::mul(values[i], plan.aprime_at_x_inv[i]);

    // step 5: s_j = -N'(r^(-j-1)) are the series coefficients
    const Fe r = gf::root_of_unity(plan.n);
    std::vector<Fe> series = geom::geom_eval_negative(nprime, plan.n, r);
    for (Fe& s : series) s = gf::neg(s);

    // step 6: P = A*S mod x^k; only the first k coefficients of S can reach
    // degrees below k, so truncate before multiplying
    if (series.size() > plan.k) series.resize(plan.k);
    poly::Poly p;
    if (plan.product_size != 0) {
        const TransformPlan& tplan = fntrs::plan_for(plan.product_size);
        std::vector<Fe> buf(std::move(series));
        buf.resize(plan.product_size, 0);
        dif_forward(tplan, buf);
        for (std::uint32_t i = 0; i < plan.product_size; ++i)
            buf[i] = gf::mul(gf::mul(buf[i], plan.a_fnt[i]), tplan.size_inverse);
        dit_inverse_unscaled(tplan, buf);
        buf.resize(plan.k);
        p = std::move(buf);
        poly::normalize(p);
    } else {
        p = poly::mul_low(plan.a(), series, plan.k);
    }
    return p;
}

poly::Poly lagrange_oracle(std::span<const std::pair<Fe, Fe>> points) {
    const std::size_t k = points.size();
    {
        std::vector<Fe> xs(k);
        for (std::size_t i = 0; i < k; ++i) xs[i] = points[i].first;
        std::sort(xs.begin(), xs.end());
        auto dup = std::adjacent_find(xs.begin(), xs.end());
        if (dup != xs.end())
            throw DuplicatePoint("interpolation point " + std::to_string(*dup) + " repeats");
    }
    if (k == 0) return {};

    // master polynomial M = prod (x - x_i), grown one factor at a time
    poly::Poly master{1};
    for (const auto& pt : points)
        master = poly::mul_schoolbook(master, poly::Poly{gf::neg(pt.first), 1});

    poly::Poly out(k, 0);
    poly::Poly numer(k);  // M / (x - x_i), degree k-1
    for (const auto& [xi, vi] : points) {
        // synthetic division of M by (x - x_i); remainder is zero by design
        Fe carry = master[k];
        for (std::size_t j = k; j-- > 0;) {
            numer[j] = carry;
            carry = gf::add(master[j], gf::mul(xi, carry));
        }
        Fe scale = gf::mul(vi, gf::inv(poly::eval_horner(numer, xi)));
        for (std::size_t j = 0; j < k; ++j)
            out[j] = gf::add(out[j], gf::mul(numer[j], scale));
    }
    poly::normalize(out);
    return out;
}

}  // namespace fntrs::interp
