#include "fntrs/geom.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

#include "fntrs/errors.hpp"
#include "fntrs/transform.hpp"

namespace fntrs::geom {

ChirpTable build_chirp(std::uint32_t n, Fe root) {
    if (n == 0 || n > 65536 || (n & (n - 1)) != 0)
        throw InvalidTransformSize("chirp table size must be a power of two in [1, 65536]");

    ChirpTable t;
    t.n = n;
    t.root = root;
    if (n == 65536) {
        t.full_domain = true;
        return t;
    }

    // b_{i+1} = root^i * b_i, so one running power covers the whole table.
    t.b.resize(2 * n - 1);
    t.b[0] = 1;
    Fe step = 1;  // root^i
    for (std::uint32_t i = 0; i + 1 < 2 * n - 1; ++i) {
        t.b[i + 1] = gf::mul(t.b[i], step);
        step = gf::mul(step, root);
    }
    t.b_inverse.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) t.b_inverse[i] = gf::inv(t.b[i]);

    const TransformPlan& plan = plan_for(2 * n);
    t.b_fnt.assign(t.b.begin(), t.b.end());
    t.b_fnt.resize(2 * n, 0);
    dif_forward(plan, t.b_fnt);
    return t;
}

std::shared_ptr<const ChirpTable> chirp_for(std::uint32_t n, Fe root) {
    static std::mutex mu;
    static std::map<std::pair<std::uint32_t, Fe>, std::shared_ptr<const ChirpTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, root);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto table = std::make_shared<const ChirpTable>(build_chirp(n, root));
    cache.emplace(key, table);
    return table;
}

namespace {

// Evaluation on the full 65536-point domain is just the transform itself
// (forward for the domain root, inverse for its reciprocal).
std::vector<Fe> eval_full_domain(std::span<const Fe> a, const ChirpTable& table) {
    const TransformPlan& plan = plan_for(table.n);
    std::vector<Fe> padded(a.begin(), a.end());
    padded.resize(table.n, 0);
    if (table.root == plan.root) return fnt_forward(plan, padded);
    if (table.root == plan.inverse_root) {
        // sum a_j root^(ij) = n * fnt_inverse; n = 65536 is -1 mod p
        std::vector<Fe> out = fnt_inverse(plan, padded);
        for (Fe& x : out) x = gf::neg(x);
        return out;
    }
    throw InvalidTransformSize("full-domain evaluation needs the transform root");
}

}  // namespace

std::vector<Fe> geom_eval(std::span<const Fe> a, const ChirpTable& table) {
    if (a.size() > table.n)
        throw SizeMismatch("geom_eval: polynomial has more coefficients than points");
    if (table.full_domain) return eval_full_domain(a, table);

    const std::uint32_t n = table.n;
    const std::uint32_t m = 2 * n;
    const TransformPlan& plan = plan_for(m);

    // a(root^i) = (1/b_i) sum_j (a_j / b_j) b_{i+j}: scale, reverse, take the
    // middle slice of the product against b. The table's spectrum stands in
    // for b's forward transform.
    std::vector<Fe> c(m, 0);
    for (std::size_t j = 0; j < a.size(); ++j)
        c[n - 1 - j] = gf::mul(a[j], table.b_inverse[j]);
    dif_forward(plan, c);
    for (std::uint32_t i = 0; i < m; ++i)
        c[i] = gf::mul(gf::mul(c[i], table.b_fnt[i]), plan.size_inverse);
    dit_inverse_unscaled(plan, c);

    std::vector<Fe> out(n);
    for (std::uint32_t i = 0; i < n; ++i)
        out[i] = gf::mul(c[n - 1 + i], table.b_inverse[i]);
    return out;
}

std::vector<Fe> geom_eval_negative(std::span<const Fe> a, std::uint32_t n, Fe root) {
    if (a.size() > n)
        throw SizeMismatch("geom_eval_negative: polynomial has more coefficients than points");
    const Fe rho = gf::inv(root);
    auto table = chirp_for(n, rho);

    // a(rho^(j+1)) = sum_i (a_i rho^i) (rho^j)^i: fold one power of rho into
    // the coefficients, then evaluate on rho^0 .. rho^(n-1).
    std::vector<Fe> scaled(a.begin(), a.end());
    Fe w = 1;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        scaled[i] = gf::mul(scaled[i], w);
        w = gf::mul(w, rho);
    }
    return geom_eval(scaled, *table);
}

}  // namespace fntrs::geom
