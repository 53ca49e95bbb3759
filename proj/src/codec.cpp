#include "fntrs/codec.hpp"

#include <algorithm>
#include <string>

#include "fntrs/errors.hpp"
#include "fntrs/interp.hpp"
#include "fntrs/poly.hpp"
#include "fntrs/transform.hpp"

namespace fntrs::codec {

namespace {

std::uint32_t next_pow2(std::uint32_t n) {
    std::uint32_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

bool use_direct(Path path, std::uint32_t k) {
    return path == Path::Direct || (path == Path::Auto && k <= direct_path_max_k);
}

void check_source_size(const CodeParams& params, std::size_t got) {
    if (got != params.k)
        throw SizeMismatch("encode: got " + std::to_string(got) + " source symbols for k = " +
                           std::to_string(params.k));
}

// Validated copy of the received symbols, ascending by position.
Codeword sorted_received(const CodeParams& params, const Codeword& received) {
    for (const Symbol& s : received)
        if (s.position >= params.n)
            throw PositionOutOfRange("received position " + std::to_string(s.position) +
                                     " not below n = " + std::to_string(params.n));
    Codeword sorted(received);
    std::sort(sorted.begin(), sorted.end(),
              [](const Symbol& a, const Symbol& b) { return a.position < b.position; });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].position == sorted[i - 1].position)
            throw DuplicatePosition("received position " +
                                    std::to_string(sorted[i].position) + " repeats");
    if (sorted.size() < params.k)
        throw NotEnoughSymbols("have " + std::to_string(sorted.size()) +
                               " symbols, need " + std::to_string(params.k));
    return sorted;
}

// Positions 0..k-1 all present means they are exactly the first k after sorting.
bool systematic_prefix_present(const Codeword& sorted, std::uint32_t k) {
    for (std::uint32_t i = 0; i < k; ++i)
        if (sorted[i].position != i) return false;
    return true;
}

// In-place inversion of every entry: prefix products, one field inversion,
// then a backward sweep. Three multiplications per element.
void batch_invert(std::span<Fe> v) {
    if (v.empty()) return;
    std::vector<Fe> prefix(v.size());
    Fe acc = 1;
    for (std::size_t i = 0; i < v.size(); ++i) {
        prefix[i] = acc;
        acc = gf::mul(acc, v[i]);
    }
    Fe inv_tail = gf::inv(acc);
    for (std::size_t i = v.size(); i-- > 0;) {
        Fe vi = v[i];
        v[i] = gf::mul(inv_tail, prefix[i]);
        inv_tail = gf::mul(inv_tail, vi);
    }
}

std::vector<Fe> transform_of_padded(const poly::Poly& p, std::uint32_t n_domain,
                                    std::uint32_t keep) {
    std::vector<Fe> buf(p.begin(), p.end());
    buf.resize(n_domain, 0);
    std::vector<Fe> out = fnt_forward(fntrs::plan_for(n_domain), buf);
    out.resize(keep);
    return out;
}

// The unique degree < k polynomial through the selected symbols, fast path.
poly::Poly interpolate_selected(const CodeParams& params, const Codeword& sorted) {
    std::vector<std::uint32_t> positions(params.k);
    std::vector<Fe> values(params.k);
    for (std::uint32_t i = 0; i < params.k; ++i) {
        positions[i] = sorted[i].position;
        values[i] = sorted[i].value;
    }
    auto plan = interp::plan_for(params.n_domain, positions);
    return interp::interpolate(*plan, values);
}

// Same polynomial via the classical quadratic formula.
poly::Poly lagrange_selected(const CodeParams& params, const Codeword& sorted) {
    const Fe r = gf::root_of_unity(params.n_domain);
    std::vector<std::pair<Fe, Fe>> points(params.k);
    for (std::uint32_t i = 0; i < params.k; ++i)
        points[i] = {gf::pow(r, sorted[i].position), sorted[i].value};
    return interp::lagrange_oracle(points);
}

std::vector<Fe> first_k_coeffs(poly::Poly p, std::uint32_t k) {
    p.resize(k, 0);
    return p;
}

}  // namespace

CodeParams CodeParams::make(std::uint32_t k, std::uint32_t n, bool systematic) {
    if (k < 1 || k > n || n > 65536)
        throw SizeMismatch("code parameters need 1 <= k <= n <= 65536, got k = " +
                           std::to_string(k) + ", n = " + std::to_string(n));
    CodeParams p;
    p.k = k;
    p.n = n;
    p.n_domain = next_pow2(n);
    p.systematic = systematic;
    return p;
}

std::vector<Fe> encode_nonsystematic(const CodeParams& params, std::span<const Fe> source) {
    check_source_size(params, source.size());
    std::vector<Fe> buf(source.begin(), source.end());
    buf.resize(params.n_domain, 0);
    std::vector<Fe> out = fnt_forward(fntrs::plan_for(params.n_domain), buf);
    out.resize(params.n);
    return out;
}

std::vector<Fe> decode_nonsystematic(const CodeParams& params, const Codeword& received,
                                     Path path) {
    Codeword sorted = sorted_received(params, received);

    // Complete reception over a full-size domain inverts in one transform.
    if (params.n == params.n_domain && sorted.size() == params.n) {
        std::vector<Fe> values(params.n);
        for (std::uint32_t i = 0; i < params.n; ++i) values[i] = sorted[i].value;
        std::vector<Fe> coeffs = fnt_inverse(fntrs::plan_for(params.n_domain), values);
        coeffs.resize(params.k);
        return coeffs;
    }

    poly::Poly p = use_direct(path, params.k) ? lagrange_selected(params, sorted)
                                              : interpolate_selected(params, sorted);
    return first_k_coeffs(std::move(p), params.k);
}

std::vector<Fe> encode_systematic(const CodeParams& params, std::span<const Fe> source,
                                  Path path) {
    if (use_direct(path, params.k)) return encode_systematic_direct(params, source);
    check_source_size(params, source.size());

    std::vector<std::uint32_t> positions(params.k);
    for (std::uint32_t i = 0; i < params.k; ++i) positions[i] = i;
    auto plan = interp::plan_for(params.n_domain, positions);
    poly::Poly intermediate = interp::interpolate(*plan, source);
    return transform_of_padded(intermediate, params.n_domain, params.n);
}

std::vector<Fe> decode_systematic(const CodeParams& params, const Codeword& received,
                                  Path path) {
    Codeword sorted = sorted_received(params, received);

    if (systematic_prefix_present(sorted, params.k)) {
        std::vector<Fe> out(params.k);
        for (std::uint32_t i = 0; i < params.k; ++i) out[i] = sorted[i].value;
        return out;
    }

    if (use_direct(path, params.k)) {
        poly::Poly p = lagrange_selected(params, sorted);
        const Fe r = gf::root_of_unity(params.n_domain);
        std::vector<Fe> out(params.k);
        Fe x = 1;
        std::size_t next_received = 0;
        for (std::uint32_t i = 0; i < params.k; ++i) {
            // received systematic values are interpolation constraints, so
            // evaluating p there reproduces them; copy instead of evaluating
            while (next_received < sorted.size() && sorted[next_received].position < i)
                ++next_received;
            if (next_received < sorted.size() && sorted[next_received].position == i)
                out[i] = sorted[next_received].value;
            else
                out[i] = poly::eval_horner(p, x);
            x = gf::mul(x, r);
        }
        return out;
    }

    poly::Poly intermediate = interpolate_selected(params, sorted);
    std::vector<Fe> all = transform_of_padded(intermediate, params.n_domain, params.k);
    return all;
}

std::vector<Fe> encode_systematic_direct(const CodeParams& params,
                                         std::span<const Fe> source) {
    check_source_size(params, source.size());
    const std::uint32_t k = params.k, n = params.n;
    const Fe r = gf::root_of_unity(params.n_domain);

    std::vector<Fe> out(n);
    std::copy(source.begin(), source.end(), out.begin());
    if (n == k) return out;

    std::vector<Fe> xs(k);
    Fe x = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        xs[i] = x;
        x = gf::mul(x, r);
    }

    // barycentric weights w_i = 1 / prod_{j != i} (x_i - x_j)
    std::vector<Fe> w(k, 1);
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = 0; j < k; ++j)
            if (j != i) w[i] = gf::mul(w[i], gf::sub(xs[i], xs[j]));
    batch_invert(w);

    // P(x) = A(x) * sum_i w_i v_i / (x - x_i) at each parity point
    std::vector<Fe> diff(k);
    Fe xp = gf::pow(r, k);
    for (std::uint32_t p = k; p < n; ++p) {
        Fe ax = 1;
        for (std::uint32_t i = 0; i < k; ++i) {
            diff[i] = gf::sub(xp, xs[i]);
            ax = gf::mul(ax, diff[i]);
        }
        batch_invert(diff);
        Fe acc = 0;
        for (std::uint32_t i = 0; i < k; ++i)
            acc = gf::add(acc, gf::mul(gf::mul(w[i], source[i]), diff[i]));
        out[p] = gf::mul(ax, acc);
        xp = gf::mul(xp, r);
    }
    return out;
}

std::vector<Fe> encode_systematic_intermediate_direct(const CodeParams& params,
                                                      std::span<const Fe> source) {
    check_source_size(params, source.size());
    const Fe r = gf::root_of_unity(params.n_domain);
    std::vector<std::pair<Fe, Fe>> points(params.k);
    Fe x = 1;
    for (std::uint32_t i = 0; i < params.k; ++i) {
        points[i] = {x, source[i]};
        x = gf::mul(x, r);
    }
    poly::Poly intermediate = interp::lagrange_oracle(points);
    return transform_of_padded(intermediate, params.n_domain, params.n);
}

std::vector<Fe> decode_direct(const CodeParams& params, const Codeword& received) {
    return params.systematic ? decode_systematic(params, received, Path::Direct)
                             : decode_nonsystematic(params, received, Path::Direct);
}

}  // namespace fntrs::codec
