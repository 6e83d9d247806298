#include "trivine/vine.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "trivine/special.hpp"

namespace trivine {

std::array<Permutation, 3> enumerate_permutations() {
    return {Permutation{0, {1, 2}}, Permutation{1, {0, 2}}, Permutation{2, {0, 1}}};
}

int permutation_index(const Permutation& perm) {
    const auto all = enumerate_permutations();
    for (int i = 0; i < 3; ++i)
        if (all[i] == perm) return i + 1;
    throw std::invalid_argument("not a canonical vine permutation");
}

Permutation permutation_from_index(int index) {
    if (index < 1 || index > 3) throw std::invalid_argument("permutation index must be 1, 2 or 3");
    return enumerate_permutations()[index - 1];
}

namespace {

std::string pair_name(int a, int b) {
    if (a > b) std::swap(a, b);
    return std::to_string(a + 1) + std::to_string(b + 1);
}

}  // namespace

std::string edge_label(const Permutation& perm, int edge) {
    switch (edge) {
        case 0: return pair_name(perm.root, perm.leaves[0]);
        case 1: return pair_name(perm.root, perm.leaves[1]);
        case 2: return pair_name(perm.leaves[0], perm.leaves[1]) + "|" + std::to_string(perm.root + 1);
    }
    throw std::invalid_argument("edge index must be 0, 1 or 2");
}

std::string permutation_label(const Permutation& perm) {
    return edge_label(perm, 0) + "," + edge_label(perm, 1) + "," + edge_label(perm, 2);
}

std::array<double, 3> vine_transform_clamped(double u1, double u2, double u3, const VineCopula& vine) {
    const double v1 = clamp_unit(u1);
    const double v2 = ccdf_inv_clamped(vine.edges[0], u2, v1);
    const double w = vine.truncated() ? clamp_unit(u3) : ccdf_inv_clamped(vine.edges[2], u3, u2);
    const double v3 = ccdf_inv_clamped(vine.edges[1], w, v1);
    return {v1, v2, v3};
}

std::array<double, 3> vine_transform(double u1, double u2, double u3, const VineCopula& vine) {
    if (!in_open_unit(u1) || !in_open_unit(u2) || !in_open_unit(u3))
        throw std::domain_error("vine_transform: uniforms must lie in (0,1)");
    for (const auto& e : vine.edges) validate(e);
    return vine_transform_clamped(u1, u2, u3, vine);
}

std::array<double, 3> to_variable_order(const Permutation& perm, const std::array<double, 3>& coords) {
    std::array<double, 3> out{};
    const auto vars = perm.coordinates();
    for (int c = 0; c < 3; ++c) out[vars[c]] = coords[c];
    return out;
}

std::vector<std::array<double, 3>> simulate_vine(std::size_t count, const VineCopula& vine, CounterRng& rng) {
    std::vector<std::array<double, 3>> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double u1 = rng.uniform();
        const double u2 = rng.uniform();
        const double u3 = rng.uniform();
        out.push_back(to_variable_order(vine.perm, vine_transform(u1, u2, u3, vine)));
    }
    return out;
}

std::vector<std::array<double, 3>> simulate_vine(std::size_t count, const VineCopula& vine, std::uint64_t seed) {
    CounterRng rng(seed);
    return simulate_vine(count, vine, rng);
}

namespace {

// Sorts y in place, returning the number of strict inversions.
std::uint64_t count_inversions(std::vector<double>& y, std::vector<double>& scratch, std::size_t lo,
                               std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t swaps = count_inversions(y, scratch, lo, mid) + count_inversions(y, scratch, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (y[j] < y[i]) {
            swaps += mid - i;
            scratch[k++] = y[j++];
        } else {
            scratch[k++] = y[i++];
        }
    }
    while (i < mid) scratch[k++] = y[i++];
    while (j < hi) scratch[k++] = y[j++];
    std::copy(scratch.begin() + lo, scratch.begin() + hi, y.begin() + lo);
    return swaps;
}

template <class Eq>
std::uint64_t tied_pairs(std::size_t n, Eq equal) {
    std::uint64_t total = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i < n && equal(i - 1, i)) {
            ++run;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    return total;
}

}  // namespace

double empirical_tau(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw std::invalid_argument("empirical_tau: x and y differ in length");
    if (n < 2) throw std::invalid_argument("empirical_tau: need at least two pairs");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
    });
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = x[order[i]];
        ys[i] = y[order[i]];
    }
    const std::uint64_t ties_x = tied_pairs(n, [&](std::size_t a, std::size_t b) { return xs[a] == xs[b]; });
    const std::uint64_t ties_xy =
        tied_pairs(n, [&](std::size_t a, std::size_t b) { return xs[a] == xs[b] && ys[a] == ys[b]; });
    std::vector<double> scratch(n);
    const std::uint64_t swaps = count_inversions(ys, scratch, 0, n);
    const std::uint64_t ties_y = tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });

    const double total = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const double s = total - static_cast<double>(ties_x) - static_cast<double>(ties_y) +
                     static_cast<double>(ties_xy) - 2.0 * static_cast<double>(swaps);
    return s / total;
}

double empirical_tau(std::span<const std::array<double, 2>> pairs) {
    std::vector<double> x(pairs.size()), y(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        x[i] = pairs[i][0];
        y[i] = pairs[i][1];
    }
    return empirical_tau(x, y);
}

}  // namespace trivine
