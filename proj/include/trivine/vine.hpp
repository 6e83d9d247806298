#pragma once

// Trivariate C-vine: structure, the independent-to-dependent uniform
// transform, sampling, and an empirical Kendall tau.
//
// Variables are indexed 0 (sensitivity), 1 (specificity), 2 (prevalence).
// A permutation names the root of the first tree; its two level-1 edges
// join root-leaf1 and root-leaf2 and the level-2 edge joins the leaves
// conditional on the root. Edge copulas take the conditioning variable
// (root for level 1, leaf1 for level 2) as their first argument.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trivine/copula.hpp"
#include "trivine/margins.hpp"
#include "trivine/quadrature.hpp"
#include "trivine/rng.hpp"

namespace trivine {

struct Permutation {
    int root = 0;
    std::array<int, 2> leaves{1, 2};

    // Variable index for tree coordinate 0 (root), 1 (leaf1), 2 (leaf2).
    std::array<int, 3> coordinates() const { return {root, leaves[0], leaves[1]}; }

    friend bool operator==(const Permutation&, const Permutation&) = default;
};

// {12,13,23|1}, {12,23,13|2}, {13,23,12|3}, in that order.
std::array<Permutation, 3> enumerate_permutations();

// 1-based position in enumerate_permutations().
int permutation_index(const Permutation& perm);
Permutation permutation_from_index(int index);

// "12,13,23|1" style label, 1-based variable names.
std::string permutation_label(const Permutation& perm);

enum class Edge { A = 0, B = 1, Cond = 2 };

// "12", "13", "23|1" style edge label.
std::string edge_label(const Permutation& perm, int edge);

struct VineCopula {
    Permutation perm;
    // Root-leaf1, root-leaf2, leaf1-leaf2 given root.
    std::array<CopulaSpec, 3> edges;

    bool truncated() const { return edges[2].family == CopulaFamily::Independence; }
};

// A fully specified random-effects distribution.
struct VineModel {
    VineCopula copula;
    std::array<MarginSpec, 3> margins;
};

// Maps independent uniforms (in tree-coordinate order) to the vine
// distribution; the result is in tree-coordinate order as well.
std::array<double, 3> vine_transform(double u1, double u2, double u3, const VineCopula& vine);

// Same as vine_transform but skips validation and clamps arguments.
std::array<double, 3> vine_transform_clamped(double u1, double u2, double u3, const VineCopula& vine);

// Reorders a tree-coordinate triple into variable order.
std::array<double, 3> to_variable_order(const Permutation& perm, const std::array<double, 3>& coords);

// Vine samples in variable order.
std::vector<std::array<double, 3>> simulate_vine(std::size_t count, const VineCopula& vine, CounterRng& rng);
std::vector<std::array<double, 3>> simulate_vine(std::size_t count, const VineCopula& vine, std::uint64_t seed);

// Kendall tau-a: (concordant - discordant) / (n choose 2); ties count as
// neither. O(n log n).
double empirical_tau(std::span<const double> x, std::span<const double> y);
double empirical_tau(std::span<const std::array<double, 2>> pairs);

}  // namespace trivine
