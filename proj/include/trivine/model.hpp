#pragma once

// Model structure to be fitted and its parameter vector.

#include <array>
#include <string>
#include <span>
#include <string_view>
#include <vector>

#include "trivine/copula.hpp"
#include "trivine/margins.hpp"
#include "trivine/vine.hpp"

namespace trivine {

// Family tags per edge (root-leaf1, root-leaf2, conditional), the
// permutation, and the margin kind. A conditional edge tagged
// Independence is a vine truncated at level 1.
struct ModelSpec {
    Permutation perm;
    std::array<CopulaFamily, 3> families{CopulaFamily::BVN, CopulaFamily::BVN, CopulaFamily::BVN};
    MarginKind margin = MarginKind::NormalLogit;

    bool truncated() const { return families[2] == CopulaFamily::Independence; }

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// "beta:Clayton90/Clayton90/Independence:1"
std::string model_label(const ModelSpec& spec);

// Families token: "F" (all three edges), "F1/F2" (truncated) or
// "F1/F2/F3".
std::array<CopulaFamily, 3> parse_families(std::string_view token);
std::string families_label(const std::array<CopulaFamily, 3>& families);

// Inverse of model_label; the permutation part may be omitted (defaults to 1).
ModelSpec parse_model(std::string_view text);

// Means and dispersions per variable (0 sens, 1 spec, 2 prev); Kendall
// taus per edge. Taus of Independence edges are ignored.
struct ParamVector {
    std::array<double, 3> pi{0.5, 0.5, 0.5};
    std::array<double, 3> disp{1.0, 1.0, 1.0};
    std::array<double, 3> tau{0.0, 0.0, 0.0};
};

int n_params(const ModelSpec& spec);

// Throws std::domain_error on any value outside its admissible range,
// including a tau whose sign the edge family cannot represent.
void validate(const ModelSpec& spec, const ParamVector& params);

VineModel realize(const ModelSpec& spec, const ParamVector& params);

// Unconstrained coordinates: logit(pi), log(sigma) or logit(gamma), and
// for each non-independence edge atanh of tau rescaled from its open
// admissible interval onto (-1, 1). A Clayton90 tau of -0.5 therefore
// packs to 0.
std::vector<double> pack(const ModelSpec& spec, const ParamVector& params);
ParamVector unpack(const ModelSpec& spec, std::span<const double> packed);

// d(natural)/d(packed) per packed coordinate, in packed order.
std::vector<double> unpack_jacobian(const ModelSpec& spec, std::span<const double> packed);

// Natural-scale name of each packed coordinate ("pi1", "gamma2", "tau23|1").
std::vector<std::string> param_names(const ModelSpec& spec);

// Position of tau inside its admissible interval mapped to (-1, 1).
double tau_position(CopulaFamily family, double tau);

}  // namespace trivine
