#pragma once

#include <vector>

namespace trivine {

// Gauss-Legendre rule on (-1, 1). Nodes ascending.
struct LegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

LegendreRule gauss_legendre(int n);

// Gauss-Legendre rule mapped to (0, 1); weights sum to one.
struct QuadGrid {
    std::vector<double> nodes;
    std::vector<double> weights;
    int nq() const { return static_cast<int>(nodes.size()); }
};

QuadGrid gauss_legendre_01(int nq);

}  // namespace trivine
