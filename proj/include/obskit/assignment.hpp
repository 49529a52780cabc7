#pragma once

// Minimum-cost assignment on a square cost matrix.  Exact Hungarian
// (shortest augmenting path) up to n = 64, greedy nearest-first beyond.

#include <cstddef>
#include <vector>

namespace obskit {

// Returns sigma with row i assigned to column sigma[i], minimizing the total
// cost.  Costs must be finite.
std::vector<std::size_t> min_cost_assignment(
    const std::vector<std::vector<double>>& cost);

double assignment_cost(const std::vector<std::vector<double>>& cost,
                       const std::vector<std::size_t>& sigma);

}  // namespace obskit
