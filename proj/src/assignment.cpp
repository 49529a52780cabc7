#include "obskit/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "obskit/matrix.hpp"

namespace obskit {

namespace {

constexpr std::size_t kExactLimit = 64;

// Jonker-Volgenant style shortest augmenting path with potentials; O(n^3).
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, n);  // p[j] = row matched to column j
  for (std::size_t i = 0; i < n; ++i) {
    p[n] = i;
    std::size_t j0 = n;  // virtual column
    std::vector<double> minv(n + 1, inf);
    std::vector<std::size_t> way(n + 1, n);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double cur = a[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != n);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != n);
  }
  std::vector<std::size_t> sigma(n);
  for (std::size_t j = 0; j < n; ++j)
    if (p[j] < n) sigma[p[j]] = j;
  return sigma;
}

std::vector<std::size_t> greedy(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  struct Entry {
    double cost;
    std::size_t i, j;
  };
  std::vector<Entry> entries;
  entries.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) entries.push_back({a[i][j], i, j});
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& x, const Entry& y) { return x.cost < y.cost; });
  std::vector<std::size_t> sigma(n, n);
  std::vector<bool> col_used(n, false);
  std::size_t assigned = 0;
  for (const auto& e : entries) {
    if (sigma[e.i] != n || col_used[e.j]) continue;
    sigma[e.i] = e.j;
    col_used[e.j] = true;
    if (++assigned == n) break;
  }
  return sigma;
}

}  // namespace

std::vector<std::size_t> min_cost_assignment(
    const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) raise(Errc::NoAssignment, "empty cost matrix");
  for (const auto& row : cost) {
    if (row.size() != n) raise(Errc::NoAssignment, "cost matrix not square");
    for (const double c : row)
      if (!std::isfinite(c)) raise(Errc::NonFinite, "non-finite cost entry");
  }
  return n <= kExactLimit ? hungarian(cost) : greedy(cost);
}

double assignment_cost(const std::vector<std::vector<double>>& cost,
                       const std::vector<std::size_t>& sigma) {
  double acc = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) acc += cost[i][sigma[i]];
  return acc;
}

}  // namespace obskit
