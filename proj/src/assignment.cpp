#include "eigenforce/assignment.hpp"

#include "eigenforce/error.hpp"

#include <limits>

namespace eigenforce {

std::vector<Eigen::Index> min_cost_assignment(const Eigen::MatrixXd& cost) {
  using Eigen::Index;
  if (cost.rows() != cost.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "assignment cost matrix must be square");
  }
  if (!cost.allFinite()) throw Error(ErrorCode::NonFinite, "assignment cost matrix has non-finite entries");
  const Index n = cost.rows();
  if (n == 0) return {};

  // 1-based arrays; column 0 is the virtual start column.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<Index> p(n + 1, 0), way(n + 1, 0);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<Index> assignment(n);
  for (Index j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<Eigen::Index>& assignment) {
  double total = 0.0;
  for (std::size_t r = 0; r < assignment.size(); ++r) total += cost(static_cast<Eigen::Index>(r), assignment[r]);
  return total;
}

}  // namespace eigenforce
