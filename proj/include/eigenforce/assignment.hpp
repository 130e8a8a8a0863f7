#pragma once

#include <Eigen/Dense>

#include <vector>

namespace eigenforce {

// Square linear assignment: returns assignment[r] = column chosen for row r,
// minimising sum_r cost(r, assignment[r]). Hungarian method with potentials,
// O(n^3). Costs must be finite.
std::vector<Eigen::Index> min_cost_assignment(const Eigen::MatrixXd& cost);

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<Eigen::Index>& assignment);

}  // namespace eigenforce
