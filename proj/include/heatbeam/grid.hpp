#pragma once

#include <Eigen/Core>

namespace heatbeam {

/// Uniform meshes on the rod [0, l1] (distance from the joint) and on the
/// beam [0, l2], both with N interior nodes.
struct Grid {
  int N;
  double l1;
  double l2;
  double h1;  // l1 / (N + 1)
  double h2;  // l2 / (N + 1)
  Eigen::VectorXd rod_nodes;       // N + 2 values, 0 .. l1
  Eigen::VectorXd beam_nodes;      // N + 2 values, 0 .. l2
  Eigen::VectorXd beam_midpoints;  // N + 1 values

  int nodes() const { return N + 2; }
  int cells() const { return N + 1; }
};

Grid build_grid(int N, double l1, double l2);

/// (u_{j+1} + u_j) / 2 for 0 <= j <= N.
double midpoint_average(const Eigen::Ref<const Eigen::VectorXd>& u, int j);
/// (u_{j+1} - u_j) / h for 0 <= j <= N.
double midpoint_difference(const Eigen::Ref<const Eigen::VectorXd>& u, int j,
                           double h);

/// All N + 1 midpoint averages / differences at once.
Eigen::VectorXd midpoint_averages(const Eigen::Ref<const Eigen::VectorXd>& u);
Eigen::VectorXd midpoint_differences(const Eigen::Ref<const Eigen::VectorXd>& u,
                                     double h);

}  // namespace heatbeam
