#include "heatbeam/grid.hpp"

#include <string>

#include "heatbeam/errors.hpp"

namespace heatbeam {

Grid build_grid(int N, double l1, double l2) {
  if (N < 2) throw NTooSmall("N = " + std::to_string(N) + ", need N >= 2");
  if (!(l1 > 0) || !(l2 > 0)) {
    throw InvalidParameters({{ParameterViolation::Kind::NonPositive,
                              l1 > 0 ? "l2" : "l1"}});
  }
  Grid g;
  g.N = N;
  g.l1 = l1;
  g.l2 = l2;
  g.h1 = l1 / (N + 1);
  g.h2 = l2 / (N + 1);
  g.rod_nodes.resize(N + 2);
  g.beam_nodes.resize(N + 2);
  for (int j = 0; j < N + 2; ++j) {
    g.rod_nodes[j] = j * g.h1;
    g.beam_nodes[j] = j * g.h2;
  }
  // Pin the far ends so that round-off in j*h never leaves the domain.
  g.rod_nodes[N + 1] = l1;
  g.beam_nodes[N + 1] = l2;
  g.beam_midpoints = midpoint_averages(g.beam_nodes);
  return g;
}

namespace {
void check_cell(const Eigen::Ref<const Eigen::VectorXd>& u, int j) {
  if (j < 0 || j + 1 >= u.size()) {
    throw IndexOutOfRange("midpoint index " + std::to_string(j) +
                          " outside [0, " + std::to_string(u.size() - 2) + "]");
  }
}
}  // namespace

double midpoint_average(const Eigen::Ref<const Eigen::VectorXd>& u, int j) {
  check_cell(u, j);
  return 0.5 * (u[j + 1] + u[j]);
}

double midpoint_difference(const Eigen::Ref<const Eigen::VectorXd>& u, int j,
                           double h) {
  check_cell(u, j);
  return (u[j + 1] - u[j]) / h;
}

Eigen::VectorXd midpoint_averages(const Eigen::Ref<const Eigen::VectorXd>& u) {
  const auto n = u.size() - 1;
  return 0.5 * (u.tail(n) + u.head(n));
}

Eigen::VectorXd midpoint_differences(const Eigen::Ref<const Eigen::VectorXd>& u,
                                     double h) {
  const auto n = u.size() - 1;
  return (u.tail(n) - u.head(n)) / h;
}

}  // namespace heatbeam
