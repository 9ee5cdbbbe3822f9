#include "heatbeam/semidiscrete.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/LU>
#include <Eigen/SparseLU>

#include "heatbeam/errors.hpp"

namespace heatbeam {

namespace {

using Triplet = Eigen::Triplet<double>;

struct TripletBuilder {
  std::vector<Triplet> E;
  std::vector<Triplet> S;
  std::vector<bool> algebraic;
  Eigen::Index row = 0;

  Eigen::Index differential() {
    algebraic.push_back(false);
    return row++;
  }
  Eigen::Index constraint() {
    algebraic.push_back(true);
    return row++;
  }
};

Eigen::SparseMatrix<double> to_sparse(Eigen::Index n,
                                      const std::vector<Triplet>& t) {
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

void check_state_shape(const DiscreteState& s, const Grid& g) {
  const auto n = g.nodes();
  if (s.z.size() != n || s.u1.size() != n || s.u2.size() != n ||
      s.w1.size() != n || s.w2.size() != n) {
    throw DimensionMismatch("state does not match grid with N = " +
                            std::to_string(g.N));
  }
}

}  // namespace

DiscreteState zero_state(const Grid& g, int controller_order) {
  DiscreteState s;
  const auto n = g.nodes();
  s.z = s.u1 = s.u2 = s.w1 = s.w2 = Eigen::VectorXd::Zero(n);
  s.q = Eigen::VectorXd::Zero(controller_order);
  return s;
}

SemiDiscreteSystem assemble_semidiscrete(const MaterialParamsd& p,
                                         const Grid& g,
                                         const ControllerSpec& ctrl) {
  validate_controller(ctrl);
  SemiDiscreteSystem sys;
  sys.params = p;
  sys.grid = g;
  sys.controller = ctrl;
  sys.hybrid = as_hybrid(ctrl);
  sys.layout.N = g.N;
  sys.layout.n = controller_order(ctrl);

  const Layout& L = sys.layout;
  const int N = g.N;
  const double alpha = p.alpha();
  const double gb = p.gamma * p.beta;
  const double kappa = p.kappa;
  const double h1 = g.h1, h2 = g.h2;
  TripletBuilder tb;

  // Joint: w2_0 = 0 and the heat-flux balance with z_0 = w1_0.
  {
    const auto r = tb.constraint();
    tb.S.emplace_back(r, L.w2(0), 1.0);
  }
  {
    const auto r = tb.constraint();
    tb.S.emplace_back(r, L.w1(0), kappa / h1);
    tb.S.emplace_back(r, L.z(1), -kappa / h1);
    tb.S.emplace_back(r, L.u1(0), -alpha);
    tb.S.emplace_back(r, L.u2(0), gb);
  }

  const double lap = kappa / (h1 * h1);
  for (int j = 0; j <= N; ++j) {
    if (j >= 1) {
      const auto r = tb.differential();
      tb.E.emplace_back(r, L.z(j), 1.0);
      tb.S.emplace_back(r, L.z(j), -2.0 * lap);
      tb.S.emplace_back(r, j == 1 ? L.w1(0) : L.z(j - 1), lap);
      if (j < N) tb.S.emplace_back(r, L.z(j + 1), lap);
    }
    // Midpoint j+1/2: average of the time derivative equals the difference
    // of the flux.
    const auto avg = [&](Eigen::Index r, Eigen::Index lo, Eigen::Index hi,
                         double weight) {
      tb.E.emplace_back(r, lo, 0.5 * weight);
      tb.E.emplace_back(r, hi, 0.5 * weight);
    };
    const auto diff = [&](Eigen::Index r, Eigen::Index lo, Eigen::Index hi,
                          double weight) {
      tb.S.emplace_back(r, hi, weight / h2);
      tb.S.emplace_back(r, lo, -weight / h2);
    };
    {
      const auto r = tb.differential();
      avg(r, L.u1(j), L.u1(j + 1), 1.0);
      diff(r, L.w1(j), L.w1(j + 1), 1.0);
    }
    {
      const auto r = tb.differential();
      avg(r, L.u2(j), L.u2(j + 1), 1.0);
      diff(r, L.w2(j), L.w2(j + 1), 1.0);
    }
    {
      const auto r = tb.differential();
      avg(r, L.w1(j), L.w1(j + 1), p.rho);
      diff(r, L.u1(j), L.u1(j + 1), alpha);
      diff(r, L.u2(j), L.u2(j + 1), -gb);
    }
    {
      const auto r = tb.differential();
      avg(r, L.w2(j), L.w2(j + 1), p.mu);
      diff(r, L.u2(j), L.u2(j + 1), p.beta);
      diff(r, L.u1(j), L.u1(j + 1), -gb);
    }
  }

  // Controlled end: A (u1, u2)_{N+1} = (g1, g2).
  const int e = N + 1;
  {
    const auto r = tb.constraint();
    tb.S.emplace_back(r, L.u1(e), alpha);
    tb.S.emplace_back(r, L.u2(e), -gb);
    const double xi1 = mechanical_gain(ctrl);
    if (xi1 != 0.0) tb.S.emplace_back(r, L.w1(e), xi1);
  }
  {
    const auto r = tb.constraint();
    tb.S.emplace_back(r, L.u2(e), p.beta);
    tb.S.emplace_back(r, L.u1(e), -gb);
    if (const auto* s = std::get_if<StaticFeedback>(&ctrl)) {
      tb.S.emplace_back(r, L.w2(e), s->xi2);
    } else if (sys.hybrid) {
      if (sys.hybrid->d != 0.0) tb.S.emplace_back(r, L.w2(e), sys.hybrid->d);
      for (int k = 0; k < L.n; ++k)
        tb.S.emplace_back(r, L.q(k), sys.hybrid->c[k]);
    }
  }

  if (sys.hybrid) {
    const auto& h = *sys.hybrid;
    for (int k = 0; k < L.n; ++k) {
      const auto r = tb.differential();
      tb.E.emplace_back(r, L.q(k), 1.0);
      for (int l = 0; l < L.n; ++l)
        if (h.A(k, l) != 0.0) tb.S.emplace_back(r, L.q(l), h.A(k, l));
      tb.S.emplace_back(r, L.w2(e), h.b[k]);
    }
  }

  if (tb.row != L.dim()) {
    throw DimensionMismatch("assembled " + std::to_string(tb.row) +
                            " rows for " + std::to_string(L.dim()) +
                            " unknowns");
  }
  sys.dae.E = to_sparse(L.dim(), tb.E);
  sys.dae.S = to_sparse(L.dim(), tb.S);
  sys.dae.algebraic = std::move(tb.algebraic);
  return sys;
}

LinearDae assemble_rod_dirichlet(const MaterialParamsd& p, const Grid& g) {
  const int N = g.N;
  const double lap = p.kappa / (g.h1 * g.h1);
  std::vector<Triplet> E, S;
  for (int i = 0; i < N; ++i) {
    E.emplace_back(i, i, 1.0);
    S.emplace_back(i, i, -2.0 * lap);
    if (i > 0) S.emplace_back(i, i - 1, lap);
    if (i + 1 < N) S.emplace_back(i, i + 1, lap);
  }
  LinearDae dae;
  dae.E = to_sparse(N, E);
  dae.S = to_sparse(N, S);
  dae.algebraic.assign(N, false);
  return dae;
}

Eigen::VectorXd pack(const Layout& L, const DiscreteState& s) {
  if (s.q.size() != L.n) {
    throw DimensionMismatch("controller state has dimension " +
                            std::to_string(s.q.size()) + ", layout expects " +
                            std::to_string(L.n));
  }
  if (s.u1.size() != L.N + 2 || s.z.size() != L.N + 2) {
    throw DimensionMismatch("state does not match layout");
  }
  Eigen::VectorXd x(L.dim());
  for (int j = 0; j <= L.N + 1; ++j) {
    if (j >= 1 && j <= L.N) x[L.z(j)] = s.z[j];
    x[L.u1(j)] = s.u1[j];
    x[L.u2(j)] = s.u2[j];
    x[L.w1(j)] = s.w1[j];
    x[L.w2(j)] = s.w2[j];
  }
  for (int k = 0; k < L.n; ++k) x[L.q(k)] = s.q[k];
  return x;
}

DiscreteState unpack(const Layout& L, const Eigen::Ref<const Eigen::VectorXd>& x,
                     double t) {
  if (x.size() != L.dim()) throw DimensionMismatch("vector does not match layout");
  DiscreteState s;
  const int n = L.N + 2;
  s.z.resize(n);
  s.u1.resize(n);
  s.u2.resize(n);
  s.w1.resize(n);
  s.w2.resize(n);
  for (int j = 0; j < n; ++j) {
    s.u1[j] = x[L.u1(j)];
    s.u2[j] = x[L.u2(j)];
    s.w1[j] = x[L.w1(j)];
    s.w2[j] = x[L.w2(j)];
    if (j >= 1 && j <= L.N) s.z[j] = x[L.z(j)];
  }
  s.z[0] = s.w1[0];
  s.z[n - 1] = 0.0;
  s.q = x.tail(L.n);
  s.t = t;
  return s;
}

double constraint_residual(const SemiDiscreteSystem& sys,
                           const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd r = sys.dae.S * x;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < r.size(); ++i)
    if (sys.dae.algebraic[i]) worst = std::max(worst, std::abs(r[i]));
  return worst;
}

DiscreteState apply_initial_conditions(const InitialProfiles& prof,
                                       const SemiDiscreteSystem& sys) {
  const Grid& g = sys.grid;
  const MaterialParamsd& p = sys.params;
  const int N = g.N;
  DiscreteState s = zero_state(g, sys.layout.n);
  for (int j = 0; j < g.nodes(); ++j) {
    s.z[j] = prof.z(g.rod_nodes[j]);
    const double x = g.beam_nodes[j];
    s.u1[j] = prof.u1(x);
    s.u2[j] = prof.u2(x);
    s.w1[j] = prof.w1(x);
    s.w2[j] = prof.w2(x);
  }
  s.q = controller_initial_state(sys.controller);

  const double alpha = p.alpha();
  const double gb = p.gamma * p.beta;
  if (!(alpha > 0)) throw ConstraintProjectionFailed("alpha <= 0 at the joint");

  s.z[N + 1] = 0.0;
  s.w2[0] = 0.0;
  s.z[0] = s.w1[0];
  s.u1[0] = (p.kappa * (s.z[0] - s.z[1]) / g.h1 + gb * s.u2[0]) / alpha;

  const auto A2 = derive_matrices(p).A2;
  const double det = A2.determinant();
  if (!(std::abs(det) > 1e-14 * A2.squaredNorm())) {
    throw ConstraintProjectionFailed("stiffness matrix is singular");
  }
  const auto force = boundary_force(sys.controller, s.w1[N + 1], s.w2[N + 1], s.q);
  const Eigen::Vector2d u = A2.partialPivLu().solve(Eigen::Vector2d(force.g1, force.g2));
  s.u1[N + 1] = u[0];
  s.u2[N + 1] = u[1];
  return s;
}

double field_energy(const DiscreteState& s, const MaterialParamsd& p,
                    const Grid& g) {
  check_state_shape(s, g);
  const double heat = 0.5 * g.h1 * s.z.tail(g.N + 1).squaredNorm();
  const Eigen::VectorXd u1 = midpoint_averages(s.u1);
  const Eigen::VectorXd u2 = midpoint_averages(s.u2);
  const Eigen::VectorXd w1 = midpoint_averages(s.w1);
  const Eigen::VectorXd w2 = midpoint_averages(s.w2);
  const double gb = p.gamma * p.beta;
  const double beam =
      (p.alpha() * u1.squaredNorm() - 2.0 * gb * u1.dot(u2) +
       p.beta * u2.squaredNorm() + p.rho * w1.squaredNorm() +
       p.mu * w2.squaredNorm());
  return heat + 0.5 * g.h2 * beam;
}

double discrete_energy(const DiscreteState& s, const MaterialParamsd& p,
                       const Grid& g,
                       const Eigen::Ref<const Eigen::MatrixXd>& P) {
  const double fields = field_energy(s, p, g);
  if (s.q.size() == 0) return fields;
  if (P.size() == 0) {
    throw MissingCertificate("controller state present but no storage matrix P");
  }
  if (P.rows() != s.q.size() || P.cols() != s.q.size()) {
    throw DimensionMismatch("P does not match controller state");
  }
  return fields + 0.5 * s.q.dot(P * s.q);
}

Eigen::SparseMatrix<double> energy_form(const SemiDiscreteSystem& sys,
                                        const Eigen::Ref<const Eigen::MatrixXd>& P) {
  const Layout& L = sys.layout;
  const Grid& g = sys.grid;
  const auto d = derive_matrices(sys.params);
  if (L.n > 0 && P.size() == 0) {
    throw MissingCertificate("controller state present but no storage matrix P");
  }
  if (L.n > 0 && (P.rows() != L.n || P.cols() != L.n)) {
    throw DimensionMismatch("P does not match controller order");
  }
  std::vector<Triplet> t;
  for (int j = 1; j <= g.N; ++j) t.emplace_back(L.z(j), L.z(j), g.h1);
  // (h2/2) a^T K a per midpoint, a the averaging row: H gains h2 K / 4 on
  // every (node, node) pair of the cell.
  for (int j = 0; j <= g.N; ++j) {
    const std::array<int, 2> nodes{j, j + 1};
    for (int a : nodes) {
      for (int b : nodes) {
        const std::array<Eigen::Index, 2> ua{L.u1(a), L.u2(a)}, ub{L.u1(b), L.u2(b)};
        const std::array<Eigen::Index, 2> wa{L.w1(a), L.w2(a)}, wb{L.w1(b), L.w2(b)};
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) {
            if (d.A2(r, c) != 0.0) t.emplace_back(ua[r], ub[c], 0.25 * g.h2 * d.A2(r, c));
            if (d.M2(r, c) != 0.0) t.emplace_back(wa[r], wb[c], 0.25 * g.h2 * d.M2(r, c));
          }
        }
      }
    }
  }
  for (int k = 0; k < L.n; ++k)
    for (int l = 0; l < L.n; ++l) t.emplace_back(L.q(k), L.q(l), P(k, l));
  Eigen::SparseMatrix<double> H(L.dim(), L.dim());
  H.setFromTriplets(t.begin(), t.end());
  H.makeCompressed();
  return H;
}

double dissipation(const SemiDiscreteSystem& sys,
                   const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::MatrixXd>& P) {
  const Layout& L = sys.layout;
  const Grid& g = sys.grid;
  const int N = g.N;

  double jumps = 0.0;
  double prev = x[L.w1(0)];  // z_0
  for (int j = 1; j <= N; ++j) {
    const double cur = x[L.z(j)];
    jumps += (cur - prev) * (cur - prev);
    prev = cur;
  }
  jumps += prev * prev;  // z_{N+1} = 0
  double rate = -sys.params.kappa / g.h1 * jumps;

  const double w1e = x[L.w1(N + 1)], w2e = x[L.w2(N + 1)];
  const Eigen::VectorXd q = x.tail(L.n);
  const auto force = boundary_force(sys.controller, w1e, w2e, q);
  rate += force.g1 * w1e + force.g2 * w2e;
  if (L.n > 0 && P.size() > 0) {
    rate += q.dot(P * controller_rhs(sys.controller, q, w2e));
  }
  return rate;
}

Eigen::VectorXd time_derivative(const SemiDiscreteSystem& sys,
                                const Eigen::Ref<const Eigen::VectorXd>& x) {
  const auto& dae = sys.dae;
  const auto n = dae.dim();
  std::vector<Triplet> t;
  for (int k = 0; k < dae.E.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(dae.E, k); it; ++it)
      if (!dae.algebraic[it.row()]) t.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::SparseMatrix<double>::InnerIterator it(dae.S, k); it; ++it)
      if (dae.algebraic[it.row()]) t.emplace_back(it.row(), it.col(), it.value());
  }
  Eigen::SparseMatrix<double> G(n, n);
  G.setFromTriplets(t.begin(), t.end());
  Eigen::VectorXd rhs = dae.S * x;
  for (Eigen::Index i = 0; i < n; ++i)
    if (dae.algebraic[i]) rhs[i] = 0.0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(G);
  if (lu.info() != Eigen::Success) {
    throw SingularSolve("constraint Jacobian: " + lu.lastErrorMessage());
  }
  return lu.solve(rhs);
}

}  // namespace heatbeam
