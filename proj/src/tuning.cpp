#include "heatbeam/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "heatbeam/errors.hpp"

namespace heatbeam {

namespace {

double mechanical_branch(const LyapunovConstantsd& c, const MaterialParamsd& p,
                         double xi1) {
  return 2.0 * xi1 / (c.a1 * p.l2 * (p.rho + 2.0 * xi1 * xi1 / p.alpha1));
}

double electrical_branch(const LyapunovConstantsd& c, const MaterialParamsd& p,
                         double xi2) {
  const double g2b = p.gamma * p.gamma * p.beta;
  return 2.0 * xi2 /
         (c.a1 * p.l2 *
          (p.mu + xi2 * xi2 * (p.alpha() + g2b) / (p.alpha1 * p.beta)));
}

std::vector<double> axis(double lo, double hi, int points) {
  std::vector<double> v(points);
  if (points == 1) {
    v[0] = lo;
    return v;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int k = 0; k < points; ++k)
    v[k] = std::exp(a + (b - a) * k / (points - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

// Argmax of a unimodal f on the axis, refined by golden section between the
// neighbouring grid points.
double refine(const std::vector<double>& xs,
              const std::function<double(double)>& f) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < xs.size(); ++k)
    if (f(xs[k]) > f(xs[best])) best = k;
  double a = xs[best > 0 ? best - 1 : 0];
  double b = xs[std::min(best + 1, xs.size() - 1)];
  if (a == b) return a;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, b); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  const double x = 0.5 * (a + b);
  return f(x) >= f(xs[best]) ? x : xs[best];
}

}  // namespace

GainSample evaluate_gains(const LyapunovConstantsd& c,
                          const MaterialParamsd& p, double xi1, double xi2) {
  GainSample s;
  s.xi1 = xi1;
  s.xi2 = xi2;
  s.admissible =
      std::min(mechanical_branch(c, p, xi1), electrical_branch(c, p, xi2));
  s.delta = std::min(1.0 / (2.0 * c.M),
                     0.99 * admissible_delta_static(c, p, xi1, xi2));
  s.sigma = s.delta > 0 ? decay_rate(c, p, s.delta).sigma : 0.0;
  return s;
}

TuneResult tune_gains(const MaterialParamsd& p, const LyapunovConstantsd& c,
                      const GainBox& box, unsigned threads) {
  const auto valid = [](double lo, double hi) {
    return lo > 0 && hi >= lo && std::isfinite(hi);
  };
  if (!valid(box.xi1_lo, box.xi1_hi) || !valid(box.xi2_lo, box.xi2_hi)) {
    throw EmptyFeasibleSet("gain box must satisfy 0 < lo <= hi");
  }
  if (box.points < 2) throw EmptyFeasibleSet("gain grid needs >= 2 points");

  const auto xs1 = axis(box.xi1_lo, box.xi1_hi, box.points);
  const auto xs2 = axis(box.xi2_lo, box.xi2_hi, box.points);

  TuneResult out;
  out.grid.resize(xs1.size() * xs2.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(xs1.size()));
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < xs1.size(); i += threads)
          for (std::size_t j = 0; j < xs2.size(); ++j)
            out.grid[i * xs2.size() + j] = evaluate_gains(c, p, xs1[i], xs2[j]);
      });
    }
  }

  const auto best_grid = std::max_element(
      out.grid.begin(), out.grid.end(),
      [](const GainSample& a, const GainSample& b) {
        if (a.sigma != b.sigma) return a.sigma < b.sigma;
        return a.admissible < b.admissible;  // strict: first maximum wins
      });

  const double xi1 =
      refine(xs1, [&](double x) { return mechanical_branch(c, p, x); });
  const double xi2 =
      refine(xs2, [&](double x) { return electrical_branch(c, p, x); });
  GainSample best = evaluate_gains(c, p, xi1, xi2);
  if (best.sigma < best_grid->sigma ||
      (best.sigma == best_grid->sigma &&
       best.admissible < best_grid->admissible)) {
    best = *best_grid;
  }

  const auto ceiling = max_decay_rate(c, p, best.xi1, best.xi2);
  out.xi1 = best.xi1;
  out.xi2 = best.xi2;
  out.sigma = best.sigma;
  out.delta = best.delta;
  out.admissible = best.admissible;
  out.sigma_max = ceiling.sigma_max;
  out.delta_star = ceiling.delta_star;
  out.attainable = ceiling.attainable.value_or(false);
  return out;
}

}  // namespace heatbeam
