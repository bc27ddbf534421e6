#include "metacoll/radial.hpp"

#include <cmath>

#include "metacoll/constants.hpp"
#include "metacoll/error.hpp"

namespace metacoll {

namespace {

constexpr double rescale_threshold = 1e100;

// Riccati-Bessel functions x j_l(x) and x y_l(x).
double riccati_j(int l, double x) {
  if (l == 0) return std::sin(x);
  return x * std::sph_bessel(static_cast<unsigned>(l), x);
}
double riccati_y(int l, double x) {
  if (l == 0) return -std::cos(x);
  return x * std::sph_neumann(static_cast<unsigned>(l), x);
}

double wrap_half_pi(double d) {
  using constants::pi;
  while (d > 0.5 * pi) d -= pi;
  while (d <= -0.5 * pi) d += pi;
  return d;
}

}  // namespace

RadialSolver::RadialSolver(RadialProblem problem)
    : problem_(std::move(problem)) {
  require(static_cast<bool>(problem_.potential), "radial problem needs V(r)");
  require(problem_.reduced_mass > 0.0, "reduced mass must be > 0");
  require(problem_.r_min > 0.0 && problem_.r_match > problem_.r_min,
          "need 0 < r_min < r_match");
  L_ = problem_.length_scale > 0.0 ? problem_.length_scale : problem_.r_match;
  E_unit_ = constants::hbar * constants::hbar /
            (2.0 * problem_.reduced_mass * L_ * L_);
  s_match_ = std::log(problem_.r_match / L_);

  const double s_lo = std::log(problem_.r_min / L_);
  constexpr int probes = 4000;
  max_depth_ = 0.0;
  for (int i = 0; i <= probes; ++i) {
    const double s = s_lo + (s_match_ - s_lo) * i / probes;
    const double x = std::exp(s);
    const double v = problem_.potential(x * L_) / E_unit_;
    max_depth_ = std::max(max_depth_, -x * x * v);
  }
}

double RadialSolver::automatic_step(double energy, int l) const {
  const double eps = std::max(energy, 0.0) / E_unit_;
  const double x_far = std::exp(s_match_ + 0.5);
  const double kappa2 = max_depth_ + x_far * x_far * eps;
  const double kappa = std::sqrt(std::max(kappa2, 1.0));
  (void)l;
  // Quantised to 0.02 / 2^j so grids are shared between energies.
  const double target = 2.0 * constants::pi / (20.0 * kappa);
  double h = 0.02;
  while (h > target) h *= 0.5;
  return h;
}

std::shared_ptr<const RadialSolver::Grid> RadialSolver::grid(
    double h, double match_offset) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto key = std::make_pair(h, match_offset);
  if (auto it = grids_.find(key); it != grids_.end()) return it->second;

  auto g = std::make_shared<Grid>();
  // The grid starts exactly at r_min (the wall); the first matching point
  // is the first grid point at or beyond r_match, the second one lies
  // match_offset further out.
  const std::size_t q =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(match_offset / h)));
  g->h = match_offset / static_cast<double>(q);
  g->s0 = std::log(problem_.r_min / L_);
  const auto M = static_cast<std::size_t>(std::ceil((s_match_ - g->s0) / g->h - 1e-9));
  g->i_match = M;
  g->i_second = M + q;
  const std::size_t n = g->i_second + 1;
  g->x2.resize(n);
  g->x2v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::exp(g->s0 + static_cast<double>(i) * g->h);
    g->x2[i] = x * x;
    g->x2v[i] = x * x * problem_.potential(x * L_) / E_unit_;
  }
  grids_.emplace(key, g);
  return g;
}

RadialSolver::Endpoint RadialSolver::integrate(const Grid& g, double eps,
                                               int l) const {
  const double c = g.h * g.h / 12.0;
  const double lam = (l + 0.5) * (l + 0.5);
  auto f = [&](std::size_t i) { return g.x2v[i] - eps * g.x2[i] + lam; };

  double w_prev, w_cur;
  if (problem_.start == RadialProblem::Start::regular) {
    w_prev = std::exp((l + 0.5) * g.s0);
    w_cur = std::exp((l + 0.5) * (g.s0 + g.h));
    // Normalise to avoid underflow for large l.
    w_cur /= w_prev;
    w_prev = 1.0;
  } else {
    w_prev = 0.0;
    w_cur = 1e-30;
  }

  double f_prev = f(0), f_cur = f(1);
  int nodes = 0;
  double w_at_match = 0.0;
  for (std::size_t i = 1; i < g.i_second; ++i) {
    const double f_next = f(i + 1);
    const double w_next =
        ((2.0 + 10.0 * c * f_cur) * w_cur - (1.0 - c * f_prev) * w_prev) /
        (1.0 - c * f_next);
    if ((w_next < 0.0) != (w_cur < 0.0) && w_next != 0.0) ++nodes;
    w_prev = w_cur;
    w_cur = w_next;
    f_prev = f_cur;
    f_cur = f_next;
    if (std::abs(w_cur) > rescale_threshold) {
      w_cur /= rescale_threshold;
      w_prev /= rescale_threshold;
      w_at_match /= rescale_threshold;
    }
    if (i + 1 == g.i_match) w_at_match = w_cur;
  }
  const double x1 = std::exp(g.s0 + static_cast<double>(g.i_match) * g.h);
  const double x2 = std::exp(g.s0 + static_cast<double>(g.i_second) * g.h);
  return {w_at_match * std::sqrt(x1), w_cur * std::sqrt(x2), x1, x2, nodes};
}

double RadialSolver::match_phase(const Endpoint& e, double k, int l) const {
  const double K = e.u1 / e.u2;
  const double j1 = riccati_j(l, k * e.x1), j2 = riccati_j(l, k * e.x2);
  const double y1 = riccati_y(l, k * e.x1), y2 = riccati_y(l, k * e.x2);
  // u ~ j - tan(delta) y
  return std::atan2(j1 - K * j2, y1 - K * y2);
}

double RadialSolver::phase_shift_at_step(double energy, int l, double step,
                                         double match_offset) const {
  require(energy > 0.0, "phase shift needs E > 0");
  require(l >= 0, "partial wave l must be >= 0");
  require(step > 0.0, "step must be > 0");
  const auto g = grid(step, match_offset);
  const double eps = energy / E_unit_;
  const auto end = integrate(*g, eps, l);
  return wrap_half_pi(match_phase(end, std::sqrt(eps), l));
}

PhaseShift RadialSolver::phase_shift(double energy, int l,
                                     const RadialOptions& opt) const {
  double h = opt.step > 0.0 ? opt.step : automatic_step(energy, l);
  h = opt.match_offset / std::ceil(opt.match_offset / h);
  double coarse = phase_shift_at_step(energy, l, h, opt.match_offset);
  double residual = 0.0;
  for (int k = 0; k <= opt.max_refinements; ++k) {
    h *= 0.5;
    const double fine = phase_shift_at_step(energy, l, h, opt.match_offset);
    residual = std::abs(wrap_half_pi(fine - coarse));
    if (residual < opt.tolerance) return {fine, residual, h};
    coarse = fine;
  }
  fail(ErrorCode::convergence,
       "phase shift not converged under step halving (l=" + std::to_string(l) +
           ", residual " + std::to_string(residual) + " rad)");
}

ZeroEnergySolution RadialSolver::zero_energy(const RadialOptions& opt) const {
  const double h = opt.step > 0.0 ? opt.step : automatic_step(0.0, 0) * 0.5;
  const auto g = grid(h, opt.match_offset);
  const auto e = integrate(*g, 0.0, 0);
  // Outside the potential u = c (x - a).
  const double a = (e.u2 * e.x1 - e.u1 * e.x2) / (e.u2 - e.u1);
  int nodes = e.nodes;
  if (a > e.x2) ++nodes;  // outer node beyond the grid
  return {a * L_, nodes};
}

}  // namespace metacoll
