#include "metacoll/dynamics.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <random>

namespace metacoll {

double evolve_aspect(const RelaxationModel& model, double t) {
  require(t >= 0.0, "time must be >= 0");
  require(model.gamma_rel >= 0.0, "gamma_rel must be >= 0");
  return model.A_eq + (model.A0 - model.A_eq) * std::exp(-model.gamma_rel * t);
}

std::vector<double> rescale_time(std::span<const double> t,
                                 std::span<const double> nbar,
                                 std::span<const double> vbar) {
  require(!t.empty(), "rescale_time needs a nonempty series");
  require(t.size() == nbar.size() && t.size() == vbar.size(),
          "rescale_time: length mismatch");
  const double ref = nbar[0] * vbar[0];
  require(ref > 0.0 && std::isfinite(ref), "rescale_time: nbar(0) vbar(0) must be > 0");
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    require(t[i] > t[i - 1], "rescale_time: times must increase");
    require(std::isfinite(nbar[i]) && std::isfinite(vbar[i]),
            "rescale_time: non-finite density or velocity");
    const double g0 = nbar[i - 1] * vbar[i - 1] / ref;
    const double g1 = nbar[i] * vbar[i] / ref;
    out[i] = out[i - 1] + 0.5 * (g0 + g1) * (t[i] - t[i - 1]);
  }
  return out;
}

std::vector<double> rescale_time(const MeasurementSeries& series) {
  std::vector<double> t, n, v;
  for (const auto& m : series) {
    t.push_back(m.t);
    n.push_back(mean_density(m.state));
    v.push_back(mean_relative_velocity(m.state));
  }
  return rescale_time(t, n, v);
}

std::vector<double> DecayTrajectory::N() const {
  std::vector<double> out;
  for (const auto& s : states) out.push_back(s.N());
  return out;
}

std::vector<double> DecayTrajectory::mean_temperature() const {
  std::vector<double> out;
  for (const auto& s : states) out.push_back(metacoll::mean_temperature(s));
  return out;
}

std::vector<double> DecayTrajectory::mean_density() const {
  std::vector<double> out;
  for (const auto& s : states) out.push_back(metacoll::mean_density(s));
  return out;
}

namespace {

double interpolate(const std::vector<double>& x, const std::vector<double>& y,
                   double q) {
  if (q <= x.front()) return y.front();
  if (q >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), q);
  const auto i = static_cast<std::size_t>(it - x.begin());
  const double w = (q - x[i - 1]) / (x[i] - x[i - 1]);
  return y[i - 1] + w * (y[i] - y[i - 1]);
}

}  // namespace

DecayTrajectory evolve_decay(const DecayModel& model,
                             const std::vector<double>& t_grid) {
  require(model.alpha >= 0.0 && model.beta >= 0.0, "alpha and beta must be >= 0");
  require(!t_grid.empty() && t_grid.front() == 0.0, "time grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    require(t_grid[i] > t_grid[i - 1], "time grid must increase");
  const auto& s0 = model.initial;
  require(s0.N() > 0.0, "initial particle number must be > 0");

  if (model.heating == HeatingLaw::tabulated) {
    require(model.table_t.size() >= 2 &&
                model.table_t.size() == model.table_Tmean.size(),
            "tabulated heating needs matching t/T tables");
    for (double T : model.table_Tmean) require(T > 0.0, "tabulated T must be > 0");
  }
  // Temperatures scale as exp(s) on both axes; V_eff as exp(1.5 s).
  auto log_T_scale = [&](double t, double s_state) {
    if (model.heating == HeatingLaw::tabulated)
      return std::log(interpolate(model.table_t, model.table_Tmean, t) /
                      interpolate(model.table_t, model.table_Tmean, 0.0));
    return s_state;
  };
  const double V0 = s0.effective_volume();
  const double N0 = s0.N();

  // State: (N / N0, s).
  using State = std::array<double, 2>;
  auto rhs = [&](const State& y, State& dy, double t) {
    const double s = log_T_scale(t, y[1]);
    const double nbar = N0 * y[0] / (V0 * std::exp(1.5 * s));
    dy[0] = -model.alpha * y[0] - model.beta * nbar * y[0];
    dy[1] = model.heating == HeatingLaw::intrinsic ? 0.25 * model.beta * nbar : 0.0;
  };

  namespace ode = boost::numeric::odeint;
  auto stepper =
      ode::make_dense_output(1e-14, 1e-8, ode::runge_kutta_dopri5<State>());
  State y{1.0, 0.0};
  DecayTrajectory out;
  auto observe = [&](const State& st, double t) {
    const double s = log_T_scale(t, st[1]);
    const double f = std::exp(s);
    if (!(st[0] > 0.0) || !std::isfinite(st[0]))
      fail(ErrorCode::convergence, "decay integration lost positivity");
    out.t.push_back(t);
    out.states.push_back(ThermalState(N0 * st[0], s0.T_x() * f, s0.T_r() * f,
                                      s0.trap(), s0.isotope()));
  };
  try {
    if (t_grid.size() == 1) {
      observe(y, 0.0);
    } else {
      const double dt0 = std::min(1e-3 * t_grid.back(), t_grid[1]);
      ode::integrate_times(stepper, rhs, y, t_grid.begin(), t_grid.end(), dt0,
                           observe, ode::max_step_checker(1000000));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::convergence,
         std::string("decay integration step-size collapse: ") + e.what());
  }
  return out;
}

std::vector<LinearizedPoint> linearized_observables(
    const MeasurementSeries& series) {
  require(series.size() >= 3, "linearization needs at least 3 records");
  const double N0 = series[0].state.N();
  require(N0 > 0.0, "N(0) must be > 0");
  std::vector<LinearizedPoint> out;
  double integral = 0.0;
  double n_prev = mean_density(series[0].state);
  for (std::size_t i = 1; i < series.size(); ++i) {
    const double Ni = series[i].state.N();
    require(Ni > 0.0, "particle numbers must be > 0");
    const double n_i = mean_density(series[i].state);
    integral += 0.5 * (n_prev + n_i) * (series[i].t - series[i - 1].t);
    n_prev = n_i;
    const double t = series[i].t - series[0].t;
    out.push_back({integral / t, std::log(Ni / N0) / t});
  }
  return out;
}

double intrinsic_heating_rate(const ThermalState& state, double beta) {
  return mean_temperature(state) * beta * mean_density(state) / 4.0;
}

MeasurementSeries synthesize_series(const DecayTrajectory& traj,
                                    const NoiseModel& noise) {
  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  MeasurementSeries out;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const auto& s = traj.states[i];
    const double N = s.N() * (1.0 + noise.relative_N * gauss(rng));
    const double Tx = s.T_x() * (1.0 + noise.relative_T * gauss(rng));
    const double Tr = s.T_r() * (1.0 + noise.relative_T * gauss(rng));
    out.push_back({traj.t[i],
                   ThermalState(std::max(N, 1.0), Tx, Tr, s.trap(), s.isotope()),
                   noise.relative_N * s.N(), noise.relative_T * s.T_x(),
                   noise.relative_T * s.T_r()});
  }
  return out;
}

MeasurementSeries exact_series(const DecayTrajectory& traj,
                               double relative_uncertainty) {
  MeasurementSeries out;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const auto& s = traj.states[i];
    out.push_back({traj.t[i], s, relative_uncertainty * s.N(),
                   relative_uncertainty * s.T_x(),
                   relative_uncertainty * s.T_r()});
  }
  return out;
}

}  // namespace metacoll
