#include "metacoll/inference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unsupported/Eigen/NonLinearOptimization>

#include "metacoll/csv.hpp"
#include "metacoll/dynamics.hpp"

namespace metacoll {

using Eigen::MatrixXd;
using Eigen::VectorXd;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// ---- FitResult ------------------------------------------------------------

namespace {
std::size_t index_of(const std::vector<std::string>& names, const std::string& n,
                     const std::string& fit) {
  auto it = std::find(names.begin(), names.end(), n);
  if (it == names.end()) fail(ErrorCode::invalid_argument, fit + " fit has no '" + n + "'");
  return static_cast<std::size_t>(it - names.begin());
}
}  // namespace

double FitResult::value(const std::string& name) const {
  return values[index_of(names, name, fit)];
}

double FitResult::error(const std::string& name) const {
  return errors[index_of(names, name, fit)];
}

double FitResult::extra(const std::string& name) const {
  for (const auto& [k, v] : extras)
    if (k == name) return v;
  fail(ErrorCode::invalid_argument, fit + " fit has no extra '" + name + "'");
}

bool FitResult::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

void write_fit_report(std::ostream& out, const FitResult& r) {
  out << "fit: " << r.fit << '\n';
  for (std::size_t i = 0; i < r.names.size(); ++i)
    out << "  " << r.names[i] << " = " << format_double(r.values[i]) << " +- "
        << format_double(r.errors[i]) << '\n';
  out << "  chi2 = " << format_double(r.chi2) << "  dof = " << r.dof << '\n';
  for (const auto& [k, v] : r.extras) out << "  " << k << " = " << format_double(v) << '\n';
  if (!r.flags.empty()) {
    out << "  flags:";
    for (const auto& f : r.flags) out << ' ' << f;
    out << '\n';
  }
}

void write_fit_csv(std::ostream& out, const FitResult& r) {
  out << "fit,chi2,dof";
  for (const auto& n : r.names) out << ',' << n << ',' << n << "_err";
  for (const auto& e : r.extras) out << ',' << e.first;
  out << ",flags\n";
  out << r.fit << ',' << format_double(r.chi2) << ',' << r.dof;
  for (std::size_t i = 0; i < r.names.size(); ++i)
    out << ',' << format_double(r.values[i]) << ',' << format_double(r.errors[i]);
  for (const auto& e : r.extras) out << ',' << format_double(e.second);
  out << ',';
  for (std::size_t i = 0; i < r.flags.size(); ++i) out << (i ? ";" : "") << r.flags[i];
  out << '\n';
}

std::string format_uncertain(double value, double unc) {
  require(std::isfinite(value), "format_uncertain: value must be finite");
  if (!(unc > 0.0) || !std::isfinite(unc)) return format_double(value);
  int q = 0;
  double u = unc;
  for (int pass = 0; pass < 2; ++pass) {
    const int d = static_cast<int>(std::floor(std::log10(u)));
    const double lead = u / std::pow(10.0, d);
    q = d - (lead < 2.0 ? 1 : 0);
    u = std::round(unc / std::pow(10.0, q)) * std::pow(10.0, q);
  }
  std::ostringstream s;
  if (q >= 0) {
    const double scale = std::pow(10.0, q);
    s << static_cast<long long>(std::llround(value / scale) * static_cast<long long>(scale))
      << '(' << static_cast<long long>(std::llround(u)) << ')';
  } else {
    s.setf(std::ios::fixed);
    s.precision(-q);
    s << value << '(' << static_cast<long long>(std::llround(u * std::pow(10.0, -q))) << ')';
  }
  return s.str();
}

// ---- generalised least squares ---------------------------------------------

namespace {

struct Gls {
  VectorXd p;
  MatrixXd cov;
  double chi2 = 0.0;
};

// Minimises (y - X p)^T C^{-1} (y - X p).
Gls gls(const MatrixXd& X, const VectorXd& y, const MatrixXd& C) {
  Eigen::LLT<MatrixXd> llt(C);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::degenerate, "measurement covariance is not positive definite");
  const MatrixXd Xw = llt.matrixL().solve(X);
  const VectorXd yw = llt.matrixL().solve(y);
  // Unit-norm columns so that the rank test does not depend on units.
  const VectorXd scale = Xw.colwise().norm().transpose();
  if ((scale.array() <= 0.0).any()) fail(ErrorCode::degenerate, "fit design matrix is singular");
  const MatrixXd Xs = Xw * scale.cwiseInverse().asDiagonal();
  Eigen::FullPivLU<MatrixXd> lu(Xs.transpose() * Xs);
  if (!lu.isInvertible()) fail(ErrorCode::degenerate, "fit design matrix is singular");
  Gls g;
  g.p = lu.solve(Xs.transpose() * yw).cwiseQuotient(scale);
  g.cov = scale.cwiseInverse().asDiagonal() * lu.inverse() * scale.cwiseInverse().asDiagonal();
  g.chi2 = (yw - Xw * g.p).squaredNorm();
  return g;
}

std::vector<std::vector<double>> to_nested(const MatrixXd& m) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(i)].push_back(m(i, j));
  return out;
}

// Sensitivities of the running integral X_i = int_0^{t_i} nbar dt to the raw
// measurements (N_j, T_x,j, T_r,j), laid out as 3 j + {0, 1, 2}.
struct DensityIntegral {
  std::vector<double> t;                  // relative to the first record
  std::vector<double> X;                  // X_i
  std::vector<std::vector<double>> dX;    // dX_i / dq
  std::vector<double> raw_var;            // variances of q
};

DensityIntegral density_integral(const MeasurementSeries& s) {
  const std::size_t n = s.size();
  DensityIntegral d;
  std::vector<double> nbar(n), dn_dN(n), dn_dTx(n), dn_dTr(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& st = s[j].state;
    require(st.N() > 0.0, "particle numbers must be > 0");
    nbar[j] = mean_density(st);
    dn_dN[j] = nbar[j] / st.N();
    dn_dTx[j] = -0.5 * nbar[j] / st.T_x();
    dn_dTr[j] = -nbar[j] / st.T_r();
    d.t.push_back(s[j].t - s[0].t);
    d.raw_var.push_back(s[j].sigma_N * s[j].sigma_N);
    d.raw_var.push_back(s[j].sigma_Tx * s[j].sigma_Tx);
    d.raw_var.push_back(s[j].sigma_Tr * s[j].sigma_Tr);
  }
  std::vector<double> w(n, 0.0);  // trapezoid weights of the running integral
  double X = 0.0;
  d.X.push_back(0.0);
  d.dX.emplace_back(3 * n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double h = d.t[i] - d.t[i - 1];
    X += 0.5 * (nbar[i - 1] + nbar[i]) * h;
    w[i - 1] += 0.5 * h;
    w[i] += 0.5 * h;
    d.X.push_back(X);
    std::vector<double> g(3 * n, 0.0);
    for (std::size_t j = 0; j <= i; ++j) {
      g[3 * j] = w[j] * dn_dN[j];
      g[3 * j + 1] = w[j] * dn_dTx[j];
      g[3 * j + 2] = w[j] * dn_dTr[j];
    }
    d.dX.push_back(std::move(g));
  }
  return d;
}

bool all_positive(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
}

void add_beta_systematic(FitResult& r, double beta, double beta_err,
                         const DensitySystematic& sys) {
  require(sys.low >= 0.0 && sys.high >= sys.low, "invalid density systematic");
  r.extras.emplace_back("beta_sys_low", sys.low * std::abs(beta));
  r.extras.emplace_back("beta_sys_high", sys.high * std::abs(beta));
  r.extras.emplace_back("beta_total_err",
                        std::hypot(beta_err, sys.high * std::abs(beta)));
}

}  // namespace

// ---- decay ------------------------------------------------------------------

FitResult fit_decay(const MeasurementSeries& series, const DensitySystematic& sys) {
  require(series.size() >= 3, "fit_decay needs at least 3 records");
  const auto pts = linearized_observables(series);
  const auto di = density_integral(series);
  const std::size_t n = series.size(), m = pts.size();
  const bool weighted = std::all_of(series.begin(), series.end(),
                                    [](const Measurement& r) { return r.sigma_N > 0.0; });

  MatrixXd X(m, 2);
  VectorXd y(m);
  for (std::size_t i = 0; i < m; ++i) {
    X(i, 0) = -1.0;
    X(i, 1) = -pts[i].x;
    y(i) = pts[i].y;
  }
  Gls g;
  bool unweighted = false;
  if (!weighted) {
    g = gls(X, y, MatrixXd::Identity(m, m));
    unweighted = true;
  } else {
    double beta = 0.0;
    for (int iter = 0; iter < 8; ++iter) {
      // Residual r_i = y_i + alpha + beta x_i; its raw-data Jacobian.
      MatrixXd J = MatrixXd::Zero(m, 3 * n);
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t k = i + 1;
        const double t = di.t[k];
        J(i, 3 * k) += 1.0 / (series[k].state.N() * t);
        J(i, 0) += -1.0 / (series[0].state.N() * t);
        for (std::size_t c = 0; c < 3 * n; ++c) J(i, c) += beta * di.dX[k][c] / t;
      }
      VectorXd D(3 * n);
      for (std::size_t c = 0; c < 3 * n; ++c) D(c) = di.raw_var[c];
      MatrixXd C = J * D.asDiagonal() * J.transpose();
      C.diagonal().array() += 1e-300;
      const double prev = beta;
      g = gls(X, y, C);
      beta = g.p(1);
      if (std::abs(beta - prev) <= 1e-10 * std::abs(beta)) break;
    }
  }
  FitResult r;
  r.fit = "decay";
  r.names = {"alpha", "beta"};
  r.dof = static_cast<int>(m) - 2;
  r.chi2 = g.chi2;
  MatrixXd cov = g.cov;
  if (unweighted) {
    r.flags.push_back("unweighted");
    if (r.dof > 0) cov *= g.chi2 / r.dof;
  }
  r.values = {g.p(0), g.p(1)};
  r.errors = {std::sqrt(cov(0, 0)), std::sqrt(cov(1, 1))};
  r.covariance = to_nested(cov);
  if (g.p(0) > 0.0) {
    r.extras.emplace_back("alpha_inv_s", 1.0 / g.p(0));
    r.extras.emplace_back("alpha_inv_err_s", r.errors[0] / (g.p(0) * g.p(0)));
  }
  r.extras.emplace_back("beta_cm3_s", g.p(1) / constants::cm3);
  add_beta_systematic(r, g.p(1), r.errors[1], sys);
  if (g.p(1) < 0.0) r.flags.push_back("no_two_body_signal");
  return r;
}

// ---- heating ----------------------------------------------------------------

FitResult fit_heating_beta(const MeasurementSeries& series,
                           const DensitySystematic& sys) {
  require(series.size() >= 3, "fit_heating_beta needs at least 3 records");
  const auto di = density_integral(series);
  const std::size_t n = series.size(), m = n - 1;
  const auto T = series.mean_temperatures();
  const double T0 = T[0];
  MatrixXd X(m, 1);
  VectorXd y(m);
  for (std::size_t i = 0; i < m; ++i) {
    X(i, 0) = di.X[i + 1];
    y(i) = std::log(T[i + 1] / T0);
  }
  const bool weighted = std::all_of(series.begin(), series.end(), [](const Measurement& r) {
    return r.sigma_Tx > 0.0 && r.sigma_Tr > 0.0;
  });
  Gls g;
  if (!weighted) {
    g = gls(X, y, MatrixXd::Identity(m, m));
  } else {
    double b = 0.0;
    for (int iter = 0; iter < 8; ++iter) {
      // r_i = ln Tbar_i - ln Tbar_0 - b X_i
      MatrixXd J = MatrixXd::Zero(m, 3 * n);
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t k = i + 1;
        J(i, 3 * k + 1) += 1.0 / (3.0 * T[k]);
        J(i, 3 * k + 2) += 2.0 / (3.0 * T[k]);
        J(i, 1) -= 1.0 / (3.0 * T0);
        J(i, 2) -= 2.0 / (3.0 * T0);
        for (std::size_t c = 0; c < 3 * n; ++c) J(i, c) -= b * di.dX[k][c];
      }
      VectorXd D(3 * n);
      for (std::size_t c = 0; c < 3 * n; ++c) D(c) = di.raw_var[c];
      MatrixXd C = J * D.asDiagonal() * J.transpose();
      C.diagonal().array() += 1e-300;
      const double prev = b;
      g = gls(X, y, C);
      b = g.p(0);
      if (std::abs(b - prev) <= 1e-10 * std::abs(b)) break;
    }
  }
  FitResult r;
  r.fit = "heating";
  r.names = {"beta_heat"};
  r.dof = static_cast<int>(m) - 1;
  r.chi2 = g.chi2;
  MatrixXd cov = g.cov * 16.0;
  if (!weighted) {
    r.flags.push_back("unweighted");
    if (r.dof > 0) cov *= g.chi2 / r.dof;
  }
  const double beta = 4.0 * g.p(0), err = std::sqrt(cov(0, 0));
  if (beta < -2.0 * err)
    fail(ErrorCode::domain, "temperatures fall over the series (cooling); heating fit rejected");
  r.values = {beta};
  r.errors = {err};
  r.covariance = to_nested(cov);
  r.extras.emplace_back("beta_heat_cm3_s", beta / constants::cm3);
  add_beta_systematic(r, beta, err, sys);
  return r;
}

// ---- aspect-ratio relaxation ------------------------------------------------

namespace {

struct RelaxFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = VectorXd;
  using ValueType = VectorXd;
  using JacobianType = MatrixXd;

  const std::vector<double>& t;
  const std::vector<double>& A;
  const std::vector<double>& s;

  int inputs() const { return 3; }
  int values() const { return static_cast<int>(t.size()); }

  // p = (ln gamma, A_eq, A0)
  int operator()(const VectorXd& p, VectorXd& f) const {
    const double g = std::exp(p(0));
    for (std::size_t i = 0; i < t.size(); ++i)
      f(static_cast<Eigen::Index>(i)) =
          (p(1) + (p(2) - p(1)) * std::exp(-g * t[i]) - A[i]) / s[i];
    return 0;
  }
  int df(const VectorXd& p, MatrixXd& J) const {
    const double g = std::exp(p(0));
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      const double e = std::exp(-g * t[i]);
      J(k, 0) = -(p(2) - p(1)) * t[i] * g * e / s[i];
      J(k, 1) = (1.0 - e) / s[i];
      J(k, 2) = e / s[i];
    }
    return 0;
  }
};

}  // namespace

FitResult fit_gamma_rel(const MeasurementSeries& series) {
  require(series.size() >= 5, "fit_gamma_rel needs at least 5 records");
  const auto tstar = rescale_time(series);
  std::vector<double> A, sA, Tbar = series.mean_temperatures();
  for (const auto& rec : series) {
    const auto& st = rec.state;
    const double a = aspect_ratio(st);
    A.push_back(a);
    const double rx = rec.sigma_Tx / st.T_x(), rr = rec.sigma_Tr / st.T_r();
    sA.push_back(0.5 * a * std::hypot(rx, rr));
  }
  const bool weighted = all_positive(sA);
  if (!weighted) std::fill(sA.begin(), sA.end(), 1.0);

  const double span = tstar.back();
  require(span > 0.0, "series spans no rescaled time");
  RelaxFunctor fn{tstar, A, sA};
  double best_cost = std::numeric_limits<double>::infinity();
  VectorXd best(3);
  bool converged = false;
  for (double gscale : {3.0, 1.0, 10.0, 0.3, 30.0, 0.1}) {
    VectorXd p(3);
    p << std::log(gscale / span), A.back(), A.front();
    Eigen::LevenbergMarquardt<RelaxFunctor> lm(fn);
    lm.parameters.maxfev = 2000;
    lm.parameters.xtol = 1e-12;
    lm.parameters.ftol = 1e-12;
    const auto info = lm.minimize(p);
    VectorXd f(A.size());
    fn(p, f);
    const double cost = f.squaredNorm();
    const bool ok = info == Eigen::LevenbergMarquardtSpace::RelativeReductionTooSmall ||
                    info == Eigen::LevenbergMarquardtSpace::RelativeErrorTooSmall ||
                    info == Eigen::LevenbergMarquardtSpace::RelativeErrorAndReductionTooSmall ||
                    info == Eigen::LevenbergMarquardtSpace::CosinusTooSmall ||
                    info == Eigen::LevenbergMarquardtSpace::FtolTooSmall ||
                    info == Eigen::LevenbergMarquardtSpace::XtolTooSmall ||
                    info == Eigen::LevenbergMarquardtSpace::GtolTooSmall;
    if (ok && std::isfinite(cost) && cost < best_cost) {
      best_cost = cost;
      best = p;
      converged = true;
    }
  }
  if (!converged)
    fail(ErrorCode::convergence, "aspect-ratio fit did not converge after restarts");

  FitResult r;
  r.fit = "gamma_rel";
  r.names = {"gamma_rel", "A_eq", "A0"};
  const double gamma = std::exp(best(0));
  r.values = {gamma, best(1), best(2)};
  r.chi2 = best_cost;
  r.dof = static_cast<int>(A.size()) - 3;

  // Covariance in (gamma, A_eq, A0).
  MatrixXd J(A.size(), 3);
  for (std::size_t i = 0; i < A.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double e = std::exp(-gamma * tstar[i]);
    J(k, 0) = -(best(2) - best(1)) * tstar[i] * e / sA[i];
    J(k, 1) = (1.0 - e) / sA[i];
    J(k, 2) = e / sA[i];
  }
  const MatrixXd F = J.transpose() * J;
  Eigen::FullPivLU<MatrixXd> lu(F);
  MatrixXd cov = MatrixXd::Constant(3, 3, std::numeric_limits<double>::infinity());
  bool degenerate = !lu.isInvertible();
  if (!degenerate) {
    cov = lu.inverse();
    if (!weighted && r.dof > 0) cov *= best_cost / r.dof;
  }
  r.errors = {std::sqrt(cov(0, 0)), std::sqrt(cov(1, 1)), std::sqrt(cov(2, 2))};
  if (degenerate || !(r.errors[0] < gamma) || gamma * span > 1e3) degenerate = true;
  r.covariance = to_nested(cov);
  if (degenerate) r.flags.push_back("degenerate");
  if (!weighted) r.flags.push_back("unweighted");
  if (gamma * span < 2.0) r.flags.push_back("under_relaxed");

  // Temperature weighted with |dA/dt| = |dA/dt*| dt*/dt, integrated over t.
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < tstar.size(); ++i) {
    const double w0 = std::exp(-gamma * tstar[i - 1]), w1 = std::exp(-gamma * tstar[i]);
    const double h = tstar[i] - tstar[i - 1];
    num += 0.5 * (w0 * Tbar[i - 1] + w1 * Tbar[i]) * h;
    den += 0.5 * (w0 + w1) * h;
  }
  r.extras.emplace_back("T_eff_K", den > 0.0 ? num / den : Tbar.front());
  r.extras.emplace_back("e_foldings", gamma * span);
  r.extras.emplace_back("nbar0_m3", mean_density(series[0].state));
  r.extras.emplace_back("vbar0_mps", mean_relative_velocity(series[0].state));
  return r;
}

// ---- sigma_rel data ---------------------------------------------------------

std::vector<SigmaRelDatum> read_sigma_rel_csv(std::istream& in,
                                              const std::string& source) {
  const auto tab = CsvTable::read(in, source);
  const auto cT = tab.require_column("T_uK");
  const auto cS = tab.require_column("sigma_rel_m2");
  const auto cU = tab.require_column("unc_m2");
  std::vector<SigmaRelDatum> out;
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    SigmaRelDatum d{tab.at(i, cT) * constants::microkelvin, tab.at(i, cS), tab.at(i, cU)};
    if (!(d.T > 0.0 && d.sigma_rel > 0.0 && d.uncertainty > 0.0))
      fail(ErrorCode::parse, source + ":" + std::to_string(tab.line_of(i)) +
                                 ": T, sigma_rel and uncertainty must be > 0");
    out.push_back(d);
  }
  return out;
}

std::vector<SigmaRelDatum> read_sigma_rel_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::io, "cannot open " + path);
  return read_sigma_rel_csv(f, path);
}

// ---- scattering length ------------------------------------------------------

std::vector<double> default_a_grid(double lo, double hi, std::size_t per_sign) {
  require(lo > 0.0 && hi > lo && per_sign >= 2, "invalid a grid");
  const auto mags = log_grid(lo, hi, per_sign);
  std::vector<double> g;
  for (auto it = mags.rbegin(); it != mags.rend(); ++it) g.push_back(-*it);
  for (double v : mags) g.push_back(v);
  return g;
}

double sigma_rel_chi2(const std::vector<SigmaRelDatum>& data, double a,
                      const IsotopeParams& iso, const AverageKernel& kernel,
                      const CurveSettings& settings, CrossSectionCache* cache) {
  std::vector<double> T;
  for (const auto& d : data) T.push_back(d.T);
  const auto curve = relaxation_curve(a, iso, kernel, T, settings, cache);
  double chi2 = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = (data[i].sigma_rel - curve.sigma_rel[i]) / data[i].uncertainty;
    chi2 += r * r;
  }
  return chi2;
}

ScatteringLengthFit fit_scattering_length(const std::vector<SigmaRelDatum>& data0,
                                          const IsotopeParams& iso,
                                          const AverageKernel& kernel,
                                          const std::vector<double>& a_grid0,
                                          const CurveSettings& settings,
                                          CrossSectionCache* cache) {
  require(data0.size() >= 2, "fit_scattering_length needs at least 2 data points");
  require(a_grid0.size() >= 3, "a grid needs at least 3 points");
  // Order-independent: sort the data and the grid.
  auto data = data0;
  std::sort(data.begin(), data.end(), [](const SigmaRelDatum& x, const SigmaRelDatum& y) {
    return std::tie(x.T, x.sigma_rel, x.uncertainty) < std::tie(y.T, y.sigma_rel, y.uncertainty);
  });
  for (const auto& d : data)
    require(d.T > 0.0 && d.sigma_rel > 0.0 && d.uncertainty > 0.0,
            "sigma_rel data must be positive");
  auto grid = a_grid0;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  auto chi2_at = [&](double a) {
    try {
      return sigma_rel_chi2(data, a, iso, kernel, settings, cache);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::invalid_argument) throw;
      return nan;
    }
  };

  ScatteringLengthFit out;
  std::vector<double> ga, gc;
  for (double a : grid) {
    const double c = chi2_at(a);
    out.grid_a.push_back(a);
    out.grid_chi2.push_back(c);
    if (std::isfinite(c)) {
      ga.push_back(a);
      gc.push_back(c);
    }
  }
  if (ga.size() < 3)
    fail(ErrorCode::resonance, "a grid lies on a resonance pole: no tunable points");

  // Refinement coordinate: ln|a| within one sign, linear across zero.
  auto refine = [&](double lo, double hi) {
    if (lo * hi > 0.0) {
      const double s = lo > 0.0 ? 1.0 : -1.0;
      auto r = boost::math::tools::brent_find_minima(
          [&](double u) {
            const double c = chi2_at(s * std::exp(u));
            return std::isfinite(c) ? c : 1e300;
          },
          std::log(std::min(std::abs(lo), std::abs(hi))),
          std::log(std::max(std::abs(lo), std::abs(hi))), 30);
      return std::make_pair(s * std::exp(r.first), r.second);
    }
    auto r = boost::math::tools::brent_find_minima(
        [&](double a) {
          const double c = chi2_at(a);
          return std::isfinite(c) ? c : 1e300;
        },
        lo, hi, 30);
    return r;
  };

  // Delta chi2 = 1 crossing from a_min towards grid index `toward`.
  auto crossing = [&](double a_min, double c_min, std::size_t start, int dir,
                      bool& open) {
    open = false;
    double inside = a_min;
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(start);
    while (j >= 0 && j < static_cast<std::ptrdiff_t>(ga.size())) {
      const auto k = static_cast<std::size_t>(j);
      if (gc[k] > c_min + 1.0) {
        double a = inside, b = ga[k];
        const bool logscale = a * b > 0.0;
        for (int it = 0; it < 12; ++it) {
          const double mid = logscale ? std::copysign(std::sqrt(a * b), a) : 0.5 * (a + b);
          const double c = chi2_at(mid);
          if (std::isfinite(c) && c <= c_min + 1.0)
            a = mid;
          else
            b = mid;
        }
        return std::abs(0.5 * (a + b) - a_min);
      }
      inside = ga[k];
      j += dir;
    }
    open = true;
    return std::abs((dir > 0 ? ga.back() : ga.front()) - a_min);
  };

  for (std::size_t i = 0; i < ga.size(); ++i) {
    const bool left_ok = i == 0 || gc[i] <= gc[i - 1];
    const bool right_ok = i + 1 == ga.size() || gc[i] < gc[i + 1];
    if (!(left_ok && right_ok)) continue;
    ScatteringLengthCandidate c;
    if (i == 0 || i + 1 == ga.size()) {
      c.a = ga[i];
      c.chi2 = gc[i];
      c.at_grid_edge = true;
    } else {
      const auto r = refine(ga[i - 1], ga[i + 1]);
      c.a = r.first;
      c.chi2 = std::min(r.second, gc[i]);
      if (r.second > gc[i]) c.a = ga[i];
    }
    bool open_lo = false, open_hi = false;
    const std::size_t lo_start = i == 0 ? 0 : (ga[i] <= c.a ? i : i - 1);
    const std::size_t hi_start = i + 1 == ga.size() ? i : (ga[i] >= c.a ? i : i + 1);
    c.err_low = i == 0 ? 0.0 : crossing(c.a, c.chi2, lo_start, -1, open_lo);
    c.err_high = i + 1 == ga.size() ? 0.0 : crossing(c.a, c.chi2, hi_start, +1, open_hi);
    c.at_grid_edge = c.at_grid_edge || open_lo || open_hi;
    out.candidates.push_back(c);
  }
  std::sort(out.candidates.begin(), out.candidates.end(),
            [](const auto& x, const auto& y) { return x.chi2 < y.chi2; });
  const double cmin = out.candidates.front().chi2;
  for (auto& c : out.candidates) c.relative_likelihood = std::exp(-0.5 * (c.chi2 - cmin));

  const auto& b = out.candidates.front();
  FitResult& r = out.best;
  r.fit = "scattering_length";
  r.names = {"a"};
  r.values = {b.a};
  r.errors = {0.5 * (b.err_low + b.err_high)};
  r.covariance = {{r.errors[0] * r.errors[0]}};
  r.chi2 = b.chi2;
  r.dof = static_cast<int>(data.size()) - 1;
  r.extras.emplace_back("a_a0", b.a / constants::a0);
  r.extras.emplace_back("err_low_a0", b.err_low / constants::a0);
  r.extras.emplace_back("err_high_a0", b.err_high / constants::a0);
  r.extras.emplace_back("minima", static_cast<double>(out.candidates.size()));
  if (out.candidates.size() > 1) {
    r.extras.emplace_back("second_a_a0", out.candidates[1].a / constants::a0);
    r.extras.emplace_back("likelihood_ratio", 1.0 / out.candidates[1].relative_likelihood);
    r.flags.push_back("multimodal");
  }
  if (b.at_grid_edge) r.flags.push_back("grid_edge");
  return out;
}

// ---- ratio ------------------------------------------------------------------

Uncertain propagate_ratio(Uncertain x, Uncertain y) {
  if (y.value == 0.0) fail(ErrorCode::domain, "ratio with zero denominator");
  require(x.error >= 0.0 && y.error >= 0.0, "uncertainties must be >= 0");
  Uncertain r;
  r.value = x.value / y.value;
  const double ry = y.error / y.value;
  r.error = x.value != 0.0 ? std::abs(r.value) * std::hypot(x.error / x.value, ry)
                           : x.error / std::abs(y.value);
  return r;
}

// ---- time of flight ---------------------------------------------------------

FitResult tof_temperature(const std::vector<TofPoint>& pts,
                          const IsotopeParams& iso, double omega) {
  require(pts.size() >= 2, "tof_temperature needs at least 2 expansion times");
  require(omega > 0.0, "trap frequency must be > 0");
  const std::size_t m = pts.size();
  MatrixXd X(m, 2);
  VectorXd y(m);
  MatrixXd C = MatrixXd::Zero(m, m);
  bool weighted = true;
  for (std::size_t i = 0; i < m; ++i) {
    require(pts[i].t >= 0.0 && pts[i].width > 0.0, "TOF points need t >= 0 and width > 0");
    X(i, 0) = 1.0;
    X(i, 1) = pts[i].t * pts[i].t;
    y(i) = pts[i].width * pts[i].width;
    const double s = 2.0 * pts[i].width * pts[i].uncertainty;
    C(i, i) = s * s;
    weighted = weighted && pts[i].uncertainty > 0.0;
  }
  FitResult r;
  r.fit = "tof_temperature";
  r.names = {"T", "sigma0"};
  const double tmin = X.col(1).minCoeff(), tmax = X.col(1).maxCoeff();
  if (!(tmax > tmin)) {
    r.values = {nan, std::sqrt(y.mean())};
    r.errors = {std::numeric_limits<double>::infinity(), 0.0};
    r.covariance = {{r.errors[0], 0.0}, {0.0, 0.0}};
    r.flags.push_back("degenerate");
    return r;
  }
  if (!weighted) C = MatrixXd::Identity(m, m);
  const Gls g = gls(X, y, C);
  r.dof = static_cast<int>(m) - 2;
  r.chi2 = g.chi2;
  MatrixXd cov = g.cov;
  if (!weighted) {
    r.flags.push_back("unweighted");
    if (r.dof > 0)
      cov *= g.chi2 / r.dof;
    else
      r.flags.push_back("no_error_estimate");
  }
  if (g.p(1) <= 0.0) fail(ErrorCode::domain, "cloud widths shrink in expansion");
  const double c0 = std::max(g.p(0), 0.0), c1 = g.p(1);
  const double mass = iso.mass;
  const double T = mass * c1 / constants::k_B;
  const double s0 = std::sqrt(c0);
  MatrixXd Jp(2, 2);  // d(T, sigma0)/d(c0, c1)
  Jp << 0.0, mass / constants::k_B, s0 > 0.0 ? 0.5 / s0 : 0.0, 0.0;
  const MatrixXd covp = Jp * cov * Jp.transpose();
  r.values = {T, s0};
  r.errors = {std::sqrt(covp(0, 0)), std::sqrt(covp(1, 1))};
  r.covariance = to_nested(covp);
  // pull of sigma0 omega - sqrt(k_B T / m)
  const double u = std::sqrt(c1);
  Eigen::RowVector2d jd(s0 > 0.0 ? omega * 0.5 / s0 : 0.0, -0.5 / u);
  const double var = (jd * cov * jd.transpose())(0, 0);
  const double diff = s0 * omega - u;
  r.extras.emplace_back("pull", var > 0.0 ? diff / std::sqrt(var) : 0.0);
  r.extras.emplace_back("T_uK", T / constants::microkelvin);
  return r;
}

}  // namespace metacoll
