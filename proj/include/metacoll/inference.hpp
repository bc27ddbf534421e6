#ifndef METACOLL_INFERENCE_HPP
#define METACOLL_INFERENCE_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "metacoll/core.hpp"
#include "metacoll/thermal.hpp"

namespace metacoll {

struct FitResult {
  std::string fit;                  // "decay", "heating", ...
  std::vector<std::string> names;
  std::vector<double> values;
  std::vector<double> errors;       // 1 sigma
  std::vector<std::vector<double>> covariance;
  double chi2 = 0.0;
  int dof = 0;
  // Derived quantities reported alongside (systematic envelopes, pulls,
  // effective temperatures).
  std::vector<std::pair<std::string, double>> extras;
  std::vector<std::string> flags;

  double value(const std::string& name) const;
  double error(const std::string& name) const;
  double extra(const std::string& name) const;
  bool has_flag(const std::string& flag) const;
};

void write_fit_report(std::ostream& out, const FitResult& r);
// Header line plus one data row: fit,chi2,dof,<name>,<name>_err,...,<extras>
void write_fit_csv(std::ostream& out, const FitResult& r);

// value(uncertainty) in concise notation: two significant digits
// in the uncertainty when it starts with 1, otherwise one. "38(16)".
std::string format_uncertain(double value, double uncertainty);

// Relative density systematic 23% <= dn/n <= 28%, applied to beta after the
// statistical fit.
struct DensitySystematic {
  double low = 0.23;
  double high = 0.28;
};

// Weighted least squares of the linearised decay, y = -alpha - beta x.
// Measurement uncertainties on N, T_x and T_r are propagated through the
// linearisation including the correlations from the shared first record.
// Negative beta is reported with the flag "no_two_body_signal".
FitResult fit_decay(const MeasurementSeries& series,
                    const DensitySystematic& sys = {});

// ln(Tbar_i / Tbar_0) = (beta / 4) int_0^t_i nbar dt.
FitResult fit_heating_beta(const MeasurementSeries& series,
                           const DensitySystematic& sys = {});

// Nonlinear least squares of A(t*) = A_eq + (A0 - A_eq) exp(-gamma t*).
// The extra "T_eff_K" is the dA/dt-weighted mean of Tbar(t).
FitResult fit_gamma_rel(const MeasurementSeries& series);

struct SigmaRelDatum {
  double T = 0.0;            // K
  double sigma_rel = 0.0;    // m^2
  double uncertainty = 0.0;  // m^2
};

std::vector<SigmaRelDatum> read_sigma_rel_csv(std::istream& in,
                                              const std::string& source = "<stream>");
std::vector<SigmaRelDatum> read_sigma_rel_csv(const std::string& path);

struct ScatteringLengthCandidate {
  double a = 0.0;  // m
  double chi2 = 0.0;
  double err_low = 0.0;   // m, distance to the lower Delta chi2 = 1 crossing
  double err_high = 0.0;  // m
  double relative_likelihood = 1.0;  // exp(-(chi2 - chi2_min) / 2)
  bool at_grid_edge = false;
};

struct ScatteringLengthFit {
  FitResult best;
  std::vector<ScatteringLengthCandidate> candidates;  // sorted by chi2
  std::vector<double> grid_a;                         // m
  std::vector<double> grid_chi2;                      // NaN where untunable
};

// +-|a| on a log grid between lo and hi (both in m), n points per sign.
std::vector<double> default_a_grid(double lo = 5.0 * constants::a0,
                                   double hi = 1.0e4 * constants::a0,
                                   std::size_t per_sign = 40);

double sigma_rel_chi2(const std::vector<SigmaRelDatum>& data, double a,
                      const IsotopeParams& iso, const AverageKernel& kernel,
                      const CurveSettings& settings = {},
                      CrossSectionCache* cache = nullptr);

ScatteringLengthFit fit_scattering_length(
    const std::vector<SigmaRelDatum>& data, const IsotopeParams& iso,
    const AverageKernel& kernel, const std::vector<double>& a_grid,
    const CurveSettings& settings = {}, CrossSectionCache* cache = nullptr);

struct Uncertain {
  double value = 0.0;
  double error = 0.0;
};

// x / y with first-order relative-quadrature uncertainty.
Uncertain propagate_ratio(Uncertain x, Uncertain y);

struct TofPoint {
  double t = 0.0;            // s after release
  double width = 0.0;        // m
  double uncertainty = 0.0;  // m; 0 -> unweighted fit
};

// sigma^2(t) = sigma0^2 + (k_B T / m) t^2. The extra "pull" compares
// sigma0 omega with sqrt(k_B T / m).
FitResult tof_temperature(const std::vector<TofPoint>& points,
                          const IsotopeParams& iso, double omega);

}  // namespace metacoll

#endif
