#ifndef METACOLL_POTENTIAL_HPP
#define METACOLL_POTENTIAL_HPP

#include "metacoll/core.hpp"
#include "metacoll/radial.hpp"

namespace metacoll {

// van-der-Waals length (2 mu C6 / hbar^2)^{1/4}.
double vdw_length(double C6, double reduced_mass);

// Single-channel interaction V(r) = C12/r^12 - C6/r^6. C12 is the tunable
// short-range wall; the -C6/r^6 tail is fixed.
class ModelPotential {
 public:
  ModelPotential(double C6, double C12, double r_min, double r_match);

  // Places r_min at 0.8 core radius and r_match at 25 van-der-Waals lengths.
  static ModelPotential lennard_jones(double C6, double C12,
                                      const IsotopeParams& iso);
  // Same, parameterised by the zero crossing V(core_radius) = 0.
  static ModelPotential from_core_radius(double C6, double core_radius,
                                         const IsotopeParams& iso);

  double C6() const { return C6_; }
  double C12() const { return C12_; }
  double r_min() const { return r_min_; }
  double r_match() const { return r_match_; }
  double core_radius() const;
  double minimum_radius() const;  // (2 C12/C6)^{1/6}
  double well_depth() const;      // C6^2 / (4 C12)

  // J; throws for r <= 0.
  double evaluate(double r) const;
  double operator()(double r) const { return evaluate(r); }

  ModelPotential with_match_radius(double r_match) const;
  RadialProblem radial_problem(const IsotopeParams& iso) const;

 private:
  double C6_;
  double C12_;
  double r_min_;
  double r_match_;
};

struct TuneOptions {
  double relative_tolerance = 1e-6;  // on a, well inside the 0.5% contract
  int max_iterations = 200;
  RadialOptions radial{};
};

// Number of s-wave bound states (zero-energy node count).
int bound_state_count(const ModelPotential& pot, const IsotopeParams& iso,
                      const RadialOptions& opt = {});

// Zero-energy scattering length from the asymptote of the E=0 solution.
double zero_energy_scattering_length(const ModelPotential& pot,
                                     const IsotopeParams& iso,
                                     const RadialOptions& opt = {});

// Core-radius interval (lo, hi) over which the potential supports exactly
// `bound_states` s-wave bound states. Across this window a(core radius)
// rises monotonically from -inf to +inf.
std::pair<double, double> branch_window(double C6, const IsotopeParams& iso,
                                        int bound_states,
                                        const RadialOptions& opt = {});

inline constexpr int default_bound_state_branch = 8;

// Bisection on the wall inside one branch until a(pot) = a_target.
ModelPotential tune_to_scattering_length(
    double C6, const IsotopeParams& iso, double a_target,
    int bound_state_branch = default_bound_state_branch,
    const TuneOptions& opt = {});

}  // namespace metacoll

#endif
