#include "metacoll/potential.hpp"

#include <cmath>

namespace metacoll {

namespace {
constexpr double r_min_fraction = 0.8;
constexpr double r_match_vdw_lengths = 25.0;
}  // namespace

double vdw_length(double C6, double reduced_mass) {
  const double hb = constants::hbar;
  return std::pow(2.0 * reduced_mass * C6 / (hb * hb), 0.25);
}

ModelPotential::ModelPotential(double C6, double C12, double r_min,
                               double r_match)
    : C6_(C6), C12_(C12), r_min_(r_min), r_match_(r_match) {
  require(C6 > 0.0 && C12 > 0.0, "C6 and C12 must be > 0");
  require(r_min > 0.0 && r_match > r_min, "need 0 < r_min < r_match");
  require(evaluate(r_min) > 0.0, "V(r_min) must lie on the repulsive wall");
}

ModelPotential ModelPotential::lennard_jones(double C6, double C12,
                                             const IsotopeParams& iso) {
  const double rc = std::pow(C12 / C6, 1.0 / 6.0);
  return {C6, C12, r_min_fraction * rc,
          r_match_vdw_lengths * vdw_length(C6, iso.reduced_mass())};
}

ModelPotential ModelPotential::from_core_radius(double C6, double core_radius,
                                                const IsotopeParams& iso) {
  return lennard_jones(C6, C6 * std::pow(core_radius, 6), iso);
}

double ModelPotential::core_radius() const {
  return std::pow(C12_ / C6_, 1.0 / 6.0);
}

double ModelPotential::minimum_radius() const {
  return std::pow(2.0 * C12_ / C6_, 1.0 / 6.0);
}

double ModelPotential::well_depth() const { return C6_ * C6_ / (4.0 * C12_); }

double ModelPotential::evaluate(double r) const {
  require(r > 0.0, "potential evaluated at r <= 0");
  const double ir6 = 1.0 / (r * r * r * r * r * r);
  return (C12_ * ir6 - C6_) * ir6;
}

ModelPotential ModelPotential::with_match_radius(double r_match) const {
  return {C6_, C12_, r_min_, r_match};
}

RadialProblem ModelPotential::radial_problem(const IsotopeParams& iso) const {
  RadialProblem p;
  const ModelPotential self = *this;
  p.potential = [self](double r) { return self.evaluate(r); };
  p.reduced_mass = iso.reduced_mass();
  p.r_min = r_min_;
  p.r_match = r_match_;
  p.start = RadialProblem::Start::wall;
  p.length_scale = vdw_length(C6_, iso.reduced_mass());
  return p;
}

int bound_state_count(const ModelPotential& pot, const IsotopeParams& iso,
                      const RadialOptions& opt) {
  return RadialSolver(pot.radial_problem(iso)).zero_energy(opt).nodes;
}

double zero_energy_scattering_length(const ModelPotential& pot,
                                     const IsotopeParams& iso,
                                     const RadialOptions& opt) {
  return RadialSolver(pot.radial_problem(iso))
      .zero_energy(opt)
      .scattering_length;
}

std::pair<double, double> branch_window(double C6, const IsotopeParams& iso,
                                        int bound_states,
                                        const RadialOptions& opt) {
  require(bound_states >= 1, "bound-state branch must be >= 1");
  const double beta6 = vdw_length(C6, iso.reduced_mass());
  auto count = [&](double rc) {
    return bound_state_count(
        ModelPotential::from_core_radius(C6, rc * beta6, iso), iso, opt);
  };

  // Semiclassical phase of the LJ well is 0.4207 / rc^2 (rc in vdW units).
  double rc = std::sqrt(0.4207 / (constants::pi * (bound_states + 0.5)));
  int n = count(rc);
  for (int guard = 0; n != bound_states; ++guard) {
    if (guard > 200)
      fail(ErrorCode::convergence, "cannot locate bound-state branch " +
                                       std::to_string(bound_states));
    const double factor =
        std::pow(static_cast<double>(n + 1) / (bound_states + 1), 0.5);
    rc *= (n > bound_states) ? std::max(factor, 1.002) : std::min(factor, 0.998);
    n = count(rc);
  }

  // Expand and bisect on the node count for both edges.
  auto edge = [&](double inside, double dir) {
    double outside = inside;
    int guard = 0;
    do {
      inside = outside;
      outside *= (dir > 0 ? 1.02 : 0.98);
      if (++guard > 500) fail(ErrorCode::convergence, "branch edge search");
    } while (count(outside) == bound_states);
    for (int it = 0; it < 100 && std::abs(outside - inside) > 1e-13 * inside;
         ++it) {
      const double mid = 0.5 * (inside + outside);
      (count(mid) == bound_states ? inside : outside) = mid;
    }
    return inside;
  };
  const double lo = edge(rc, -1.0);
  const double hi = edge(rc, +1.0);
  return {lo * beta6, hi * beta6};
}

ModelPotential tune_to_scattering_length(double C6, const IsotopeParams& iso,
                                         double a_target,
                                         int bound_state_branch,
                                         const TuneOptions& opt) {
  require(std::isfinite(a_target), "target scattering length must be finite");
  auto [lo, hi] = branch_window(C6, iso, bound_state_branch, opt.radial);
  auto a_of = [&](double rc) {
    return zero_energy_scattering_length(
        ModelPotential::from_core_radius(C6, rc, iso), iso, opt.radial);
  };
  const double tol =
      opt.relative_tolerance *
      std::max(std::abs(a_target), 1e-3 * vdw_length(C6, iso.reduced_mass()));
  for (int it = 0; it < opt.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double a = a_of(mid);
    if (std::abs(a - a_target) <= tol)
      return ModelPotential::from_core_radius(C6, mid, iso);
    (a < a_target ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * mid) break;
  }
  fail(ErrorCode::resonance,
       "scattering-length bracket collapsed without reaching the target; "
       "the target lies at a resonance pole of this branch");
}

}  // namespace metacoll
