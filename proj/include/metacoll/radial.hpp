#ifndef METACOLL_RADIAL_HPP
#define METACOLL_RADIAL_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace metacoll {

// Radial Schroedinger problem for the relative motion of two atoms,
//   -hbar^2/(2 mu) u'' + [V(r) + hbar^2 l(l+1)/(2 mu r^2)] u = E u.
// The equation is integrated on the logarithmic coordinate s = ln(r/L) with
// u = sqrt(r) w, which turns it into w'' = [x^2 (v - eps) + (l+1/2)^2] w
// (no first-derivative term), so Numerov applies with a uniform step in s.
struct RadialProblem {
  enum class Start {
    wall,     // u(r_min) = 0, for hard cores and steep repulsive walls
    regular,  // u ~ r^(l+1) at r_min, for potentials finite at the origin
  };

  std::function<double(double)> potential;  // J, argument in m
  double reduced_mass = 0.0;                // kg
  double r_min = 0.0;                       // m
  double r_match = 0.0;                     // m
  Start start = Start::wall;
  double length_scale = 0.0;  // m; 0 selects r_match
};

struct RadialOptions {
  double step = 0.0;         // log-grid step; 0 chooses it automatically
  double tolerance = 1e-4;   // rad, phase change under step halving
  int max_refinements = 2;   // halvings allowed beyond the starting step
  double match_offset = 0.1; // second matching radius is r_match * e^offset
};

struct PhaseShift {
  double delta = 0.0;     // rad, in (-pi/2, pi/2]
  double residual = 0.0;  // |delta(h) - delta(h/2)|
  double step = 0.0;      // finest log step used
};

struct ZeroEnergySolution {
  double scattering_length = 0.0;  // m, from the linear asymptote
  int nodes = 0;                   // nodes on (r_min, inf), = bound states
};

class RadialSolver {
 public:
  explicit RadialSolver(RadialProblem problem);

  const RadialProblem& problem() const { return problem_; }
  double length_unit() const { return L_; }
  double energy_unit() const { return E_unit_; }

  // Phase shift with step-halving convergence control; throws
  // ErrorCode::convergence with the achieved residual on failure.
  PhaseShift phase_shift(double energy, int l,
                         const RadialOptions& opt = {}) const;
  // Single solve at a fixed log step, no convergence control.
  double phase_shift_at_step(double energy, int l, double step,
                             double match_offset = 0.1) const;
  ZeroEnergySolution zero_energy(const RadialOptions& opt = {}) const;

  // Step resolving the local wavelength by 20 points, capped at 0.02.
  double automatic_step(double energy, int l) const;

 private:
  struct Grid {
    double h = 0.0;
    double s0 = 0.0;
    std::vector<double> x2;   // x^2
    std::vector<double> x2v;  // x^2 V / E_unit
    std::size_t i_match = 0;
    std::size_t i_second = 0;
  };
  struct Endpoint {
    double u1, u2, x1, x2;
    int nodes;
  };

  std::shared_ptr<const Grid> grid(double h, double match_offset) const;
  Endpoint integrate(const Grid& g, double eps, int l) const;
  double match_phase(const Endpoint& e, double k, int l) const;

  RadialProblem problem_;
  double L_;
  double E_unit_;
  double s_match_;
  double max_depth_;  // max over r of -x^2 v (dimensionless)
  mutable std::mutex mutex_;
  mutable std::map<std::pair<double, double>, std::shared_ptr<const Grid>>
      grids_;
};

}  // namespace metacoll

#endif
