#include "metacoll/dsmc.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <ostream>

#include "metacoll/csv.hpp"
#include "metacoll/dynamics.hpp"

namespace metacoll::dsmc {

using constants::k_B;
using constants::pi;

CrossSectionSource CrossSectionSource::constant(double sigma0) {
  require(sigma0 >= 0.0, "sigma0 must be >= 0");
  CrossSectionSource s;
  s.kind = Kind::constant;
  s.sigma0 = sigma0;
  return s;
}

CrossSectionSource CrossSectionSource::inverse_velocity(double sigma0,
                                                        double v_ref) {
  require(sigma0 >= 0.0 && v_ref > 0.0, "inverse-velocity source needs sigma0 >= 0, v_ref > 0");
  CrossSectionSource s;
  s.kind = Kind::inverse_velocity;
  s.sigma0 = sigma0;
  s.v_ref = v_ref;
  return s;
}

CrossSectionSource CrossSectionSource::tabulated(CrossSectionCurve curve) {
  CrossSectionSource s;
  s.kind = Kind::curve;
  s.curve = std::make_shared<const CrossSectionCurve>(std::move(curve));
  return s;
}

double CrossSectionSource::operator()(double v) const {
  switch (kind) {
    case Kind::constant:
      return sigma0;
    case Kind::inverse_velocity:
      return sigma0 * v_ref / std::max(v, 1e-12);
    case Kind::curve:
      return (*curve)(std::max(v, 1e-12));
  }
  return 0.0;
}

namespace {

// Counter-based stream: splitmix64 seeded from (seed, step, cell).
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b)
      : state_(mix(seed ^ mix(a * 0xD1B54A32D192ED03ULL ^ mix(b + 0x8CB92BA72F3D8DD7ULL)))) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) {
    return std::min(static_cast<std::size_t>(uniform() * static_cast<double>(n)), n - 1);
  }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * pi * u2);
  }
  std::uint64_t poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda > 50.0) {
      const double x = std::round(lambda + std::sqrt(lambda) * normal());
      return x > 0.0 ? static_cast<std::uint64_t>(x) : 0;
    }
    double p = std::exp(-lambda), F = p;
    const double u = uniform();
    std::uint64_t k = 0;
    while (u > F && k < 1000) {
      ++k;
      p *= lambda / static_cast<double>(k);
      F += p;
    }
    return k;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

constexpr std::uint64_t init_stream = ~std::uint64_t{0};

double thermal_speed(double T, double mass) { return std::sqrt(16.0 * k_B * T / (pi * mass)); }

// Typical sigma v at the mean relative speed, and a majorant over the bulk
// of the relative-speed distribution.
double typical_sigma_v(const CrossSectionSource& s, double vbar) {
  return s(vbar) * vbar;
}

double initial_majorant(const CrossSectionSource& s, double vbar) {
  double m = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double v = vbar * std::pow(10.0, -1.0 + 1.7 * i / 40.0);
    m = std::max(m, s(v) * v);
  }
  return m;
}

double peak_density(const ThermalState& s) {
  return s.N() / (std::pow(2.0 * pi, 1.5) * s.width_x() * s.width_r() * s.width_r());
}

}  // namespace

double max_time_step(const SimConfig& config, const ThermalState& initial) {
  double dt = 0.02 / std::max(config.trap.omega_r, config.trap.omega_x);
  if (config.collisions) {
    const double vbar = thermal_speed(mean_temperature(initial), config.isotope.mass);
    const double rate = peak_density(initial) * typical_sigma_v(config.cross_section, vbar);
    if (rate > 0.0) dt = std::min(dt, 0.1 / rate);
  }
  return dt;
}

void validate(const SimConfig& config, const ThermalState& initial) {
  require(config.particles >= 2, "DSMC needs at least 2 test particles");
  require(initial.N() > 0.0, "initial N must be > 0");
  require(config.weight >= 0.0, "statistical weight must be >= 0");
  require(config.beta >= 0.0, "beta must be >= 0");
  require(config.extent_widths >= 3.0, "cell grid must span at least 3 widths");
  require(std::abs(config.isotope.mass - initial.isotope().mass) <=
              1e-9 * config.isotope.mass,
          "config and initial state disagree on the isotope");
  if (config.cross_section.kind == CrossSectionSource::Kind::curve)
    require(config.cross_section.curve != nullptr, "curve source without a curve");
  if (config.cells_per_width < 4.0)
    fail(ErrorCode::domain, "cells under-resolve the cloud: need edge <= width/4, got width/" +
                                format_double(config.cells_per_width));
  const double dt_max = max_time_step(config, initial);
  if (config.dt < 0.0) fail(ErrorCode::domain, "time step must be > 0");
  if (config.dt > dt_max * (1.0 + 1e-12))
    fail(ErrorCode::domain, "time step " + format_double(config.dt) +
                                " s exceeds min(0.02/omega_r, mean-free-time/10) = " +
                                format_double(dt_max) + " s");
  if (config.sample_interval < 0.0) fail(ErrorCode::domain, "sample interval must be >= 0");
}

SimTrace run(const SimConfig& config, const ThermalState& initial0,
             double duration) {
  validate(config, initial0);
  require(duration > 0.0, "duration must be > 0");
  const ThermalState initial(initial0.N(), initial0.T_x(), initial0.T_r(),
                             config.trap, config.isotope);
  const double m = config.isotope.mass;
  const double wx2 = config.trap.omega_x * config.trap.omega_x;
  const double wr2 = config.trap.omega_r * config.trap.omega_r;
  const double dt = config.dt > 0.0 ? config.dt : max_time_step(config, initial);
  const double W = config.weight > 0.0
                       ? config.weight
                       : initial.N() / static_cast<double>(config.particles);
  const auto steps = static_cast<std::uint64_t>(std::llround(duration / dt));
  require(steps >= 1, "duration shorter than one time step");
  const std::uint64_t every =
      config.sample_interval > 0.0
          ? std::max<std::uint64_t>(1, static_cast<std::uint64_t>(
                                           std::llround(config.sample_interval / dt)))
          : 50;

  // Initial phase-space sample.
  std::size_t n = config.particles;
  std::vector<double> x(n), y(n), z(n), vx(n), vy(n), vz(n);
  {
    const double sx = initial.width_x(), sr = initial.width_r();
    const double ux = std::sqrt(k_B * initial.T_x() / m);
    const double ur = std::sqrt(k_B * initial.T_r() / m);
    for (std::size_t i = 0; i < n; ++i) {
      Stream rng(config.seed, init_stream, i);
      x[i] = sx * rng.normal();
      y[i] = sr * rng.normal();
      z[i] = sr * rng.normal();
      vx[i] = ux * rng.normal();
      vy[i] = ur * rng.normal();
      vz[i] = ur * rng.normal();
    }
  }

  // Cell grid fixed by the initial widths.
  const double hx = initial.width_x() / config.cells_per_width;
  const double hr = initial.width_r() / config.cells_per_width;
  const auto half = static_cast<std::size_t>(std::ceil(config.extent_widths * config.cells_per_width));
  const std::size_t nc1 = 2 * half;
  const std::size_t ncell = nc1 * nc1 * nc1;
  const double Lx = static_cast<double>(half) * hx, Lr = static_cast<double>(half) * hr;
  const double Vc = hx * hr * hr;
  const double ihx = 1.0 / hx, ihr = 1.0 / hr;
  const double vbar0 = thermal_speed(mean_temperature(initial), m);
  std::vector<double> majorant(ncell, initial_majorant(config.cross_section, vbar0));
  std::vector<std::uint32_t> cell_of(n), count(ncell, 0), start(ncell, 0), order(n), occupied;
  std::vector<char> dead(n, 0);

  SimTrace trace;
  trace.particles0 = n;
  trace.weight = W;
  trace.dt = dt;
  trace.trap = config.trap;
  trace.isotope = config.isotope;
  std::uint64_t n_coll = 0, n_lost = 0;

  auto sample = [&](double t) {
    double sxx = 0.0, srr = 0.0, e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += x[i] * x[i];
      srr += y[i] * y[i] + z[i] * z[i];
      e += vx[i] * vx[i] + vy[i] * vy[i] + vz[i] * vz[i] + wx2 * x[i] * x[i] +
           wr2 * (y[i] * y[i] + z[i] * z[i]);
    }
    const double nn = static_cast<double>(std::max<std::size_t>(n, 1));
    const double mx = sxx / nn, mr = srr / (2.0 * nn);
    trace.t.push_back(t);
    trace.N.push_back(W * static_cast<double>(n));
    trace.T_x.push_back(m * wx2 * mx / k_B);
    trace.T_r.push_back(m * wr2 * mr / k_B);
    trace.A.push_back(std::sqrt(mx / mr));
    trace.nbar.push_back(W * static_cast<double>(n) /
                         (std::pow(4.0 * pi, 1.5) * std::sqrt(mx) * mr));
    trace.energy.push_back(0.5 * m * e);
    trace.collisions.push_back(n_coll);
    trace.losses.push_back(n_lost);
  };

  sample(0.0);
  const bool loss = config.beta > 0.0;
  const double hdt = 0.5 * dt;
  for (std::uint64_t step = 1; step <= steps; ++step) {
    // Kick-drift-kick in the harmonic trap, one axis at a time.
    auto leapfrog = [n, hdt, dt](double* __restrict q, double* __restrict v, double w2) {
      for (std::size_t i = 0; i < n; ++i) {
        v[i] -= hdt * w2 * q[i];
        q[i] += dt * v[i];
        v[i] -= hdt * w2 * q[i];
      }
    };
    leapfrog(x.data(), vx.data(), wx2);
    leapfrog(y.data(), vy.data(), wr2);
    leapfrog(z.data(), vz.data(), wr2);

    if ((config.collisions || loss) && n >= 2) {
      // Bucket by cell, touching only occupied cells; particles off the grid
      // sit out. Each cell draws from its own stream, so visiting order does
      // not affect the result.
      occupied.clear();
      for (std::size_t i = 0; i < n; ++i) {
        const double fx = (x[i] + Lx) * ihx, fy = (y[i] + Lr) * ihr, fz = (z[i] + Lr) * ihr;
        std::uint32_t c = static_cast<std::uint32_t>(ncell);
        if (fx >= 0.0 && fy >= 0.0 && fz >= 0.0 && fx < nc1 && fy < nc1 && fz < nc1) {
          c = static_cast<std::uint32_t>((static_cast<std::size_t>(fx) * nc1 +
                                          static_cast<std::size_t>(fy)) * nc1 +
                                         static_cast<std::size_t>(fz));
          if (count[c]++ == 0) occupied.push_back(c);
        }
        cell_of[i] = c;
      }
      {
        std::uint32_t offset = 0;
        for (auto c : occupied) {
          start[c] = offset;
          offset += count[c];
          count[c] = start[c];
        }
        for (std::size_t i = 0; i < n; ++i)
          if (cell_of[i] < ncell) order[count[cell_of[i]]++] = static_cast<std::uint32_t>(i);
      }

      bool any_dead = false;
      for (auto c : occupied) {
        std::size_t cn = count[c] - start[c];
        count[c] = 0;
        if (cn < 2) continue;
        std::uint32_t* idx = order.data() + start[c];
        Stream rng(config.seed, step, c);
        if (loss) {
          const double pairs = 0.5 * static_cast<double>(cn) * static_cast<double>(cn - 1);
          auto events = rng.poisson(config.beta * W * pairs / Vc * dt);
          while (events-- > 0 && cn >= 2) {
            for (int k = 0; k < 2; ++k) {
              const std::size_t j = rng.below(cn);
              dead[idx[j]] = 1;
              std::swap(idx[j], idx[cn - 1]);
              --cn;
            }
            n_lost += 2;
            any_dead = true;
          }
        }
        if (!config.collisions || cn < 2) continue;
        const double pairs = 0.5 * static_cast<double>(cn) * static_cast<double>(cn - 1);
        const double expected = pairs * W * majorant[c] * dt / Vc;
        auto cand = static_cast<std::uint64_t>(expected + rng.uniform());
        for (; cand > 0; --cand) {
          const std::size_t a = rng.below(cn);
          std::size_t b = rng.below(cn - 1);
          if (b >= a) ++b;
          const std::uint32_t i = idx[a], j = idx[b];
          const double gx = vx[i] - vx[j], gy = vy[i] - vy[j], gz = vz[i] - vz[j];
          const double g = std::sqrt(gx * gx + gy * gy + gz * gz);
          const double sv = config.cross_section(g) * g;
          if (sv > majorant[c]) majorant[c] = sv;
          if (rng.uniform() * majorant[c] >= sv) continue;
          // Isotropic scattering in the centre-of-mass frame.
          const double cth = 2.0 * rng.uniform() - 1.0;
          const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
          const double ph = 2.0 * pi * rng.uniform();
          const double hx2 = 0.5 * g * sth * std::cos(ph), hy2 = 0.5 * g * sth * std::sin(ph),
                       hz2 = 0.5 * g * cth;
          const double cx = 0.5 * (vx[i] + vx[j]), cy = 0.5 * (vy[i] + vy[j]),
                       cz = 0.5 * (vz[i] + vz[j]);
          vx[i] = cx + hx2;
          vy[i] = cy + hy2;
          vz[i] = cz + hz2;
          vx[j] = cx - hx2;
          vy[j] = cy - hy2;
          vz[j] = cz - hz2;
          ++n_coll;
        }
      }

      if (any_dead) {
        std::size_t w = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (dead[i]) continue;
          x[w] = x[i];
          y[w] = y[i];
          z[w] = z[i];
          vx[w] = vx[i];
          vy[w] = vy[i];
          vz[w] = vz[i];
          ++w;
        }
        n = w;
        std::fill(dead.begin(), dead.begin() + static_cast<std::ptrdiff_t>(n), 0);
      }
    }

    if (step % every == 0 || step == steps) sample(static_cast<double>(step) * dt);
    if (n < 2) break;
  }
  return trace;
}

std::vector<double> rescaled_time(const SimTrace& trace) {
  std::vector<double> vbar;
  vbar.reserve(trace.t.size());
  for (std::size_t i = 0; i < trace.t.size(); ++i)
    vbar.push_back(mean_relative_velocity(mean_temperature(trace.T_x[i], trace.T_r[i]),
                                          trace.isotope.mass));
  return rescale_time(trace.t, trace.nbar, vbar);
}

namespace {

struct Projection {
  double ssr, c0, c1;
};

Projection project(const std::vector<double>& t, const std::vector<double>& A,
                   double gamma) {
  double s00 = 0, s01 = 0, s11 = 0, b0 = 0, b1 = 0;
  const double t0 = t.front();
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = std::exp(-gamma * (t[i] - t0));
    s00 += 1.0;
    s01 += e;
    s11 += e * e;
    b0 += A[i];
    b1 += e * A[i];
  }
  const double det = s00 * s11 - s01 * s01;
  Projection p{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  if (!(std::abs(det) > 1e-14 * s00 * s11)) return p;
  p.c0 = (s11 * b0 - s01 * b1) / det;
  p.c1 = (s00 * b1 - s01 * b0) / det;
  p.ssr = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = A[i] - p.c0 - p.c1 * std::exp(-gamma * (t[i] - t0));
    p.ssr += r * r;
  }
  return p;
}

}  // namespace

GammaMeasurement measure_gamma_rel(const std::vector<double>& t,
                                   const std::vector<double>& A) {
  require(t.size() == A.size(), "time and aspect-ratio lengths differ");
  require(t.size() >= 5, "gamma fit needs at least 5 samples");
  for (std::size_t i = 1; i < t.size(); ++i) require(t[i] > t[i - 1], "times must increase");
  const double span = t.back() - t.front();
  const double lo = std::log(0.01 / span), hi = std::log(1000.0 / span);
  constexpr int n_scan = 240;
  int best = 0;
  double best_ssr = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n_scan; ++k) {
    const double s = project(t, A, std::exp(lo + (hi - lo) * k / n_scan)).ssr;
    if (s < best_ssr) {
      best_ssr = s;
      best = k;
    }
  }
  const double step = (hi - lo) / n_scan;
  const double a = lo + step * std::max(best - 1, 0);
  const double b = lo + step * std::min(best + 1, n_scan);
  const auto r = boost::math::tools::brent_find_minima(
      [&](double lg) { return project(t, A, std::exp(lg)).ssr; }, a, b, 52);
  const double gamma = std::exp(r.first);
  const auto p = project(t, A, gamma);
  if (!std::isfinite(p.ssr)) fail(ErrorCode::degenerate, "relaxation fit is degenerate");

  double mean = 0.0;
  for (double v : A) mean += v;
  mean /= static_cast<double>(A.size());
  double sst = 0.0;
  for (double v : A) sst += (v - mean) * (v - mean);

  GammaMeasurement out;
  out.gamma_rel = gamma;
  out.A_eq = p.c0;
  out.A0 = p.c0 + p.c1;
  out.rms_residual = std::sqrt(p.ssr / static_cast<double>(A.size()));
  out.r_squared = sst > 0.0 ? 1.0 - p.ssr / sst : 0.0;
  out.e_foldings = gamma * span;
  out.under_relaxed = out.e_foldings < 2.0;
  return out;
}

GammaMeasurement measure_gamma_rel(const SimTrace& trace) {
  return measure_gamma_rel(rescaled_time(trace), trace.A);
}

MeasurementSeries to_series(const SimTrace& trace) {
  MeasurementSeries s;
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    const double n = std::max(trace.N[i] / trace.weight, 1.0);
    const double lost = std::max(static_cast<double>(trace.losses[i]), 1.0);
    s.push_back({trace.t[i],
                 ThermalState(trace.N[i], trace.T_x[i], trace.T_r[i], trace.trap,
                              trace.isotope),
                 trace.weight * std::sqrt(lost), trace.T_x[i] * std::sqrt(2.0 / n),
                 trace.T_r[i] * std::sqrt(1.0 / n)});
  }
  return s;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  out << "t_s,N,Tx_K,Tr_K,A,nbar_m3,energy_J,collisions,losses\n";
  for (std::size_t i = 0; i < trace.t.size(); ++i)
    out << format_double(trace.t[i]) << ',' << format_double(trace.N[i]) << ','
        << format_double(trace.T_x[i]) << ',' << format_double(trace.T_r[i]) << ','
        << format_double(trace.A[i]) << ',' << format_double(trace.nbar[i]) << ','
        << format_double(trace.energy[i]) << ',' << trace.collisions[i] << ','
        << trace.losses[i] << '\n';
}

}  // namespace metacoll::dsmc
