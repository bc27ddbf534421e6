#include "metacoll/metacoll.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <sstream>
#include <string>

#include "metacoll/config.hpp"
#include "metacoll/pipeline.hpp"
#include "metacoll/potential.hpp"
#include "metacoll/scattering.hpp"
#include "metacoll/thermal.hpp"

struct mcl_config {
  metacoll::PipelineConfig cfg;
};

struct mcl_potential {
  metacoll::IsotopeParams iso;
  metacoll::Scatterer scatterer;
};

namespace {

thread_local std::string last_error;

template <class F>
int guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return MCL_OK;
  } catch (const metacoll::Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MCL_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MCL_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return MCL_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) metacoll::fail(metacoll::ErrorCode::invalid_argument, std::string(what) + " is NULL");
}

metacoll::IsotopeParams isotope(int mass_number, double C6_au) {
  const double c6 = C6_au > 0.0 ? C6_au : metacoll::default_C6_au;
  if (mass_number == 20) return metacoll::IsotopeParams::neon20(c6);
  if (mass_number == 22) return metacoll::IsotopeParams::neon22(c6);
  metacoll::fail(metacoll::ErrorCode::invalid_argument, "mass number must be 20 or 22");
}

void copy_out(const std::string& s, char* buf, std::size_t len) {
  if (!buf || len == 0) return;
  const std::size_t n = std::min(len - 1, s.size());
  std::memcpy(buf, s.data(), n);
  buf[n] = '\0';
}

}  // namespace

extern "C" {

const char* mcl_version(void) { return "1.0.0"; }

const char* mcl_last_error(void) { return last_error.c_str(); }

const char* mcl_status_name(int status) {
  if (status == MCL_OK) return "ok";
  if (status == MCL_INTERNAL) return "internal";
  if (status >= 1 && status <= 9)
    return metacoll::error_code_name(static_cast<metacoll::ErrorCode>(status));
  return "unknown";
}

int mcl_config_load(const char* path, mcl_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new mcl_config{metacoll::load_config(path)};
  });
}

int mcl_config_parse(const char* text, const char* base_dir, mcl_config** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = nullptr;
    std::istringstream in(text);
    *out = new mcl_config{metacoll::parse_config(in, "<text>", base_dir ? base_dir : ".")};
  });
}

int mcl_config_set_seed(mcl_config* cfg, uint64_t seed) {
  return guarded([&] {
    need(cfg, "config");
    cfg->cfg.seed = seed;
  });
}

void mcl_config_free(mcl_config* cfg) { delete cfg; }

int mcl_run_command(const mcl_config* cfg, const char* command, const char* out_dir,
                    char* summary, size_t summary_len) {
  return guarded([&] {
    need(cfg, "config");
    need(command, "command");
    need(out_dir, "out_dir");
    const auto r = metacoll::run_command(command, cfg->cfg, out_dir);
    copy_out(r.summary, summary, summary_len);
  });
}

const char* mcl_command_names(void) {
  static const std::string names = [] {
    std::string s;
    for (const auto& n : metacoll::command_names()) s += n + "\n";
    return s;
  }();
  return names.c_str();
}

int mcl_tune_potential(int mass_number, double C6_au, double a_a0, mcl_potential** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    const auto iso = isotope(mass_number, C6_au);
    const auto pot = metacoll::tune_to_scattering_length(iso.C6, iso, a_a0 * metacoll::constants::a0);
    *out = new mcl_potential{iso, metacoll::Scatterer(pot, iso)};
  });
}

int mcl_potential_scattering_length(const mcl_potential* pot, double* a_a0) {
  return guarded([&] {
    need(pot, "potential");
    need(a_a0, "a_a0");
    *a_a0 = pot->scatterer.scattering_length().value / metacoll::constants::a0;
  });
}

int mcl_potential_cross_section(const mcl_potential* pot, double v_mps, int l_max,
                                double* sigma_m2) {
  return guarded([&] {
    need(pot, "potential");
    need(sigma_m2, "sigma_m2");
    *sigma_m2 = pot->scatterer.elastic_cross_section(v_mps, l_max);
  });
}

void mcl_potential_free(mcl_potential* pot) { delete pot; }

int mcl_centrifugal_barrier(int mass_number, double C6_au, int l, double* height_K) {
  return guarded([&] {
    need(height_K, "height_K");
    const auto iso = isotope(mass_number, C6_au);
    *height_K = metacoll::centrifugal_barrier(iso, iso.C6, l) / metacoll::constants::k_B;
  });
}

int mcl_sigma_rel(int mass_number, double C6_au, double a_a0, double T_K, double* sigma_m2) {
  return guarded([&] {
    need(sigma_m2, "sigma_m2");
    const auto iso = isotope(mass_number, C6_au);
    const auto c = metacoll::relaxation_curve(a_a0 * metacoll::constants::a0, iso,
                                              metacoll::AverageKernel::relaxation(), {T_K}, {},
                                              &metacoll::CrossSectionCache::global());
    *sigma_m2 = c.sigma_rel.front();
  });
}

int mcl_propagate_ratio(double x, double x_err, double y, double y_err, double* ratio,
                        double* ratio_err) {
  return guarded([&] {
    need(ratio, "ratio");
    need(ratio_err, "ratio_err");
    const auto r = metacoll::propagate_ratio({x, x_err}, {y, y_err});
    *ratio = r.value;
    *ratio_err = r.error;
  });
}

int mcl_format_uncertain(double value, double err, char* buf, size_t len) {
  return guarded([&] {
    need(buf, "buf");
    if (len == 0) metacoll::fail(metacoll::ErrorCode::invalid_argument, "buffer length is 0");
    copy_out(metacoll::format_uncertain(value, err), buf, len);
  });
}

}  // extern "C"
