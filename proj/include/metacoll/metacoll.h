/* C interface to the metacoll library. All functions return an mcl_status;
 * on failure mcl_last_error() describes the problem (thread-local). */
#ifndef METACOLL_H
#define METACOLL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(METACOLL_BUILDING_LIBRARY)
#    define MCL_API __declspec(dllexport)
#  else
#    define MCL_API __declspec(dllimport)
#  endif
#else
#  define MCL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  MCL_OK = 0,
  MCL_INVALID_ARGUMENT = 1,
  MCL_DOMAIN = 2,
  MCL_CONVERGENCE = 3,
  MCL_RESONANCE = 4,
  MCL_IO = 5,
  MCL_PARSE = 6,
  MCL_CONFIG = 7,
  MCL_DEGENERATE = 8,
  MCL_COVERAGE = 9,
  MCL_INTERNAL = 99
} mcl_status;

typedef struct mcl_config mcl_config;
typedef struct mcl_potential mcl_potential;

MCL_API const char* mcl_version(void);
MCL_API const char* mcl_last_error(void);
MCL_API const char* mcl_status_name(int status);

/* Pipeline configuration (INI text). */
MCL_API int mcl_config_load(const char* path, mcl_config** out);
MCL_API int mcl_config_parse(const char* text, const char* base_dir, mcl_config** out);
MCL_API int mcl_config_set_seed(mcl_config* cfg, uint64_t seed);
MCL_API void mcl_config_free(mcl_config* cfg);

/* Runs a pipeline command, writing artifacts into out_dir. The summary
 * (may be NULL) receives a NUL-terminated text, truncated to summary_len. */
MCL_API int mcl_run_command(const mcl_config* cfg, const char* command,
                            const char* out_dir, char* summary, size_t summary_len);
/* Command names separated by '\n'. */
MCL_API const char* mcl_command_names(void);

/* mass_number 20 or 22; C6 in atomic units (<= 0 selects the default);
 * scattering lengths in Bohr radii. */
MCL_API int mcl_tune_potential(int mass_number, double C6_au, double a_a0,
                               mcl_potential** out);
MCL_API int mcl_potential_scattering_length(const mcl_potential* pot, double* a_a0);
MCL_API int mcl_potential_cross_section(const mcl_potential* pot, double v_mps,
                                        int l_max, double* sigma_m2);
MCL_API void mcl_potential_free(mcl_potential* pot);

/* Barrier height in kelvin. */
MCL_API int mcl_centrifugal_barrier(int mass_number, double C6_au, int l, double* height_K);

/* Relaxation cross section at T (K) with the calibrated kernel. */
MCL_API int mcl_sigma_rel(int mass_number, double C6_au, double a_a0, double T_K,
                          double* sigma_m2);

MCL_API int mcl_propagate_ratio(double x, double x_err, double y, double y_err,
                                double* ratio, double* ratio_err);

/* Concise notation "38(16)" into buf. */
MCL_API int mcl_format_uncertain(double value, double err, char* buf, size_t len);

#ifdef __cplusplus
}
#endif

#endif
