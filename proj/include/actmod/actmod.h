/*
 * actmod C API.
 *
 * Opaque handles (actmod_config, actmod_report, actmod_plant) are created and
 * destroyed through this interface only. Every fallible call returns an
 * actmod_status; on failure actmod_last_error() holds a message for the
 * calling thread until its next failing call.
 *
 * Strings returned as `const char*` stay valid for the lifetime of the
 * handle they came from. Output buffers follow the snprintf convention:
 * `needed` receives the full length (without terminator) and the text is
 * truncated to fit `capacity`, in which case ACTMOD_E_BUFFER_TOO_SMALL is
 * returned. A NULL buffer only queries the length and returns ACTMOD_OK.
 */
#ifndef ACTMOD_ACTMOD_H
#define ACTMOD_ACTMOD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ACTMOD_BUILDING)
#    define ACTMOD_API __declspec(dllexport)
#  else
#    define ACTMOD_API __declspec(dllimport)
#  endif
#else
#  define ACTMOD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum actmod_status {
  ACTMOD_OK = 0,
  ACTMOD_E_INVALID_ARGUMENT = 1,
  ACTMOD_E_NON_FINITE = 2,
  ACTMOD_E_UNSTABLE = 3,
  ACTMOD_E_NO_OSCILLATION = 4,
  ACTMOD_E_CRC_MISMATCH = 5,
  ACTMOD_E_RANGE_OVERFLOW = 6,
  ACTMOD_E_UNDEFINED_METRIC = 7,
  ACTMOD_E_CONFIG = 8,
  ACTMOD_E_IO = 9,
  ACTMOD_E_BUFFER_TOO_SMALL = 10,
  ACTMOD_E_INTERNAL = 100
} actmod_status;

ACTMOD_API const char* actmod_version(void);
ACTMOD_API const char* actmod_status_string(actmod_status status);
ACTMOD_API const char* actmod_last_error(void);

/* ---- scenario configuration ------------------------------------------- */

typedef struct actmod_config actmod_config;

ACTMOD_API size_t actmod_scenario_count(void);
ACTMOD_API const char* actmod_scenario_name(size_t index);

ACTMOD_API actmod_status actmod_config_preset(const char* scenario, actmod_config** out);
ACTMOD_API actmod_status actmod_config_load_file(actmod_config* config, const char* path);
/* key is "section.name" */
ACTMOD_API actmod_status actmod_config_set(actmod_config* config, const char* key,
                                           const char* value);
ACTMOD_API actmod_status actmod_config_get(const actmod_config* config, const char* key,
                                           char* buffer, size_t capacity, size_t* needed);
ACTMOD_API actmod_status actmod_config_echo(const actmod_config* config, char* buffer,
                                            size_t capacity, size_t* needed);
ACTMOD_API void actmod_config_free(actmod_config* config);

/* ---- experiments ------------------------------------------------------ */

typedef struct actmod_report actmod_report;

typedef struct actmod_metrics {
  double overshoot_percent;
  double rise_time_s;
  double settling_time_s;
  double steady_state_error_mm;
  double rms_tracking_error_mm;
  int has_overshoot;
  int has_rise_time;
  int has_settling_time;
} actmod_metrics;

typedef struct actmod_tuning {
  double ultimate_gain;
  double ultimate_period;
  double p_kp;
  double pd_kp, pd_kd;
  double pid_kp, pid_ki, pid_kd;
} actmod_tuning;

typedef struct actmod_event {
  double t_start;
  double t_end;
  double peak;
  int channel; /* 0 = velocity, 1 = current */
} actmod_event;

/* Runs the configured scenario. If out_dir is non-NULL the artifacts are
 * written there. */
ACTMOD_API actmod_status actmod_run(const actmod_config* config, const char* out_dir,
                                    actmod_report** out);
ACTMOD_API size_t actmod_report_run_count(const actmod_report* report);
ACTMOD_API const char* actmod_report_run_label(const actmod_report* report, size_t run);
ACTMOD_API size_t actmod_report_row_count(const actmod_report* report, size_t run);
/* Whole-run metrics of one run. */
ACTMOD_API actmod_status actmod_report_metrics(const actmod_report* report, size_t run,
                                               actmod_metrics* out);
ACTMOD_API actmod_status actmod_report_run_csv(const actmod_report* report, size_t run,
                                               char* buffer, size_t capacity, size_t* needed);
ACTMOD_API size_t actmod_report_event_count(const actmod_report* report, size_t run);
ACTMOD_API actmod_status actmod_report_event(const actmod_report* report, size_t run,
                                             size_t index, actmod_event* out);
/* ACTMOD_E_INVALID_ARGUMENT unless the report comes from the tune scenario. */
ACTMOD_API actmod_status actmod_report_tuning(const actmod_report* report, actmod_tuning* out);
ACTMOD_API void actmod_report_free(actmod_report* report);

/* ---- plant ------------------------------------------------------------ */

typedef struct actmod_params {
  double kt;
  double inertia;
  double viscous;
  double coulomb;
  double cog_amplitude;
  int32_t pole_pairs;
  double gear_ratio;
  double drum_radius;
  int32_t encoder_cpr;
  double current_limit;
  double current_loop_tau;
} actmod_params;

typedef struct actmod_plant_state {
  double theta;
  double omega;
  double current;
  int64_t encoder_count;
  double time;
} actmod_plant_state;

typedef struct actmod_plant actmod_plant;

ACTMOD_API void actmod_params_default(actmod_params* out);

ACTMOD_API actmod_status actmod_plant_new(const actmod_params* params, actmod_plant** out);
/* Advances the plant by dt with the given current command and external
 * joint torque. */
ACTMOD_API actmod_status actmod_plant_step(actmod_plant* plant, double command_current,
                                           double joint_torque, double dt);
ACTMOD_API actmod_status actmod_plant_state_get(const actmod_plant* plant,
                                                actmod_plant_state* out);
ACTMOD_API actmod_status actmod_plant_state_set(actmod_plant* plant,
                                                const actmod_plant_state* state);
ACTMOD_API void actmod_plant_free(actmod_plant* plant);

ACTMOD_API actmod_status actmod_counts_from_tendon(const actmod_params* params,
                                                   double delta_mm, int64_t* counts);
ACTMOD_API actmod_status actmod_tendon_from_counts(const actmod_params* params,
                                                   int64_t counts, double* delta_mm);
ACTMOD_API actmod_status actmod_estimate_load(const actmod_params* params,
                                              double mean_current, double* tension_n);
/* Position (mm) and velocity (mm/s) of a C4 rest-to-rest segment. */
ACTMOD_API actmod_status actmod_smooth_evaluate(double start_mm, double end_mm, double t0,
                                                double duration, double t, double* position,
                                                double* velocity);

/* ---- bus frames ------------------------------------------------------- */

typedef struct actmod_command_frame {
  uint8_t module_id;
  uint16_t sequence;
  int16_t current_ma;
  uint8_t flags;
} actmod_command_frame;

typedef struct actmod_status_frame {
  uint8_t module_id;
  uint16_t sequence;
  int32_t position;
  int16_t velocity;
  int16_t current_ma;
} actmod_status_frame;

ACTMOD_API uint16_t actmod_crc16(const uint8_t* bytes, size_t length);
ACTMOD_API actmod_status actmod_command_encode(const actmod_command_frame* frame,
                                               uint8_t payload[8]);
ACTMOD_API actmod_status actmod_command_decode(const uint8_t payload[8],
                                               actmod_command_frame* out);
ACTMOD_API actmod_status actmod_status_encode(const actmod_status_frame* frame,
                                              uint8_t payload_a[8], uint8_t payload_b[8]);
ACTMOD_API actmod_status actmod_status_decode(uint8_t module_id, const uint8_t payload_a[8],
                                              const uint8_t payload_b[8],
                                              actmod_status_frame* out);

#ifdef __cplusplus
}
#endif

#endif /* ACTMOD_ACTMOD_H */
