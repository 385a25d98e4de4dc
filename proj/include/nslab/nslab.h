/* C interface to the nslab library. */
#ifndef NSLAB_NSLAB_H_
#define NSLAB_NSLAB_H_

#ifdef __cplusplus
extern "C" {
#endif

#if defined(NSLAB_BUILDING)
#define NSLAB_API __attribute__((visibility("default")))
#else
#define NSLAB_API
#endif

typedef enum nslab_status {
  NSLAB_OK = 0,
  NSLAB_ERR_ARGUMENT = 1,
  NSLAB_ERR_CONFIG = 2,
  NSLAB_ERR_DOMAIN = 3,
  NSLAB_ERR_SINGULARITY = 4,
  NSLAB_ERR_HYPOTHESIS = 5,
  NSLAB_ERR_RESOLUTION = 6,
  NSLAB_ERR_VACUUM = 7,
  NSLAB_ERR_NUMERICAL = 8,
  NSLAB_ERR_CALIBRATION = 9,
  NSLAB_ERR_IO = 10,
  NSLAB_ERR_INTERNAL = 11
} nslab_status;

typedef enum nslab_task {
  NSLAB_TASK_SIMULATE = 0,
  NSLAB_TASK_VERIFY = 1,
  NSLAB_TASK_SWEEP = 2,
  NSLAB_TASK_CALIBRATE = 3,
  NSLAB_TASK_MOLLIFY_TEST = 4
} nslab_task;

typedef enum nslab_boundary { NSLAB_PERIODIC = 0, NSLAB_DIRICHLET = 1 } nslab_boundary;

typedef struct nslab_params {
  double A;
  double gamma;
  double mu;
  double lambda;
  double eps;
  double a;
  double beta;
  nslab_boundary boundary_case;
} nslab_params;

typedef struct nslab_experiment nslab_experiment;
typedef struct nslab_report nslab_report;

NSLAB_API const char* nslab_version(void);
/* Message of the last failing call on this thread; never NULL. */
NSLAB_API const char* nslab_last_error(void);
NSLAB_API const char* nslab_status_string(nslab_status s);

/* Default parameters (A=1, gamma=2, mu=1, lambda=0, eps=1e-3, a=1, beta=5, periodic). */
NSLAB_API void nslab_params_default(nslab_params* out);
NSLAB_API nslab_status nslab_params_validate(const nslab_params* p);

NSLAB_API nslab_status nslab_pressure(const nslab_params* p, double rho, double* out);
NSLAB_API nslab_status nslab_pressure_potential(const nslab_params* p, double rho, double* out);
NSLAB_API nslab_status nslab_bregman_gap(const nslab_params* p, double rho, double r, double* out);

NSLAB_API nslab_status nslab_experiment_load_file(const char* path, nslab_experiment** out);
NSLAB_API nslab_status nslab_experiment_load_string(const char* json, nslab_experiment** out);
NSLAB_API nslab_status nslab_experiment_set_output_dir(nslab_experiment* e, const char* dir);
/* Scenario id; owned by the handle. */
NSLAB_API const char* nslab_experiment_scenario(const nslab_experiment* e);
NSLAB_API void nslab_experiment_free(nslab_experiment* e);

NSLAB_API nslab_status nslab_experiment_run(nslab_experiment* e, nslab_task task, nslab_report** out);

NSLAB_API nslab_status nslab_report_passed(const nslab_report* r, int* passed);
/* JSON summary; owned by the report. */
NSLAB_API const char* nslab_report_summary(const nslab_report* r);
NSLAB_API int nslab_report_file_count(const nslab_report* r);
NSLAB_API const char* nslab_report_file(const nslab_report* r, int index);
NSLAB_API void nslab_report_free(nslab_report* r);

#ifdef __cplusplus
}
#endif

#endif /* NSLAB_NSLAB_H_ */
