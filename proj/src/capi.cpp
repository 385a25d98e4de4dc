#include "nslab/nslab.h"

#include <string>
#include <vector>

#include "nslab/eos.hpp"
#include "nslab/errors.hpp"
#include "nslab/harness.hpp"

struct nslab_experiment {
  nslab::harness::ExperimentConfig config;
};

struct nslab_report {
  bool pass = false;
  std::string summary;
  std::vector<std::string> files;
};

namespace {

thread_local std::string g_last_error;

nslab_status fail(nslab_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
nslab_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return NSLAB_OK;
  } catch (const nslab::ConfigError& e) {
    return fail(NSLAB_ERR_CONFIG, e.what());
  } catch (const nslab::SingularityError& e) {
    return fail(NSLAB_ERR_SINGULARITY, e.what());
  } catch (const nslab::DomainError& e) {
    return fail(NSLAB_ERR_DOMAIN, e.what());
  } catch (const nslab::ArgumentError& e) {
    return fail(NSLAB_ERR_ARGUMENT, e.what());
  } catch (const nslab::HypothesisError& e) {
    return fail(NSLAB_ERR_HYPOTHESIS, e.what());
  } catch (const nslab::ResolutionError& e) {
    return fail(NSLAB_ERR_RESOLUTION, e.what());
  } catch (const nslab::VacuumError& e) {
    return fail(NSLAB_ERR_VACUUM, e.what());
  } catch (const nslab::NumericalError& e) {
    return fail(NSLAB_ERR_NUMERICAL, e.what());
  } catch (const nslab::CalibrationError& e) {
    return fail(NSLAB_ERR_CALIBRATION, e.what());
  } catch (const nslab::IoError& e) {
    return fail(NSLAB_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(NSLAB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NSLAB_ERR_INTERNAL, "unknown error");
  }
}

nslab::ModelParams to_model(const nslab_params* p) {
  if (p == nullptr) throw nslab::ArgumentError("params must not be NULL");
  nslab::ModelParams m;
  m.A = p->A;
  m.gamma = p->gamma;
  m.mu = p->mu;
  m.lambda = p->lambda;
  m.eps = p->eps;
  m.a = p->a;
  m.beta = p->beta;
  m.boundary_case = p->boundary_case == NSLAB_DIRICHLET ? nslab::BoundaryCase::Dirichlet
                                                        : nslab::BoundaryCase::Periodic;
  m.validate();
  return m;
}

void require_out(const void* out) {
  if (out == nullptr) throw nslab::ArgumentError("output pointer must not be NULL");
}

}  // namespace

extern "C" {

const char* nslab_version(void) { return "1.0.0"; }

const char* nslab_last_error(void) { return g_last_error.c_str(); }

const char* nslab_status_string(nslab_status s) {
  switch (s) {
    case NSLAB_OK: return "ok";
    case NSLAB_ERR_ARGUMENT: return "argument error";
    case NSLAB_ERR_CONFIG: return "configuration error";
    case NSLAB_ERR_DOMAIN: return "domain error";
    case NSLAB_ERR_SINGULARITY: return "singularity error";
    case NSLAB_ERR_HYPOTHESIS: return "hypothesis error";
    case NSLAB_ERR_RESOLUTION: return "resolution error";
    case NSLAB_ERR_VACUUM: return "vacuum error";
    case NSLAB_ERR_NUMERICAL: return "numerical error";
    case NSLAB_ERR_CALIBRATION: return "calibration error";
    case NSLAB_ERR_IO: return "i/o error";
    case NSLAB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void nslab_params_default(nslab_params* out) {
  if (out == nullptr) return;
  const nslab::ModelParams d;
  *out = nslab_params{d.A, d.gamma, d.mu, d.lambda, d.eps, d.a, d.beta, NSLAB_PERIODIC};
}

nslab_status nslab_params_validate(const nslab_params* p) {
  return guarded([&] { to_model(p); });
}

nslab_status nslab_pressure(const nslab_params* p, double rho, double* out) {
  return guarded([&] {
    require_out(out);
    *out = nslab::eos::pressure(rho, to_model(p));
  });
}

nslab_status nslab_pressure_potential(const nslab_params* p, double rho, double* out) {
  return guarded([&] {
    require_out(out);
    *out = nslab::eos::potential(rho, to_model(p));
  });
}

nslab_status nslab_bregman_gap(const nslab_params* p, double rho, double r, double* out) {
  return guarded([&] {
    require_out(out);
    *out = nslab::eos::bregman_gap(rho, r, to_model(p));
  });
}

nslab_status nslab_experiment_load_file(const char* path, nslab_experiment** out) {
  return guarded([&] {
    require_out(out);
    *out = nullptr;
    if (path == nullptr) throw nslab::ArgumentError("path must not be NULL");
    *out = new nslab_experiment{nslab::harness::load_config(path)};
  });
}

nslab_status nslab_experiment_load_string(const char* json, nslab_experiment** out) {
  return guarded([&] {
    require_out(out);
    *out = nullptr;
    if (json == nullptr) throw nslab::ArgumentError("json must not be NULL");
    *out = new nslab_experiment{nslab::harness::parse_config(json)};
  });
}

nslab_status nslab_experiment_set_output_dir(nslab_experiment* e, const char* dir) {
  return guarded([&] {
    if (e == nullptr || dir == nullptr || *dir == '\0')
      throw nslab::ArgumentError("experiment and directory must be non-NULL and nonempty");
    e->config.output_dir = dir;
  });
}

const char* nslab_experiment_scenario(const nslab_experiment* e) {
  return e == nullptr ? "" : e->config.scenario.c_str();
}

void nslab_experiment_free(nslab_experiment* e) { delete e; }

nslab_status nslab_experiment_run(nslab_experiment* e, nslab_task task, nslab_report** out) {
  return guarded([&] {
    require_out(out);
    *out = nullptr;
    if (e == nullptr) throw nslab::ArgumentError("experiment must not be NULL");
    namespace h = nslab::harness;
    h::Outcome o;
    switch (task) {
      case NSLAB_TASK_SIMULATE: o = h::simulate(e->config); break;
      case NSLAB_TASK_VERIFY: o = h::verify(e->config); break;
      case NSLAB_TASK_SWEEP: o = h::sweep(e->config); break;
      case NSLAB_TASK_CALIBRATE: o = h::calibrate(e->config); break;
      case NSLAB_TASK_MOLLIFY_TEST: o = h::mollify_test(e->config); break;
      default: throw nslab::ArgumentError("unknown task");
    }
    *out = new nslab_report{o.pass, o.summary.dump(), o.files};
  });
}

nslab_status nslab_report_passed(const nslab_report* r, int* passed) {
  return guarded([&] {
    require_out(passed);
    if (r == nullptr) throw nslab::ArgumentError("report must not be NULL");
    *passed = r->pass ? 1 : 0;
  });
}

const char* nslab_report_summary(const nslab_report* r) { return r == nullptr ? "" : r->summary.c_str(); }

int nslab_report_file_count(const nslab_report* r) {
  return r == nullptr ? 0 : static_cast<int>(r->files.size());
}

const char* nslab_report_file(const nslab_report* r, int index) {
  if (r == nullptr || index < 0 || index >= static_cast<int>(r->files.size())) return nullptr;
  return r->files[static_cast<std::size_t>(index)].c_str();
}

void nslab_report_free(nslab_report* r) { delete r; }

}  // extern "C"
