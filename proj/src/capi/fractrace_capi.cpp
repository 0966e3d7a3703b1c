#include "fractrace.h"

#include <cstring>
#include <exception>
#include <string>

#include "core/commands.hpp"
#include "core/kernel.hpp"
#include "core/measure.hpp"
#include "core/potentials.hpp"

namespace {

thread_local std::string g_last_error;

using fractrace::DiscreteMeasure;
using fractrace::KernelEvaluator;
using fractrace::KernelSpec;
using fractrace::SpacePoint;

ft_status classify(const std::exception& e) {
  g_last_error = e.what();
  if (dynamic_cast<const std::invalid_argument*>(&e)) return FT_ERR_INVALID_ARGUMENT;
  if (dynamic_cast<const std::domain_error*>(&e)) return FT_ERR_INVALID_ARGUMENT;
  return FT_ERR_RUNTIME;
}

SpacePoint point_from(const double* x, int dim) {
  SpacePoint p{0.0, 0.0, 0.0};
  for (int i = 0; i < dim; ++i) p[i] = x[i];
  return p;
}

}  // namespace

struct ft_kernel {
  KernelSpec spec;
  KernelEvaluator eval;
  explicit ft_kernel(const KernelSpec& s) : spec(s), eval(s) {}
};

struct ft_measure {
  DiscreteMeasure m;
};

extern "C" {

const char* ft_last_error(void) { return g_last_error.c_str(); }

void ft_string_free(char* s) { std::free(s); }

ft_status ft_kernel_create(double alpha, int dim, ft_kernel** out) {
  if (!out) {
    g_last_error = "out pointer is null";
    return FT_ERR_INVALID_ARGUMENT;
  }
  try {
    KernelSpec spec;
    spec.alpha = alpha;
    spec.dim = dim;
    *out = new ft_kernel(spec);
    return FT_OK;
  } catch (const std::exception& e) {
    *out = nullptr;
    return classify(e);
  }
}

void ft_kernel_destroy(ft_kernel* k) { delete k; }

ft_status ft_kernel_eval(const ft_kernel* k, double t, const double* x, double tol,
                         double* value, double* abs_error_bound) {
  if (!k || !x || !value) {
    g_last_error = "null argument";
    return FT_ERR_INVALID_ARGUMENT;
  }
  try {
    const auto kv = fractrace::eval_numeric(k->spec, t, point_from(x, k->spec.dim), tol);
    *value = kv.value;
    if (abs_error_bound) *abs_error_bound = kv.abs_error_bound;
    if (!kv.converged) {
      g_last_error = "quadrature did not reach the requested tolerance";
      return FT_ERR_UNCONVERGED;
    }
    return FT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

ft_status ft_kernel_eval_closed_form(const ft_kernel* k, double t, const double* x,
                                     double* value) {
  if (!k || !x || !value) {
    g_last_error = "null argument";
    return FT_ERR_INVALID_ARGUMENT;
  }
  try {
    *value = fractrace::eval_closed_form(k->spec, t, point_from(x, k->spec.dim)).value;
    return FT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

ft_status ft_kernel_check_mass(const ft_kernel* k, double t, double spatial_cutoff,
                               double tol, double* mass, double* defect) {
  if (!k || !mass) {
    g_last_error = "null argument";
    return FT_ERR_INVALID_ARGUMENT;
  }
  try {
    const auto rep = fractrace::check_mass(k->spec, t, spatial_cutoff, tol > 0 ? tol : 1e-6);
    *mass = rep.mass;
    if (defect) *defect = rep.defect;
    return FT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

ft_status ft_kernel_sample_stable(const ft_kernel* k, double t, int count, uint64_t seed,
                                  double* out) {
  if (!k || !out) {
    g_last_error = "null argument";
    return FT_ERR_INVALID_ARGUMENT;
  }
  try {
    const auto pts = fractrace::sample_stable(k->spec, t, count, seed);
    for (int i = 0; i < count; ++i)
      for (int d = 0; d < k->spec.dim; ++d) out[i * k->spec.dim + d] = pts[i][d];
    return FT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

ft_status ft_measure_create(const double* t, const double* x, const double* w, int count,
                            int dim, ft_measure** out) {
  if (!t || !x || !w || !out) {
    g_last_error = "null argument";
    return FT_ERR_INVALID_ARGUMENT;
  }
  try {
    std::vector<fractrace::Atom> atoms(count);
    for (int i = 0; i < count; ++i) {
      atoms[i].t = t[i];
      atoms[i].x = point_from(x + static_cast<std::size_t>(i) * dim, dim);
      atoms[i].w = w[i];
    }
    *out = new ft_measure{DiscreteMeasure(std::move(atoms), dim)};
    return FT_OK;
  } catch (const std::exception& e) {
    *out = nullptr;
    return classify(e);
  }
}

ft_status ft_measure_load_csv(const char* path, ft_measure** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return FT_ERR_INVALID_ARGUMENT;
  }
  try {
    *out = new ft_measure{DiscreteMeasure::load_csv(path)};
    return FT_OK;
  } catch (const std::exception& e) {
    *out = nullptr;
    g_last_error = e.what();
    return FT_ERR_IO;
  }
}

void ft_measure_destroy(ft_measure* m) { delete m; }

ft_status ft_measure_total(const ft_measure* m, double* total) {
  if (!m || !total) {
    g_last_error = "null argument";
    return FT_ERR_INVALID_ARGUMENT;
  }
  *total = m->m.total();
  return FT_OK;
}

ft_status ft_measure_size(const ft_measure* m, int* count, int* dim) {
  if (!m) {
    g_last_error = "null argument";
    return FT_ERR_INVALID_ARGUMENT;
  }
  if (count) *count = static_cast<int>(m->m.size());
  if (dim) *dim = m->m.dim();
  return FT_OK;
}

ft_status ft_wolff_eval(const ft_measure* m, char variant, double p, double alpha, double rho,
                        double t, const double* x, double* value) {
  if (!m || !x || !value) {
    g_last_error = "null argument";
    return FT_ERR_INVALID_ARGUMENT;
  }
  try {
    const fractrace::SpaceTimePoint at{t, point_from(x, m->m.dim())};
    if (variant == 'R')
      *value = fractrace::wolff_R(m->m, p, at, alpha, rho > 0 ? rho : fractrace::kInf).value;
    else if (variant == 'S')
      *value = fractrace::wolff_S(m->m, p, at, alpha).value;
    else
      throw std::invalid_argument("wolff variant must be 'R' or 'S'");
    return FT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

ft_status ft_maximal_eval(const ft_measure* m, char variant, double alpha, double t,
                          const double* x, double* value) {
  if (!m || !x || !value) {
    g_last_error = "null argument";
    return FT_ERR_INVALID_ARGUMENT;
  }
  try {
    if (variant == 'R')
      *value = fractrace::maximal_R(m->m, point_from(x, m->m.dim()), alpha);
    else if (variant == 'T')
      *value =
          fractrace::maximal_spacetime(m->m, {t, point_from(x, m->m.dim())}, alpha);
    else
      throw std::invalid_argument("maximal variant must be 'R' or 'T'");
    return FT_OK;
  } catch (const std::exception& e) {
    return classify(e);
  }
}

ft_status ft_run(const char* command_json, char** summary_json) {
  if (!command_json) {
    g_last_error = "command_json is null";
    return FT_ERR_INVALID_ARGUMENT;
  }
  try {
    const fractrace::json cmd = fractrace::json::parse(command_json);
    const fractrace::json summary = fractrace::run_command(cmd);
    if (summary_json) {
      const std::string s = summary.dump(2);
      *summary_json = static_cast<char*>(std::malloc(s.size() + 1));
      if (!*summary_json) {
        g_last_error = "out of memory";
        return FT_ERR_RUNTIME;
      }
      std::memcpy(*summary_json, s.c_str(), s.size() + 1);
    }
    if (summary.value("status", "ok") != "ok") {
      g_last_error = "a declared property failed; see summary";
      return FT_ERR_PROPERTY_FAILED;
    }
    return FT_OK;
  } catch (const fractrace::json::exception& e) {
    g_last_error = e.what();
    return FT_ERR_INVALID_ARGUMENT;
  } catch (const std::ios_base::failure& e) {
    g_last_error = e.what();
    return FT_ERR_IO;
  } catch (const std::exception& e) {
    const std::string what = e.what() ? e.what() : "";
    g_last_error = what;
    if (what.find("cannot open") != std::string::npos ||
        what.find("cannot write") != std::string::npos ||
        what.find("missing sidecar") != std::string::npos)
      return FT_ERR_IO;
    return classify(e);
  }
}

}  // extern "C"
