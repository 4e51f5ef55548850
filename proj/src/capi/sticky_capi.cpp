#include "sticky/sticky.h"

#include <exception>
#include <functional>
#include <memory>
#include <string>

#include "core/landscape.hpp"

namespace {

thread_local std::string g_last_error;

// Exception taxonomy -> status codes: missing inputs, inconsistent inputs,
// and everything else (numerics, allocation, filesystem) as internal failure.
sticky_status guard(const std::function<void()>& body) {
  try {
    body();
    g_last_error.clear();
    return STICKY_OK;
  } catch (const sticky::MissingInput& e) {
    g_last_error = e.what();
    return STICKY_ERR_MISSING;
  } catch (const sticky::InconsistentInput& e) {
    g_last_error = e.what();
    return STICKY_ERR_INCONSISTENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return STICKY_ERR_NUMERIC;
  }
}

sticky::RateConvention to_convention(sticky_convention convention) {
  switch (convention) {
    case STICKY_RATES_LEADING: return sticky::RateConvention::leading_order;
    case STICKY_RATES_RESTRICTED: return sticky::RateConvention::restricted_network;
  }
  throw sticky::InconsistentInput("unknown rate convention");
}

}  // namespace

struct sticky_workspace {
  sticky::ModeCatalog modes;
  sticky::LineCatalog lines;
  sticky::FaceCatalog faces;
  sticky::LandscapeSummary summary;
};

extern "C" {

sticky_workspace* sticky_workspace_create(int n, double ds, int strict) {
  sticky_workspace* ws = nullptr;
  const sticky_status status = guard([&] {
    if (n < 4 || n > 8)
      throw sticky::InconsistentInput("sphere count must be between 4 and 8");
    if (ds < 0.0) throw sticky::InconsistentInput("sampling step must not be negative");
    const double step = ds > 0.0 ? ds : 0.05;
    auto owned = std::make_unique<sticky_workspace>();
    owned->modes = sticky::standard_catalog(n);
    owned->lines = sticky::build_line_catalog(owned->modes, step / 5.0);
    sticky::FaceOptions options;
    options.ds = strict ? step / 2.0 : step;
    options.strict_quality = strict != 0;
    owned->faces = sticky::build_face_catalog(owned->modes, options);
    owned->summary = sticky::totals(owned->modes, owned->lines, owned->faces);
    ws = owned.release();
  });
  return status == STICKY_OK ? ws : nullptr;
}

void sticky_workspace_destroy(sticky_workspace* ws) { delete ws; }

const char* sticky_last_error(void) { return g_last_error.c_str(); }

const char* sticky_version(void) { return sticky::kCodeVersion; }

sticky_status sticky_mode_counts(const sticky_workspace* ws, int* modes0, int* modes1,
                                 int* modes2) {
  return guard([&] {
    if (!ws || !modes0 || !modes1 || !modes2)
      throw sticky::InconsistentInput("null pointer argument");
    *modes0 = static_cast<int>(ws->modes.rigid.size());
    *modes1 = static_cast<int>(ws->lines.classes.size());
    *modes2 = static_cast<int>(ws->faces.classes.size());
  });
}

sticky_status sticky_partition_totals(const sticky_workspace* ws, double* z0,
                                      double* z1, double* z2) {
  return guard([&] {
    if (!ws || !z0 || !z1 || !z2)
      throw sticky::InconsistentInput("null pointer argument");
    *z0 = ws->summary.z0;
    *z1 = ws->summary.z1;
    *z2 = ws->summary.z2;
  });
}

sticky_status sticky_kappa(double depth, double range, double core_stiffness,
                           double cutoff, double* kappa) {
  return guard([&] {
    if (!kappa) throw sticky::InconsistentInput("null pointer argument");
    sticky::PotentialSpec spec;
    spec.depth = depth;
    spec.range = range;
    spec.core_stiffness = core_stiffness;
    spec.cutoff = cutoff > 0.0 ? cutoff : 0.0;
    *kappa = sticky::kappa_closed_form(spec).kappa;
  });
}

sticky_status sticky_yields(const sticky_workspace* ws, double kappa, double* y0,
                            double* y1, double* y2) {
  return guard([&] {
    if (!ws || !y0 || !y1 || !y2)
      throw sticky::InconsistentInput("null pointer argument");
    const sticky::Yields y = sticky::yields(ws->summary, kappa);
    *y0 = y.y0;
    *y1 = y.y1;
    *y2 = y.y2;
  });
}

sticky_status sticky_rate_matrix(const sticky_workspace* ws, double kappa,
                                 sticky_convention convention, double* out,
                                 size_t capacity) {
  return guard([&] {
    if (!ws || !out) throw sticky::InconsistentInput("null pointer argument");
    const sticky::RateNetwork network =
        sticky::assemble_rates(ws->modes, ws->lines, kappa, to_convention(convention));
    const size_t modes = ws->modes.rigid.size();
    if (capacity < modes * modes)
      throw sticky::InconsistentInput("output buffer smaller than modes^2");
    for (size_t a = 0; a < modes; ++a)
      for (size_t b = 0; b < modes; ++b)
        out[a * modes + b] = network.geometric(static_cast<int>(a), static_cast<int>(b));
  });
}

sticky_status sticky_run_landscape(int n, double ds, int strict, double kappa,
                                   const char* out_dir) {
  return guard([&] {
    if (!out_dir) throw sticky::InconsistentInput("null output directory");
    if (ds < 0.0) throw sticky::InconsistentInput("sampling step must not be negative");
    sticky::RunOptions options;
    options.n = n;
    options.ds = ds > 0.0 ? ds : 0.05;
    options.strict = strict != 0;
    options.kappa = kappa > 0.0 ? kappa : 16.0;
    options.out_dir = out_dir;
    sticky::run_landscape(options);
  });
}

sticky_status sticky_run_rates(int n, double kappa, sticky_convention convention,
                               const char* config_path_or_null, const char* out_dir) {
  return guard([&] {
    if (!out_dir) throw sticky::InconsistentInput("null output directory");
    sticky::RunOptions options;
    options.n = n;
    options.kappa = kappa;
    options.convention = to_convention(convention);
    if (config_path_or_null) options.config_path = config_path_or_null;
    options.out_dir = out_dir;
    sticky::run_rates(options);
  });
}

sticky_status sticky_run_simulate(const char* config_path, const char* out_dir,
                                  uint64_t seed_override, int jobs) {
  return guard([&] {
    if (!config_path) throw sticky::InconsistentInput("null config path");
    if (!out_dir) throw sticky::InconsistentInput("null output directory");
    sticky::RunOptions options;
    options.config_path = config_path;
    options.out_dir = out_dir;
    options.seed = seed_override;
    options.jobs = jobs > 0 ? jobs : 1;
    sticky::run_simulate(options);
  });
}

sticky_status sticky_run_compare(const char* theory_dir, const char* sim_dir,
                                 const char* out_dir) {
  return guard([&] {
    if (!theory_dir || !sim_dir || !out_dir)
      throw sticky::InconsistentInput("null directory argument");
    sticky::RunOptions options;
    options.out_dir = out_dir;
    sticky::run_compare(theory_dir, sim_dir, options);
  });
}

}  // extern "C"
