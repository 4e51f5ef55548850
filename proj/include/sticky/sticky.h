#ifndef STICKY_STICKY_H
#define STICKY_STICKY_H

/* C interface to the sticky-sphere landscape library.
 *
 * All functions return a sticky_status (except the constructors, which
 * return NULL on failure); the most recent failure message is available
 * from sticky_last_error() on the calling thread. Catalog data files are
 * looked up in $STICKY_DATA_DIR, falling back to ./data.
 *
 * Units are geometric throughout: sphere diameter, diffusion constant, and
 * kT are all one; rates are dimensionless (multiply by kappa^-1 D/d^2 for
 * physical time).
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sticky_status {
  STICKY_OK = 0,
  STICKY_ERR_NUMERIC = 1,      /* internal numerical failure */
  STICKY_ERR_MISSING = 2,      /* missing input file or directory */
  STICKY_ERR_INCONSISTENT = 3  /* inconsistent or invalid inputs */
} sticky_status;

typedef enum sticky_convention {
  STICKY_RATES_LEADING = 0,   /* leading-order sticky limit */
  STICKY_RATES_RESTRICTED = 1 /* rescaled to the rigid-restricted network */
} sticky_convention;

/* Opaque handle owning the catalogs and landscape for one sphere count. */
typedef struct sticky_workspace sticky_workspace;

/* Build the full landscape for n spheres (4..8): rigid catalog from the
 * data directory, 1-D and 2-D censuses sampled at step ds (0 selects the
 * default 0.05; negative is an error). strict != 0 halves the steps and enforces mesh-quality
 * convergence. Returns NULL on failure. */
sticky_workspace* sticky_workspace_create(int n, double ds, int strict);
void sticky_workspace_destroy(sticky_workspace* ws);

/* Message for the last failure on this thread; "" when none. The pointer
 * stays valid until the next failing call on the same thread. */
const char* sticky_last_error(void);

/* Static library version string. */
const char* sticky_version(void);

/* Number of catalogued classes per manifold dimension. */
sticky_status sticky_mode_counts(const sticky_workspace* ws, int* modes0, int* modes1,
                                 int* modes2);

/* Geometric partition totals Z_0, Z_1, Z_2. */
sticky_status sticky_partition_totals(const sticky_workspace* ws, double* z0,
                                      double* z1, double* z2);

/* Closed-form sticky bond weight of the truncated pair potential. cutoff <= 0
 * selects the default truncation radius 1 + 4/range. */
sticky_status sticky_kappa(double depth, double range, double core_stiffness,
                           double cutoff, double* kappa);

/* Equilibrium yields per manifold dimension at the given bond weight. */
sticky_status sticky_yields(const sticky_workspace* ws, double kappa, double* y0,
                            double* y1, double* y2);

/* Symmetric mode-to-mode transition-rate matrix in geometric units, written
 * row-major into out (capacity in doubles must be at least modes0^2). */
sticky_status sticky_rate_matrix(const sticky_workspace* ws, double kappa,
                                 sticky_convention convention, double* out,
                                 size_t capacity);

/* Full runs: compute and write every output file (with its manifest) into
 * out_dir, creating it if needed. These mirror the command-line verbs. */
sticky_status sticky_run_landscape(int n, double ds, int strict, double kappa,
                                   const char* out_dir);
sticky_status sticky_run_rates(int n, double kappa, sticky_convention convention,
                               const char* config_path_or_null, const char* out_dir);
sticky_status sticky_run_simulate(const char* config_path, const char* out_dir,
                                  uint64_t seed_override, int jobs);
sticky_status sticky_run_compare(const char* theory_dir, const char* sim_dir,
                                 const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* STICKY_STICKY_H */
