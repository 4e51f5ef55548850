// Exercises the shared library exactly as an external consumer would: only
// the C header, opaque handles, and status codes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "sticky/sticky.h"

namespace fs = std::filesystem;

namespace {

sticky_workspace* six() {
  static sticky_workspace* ws = sticky_workspace_create(6, 0.0, 0);
  return ws;
}

fs::path fresh_dir(const char* name) {
  const fs::path dir = fs::path("capi_test_out") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("status codes and version are part of the contract") {
  CHECK(STICKY_OK == 0);
  CHECK(STICKY_ERR_NUMERIC == 1);
  CHECK(STICKY_ERR_MISSING == 2);
  CHECK(STICKY_ERR_INCONSISTENT == 3);
  CHECK(std::strlen(sticky_version()) > 0);
}

TEST_CASE("workspace construction fails cleanly on bad input") {
  CHECK(sticky_workspace_create(3, 0.0, 0) == nullptr);
  CHECK(std::strlen(sticky_last_error()) > 0);
  CHECK(sticky_workspace_create(9, 0.0, 0) == nullptr);
  // n=4 has no shipped catalog file; the handle is null, not half-built.
  CHECK(sticky_workspace_create(4, 0.0, 0) == nullptr);
  sticky_workspace_destroy(nullptr);  // must be a no-op
}

TEST_CASE("six-sphere workspace reproduces the landscape numbers") {
  sticky_workspace* ws = six();
  REQUIRE(ws != nullptr);

  int m0 = 0, m1 = 0, m2 = 0;
  REQUIRE(sticky_mode_counts(ws, &m0, &m1, &m2) == STICKY_OK);
  CHECK(m0 == 2);
  CHECK(m1 == 5);
  CHECK(m2 == 13);

  double z0 = 0, z1 = 0, z2 = 0;
  REQUIRE(sticky_partition_totals(ws, &z0, &z1, &z2) == STICKY_OK);
  CHECK(z0 == doctest::Approx(36.0843918).epsilon(1e-6));
  CHECK(z1 == doctest::Approx(256.2631922).epsilon(1e-6));
  CHECK(z2 == doctest::Approx(1140.0).epsilon(0.01));

  double y0 = 0, y1 = 0, y2 = 0;
  REQUIRE(sticky_yields(ws, 16.0, &y0, &y1, &y2) == STICKY_OK);
  CHECK(y0 + y1 + y2 == doctest::Approx(1.0).epsilon(1e-12));
  const double grand = 256.0 * z0 + 16.0 * z1 + z2;
  CHECK(y0 == doctest::Approx(256.0 * z0 / grand).epsilon(1e-12));

  CHECK(sticky_mode_counts(nullptr, &m0, &m1, &m2) == STICKY_ERR_INCONSISTENT);
  CHECK(sticky_partition_totals(ws, nullptr, &z1, &z2) == STICKY_ERR_INCONSISTENT);
}

TEST_CASE("rate matrix round-trips through the flat buffer") {
  sticky_workspace* ws = six();
  REQUIRE(ws != nullptr);

  double leading[4] = {0, 0, 0, 0};
  REQUIRE(sticky_rate_matrix(ws, 16.0, STICKY_RATES_LEADING, leading, 4) == STICKY_OK);
  CHECK(leading[0] == doctest::Approx(10.907762).epsilon(1e-4));
  CHECK(leading[1] == doctest::Approx(1.070096).epsilon(1e-4));
  CHECK(leading[2] == doctest::Approx(leading[1]).epsilon(1e-12));
  CHECK(leading[3] == 0.0);

  double restricted[4] = {0, 0, 0, 0};
  REQUIRE(sticky_rate_matrix(ws, 16.0, STICKY_RATES_RESTRICTED, restricted, 4) ==
          STICKY_OK);
  double z0 = 0, z1 = 0, z2 = 0;
  REQUIRE(sticky_partition_totals(ws, &z0, &z1, &z2) == STICKY_OK);
  const double factor = 1.0 / (1.0 + z1 / (16.0 * z0));
  for (int k = 0; k < 4; ++k)
    CHECK(restricted[k] == doctest::Approx(leading[k] * factor).epsilon(1e-12));

  CHECK(sticky_rate_matrix(ws, 16.0, STICKY_RATES_LEADING, leading, 3) ==
        STICKY_ERR_INCONSISTENT);
  CHECK(sticky_rate_matrix(ws, -1.0, STICKY_RATES_LEADING, leading, 4) ==
        STICKY_ERR_INCONSISTENT);
}

TEST_CASE("closed-form bond weight matches the two published operating points") {
  double kappa = 0.0;
  REQUIRE(sticky_kappa(8.5, 30.0, 2.0, 0.0, &kappa) == STICKY_OK);
  CHECK(kappa == doctest::Approx(16.156).epsilon(1e-3));
  REQUIRE(sticky_kappa(10.0, 50.0, 2.0, 0.0, &kappa) == STICKY_OK);
  CHECK(kappa == doctest::Approx(30.57).epsilon(1e-2));
  CHECK(sticky_kappa(-1.0, 30.0, 2.0, 0.0, &kappa) == STICKY_ERR_INCONSISTENT);
  CHECK(std::strlen(sticky_last_error()) > 0);
}

TEST_CASE("full runs write their files and validate their inputs") {
  const fs::path theory = fresh_dir("theory5");
  REQUIRE(sticky_run_landscape(5, 0.05, 0, 16.0, theory.string().c_str()) ==
          STICKY_OK);
  CHECK(fs::exists(theory / "run_manifest.json"));
  CHECK(fs::exists(theory / "totals_n5.csv"));
  CHECK(fs::exists(theory / "modes_n5.csv"));
  CHECK(fs::exists(theory / "line_0.csv"));
  CHECK(fs::exists(theory / "face_0.json"));
  CHECK(fs::exists(theory / "face_0_vertices.csv"));
  CHECK(fs::exists(theory / "face_0_triangles.csv"));

  REQUIRE(sticky_run_rates(5, 16.0, STICKY_RATES_LEADING, nullptr,
                           theory.string().c_str()) == STICKY_OK);
  CHECK(fs::exists(theory / "rates_n5.csv"));
  CHECK(fs::exists(theory / "expected_counts_n5.csv"));

  const fs::path sim = fresh_dir("sim5");
  const fs::path config = sim / "run.cfg";
  {
    std::ofstream out(config);
    out << "n=5\nE=8.5\nrho=30\nm=2\ntotal_time=1.5\nseed=4\n"
        << "classify_interval=1e-2\n";
  }
  REQUIRE(sticky_run_simulate(config.string().c_str(), sim.string().c_str(), 0, 1) ==
          STICKY_OK);
  CHECK(fs::exists(sim / "summary.json"));
  CHECK(fs::exists(sim / "trace.csv"));

  const fs::path cmp = fresh_dir("cmp5");
  REQUIRE(sticky_run_compare(theory.string().c_str(), sim.string().c_str(),
                             cmp.string().c_str()) == STICKY_OK);
  CHECK(fs::exists(cmp / "scatter.csv"));
  CHECK(fs::exists(cmp / "count_diff.csv"));
  CHECK(fs::exists(cmp / "ratios.csv"));
  CHECK(fs::exists(cmp / "scatter.svg"));
  CHECK(fs::exists(cmp / "yields.svg"));

  // Error taxonomy straight through the shared library.
  CHECK(sticky_run_compare("no_such_dir", sim.string().c_str(),
                           cmp.string().c_str()) == STICKY_ERR_MISSING);
  const fs::path empty = fresh_dir("emptysim");
  CHECK(sticky_run_compare(theory.string().c_str(), empty.string().c_str(),
                           cmp.string().c_str()) == STICKY_ERR_INCONSISTENT);
  CHECK(sticky_run_simulate("no_such_config.cfg", sim.string().c_str(), 0, 1) ==
        STICKY_ERR_MISSING);
  CHECK(sticky_run_landscape(6, -0.5, 0, 16.0, theory.string().c_str()) ==
        STICKY_ERR_INCONSISTENT);
  CHECK(sticky_run_simulate(nullptr, sim.string().c_str(), 0, 1) ==
        STICKY_ERR_INCONSISTENT);
}
