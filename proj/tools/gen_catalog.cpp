// Maintenance tool: regenerate the shipped rigid-cluster catalog files by
// brute-force enumeration. Usage: gen_catalog <n> <output-path>

#include <cstdio>
#include <cstdlib>
#include <exception>

#include "core/clusters.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <n> <output-path>\n", argv[0]);
    return 2;
  }
  int n = std::atoi(argv[1]);
  if (n < 4 || n > 8) {
    std::fprintf(stderr, "n must be between 4 and 8\n");
    return 2;
  }
  try {
    sticky::ModeCatalog catalog = sticky::enumerate_catalog(n);
    sticky::save_catalog(catalog, argv[2]);
    std::printf("n=%d: %zu rigid modes written to %s\n", n, catalog.rigid.size(), argv[2]);
    for (const sticky::RigidMode& mode : catalog.rigid) {
      std::printf("  id=%d sigma=%d chiral=%d multiplicity=%ld h=%.9f I=%.9f\n", mode.id,
                  mode.sigma, mode.chiral ? 1 : 0, mode.multiplicity, mode.h, mode.inertia);
    }
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
