// Compares the serial reference kernels against the OpenMP kernels on a
// synthesis + verification workload sized from the command line.
//
//   lindyn_bench [targets] [m] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lindyn/constructions.hpp"
#include "lindyn/driver.hpp"
#include "lindyn/synthesis.hpp"
#include "lindyn/verify.hpp"

using namespace lindyn;

namespace {

double seconds(const std::function<void()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  body();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

double best_of(int repeats, const std::function<void()>& body) {
  double best = seconds(body);
  for (int r = 1; r < repeats; ++r) best = std::min(best, seconds(body));
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t targets = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 24;
  const std::size_t m = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 3;
  const int repeats = argc > 3 ? static_cast<int>(std::strtol(argv[3], nullptr, 10)) : 3;

#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: not enabled in this build\n");
#endif
  std::printf("workload: %zu targets, m = %zu, best of %d\n\n", targets, m, repeats);

  RunConfig config;
  const TargetSchedule schedule = enumerate_targets(config.grid(), targets, m);
  const SynthesisCertificate cert = synthesize(Rational(2), schedule);
  const DisjointTupleArtifact artifact = construct_disjoint_tuple(m, schedule);

  const double cert_serial = best_of(repeats, [&] {
    (void)verify_certificate(cert, schedule, ExecMode::serial);
  });
  const double cert_parallel = best_of(repeats, [&] {
    (void)verify_certificate(cert, schedule, ExecMode::parallel);
  });
  std::printf("certificate verification  serial %8.3fs  openmp %8.3fs  speedup %.2fx\n",
              cert_serial, cert_parallel, cert_serial / cert_parallel);

  const OperatorTuple tuple = artifact.tuple();
  const double orbit_serial = best_of(repeats, [&] {
    (void)orbit_report(tuple, artifact.common_vector, *artifact.conjugated_schedule, cert.horizon,
                       nullptr, ExecMode::serial);
  });
  const double orbit_parallel = best_of(repeats, [&] {
    (void)orbit_report(tuple, artifact.common_vector, *artifact.conjugated_schedule, cert.horizon,
                       nullptr, ExecMode::parallel);
  });
  std::printf("orbit report              serial %8.3fs  openmp %8.3fs  speedup %.2fx\n",
              orbit_serial, orbit_parallel, orbit_serial / orbit_parallel);
  return 0;
}
