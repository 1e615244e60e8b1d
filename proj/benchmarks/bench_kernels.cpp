#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <span>
#include <vector>

#include "glmamp/kernels.hpp"
#include "glmamp/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_per_call(const std::function<void()>& fn, int reps) {
  fn();  // warm-up
  const auto t0 = Clock::now();
  for (int r = 0; r < reps; ++r) fn();
  const auto t1 = Clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void bench_size(std::size_t n, std::size_t d, int reps) {
  glmamp::Rng rng(42);
  std::vector<double> a(n * d), v(d), u(n), y(n), x(d);
  for (double& e : a) e = rng.next_normal();
  for (double& e : v) e = rng.next_normal();
  for (double& e : u) e = rng.next_normal();

  const double t_mv_s = seconds_per_call([&] { glmamp::serial::matvec<double>(a, n, d, v, y); }, reps);
  const double t_mv_o = seconds_per_call([&] { glmamp::omp::matvec<double>(a, n, d, v, y); }, reps);
  const double t_adj_s = seconds_per_call([&] { glmamp::serial::matvec_adjoint<double>(a, n, d, u, x); }, reps);
  const double t_adj_o = seconds_per_call([&] { glmamp::omp::matvec_adjoint<double>(a, n, d, u, x); }, reps);
  volatile double sink = 0.0;
  const double t_dot_s = seconds_per_call([&] { sink = glmamp::serial::dot(u, y); }, reps * 50);
  const double t_dot_o = seconds_per_call([&] { sink = glmamp::omp::dot(u, y); }, reps * 50);
  (void)sink;

  const double gflop = 2.0 * static_cast<double>(n) * static_cast<double>(d) * 1e-9;
  std::printf("n=%zu d=%zu\n", n, d);
  std::printf("  matvec          serial %8.3f ms (%6.2f GF/s)   omp %8.3f ms (%6.2f GF/s)   speedup %.2fx\n",
              1e3 * t_mv_s, gflop / t_mv_s, 1e3 * t_mv_o, gflop / t_mv_o, t_mv_s / t_mv_o);
  std::printf("  matvec_adjoint  serial %8.3f ms (%6.2f GF/s)   omp %8.3f ms (%6.2f GF/s)   speedup %.2fx\n",
              1e3 * t_adj_s, gflop / t_adj_s, 1e3 * t_adj_o, gflop / t_adj_o, t_adj_s / t_adj_o);
  std::printf("  dot             serial %8.3f us                omp %8.3f us                speedup %.2fx\n",
              1e6 * t_dot_s, 1e6 * t_dot_o, t_dot_s / t_dot_o);
}

}  // namespace

int main() {
  bench_size(2000, 500, 40);
  bench_size(8000, 2000, 8);
  bench_size(16000, 4000, 3);
  return 0;
}
