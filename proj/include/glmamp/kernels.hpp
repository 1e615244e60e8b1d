#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

// Data-parallel kernels used by the operators and the GAMP iterations.
// Each kernel has a serial reference implementation (kept for testing and
// for the benchmark target) and an OpenMP version used by default.

namespace glmamp::serial {

// y = A v, A row-major n x d
template <typename T>
void matvec(std::span<const T> a, std::size_t n, std::size_t d, std::span<const T> v, std::span<T> y) {
  for (std::size_t i = 0; i < n; ++i) {
    T acc{};
    const T* row = a.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * v[j];
    y[i] = acc;
  }
}

// y = A^H u (conjugate transpose; plain transpose for real T)
template <typename T>
void matvec_adjoint(std::span<const T> a, std::size_t n, std::size_t d, std::span<const T> u, std::span<T> y) {
  for (std::size_t j = 0; j < d; ++j) y[j] = T{};
  for (std::size_t i = 0; i < n; ++i) {
    const T* row = a.data() + i * d;
    const T ui = u[i];
    if constexpr (std::is_same_v<T, std::complex<double>>) {
      for (std::size_t j = 0; j < d; ++j) y[j] += std::conj(row[j]) * ui;
    } else {
      for (std::size_t j = 0; j < d; ++j) y[j] += row[j] * ui;
    }
  }
}

// z = alpha*x + beta*y
template <typename T, typename S>
void axpby(S alpha, std::span<const T> x, S beta, std::span<const T> y, std::span<T> z) {
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = alpha * x[i] + beta * y[i];
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

inline std::complex<double> dot(std::span<const std::complex<double>> x, std::span<const std::complex<double>> y) {
  std::complex<double> acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

}  // namespace glmamp::serial

namespace glmamp::omp {

template <typename T>
void matvec(std::span<const T> a, std::size_t n, std::size_t d, std::span<const T> v, std::span<T> y) {
  const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < ni; ++i) {
    T acc{};
    const T* row = a.data() + static_cast<std::size_t>(i) * d;
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * v[j];
    y[static_cast<std::size_t>(i)] = acc;
  }
}

// Row-streaming like the serial kernel (each row of A is read once,
// contiguously); threads take disjoint row blocks and accumulate into
// private outputs that are merged at the end.
template <typename T>
void matvec_adjoint(std::span<const T> a, std::size_t n, std::size_t d, std::span<const T> u, std::span<T> y) {
  for (std::size_t j = 0; j < d; ++j) y[j] = T{};
  const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel
  {
    std::vector<T> local(d, T{});
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < ni; ++i) {
      const T* row = a.data() + static_cast<std::size_t>(i) * d;
      const T ui = u[static_cast<std::size_t>(i)];
      if constexpr (std::is_same_v<T, std::complex<double>>) {
        for (std::size_t j = 0; j < d; ++j) local[j] += std::conj(row[j]) * ui;
      } else {
        for (std::size_t j = 0; j < d; ++j) local[j] += row[j] * ui;
      }
    }
#pragma omp critical
    for (std::size_t j = 0; j < d; ++j) y[j] += local[j];
  }
}

template <typename T, typename S>
void axpby(S alpha, std::span<const T> x, S beta, std::span<const T> y, std::span<T> z) {
  const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < ni; ++i) {
    z[static_cast<std::size_t>(i)] = alpha * x[static_cast<std::size_t>(i)] + beta * y[static_cast<std::size_t>(i)];
  }
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) reduction(+ : acc)
  for (std::ptrdiff_t i = 0; i < ni; ++i) acc += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
  return acc;
}

inline std::complex<double> dot(std::span<const std::complex<double>> x, std::span<const std::complex<double>> y) {
  double re = 0.0, im = 0.0;
  const std::ptrdiff_t ni = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) reduction(+ : re, im)
  for (std::ptrdiff_t i = 0; i < ni; ++i) {
    const auto v = std::conj(x[static_cast<std::size_t>(i)]) * y[static_cast<std::size_t>(i)];
    re += v.real();
    im += v.imag();
  }
  return {re, im};
}

}  // namespace glmamp::omp

namespace glmamp::kernels {

// default dispatch: OpenMP variants
using omp::axpby;
using omp::dot;
using omp::matvec;
using omp::matvec_adjoint;

template <typename T>
double norm2_sq(std::span<const T> x) {
  if constexpr (std::is_same_v<T, std::complex<double>>) {
    return omp::dot(x, x).real();
  } else {
    return omp::dot(x, x);
  }
}

}  // namespace glmamp::kernels
