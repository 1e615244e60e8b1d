#include "glmamp/numerics.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace glmamp {

double find_root_monotone(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("find_root_monotone: need lo < hi");
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw std::runtime_error("find_root_monotone: no sign change on bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (fm * flo < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double minimize_convex(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw std::invalid_argument("minimize_convex: need lo < hi");
  const double invphi = 0.6180339887498948482;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

namespace {

template <typename T>
PowerResult<T> power_method_impl(const LinearOperator<T>& op, double tol, int max_iter, Rng& rng) {
  if (op.rows() != op.cols()) throw std::invalid_argument("power_method: operator must be square");
  if (max_iter < 1) throw std::invalid_argument("power_method: max_iter must be >= 1");
  const std::size_t d = op.cols();

  std::vector<T> v(d), w(d);
  for (std::size_t i = 0; i < d; ++i) {
    if constexpr (std::is_same_v<T, std::complex<double>>) {
      v[i] = T(rng.next_normal(), rng.next_normal());
    } else {
      v[i] = rng.next_normal();
    }
  }
  auto normalize = [&](std::vector<T>& x) {
    const double nrm = std::sqrt(kernels::norm2_sq<T>(x));
    for (auto& e : x) e /= nrm;
    return nrm;
  };
  normalize(v);

  // iterates 10 apart, per the stopping rule
  std::deque<std::vector<T>> history;
  PowerResult<T> res;
  double lambda = 0.0;
  int t = 0;
  for (; t < max_iter; ++t) {
    history.push_back(v);
    if (history.size() > 10) history.pop_front();
    op.apply(std::span<const T>(v), std::span<T>(w));
    lambda = [&] {
      if constexpr (std::is_same_v<T, std::complex<double>>) {
        return kernels::dot(std::span<const T>(v), std::span<const T>(w)).real();
      } else {
        return kernels::dot(std::span<const T>(v), std::span<const T>(w));
      }
    }();
    v.swap(w);
    normalize(v);
    if (history.size() == 10) {
      const auto ip = kernels::dot(std::span<const T>(history.front()), std::span<const T>(v));
      if (std::abs(ip) > 1.0 - tol) {
        ++t;
        res.converged = true;
        break;
      }
    }
  }
  res.eigenvalue = lambda;
  res.eigenvector = std::move(v);
  res.iterations = t;
  return res;
}

}  // namespace

PowerResult<double> power_method(const RealOperator& op, double tol, int max_iter, Rng& rng) {
  return power_method_impl<double>(op, tol, max_iter, rng);
}

PowerResult<std::complex<double>> power_method(const ComplexOperator& op, double tol, int max_iter, Rng& rng) {
  return power_method_impl<std::complex<double>>(op, tol, max_iter, rng);
}

}  // namespace glmamp
