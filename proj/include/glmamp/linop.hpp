#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "glmamp/kernels.hpp"

namespace glmamp {

// Matrix-free linear map. Implementations must satisfy the adjoint identity
// <Av, u> = <v, A^H u>.
template <typename T>
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual void apply(std::span<const T> v, std::span<T> out) const = 0;
  virtual void apply_adjoint(std::span<const T> u, std::span<T> out) const = 0;

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols()) throw std::invalid_argument("LinearOperator::apply: dimension mismatch");
    std::vector<T> out(rows());
    apply(std::span<const T>(v), std::span<T>(out));
    return out;
  }
  std::vector<T> apply_adjoint(const std::vector<T>& u) const {
    if (u.size() != rows()) throw std::invalid_argument("LinearOperator::apply_adjoint: dimension mismatch");
    std::vector<T> out(cols());
    apply_adjoint(std::span<const T>(u), std::span<T>(out));
    return out;
  }
};

// Dense row-major operator backed by the OpenMP kernels.
template <typename T>
class DenseOperator final : public LinearOperator<T> {
 public:
  DenseOperator(std::size_t n, std::size_t d, std::vector<T> entries)
      : n_(n), d_(d), a_(std::move(entries)) {
    if (a_.size() != n_ * d_) throw std::invalid_argument("DenseOperator: entries size mismatch");
  }

  std::size_t rows() const override { return n_; }
  std::size_t cols() const override { return d_; }

  using LinearOperator<T>::apply;
  using LinearOperator<T>::apply_adjoint;

  void apply(std::span<const T> v, std::span<T> out) const override {
    kernels::matvec<T>(a_, n_, d_, v, out);
  }
  void apply_adjoint(std::span<const T> u, std::span<T> out) const override {
    kernels::matvec_adjoint<T>(a_, n_, d_, u, out);
  }

  const std::vector<T>& entries() const { return a_; }

 private:
  std::size_t n_, d_;
  std::vector<T> a_;
};

using RealOperator = LinearOperator<double>;
using ComplexOperator = LinearOperator<std::complex<double>>;

}  // namespace glmamp
