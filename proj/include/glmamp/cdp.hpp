#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "glmamp/linop.hpp"
#include "glmamp/rng.hpp"

namespace glmamp {

// Coded-diffraction-pattern sensing: L modulated unitary 2-D DFTs of a
// d1 x d2 image, rows a_{(l,k)}(t) = m_l(t) e^{i 2 pi (k1 t1/d1 + k2 t2/d2)}
// / sqrt(d) with masks m_l uniform in {1, -1, i, -i}. Non-integer sampling
// ratios are obtained by discarding a uniformly-random subset of rows.
class CdpOperator final : public ComplexOperator {
 public:
  CdpOperator(std::size_t d1, std::size_t d2, int L, double delta_target, Rng& rng);
  ~CdpOperator() override;
  CdpOperator(const CdpOperator&) = delete;
  CdpOperator& operator=(const CdpOperator&) = delete;

  std::size_t rows() const override { return kept_.size(); }
  std::size_t cols() const override { return d_; }
  void apply(std::span<const std::complex<double>> v, std::span<std::complex<double>> out) const override;
  void apply_adjoint(std::span<const std::complex<double>> u, std::span<std::complex<double>> out) const override;
  using ComplexOperator::apply;
  using ComplexOperator::apply_adjoint;

  std::size_t d1() const { return d1_; }
  std::size_t d2() const { return d2_; }
  int patterns() const { return L_; }
  const std::vector<std::vector<std::complex<double>>>& masks() const { return masks_; }
  const std::vector<std::size_t>& zeroed_rows() const { return zeroed_; }  // indices into [0, L*d)
  const std::vector<std::size_t>& kept_rows() const { return kept_; }

 private:
  std::size_t d1_, d2_, d_;
  int L_;
  std::vector<std::vector<std::complex<double>>> masks_;
  std::vector<std::size_t> zeroed_;  // sorted
  std::vector<std::size_t> kept_;    // sorted complement, maps output index -> full row index
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

}  // namespace glmamp
