#include "glmamp/cdp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glmamp {

struct CdpOperator::Plans {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan backward = nullptr;  // e^{+i 2 pi ...}
  fftw_plan forward = nullptr;   // e^{-i 2 pi ...}

  Plans(std::size_t d1, std::size_t d2) {
    const std::size_t d = d1 * d2;
    in = fftw_alloc_complex(d);
    out = fftw_alloc_complex(d);
    backward = fftw_plan_dft_2d(static_cast<int>(d1), static_cast<int>(d2), in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    forward = fftw_plan_dft_2d(static_cast<int>(d1), static_cast<int>(d2), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~Plans() {
    fftw_destroy_plan(backward);
    fftw_destroy_plan(forward);
    fftw_free(in);
    fftw_free(out);
  }
};

CdpOperator::CdpOperator(std::size_t d1, std::size_t d2, int L, double delta_target, Rng& rng)
    : d1_(d1), d2_(d2), d_(d1 * d2), L_(L) {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("CdpOperator: dimensions must be >= 1");
  if (L < 1) throw std::invalid_argument("CdpOperator: need at least one pattern");
  if (delta_target > static_cast<double>(L)) {
    throw std::invalid_argument("CdpOperator: delta_target exceeds the number of patterns");
  }
  static const std::complex<double> kAlphabet[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  masks_.resize(L_);
  for (int l = 0; l < L_; ++l) {
    masks_[l].resize(d_);
    for (std::size_t i = 0; i < d_; ++i) masks_[l][i] = kAlphabet[rng.next_u64() & 3];
  }

  const std::size_t n_full = static_cast<std::size_t>(L_) * d_;
  const std::size_t n_zero =
      static_cast<std::size_t>(std::llround((static_cast<double>(L_) - delta_target) * static_cast<double>(d_)));
  std::vector<std::size_t> idx(n_full);
  for (std::size_t i = 0; i < n_full; ++i) idx[i] = i;
  for (std::size_t i = 0; i < n_zero; ++i) {  // partial Fisher-Yates
    const std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (n_full - i));
    std::swap(idx[i], idx[j]);
  }
  zeroed_.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_zero));
  std::sort(zeroed_.begin(), zeroed_.end());
  kept_.reserve(n_full - n_zero);
  std::size_t zi = 0;
  for (std::size_t i = 0; i < n_full; ++i) {
    if (zi < zeroed_.size() && zeroed_[zi] == i) {
      ++zi;
    } else {
      kept_.push_back(i);
    }
  }
  plans_ = std::make_unique<Plans>(d1_, d2_);
}

CdpOperator::~CdpOperator() = default;

void CdpOperator::apply(std::span<const std::complex<double>> v, std::span<std::complex<double>> out) const {
  if (v.size() != d_ || out.size() != kept_.size()) throw std::invalid_argument("CdpOperator::apply: size mismatch");
  const double scale = 1.0 / std::sqrt(static_cast<double>(d_));
  std::vector<std::complex<double>> full(static_cast<std::size_t>(L_) * d_);
  auto* in = reinterpret_cast<std::complex<double>*>(plans_->in);
  auto* res = reinterpret_cast<std::complex<double>*>(plans_->out);
  for (int l = 0; l < L_; ++l) {
    for (std::size_t i = 0; i < d_; ++i) in[i] = masks_[l][i] * v[i];
    fftw_execute(plans_->backward);
    for (std::size_t i = 0; i < d_; ++i) full[static_cast<std::size_t>(l) * d_ + i] = scale * res[i];
  }
  for (std::size_t r = 0; r < kept_.size(); ++r) out[r] = full[kept_[r]];
}

void CdpOperator::apply_adjoint(std::span<const std::complex<double>> u, std::span<std::complex<double>> out) const {
  if (u.size() != kept_.size() || out.size() != d_) {
    throw std::invalid_argument("CdpOperator::apply_adjoint: size mismatch");
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(d_));
  std::vector<std::complex<double>> full(static_cast<std::size_t>(L_) * d_, {0.0, 0.0});
  for (std::size_t r = 0; r < kept_.size(); ++r) full[kept_[r]] = u[r];
  auto* in = reinterpret_cast<std::complex<double>*>(plans_->in);
  auto* res = reinterpret_cast<std::complex<double>*>(plans_->out);
  std::fill(out.begin(), out.end(), std::complex<double>{0.0, 0.0});
  for (int l = 0; l < L_; ++l) {
    for (std::size_t i = 0; i < d_; ++i) in[i] = full[static_cast<std::size_t>(l) * d_ + i];
    fftw_execute(plans_->forward);
    for (std::size_t i = 0; i < d_; ++i) out[i] += std::conj(masks_[l][i]) * (scale * res[i]);
  }
}

}  // namespace glmamp
