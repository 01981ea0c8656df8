#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace apnlc {

using cplx = std::complex<double>;

/// Unnormalized in-place complex DFT of fixed length. Forward uses
/// exp(-j 2 pi k n / N), inverse exp(+j 2 pi k n / N). Plans are cached
/// per length; execution is thread-safe.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<cplx> data) const;
  void inverse(std::span<cplx> data) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Angular frequency (rad per unit time) of DFT bin k for a length-n
/// transform sampled at `rate` samples per unit time.
double bin_angular_frequency(std::size_t k, std::size_t n, double rate) noexcept;

}  // namespace apnlc
