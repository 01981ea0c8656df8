#include "apnlc/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "apnlc/error.hpp"

namespace apnlc {
namespace {

// The FFTW planner is not thread-safe; executing an existing plan on new
// arrays is. Plans live for the whole process.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<std::size_t, int>, fftw_plan>& plan_cache() {
  static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
  return cache;
}

fftw_plan get_plan(std::size_t n, int sign) {
  std::lock_guard lock(planner_mutex());
  auto& cache = plan_cache();
  const auto key = std::make_pair(n, sign);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::vector<fftw_complex> scratch(n);
  fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), scratch.data(), scratch.data(), sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (p == nullptr) fail(ErrorCode::NumericalFailure, "fftw plan creation failed");
  cache.emplace(key, p);
  return p;
}

void execute(void* plan, std::span<cplx> data, std::size_t n) {
  require(data.size() == n, ErrorCode::LengthMismatch, "fft length mismatch");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan), ptr, ptr);
}

}  // namespace

Fft::Fft(std::size_t n)
    : n_(n),
      forward_plan_(static_cast<void*>(get_plan(n, FFTW_FORWARD))),
      inverse_plan_(static_cast<void*>(get_plan(n, FFTW_BACKWARD))) {
  require(n > 0, ErrorCode::InvalidArgument, "fft length must be positive");
}

void Fft::forward(std::span<cplx> data) const { execute(forward_plan_, data, n_); }
void Fft::inverse(std::span<cplx> data) const { execute(inverse_plan_, data, n_); }

double bin_angular_frequency(std::size_t k, std::size_t n, double rate) noexcept {
  const double idx = (k < (n + 1) / 2) ? static_cast<double>(k)
                                       : static_cast<double>(k) - static_cast<double>(n);
  return 2.0 * std::numbers::pi * idx * rate / static_cast<double>(n);
}

}  // namespace apnlc
