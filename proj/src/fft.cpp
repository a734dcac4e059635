#include "wobble/fft.hpp"

#include <fftw3.h>

#include <mutex>

#include "wobble/errors.hpp"

namespace wobble::fft {

namespace {

// FFTW's planner is not thread-safe; execution of a plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void dct1(std::vector<double>& x) {
  if (x.size() < 2) fail(ErrorKind::Configuration, "DCT-I needs at least two points");
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_r2r_1d(static_cast<int>(x.size()), x.data(), x.data(), FFTW_REDFT00, FFTW_ESTIMATE);
  }
  if (!plan) fail(ErrorKind::NumericalFailure, "FFTW failed to plan a DCT-I");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

void dft_forward(std::vector<std::complex<double>>& x) {
  if (x.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(x.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(x.size()), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (!plan) fail(ErrorKind::NumericalFailure, "FFTW failed to plan a DFT");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace wobble::fft
