#include "blt/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace blt::fft {
namespace {

// The FFTW planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plan {
  fftw_plan handle = nullptr;
  ~Plan() {
    if (handle) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(handle);
    }
  }
};

int sign_of(Direction dir) { return dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD; }

}  // namespace

void transform(std::span<Complex> data, Direction dir) {
  if (data.size() <= 1) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.handle = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign_of(dir),
                                   FFTW_ESTIMATE);
  }
  if (!plan.handle) throw std::runtime_error("fftw: failed to create 1d plan");
  fftw_execute(plan.handle);
}

void transform_2d(ComplexMatrix& data, Direction dir) {
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.flat().data());
  Plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan.handle = fftw_plan_dft_2d(static_cast<int>(data.rows()), static_cast<int>(data.cols()),
                                   buf, buf, sign_of(dir), FFTW_ESTIMATE);
  }
  if (!plan.handle) throw std::runtime_error("fftw: failed to create 2d plan");
  fftw_execute(plan.handle);
}

}  // namespace blt::fft
