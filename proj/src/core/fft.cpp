#include "etsim/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "etsim/errors.hpp"

namespace etsim::detail {
namespace {

// fftw_execute_dft is thread-safe; the planner is not.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t rows, std::size_t cols, FftSign sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(rows, cols, static_cast<int>(sign));
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::vector<Complex> scratch(rows * cols);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int dir = sign == FftSign::minus ? FFTW_FORWARD : FFTW_BACKWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = rows == 1
        ? fftw_plan_dft_1d(static_cast<int>(cols), buf, buf, dir, flags)
        : fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf, buf, dir, flags);
    if (plan == nullptr) throw Error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// For n divisible by 4, the centred DFT equals (-1)^k * DFT[(-1)^j x_j].
void alternate_signs(std::span<Complex> data, std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (((r + c) & 1U) != 0U) data[r * cols + c] = -data[r * cols + c];
    }
  }
}

void execute(std::span<Complex> data, std::size_t rows, std::size_t cols, FftSign sign) {
  if (data.size() != rows * cols) throw InvalidArgument("centered_dft: size mismatch");
  if (cols < 4 || cols % 4 != 0 || (rows != 1 && (rows < 4 || rows % 4 != 0))) {
    throw InvalidArgument("centered_dft: dimensions must be multiples of 4");
  }
  alternate_signs(data, rows, cols);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan_cache().get(rows, cols, sign), buf, buf);
  alternate_signs(data, rows, cols);
}

}  // namespace

void centered_dft(std::span<Complex> data, FftSign sign) { execute(data, 1, data.size(), sign); }

void centered_dft_2d(std::span<Complex> data, std::size_t rows, std::size_t cols, FftSign sign) {
  execute(data, rows, cols, sign);
}

}  // namespace etsim::detail
