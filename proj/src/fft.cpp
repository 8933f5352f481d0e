#include "taperspec/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace taperspec::fft {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (size, sign) under a lock and then
// executed concurrently. FFTW_ESTIMATE keeps the chosen algorithm, and so the
// output bits, independent of timing.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({n, sign});
    if (it != plans_.end()) return it->second;
    auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_.emplace(std::pair{n, sign}, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void run(std::span<std::complex<double>> data, int sign) {
  if (data.empty()) return;
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(cache().get(static_cast<int>(data.size()), sign), ptr, ptr);
}

}  // namespace

void forward(std::span<std::complex<double>> data) { run(data, FFTW_FORWARD); }
void backward(std::span<std::complex<double>> data) { run(data, FFTW_BACKWARD); }

}  // namespace taperspec::fft
