#include "dct.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace pdcheb::detail {
namespace {

using PlanKey = std::tuple<int, int, int, int>;

// FFTW planning is not thread-safe, execution with new-array functions is.
class PlanCache {
 public:
  fftw_plan get(int len, int count, int stride, int dist) {
    std::lock_guard<std::mutex> lock(mutex_);
    const PlanKey key{len, count, stride, dist};
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const std::size_t extent =
        static_cast<std::size_t>((count - 1) * dist + (len - 1) * stride + 1);
    std::vector<double> scratch(extent, 0.0);
    int n[1] = {len};
    fftw_r2r_kind kind[1] = {FFTW_REDFT00};
    fftw_plan plan = fftw_plan_many_r2r(1, n, count, scratch.data(), nullptr, stride, dist,
                                        scratch.data(), nullptr, stride, dist, kind,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("FFTW failed to create a DCT-I plan");
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void dct1_many(double* data, int len, int count, int stride, int dist) {
  if (len < 2 || count < 1) throw std::invalid_argument("dct1_many: need len >= 2 and count >= 1");
  fftw_execute_r2r(cache().get(len, count, stride, dist), data, data);
}

}  // namespace pdcheb::detail
