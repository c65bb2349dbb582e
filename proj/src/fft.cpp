// FFTW-backed transforms. Plans are created once per shape under a mutex and
// executed through the new-array interface, which is safe to call
// concurrently.

#include "hypolab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace hypolab::fft {

namespace {

enum class Kind { Full2d, AlongY, AlongX, Single };

using Key = std::tuple<Kind, int, int, int>;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

  fftw_plan get(Kind kind, int nx, int ny, Direction dir) {
    std::lock_guard lock(mutex_);
    Key key{kind, nx, ny, static_cast<int>(dir)};
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> scratch(static_cast<std::size_t>(nx) * ny);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    switch (kind) {
      case Kind::Full2d:
        plan = fftw_plan_dft_2d(nx, ny, buf, buf, sign, flags);
        break;
      case Kind::AlongY: {
        int n[] = {ny};
        plan = fftw_plan_many_dft(1, n, nx, buf, nullptr, 1, ny, buf, nullptr, 1, ny, sign, flags);
        break;
      }
      case Kind::AlongX: {
        int n[] = {nx};
        plan = fftw_plan_many_dft(1, n, ny, buf, nullptr, ny, 1, buf, nullptr, ny, 1, sign, flags);
        break;
      }
      case Kind::Single:
        plan = fftw_plan_dft_1d(nx, buf, buf, sign, flags);
        break;
    }
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(Kind kind, std::span<std::complex<double>> data, int nx, int ny, Direction dir) {
  fftw_plan plan = cache().get(kind, nx, ny, dir);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void transform_2d(std::span<std::complex<double>> data, int nx, int ny, Direction dir) {
  run(Kind::Full2d, data, nx, ny, dir);
}

void transform_y(std::span<std::complex<double>> data, int nx, int ny, Direction dir) {
  run(Kind::AlongY, data, nx, ny, dir);
}

void transform_x(std::span<std::complex<double>> data, int nx, int ny, Direction dir) {
  run(Kind::AlongX, data, nx, ny, dir);
}

void transform_1d(std::span<std::complex<double>> data, Direction dir) {
  run(Kind::Single, data, static_cast<int>(data.size()), 1, dir);
}

}  // namespace hypolab::fft
