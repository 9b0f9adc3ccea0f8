#include "hydrolat/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace hydrolat {

namespace {

// fftw_execute_dft is thread-safe; plan creation is not, hence the mutex.
// Plans are cached per (extents, direction) and reused via the new-array
// execute interface.
std::mutex plan_mutex;

fftw_plan get_plan(const std::vector<int>& extents, int sign, fftw_complex* buf) {
  static std::map<std::pair<std::vector<int>, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(extents, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  fftw_plan p = fftw_plan_dft(static_cast<int>(extents.size()), extents.data(),
                              buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

void run(const Box& box, std::vector<cplx>& data, int sign) {
  if (static_cast<std::int64_t>(data.size()) != box.size())
    throw BoxError("fft: data size does not match box");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan p = get_plan(box.extents, sign, buf);
  fftw_execute_dft(p, buf, buf);
}

}  // namespace

void fft_forward(const Box& box, std::vector<cplx>& data) {
  // e^{+i theta.z} is FFTW's BACKWARD sign
  run(box, data, FFTW_BACKWARD);
}

void fft_inverse(const Box& box, std::vector<cplx>& data) {
  run(box, data, FFTW_FORWARD);
  double norm = 1.0 / static_cast<double>(box.size());
  for (auto& v : data) v *= norm;
}

}  // namespace hydrolat
