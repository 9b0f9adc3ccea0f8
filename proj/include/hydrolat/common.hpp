#ifndef HYDROLAT_COMMON_HPP
#define HYDROLAT_COMMON_HPP

#include <complex>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

namespace hydrolat {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;   // complex n x n (or 2n x 2n) blocks
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using IVec = Eigen::VectorXi;

inline constexpr double pi = 3.14159265358979323846;

// Error taxonomy: every failure mode named in the module contracts gets its
// own type so callers can react without string matching.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};
struct InvalidParameterError : Error { using Error::Error; };
struct ConditionViolationError : Error { using Error::Error; };   // E2/E3 style
struct CriticalSetError : Error { using Error::Error; };
struct BoxError : Error { using Error::Error; };
struct ModelViolationError : Error { using Error::Error; };
struct SamplingError : Error { using Error::Error; };
struct GridError : Error { using Error::Error; };
struct UnsupportedError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

inline double sup_norm(const Mat& m) { return m.cwiseAbs().maxCoeff(); }
inline double sup_norm(const RMat& m) { return m.cwiseAbs().maxCoeff(); }

// sign with sign(0) = 0; the chi indicators rely on this convention on
// the coincidence set.
inline double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Fixed-order pairwise reduction. Summation order depends only on the slot
// layout, never on thread scheduling, so reductions are bit-stable.
template <typename T>
T pairwise_sum(const std::vector<T>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}
template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  if (v.empty()) return T{};
  return pairwise_sum(v, 0, v.size());
}

// Runs f(i) for i in [0, count) on up to `jobs` threads. Each index writes
// only its own slots, so results do not depend on the worker count.
inline void parallel_for(std::size_t count, int jobs,
                         const std::function<void(std::size_t)>& f) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::size_t nthreads = std::min<std::size_t>(jobs, count);
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  std::exception_ptr err;
  std::mutex err_mx;
  for (std::size_t t = 0; t < nthreads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < count; i += nthreads) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mx);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace hydrolat

#endif
