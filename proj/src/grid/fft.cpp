#include "grid/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace roughpde::detail {

namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan get_plan(int d, int n, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto key = std::make_tuple(d, n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::size_t total = 1;
  std::vector<int> dims(d, n);
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(n);
  fftw_complex* buf = fftw_alloc_complex(total);
  fftw_plan p = fftw_plan_dft(d, dims.data(), buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  cache.emplace(key, p);
  return p;
}

}  // namespace

void fft_inplace(std::complex<double>* data, int d, int n, int sign) {
  fftw_plan p = get_plan(d, n, sign);
  auto* z = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, z, z);
}

}  // namespace roughpde::detail
