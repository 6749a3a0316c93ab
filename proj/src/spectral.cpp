#include "prandtl_lab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace prandtl_lab {
namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan forward(std::size_t n, std::size_t howmany) { return get(n, howmany, true); }
  fftw_plan backward(std::size_t n, std::size_t howmany) { return get(n, howmany, false); }

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  fftw_plan get(std::size_t n, std::size_t howmany, bool fwd) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(n, howmany, fwd);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const int len = static_cast<int>(n);
    const int stride = static_cast<int>(howmany);
    std::vector<double> real(n * howmany);
    std::vector<std::complex<double>> cplx((n / 2 + 1) * howmany);
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan =
        fwd ? fftw_plan_many_dft_r2c(1, &len, stride, real.data(), nullptr, stride, 1, c,
                                     nullptr, stride, 1, flags)
            : fftw_plan_many_dft_c2r(1, &len, stride, c, nullptr, stride, 1, real.data(),
                                     nullptr, stride, 1, flags);
    if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, bool>, fftw_plan> plans_;
};

}  // namespace

FourierField forward_fft(const Field& f) {
  FourierField spec;
  spec.n = f.n_periodic();
  spec.n_normal = f.n_normal();
  spec.coeffs.assign(spec.modes() * spec.n_normal, {});
  std::vector<double> input = f.values();
  fftw_execute_dft_r2c(PlanCache::instance().forward(spec.n, spec.n_normal), input.data(),
                       reinterpret_cast<fftw_complex*>(spec.coeffs.data()));
  return spec;
}

Field inverse_fft(const FourierField& spec, std::string name) {
  Field out(spec.n, spec.n_normal, std::move(name));
  auto work = spec.coeffs;  // c2r overwrites its input
  fftw_execute_dft_c2r(PlanCache::instance().backward(spec.n, spec.n_normal),
                       reinterpret_cast<fftw_complex*>(work.data()), out.values().data());
  const double scale = 1.0 / static_cast<double>(spec.n);
  for (double& v : out.values()) v *= scale;
  return out;
}

Field apply_multiplier(const FourierField& spec, const std::vector<double>& multiplier,
                       std::string name) {
  if (multiplier.size() != spec.modes())
    throw std::invalid_argument("multiplier length does not match spectrum");
  FourierField scaled = spec;
  for (std::size_t k = 0; k < spec.modes(); ++k)
    for (std::size_t j = 0; j < spec.n_normal; ++j) scaled.at(k, j) *= multiplier[k];
  return inverse_fft(scaled, std::move(name));
}

double trig_interpolate(const FourierField& spec, double length, std::size_t j, double s) {
  const double n = static_cast<double>(spec.n);
  const double base = 2.0 * std::numbers::pi * s / length;
  double acc = spec.at(0, j).real();
  const std::size_t nyquist = spec.n / 2;
  for (std::size_t k = 1; k < spec.modes(); ++k) {
    const std::complex<double> phase(std::cos(base * static_cast<double>(k)),
                                     std::sin(base * static_cast<double>(k)));
    const double term = (spec.at(k, j) * phase).real();
    acc += (k == nyquist && spec.n % 2 == 0) ? term : 2.0 * term;
  }
  return acc / n;
}

}  // namespace prandtl_lab
