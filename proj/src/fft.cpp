#include "fivmon/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace fivmon::fft {

namespace {

// FFTW planning is not thread-safe; execution with a private plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class Plan {
 public:
  Plan(std::vector<cplx>& in, std::vector<cplx>& out, int sign) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(in.size()),
                             reinterpret_cast<fftw_complex*>(in.data()),
                             reinterpret_cast<fftw_complex*>(out.data()), sign,
                             FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("fft: planning failed");
  }
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  void execute() { fftw_execute(plan_); }

 private:
  fftw_plan plan_ = nullptr;
};

std::vector<cplx> transform(std::vector<cplx> in, int sign) {
  std::vector<cplx> out(in.size());
  if (in.empty()) return out;
  // FFTW_ESTIMATE never touches the arrays while planning.
  Plan plan(in, out, sign);
  plan.execute();
  return out;
}

}  // namespace

std::vector<cplx> forward(std::span<const cplx> x) {
  return transform(std::vector<cplx>(x.begin(), x.end()), FFTW_FORWARD);
}

std::vector<cplx> forward_real(std::span<const double> x) {
  std::vector<cplx> in(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) in[i] = cplx(x[i], 0.0);
  return transform(std::move(in), FFTW_FORWARD);
}

std::vector<cplx> inverse(std::span<const cplx> spectrum) {
  auto out = transform(std::vector<cplx>(spectrum.begin(), spectrum.end()), FFTW_BACKWARD);
  const double scale = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace fivmon::fft
