#include "ddsim/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddsim/error.hpp"

namespace ddsim::predictor {

std::string_view level_name(AlertLevel level) {
  switch (level) {
    case AlertLevel::kNormal: return "Normal";
    case AlertLevel::kLevel1: return "Level1";
    case AlertLevel::kLevel2: return "Level2";
    case AlertLevel::kLevel3: return "Level3";
  }
  return "?";
}

double compute_beta(double alpha, double sigma) {
  return std::min((100.0 - alpha) / 3.0, sigma);
}

AlertLevel classify(double real_load, const AlertThresholds& t) {
  if (t.beta <= 0.0) {
    return real_load > t.alpha ? AlertLevel::kLevel3 : AlertLevel::kNormal;
  }
  if (real_load >= t.alpha + 3.0 * t.beta) return AlertLevel::kLevel3;
  if (real_load >= t.alpha + 2.0 * t.beta) return AlertLevel::kLevel2;
  if (real_load >= t.alpha + t.beta) return AlertLevel::kLevel1;
  return AlertLevel::kNormal;
}

AgingPredictor::AgingPredictor(double smoothing, std::size_t window)
    : smoothing_(smoothing), capacity_(window) {
  if (!(smoothing >= 0.0 && smoothing <= 1.0)) {
    throw Error(Errc::kDomainError, "smoothing factor " + std::to_string(smoothing));
  }
  if (window == 0) throw Error(Errc::kDomainError, "window capacity 0");
}

AgingPredictor::AgingPredictor(double smoothing, std::size_t window, double initial)
    : AgingPredictor(smoothing, window) {
  if (!(initial >= 0.0 && initial <= 100.0)) {
    throw Error(Errc::kDomainError, "initial prediction " + std::to_string(initial));
  }
  prediction_ = initial;
}

void AgingPredictor::update(double observed_load) {
  if (!(observed_load >= 0.0 && observed_load <= 100.0)) {
    throw Error(Errc::kDomainError, "observed load " + std::to_string(observed_load));
  }
  if (!prediction_) {
    prediction_ = observed_load;
  } else {
    // Written as s + (1−x)(T − s) so a steady load reproduces itself exactly.
    const double s = *prediction_;
    prediction_ = s + (1.0 - smoothing_) * (observed_load - s);
  }
  window_.push_back(observed_load);
  if (window_.size() > capacity_) window_.pop_front();
}

double AgingPredictor::alpha() const {
  if (!prediction_) throw Error(Errc::kUnseeded, "no observation yet");
  return *prediction_;
}

double AgingPredictor::mean() const {
  if (window_.empty()) throw Error(Errc::kInsufficientData, "empty window");
  double m = 0.0;
  std::size_t n = 0;
  for (double v : window_) m += (v - m) / static_cast<double>(++n);
  return m;
}

double AgingPredictor::sigma() const {
  if (window_.size() < 2) {
    throw Error(Errc::kInsufficientData,
                "sigma needs 2 samples, have " + std::to_string(window_.size()));
  }
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double v : window_) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  return std::sqrt(std::max(m2, 0.0) / static_cast<double>(n - 1));
}

void AgingPredictor::snapshot_alpha() { snapshot_ = Saved{prediction_, window_}; }

void AgingPredictor::restore_alpha() {
  if (!snapshot_) throw Error(Errc::kNoSnapshot, "restore without snapshot");
  prediction_ = snapshot_->prediction;
  window_ = std::move(snapshot_->window);
  snapshot_.reset();
}

}  // namespace ddsim::predictor
