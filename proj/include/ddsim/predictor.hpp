#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string_view>

namespace ddsim::predictor {

enum class AlertLevel : int { kNormal = 0, kLevel1 = 1, kLevel2 = 2, kLevel3 = 3 };

std::string_view level_name(AlertLevel level);

struct AlertThresholds {
  double alpha = 0.0;  // percent
  double beta = 0.0;   // percent
};

// β = min((100 − α)/3, σ): the three alert bands must fit below 100%, and
// are never wider than the observed deviation.
double compute_beta(double alpha, double sigma);

// Level3 if load ≥ α+3β, Level2 if ≥ α+2β, Level1 if ≥ α+β. With β = 0 the
// three thresholds coincide, so any load strictly above α is Level3.
AlertLevel classify(double real_load, const AlertThresholds& thresholds);

// Aging (exponential smoothing) bandwidth predictor with a sliding window of
// raw observations for the deviation estimate.
class AgingPredictor {
 public:
  static constexpr double kDefaultSmoothing = 0.5;
  static constexpr std::size_t kDefaultWindow = 60;

  explicit AgingPredictor(double smoothing = kDefaultSmoothing,
                          std::size_t window = kDefaultWindow);
  // Starts from an explicit prediction instead of seeding on first update.
  AgingPredictor(double smoothing, std::size_t window, double initial);

  // S_n = x·S_{n−1} + (1−x)·T. The first observation of an unseeded
  // predictor becomes S_0. Throws DomainError for loads outside [0,100].
  void update(double observed_load);

  bool seeded() const { return prediction_.has_value(); }
  double alpha() const;  // throws Unseeded
  double sigma() const;  // sample stddev of the window; throws InsufficientData
  double mean() const;   // window mean; throws InsufficientData when empty

  double smoothing() const { return smoothing_; }
  std::size_t window_capacity() const { return capacity_; }
  const std::deque<double>& window() const { return window_; }

  void snapshot_alpha();
  void restore_alpha();  // throws NoSnapshot
  bool has_snapshot() const { return snapshot_.has_value(); }

  bool operator==(const AgingPredictor&) const = default;

 private:
  struct Saved {
    std::optional<double> prediction;
    std::deque<double> window;
    bool operator==(const Saved&) const = default;
  };

  double smoothing_;
  std::size_t capacity_;
  std::optional<double> prediction_;
  std::deque<double> window_;
  std::optional<Saved> snapshot_;
};

}  // namespace ddsim::predictor
