#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mtlf/calendar.hpp"
#include "mtlf/features.hpp"
#include "mtlf/panel.hpp"
#include "mtlf/timestamp.hpp"
#include "mtlf/types.hpp"

namespace mtlf {

/// True generating parameters for one calendar type.
struct CalendarParameters {
  Matrix load_map;        ///< K x (K+1): [intercept | transition]
  Matrix load_cov;        ///< K x K, PSD
  Matrix observation_map; ///< K x 3K
  Matrix observation_cov; ///< K x K, SPD when the observation channel is on
};

/// Per-entity temperature process in °F:
///   mean + daily_amplitude sin(2π(h - phase)/24) + annual_amplitude sin(2π t/8766)
///   + N(0, noise_sd²)
/// where h is the local hour and t the hour index.
struct TemperatureProcess {
  Vector mean;
  Vector daily_amplitude;
  Vector phase_hours;
  Vector annual_amplitude;
  Vector noise_sd;

  /// Mild defaults (mean 60 °F, 15 °F daily swing, 5 °F noise).
  static TemperatureProcess defaults(int entities);
};

/// Description of a synthetic panel drawn from known vector HMM parameters.
struct SyntheticSpec {
  int entities = 1;
  CalendarScheme scheme;
  /// One entry per calendar type, or a single entry shared by all types.
  std::vector<CalendarParameters> parameters;
  TemperatureProcess temperature;
  TempThresholds thresholds;
  /// When on, each load is drawn from the fusion of the load-transition
  /// Gaussian and the observation-model Gaussian at the current features.
  bool observation_channel = false;
  std::uint64_t seed = 1;
  int hours = 24 * 60;
  Timestamp start = Timestamp{UtcTime{Seconds{1483228800}}, Seconds{0}};  // 2017-01-01
  /// Defaults to the intercept column of the first hour's calendar type.
  Vector initial_loads;
  /// Defaults to "E1", "E2", ...
  std::vector<std::string> entity_ids;

  [[nodiscard]] const CalendarParameters& params(CalendarType c) const;

  /// Throws ConfigError on inconsistent dimensions, non-PSD covariances or a
  /// transition block with spectral radius >= 1.
  void validate() const;
};

/// One generated hour.
struct SimulatedHour {
  Timestamp timestamp;
  CalendarType calendar_type = 0;
  Vector loads;
  Vector temperatures;
};

/// Streaming forward sampler; `generate` collects its output into a panel.
/// Deterministic for a given spec (std::mt19937_64, temperature noise drawn
/// before load noise each hour).
class Simulator {
 public:
  explicit Simulator(SyntheticSpec spec);

  [[nodiscard]] const SyntheticSpec& spec() const { return spec_; }
  [[nodiscard]] std::int64_t position() const { return index_; }

  SimulatedHour next();

 private:
  SyntheticSpec spec_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::vector<Matrix> load_factor_;
  TempContext ctx_;
  Vector prev_;
  std::int64_t index_ = 0;
};

EntityPanel generate(const SyntheticSpec& spec);

/// Square-root factor F of a PSD matrix (F Fᵀ = m) via eigendecomposition.
Matrix psd_factor(const Matrix& m);

/// A path of the linear-Gaussian state-space model behind the forecaster:
///   s_i = A_i [1, s_{i-1}] + w_i,  w_i ~ N(0, load_cov_i)
///   z_i = s_i + v_i,               v_i ~ N(0, observation_cov_i)
/// Row i-1 of `loads` / `observations` holds step i.
struct ObservedPath {
  RowMatrix loads;
  RowMatrix observations;
};

ObservedPath sample_observed_path(std::span<const CalendarParameters> steps,
                                  const Vector& s0, std::mt19937_64& rng);

/// Random SPD matrix A Aᵀ + eps I with standard normal A.
Matrix random_spd(int n, std::mt19937_64& rng, double eps = 1e-6);

/// Matrix of independent standard normals.
Matrix random_normal(int rows, int cols, std::mt19937_64& rng);

}  // namespace mtlf
