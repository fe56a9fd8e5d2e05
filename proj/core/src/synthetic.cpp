#include "mtlf/synthetic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "mtlf/errors.hpp"
#include "mtlf/forecaster.hpp"
#include "mtlf/linalg.hpp"

namespace mtlf {
namespace {

constexpr double kHoursPerYear = 8766.0;

void check_psd(const Matrix& m, int k, const std::string& what, bool strict) {
  if (m.rows() != k || m.cols() != k) {
    throw ConfigError(what + " must be " + std::to_string(k) + " x " + std::to_string(k));
  }
  if (!m.allFinite() || !m.isApprox(m.transpose(), 1e-12)) {
    throw ConfigError(what + " must be finite and symmetric");
  }
  const double lowest = min_eigenvalue(m);
  if (strict ? !(lowest > 0.0) : lowest < -1e-12) {
    throw ConfigError(what + (strict ? " must be positive definite"
                                     : " must be positive semidefinite"));
  }
}

Vector draw(std::mt19937_64& rng, std::normal_distribution<double>& normal, Eigen::Index n) {
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  return z;
}

SyntheticSpec validated(SyntheticSpec spec) {
  spec.validate();
  return spec;
}

}  // namespace

TemperatureProcess TemperatureProcess::defaults(int entities) {
  TemperatureProcess p;
  p.mean = Vector::Constant(entities, 60.0);
  p.daily_amplitude = Vector::Constant(entities, 15.0);
  p.phase_hours = Vector::Constant(entities, 9.0);
  p.annual_amplitude = Vector::Zero(entities);
  p.noise_sd = Vector::Constant(entities, 5.0);
  return p;
}

const CalendarParameters& SyntheticSpec::params(CalendarType c) const {
  if (parameters.size() == 1) return parameters.front();
  return parameters.at(static_cast<std::size_t>(c - 1));
}

void SyntheticSpec::validate() const {
  const int k = entities;
  if (k < 1) throw ConfigError("synthetic spec needs at least one entity");
  if (hours < 1) throw ConfigError("synthetic spec needs a positive length");
  const auto count = parameters.size();
  if (count != 1 && count != static_cast<std::size_t>(scheme.count())) {
    throw ConfigError("synthetic spec needs 1 or " + std::to_string(scheme.count()) +
                      " parameter sets, got " + std::to_string(count));
  }
  for (std::size_t i = 0; i < count; ++i) {
    const auto& p = parameters[i];
    const std::string tag = "calendar parameters #" + std::to_string(i + 1) + ": ";
    if (p.load_map.rows() != k || p.load_map.cols() != k + 1 || !p.load_map.allFinite()) {
      throw ConfigError(tag + "load map must be finite K x (K+1)");
    }
    check_psd(p.load_cov, k, tag + "load covariance", false);
    const Matrix transition = p.load_map.rightCols(k);
    const double radius = transition.eigenvalues().cwiseAbs().maxCoeff();
    if (!(radius < 1.0)) {
      throw ConfigError(tag + "transition block has spectral radius " +
                        std::to_string(radius) + " >= 1 (non-stationary)");
    }
    if (observation_channel) {
      if (p.observation_map.rows() != k || p.observation_map.cols() != k * kObservationFeatures ||
          !p.observation_map.allFinite()) {
        throw ConfigError(tag + "observation map must be finite K x 3K");
      }
      check_psd(p.observation_cov, k, tag + "observation covariance", true);
    }
  }
  const auto check_len = [k](const Vector& v, const char* name) {
    if (v.size() != k || !v.allFinite()) {
      throw ConfigError(std::string("temperature ") + name + " must have one finite value per entity");
    }
  };
  check_len(temperature.mean, "mean");
  check_len(temperature.daily_amplitude, "daily_amplitude");
  check_len(temperature.phase_hours, "phase_hours");
  check_len(temperature.annual_amplitude, "annual_amplitude");
  check_len(temperature.noise_sd, "noise_sd");
  if ((temperature.noise_sd.array() < 0.0).any()) {
    throw ConfigError("temperature noise_sd must be non-negative");
  }
  if (initial_loads.size() != 0 && (initial_loads.size() != k || !initial_loads.allFinite())) {
    throw ConfigError("initial_loads must have one finite value per entity");
  }
  if (!entity_ids.empty() && static_cast<int>(entity_ids.size()) != k) {
    throw ConfigError("entity_ids must name every entity");
  }
}

Matrix psd_factor(const Matrix& m) {
  if (m.rows() == 1) return Matrix::Constant(1, 1, std::sqrt(std::max(m(0, 0), 0.0)));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

Simulator::Simulator(SyntheticSpec spec)
    : spec_(validated(std::move(spec))),
      rng_(spec_.seed),
      ctx_(spec_.scheme.count(), spec_.entities, spec_.thresholds) {
  if (spec_.entity_ids.empty()) {
    for (int k = 0; k < spec_.entities; ++k) spec_.entity_ids.push_back("E" + std::to_string(k + 1));
  }
  for (const auto& p : spec_.parameters) load_factor_.push_back(psd_factor(p.load_cov));
}

SimulatedHour Simulator::next() {
  const int k = spec_.entities;
  SimulatedHour hour;
  hour.timestamp = Timestamp{spec_.start.utc + index_ * kHour, spec_.start.offset};
  hour.calendar_type = spec_.scheme.classify(hour.timestamp, false);
  const auto& tp = spec_.temperature;
  const double h = local_hour(hour.timestamp);
  const double two_pi = 2.0 * std::numbers::pi;
  const Vector temp_noise = draw(rng_, normal_, k);
  hour.temperatures.resize(k);
  for (int e = 0; e < k; ++e) {
    hour.temperatures[e] =
        tp.mean[e] + tp.daily_amplitude[e] * std::sin(two_pi * (h - tp.phase_hours[e]) / 24.0) +
        tp.annual_amplitude[e] * std::sin(two_pi * static_cast<double>(index_) / kHoursPerYear) +
        tp.noise_sd[e] * temp_noise[e];
  }

  const auto& p = spec_.params(hour.calendar_type);
  const Vector load_noise = draw(rng_, normal_, k);
  if (index_ == 0) {
    hour.loads = spec_.initial_loads.size() == k ? spec_.initial_loads : Vector(p.load_map.col(0));
  } else {
    Vector u(k + 1);
    u[0] = 1.0;
    u.tail(k) = prev_;
    const Vector mu_s = p.load_map * u;
    if (spec_.observation_channel) {
      const auto u_r = build_feature_r(hour.temperatures, ctx_, hour.calendar_type);
      const Vector mu_r = p.observation_map * u_r.values();
      const Gaussian fused = fuse(mu_s, p.load_cov, mu_r, p.observation_cov);
      hour.loads = fused.mean + psd_factor(fused.cov) * load_noise;
    } else {
      const std::size_t slot =
          spec_.parameters.size() == 1 ? 0 : static_cast<std::size_t>(hour.calendar_type - 1);
      hour.loads = mu_s + load_factor_[slot] * load_noise;
    }
  }
  ctx_.update(hour.calendar_type, hour.temperatures);
  prev_ = hour.loads;
  ++index_;
  return hour;
}

EntityPanel generate(const SyntheticSpec& spec) {
  Simulator sim(spec);
  const int k = sim.spec().entities;
  EntityPanel panel;
  panel.entity_ids = sim.spec().entity_ids;
  panel.loads.resize(spec.hours, k);
  panel.temperatures.resize(spec.hours, k);
  panel.timestamps.reserve(static_cast<std::size_t>(spec.hours));
  panel.holidays.assign(static_cast<std::size_t>(spec.hours), false);
  for (int t = 0; t < spec.hours; ++t) {
    auto hour = sim.next();
    panel.timestamps.push_back(hour.timestamp);
    panel.loads.row(t) = hour.loads.transpose();
    panel.temperatures.row(t) = hour.temperatures.transpose();
  }
  return panel;
}

ObservedPath sample_observed_path(std::span<const CalendarParameters> steps, const Vector& s0,
                                  std::mt19937_64& rng) {
  const auto k = s0.size();
  const auto n = static_cast<Eigen::Index>(steps.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  ObservedPath path;
  path.loads.resize(n, k);
  path.observations.resize(n, k);
  Vector s = s0;
  Vector u(k + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = steps[static_cast<std::size_t>(i)];
    u[0] = 1.0;
    u.tail(k) = s;
    const Vector w = draw(rng, normal, k);
    const Vector v = draw(rng, normal, k);
    s = p.load_map * u + psd_factor(p.load_cov) * w;
    path.loads.row(i) = s.transpose();
    path.observations.row(i) = (s + psd_factor(p.observation_cov) * v).transpose();
  }
  return path;
}

Matrix random_normal(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

Matrix random_spd(int n, std::mt19937_64& rng, double eps) {
  const Matrix a = random_normal(n, n, rng);
  Matrix m = a * a.transpose();
  m.diagonal().array() += eps;
  symmetrize(m);
  return m;
}

}  // namespace mtlf
