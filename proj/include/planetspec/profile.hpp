#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace planetspec {

enum class Side { Above, Below };

// Wave speed c(r) on one layer. Implementations are immutable.
class SpeedModel {
 public:
  virtual ~SpeedModel() = default;
  virtual double c(double r) const = 0;
  virtual double dc(double r) const = 0;
  // Second derivative; the default differentiates dc numerically.
  virtual double d2c(double r) const;
  virtual nlohmann::json describe() const = 0;
  // False for models that are only C^1 (the pchip spline).
  virtual bool is_c11() const { return true; }

  // Optional closed forms. They are shortcuts for hot loops; tests compare
  // them against the generic quadrature paths.
  //   rho_inverse: r in [lo, hi] with r / c(r) = p.
  //   radial_action: integral of sqrt(|c^-2 - p^2 r^-2|) over [r_lo, r_hi],
  //   an interval on which the radicand keeps one sign.
  virtual std::optional<double> rho_inverse(double p, double lo, double hi) const;
  virtual std::optional<double> radial_action(double r_lo, double r_hi, double p) const;
};

class ConstantSpeed final : public SpeedModel {
 public:
  explicit ConstantSpeed(double c);
  double c(double) const override { return c_; }
  double dc(double) const override { return 0.0; }
  double d2c(double) const override { return 0.0; }
  nlohmann::json describe() const override;
  std::optional<double> rho_inverse(double p, double lo, double hi) const override;
  std::optional<double> radial_action(double r_lo, double r_hi, double p) const override;

 private:
  double c_;
};

// (c / r)^-2 = a + b ln r, i.e. rho^2 = a + b ln r.
class LogSpeed final : public SpeedModel {
 public:
  LogSpeed(double a, double b);
  double c(double r) const override;
  double dc(double r) const override;
  double d2c(double r) const override;
  nlohmann::json describe() const override;
  std::optional<double> rho_inverse(double p, double lo, double hi) const override;
  std::optional<double> radial_action(double r_lo, double r_hi, double p) const override;
  double a() const { return a_; }
  double b() const { return b_; }

 private:
  double a_, b_;
};

// c(r) = sum_i coeffs[i] (ln r)^i.
class LnPolySpeed final : public SpeedModel {
 public:
  explicit LnPolySpeed(std::vector<double> coeffs);
  double c(double r) const override;
  double dc(double r) const override;
  double d2c(double r) const override;
  nlohmann::json describe() const override;

 private:
  std::vector<double> k_;
};

// c(r) = sum_i coeffs[i] r^i. Smooth through the centre.
class PolySpeed final : public SpeedModel {
 public:
  explicit PolySpeed(std::vector<double> coeffs);
  double c(double r) const override;
  double dc(double r) const override;
  double d2c(double r) const override;
  nlohmann::json describe() const override;

 private:
  std::vector<double> k_;
};

// c(r) = c0 r^e.
class PowerSpeed final : public SpeedModel {
 public:
  PowerSpeed(double c0, double exponent);
  double c(double r) const override;
  double dc(double r) const override;
  double d2c(double r) const override;
  nlohmann::json describe() const override;

 private:
  double c0_, e_;
};

// Shape-preserving cubic (pchip) through (r_i, c_i) knots. Only C^1.
class SplineSpeed final : public SpeedModel {
 public:
  explicit SplineSpeed(std::vector<std::pair<double, double>> knots);
  double c(double r) const override;
  double dc(double r) const override;
  nlohmann::json describe() const override;
  bool is_c11() const override { return false; }

 private:
  struct Impl;
  std::vector<std::pair<double, double>> knots_;
  std::shared_ptr<const Impl> impl_;
};

// factor * inner(r): uniform rescaling of a speed model.
class ScaledSpeed final : public SpeedModel {
 public:
  ScaledSpeed(std::shared_ptr<const SpeedModel> inner, double factor);
  double c(double r) const override { return f_ * inner_->c(r); }
  double dc(double r) const override { return f_ * inner_->dc(r); }
  double d2c(double r) const override { return f_ * inner_->d2c(r); }
  nlohmann::json describe() const override;
  std::optional<double> rho_inverse(double p, double lo, double hi) const override;
  std::optional<double> radial_action(double r_lo, double r_hi, double p) const override;

 private:
  std::shared_ptr<const SpeedModel> inner_;
  double f_;
};

// Constant density per layer; shear modulus either given or mu = rho c^2.
struct LayerDensity {
  double density = 1.0;
  std::optional<double> mu;
};

// Radial profile on the unit ball or an annulus R <= r <= 1. Layer 0 is the
// outermost; interface i separates layer i (above) from layer i+1 (below).
class LayeredProfile {
 public:
  LayeredProfile(double inner_radius, std::vector<double> interfaces,
                 std::vector<std::shared_ptr<const SpeedModel>> layers,
                 std::optional<std::vector<LayerDensity>> density = std::nullopt,
                 double jump_tol = 1e-12);

  std::size_t num_layers() const { return layers_.size(); }
  std::size_t num_interfaces() const { return interfaces_.size(); }
  double inner_radius() const { return inner_; }
  const std::vector<double>& interfaces() const { return interfaces_; }
  double layer_top(std::size_t k) const;
  double layer_bottom(std::size_t k) const;
  const SpeedModel& model(std::size_t k) const { return *layers_.at(k); }
  std::shared_ptr<const SpeedModel> model_ptr(std::size_t k) const { return layers_.at(k); }

  // Layer holding r; at an interface radius the side picks the layer.
  std::size_t layer_at(double r, Side side) const;

  // Evaluation on a given layer's closed interval (no domain lookup).
  double layer_c(std::size_t k, double r) const { return layers_[k]->c(r); }
  double layer_rho(std::size_t k, double r) const;
  double layer_drho(std::size_t k, double r) const;
  double layer_d2rho(std::size_t k, double r) const;

  // One-sided evaluation by radius. Throws InvalidArgument outside (R, 1].
  double c(double r, Side side) const;
  double rho(double r, Side side) const;

  bool has_density() const { return density_.has_value(); }
  const std::optional<std::vector<LayerDensity>>& density() const { return density_; }
  // Shear modulus on layer k; rho_dens = 1 and mu = c^2 without a density model.
  double layer_mu(std::size_t k, double r) const;
  double layer_density(std::size_t k) const;

  // Copy with interface i moved to radius r (speed models unchanged).
  LayeredProfile with_interface(std::size_t i, double r) const;

  nlohmann::json to_json() const;
  std::uint64_t hash() const;
  // True when every layer model is at least C^{1,1}.
  bool is_c11() const;

 private:
  double inner_;
  std::vector<double> interfaces_;
  std::vector<std::shared_ptr<const SpeedModel>> layers_;
  std::optional<std::vector<LayerDensity>> density_;
  double jump_tol_;
};

struct HerglotzViolation {
  double radius;
  double drho;  // d/dr (r / c) at the radius
};

struct HerglotzReport {
  bool passed = true;
  std::vector<HerglotzViolation> violations;
  double min_margin = 0.0;
  std::string regularity_note;  // set when a layer is only C^1
};

struct InterfaceJump {
  std::size_t interface;
  double radius;
  double rho_below;
  double rho_above;
  bool positive;  // rho_below < rho_above
};

struct DistributionalHerglotzReport {
  bool smooth_ok = true;
  bool passed = true;
  std::vector<InterfaceJump> jump_signs;
};

HerglotzReport check_smooth_herglotz(const LayeredProfile& profile, std::size_t grid_points = 512);
DistributionalHerglotzReport check_distributional_herglotz(const LayeredProfile& profile,
                                                           std::size_t grid_points = 512);

struct LogLayer {
  double a;
  double b;
};

// Layers with rho^2 = a_k + b_k ln r. Interfaces are listed outermost first.
LayeredProfile make_log_profile(const std::vector<LogLayer>& layers,
                                const std::vector<double>& interfaces, double inner_radius,
                                std::optional<std::vector<LayerDensity>> density = std::nullopt);

struct PhaseSample {
  double r;
  double rho;
};

// Per-layer samples of rho(r) on a uniform grid covering the closed layer,
// innermost layer first.
std::vector<std::vector<PhaseSample>> emit_phase_space(const LayeredProfile& profile,
                                                       std::size_t samples);

}  // namespace planetspec
