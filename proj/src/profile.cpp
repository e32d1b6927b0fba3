#include "planetspec/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

// pchip.hpp in Boost 1.74 calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include "planetspec/common.hpp"

namespace planetspec {

double SpeedModel::d2c(double r) const {
  const double h = 1e-5 * std::max(r, 1e-3);
  return (dc(r + h) - dc(r - h)) / (2.0 * h);
}

std::optional<double> SpeedModel::rho_inverse(double, double, double) const { return std::nullopt; }
std::optional<double> SpeedModel::radial_action(double, double, double) const {
  return std::nullopt;
}

// ---- constant ----

ConstantSpeed::ConstantSpeed(double c) : c_(c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("constant speed must be positive");
}

nlohmann::json ConstantSpeed::describe() const { return {{"model", "constant"}, {"c", c_}}; }

std::optional<double> ConstantSpeed::rho_inverse(double p, double lo, double hi) const {
  const double r = p * c_;
  if (r < lo || r > hi) return std::nullopt;
  return r;
}

std::optional<double> ConstantSpeed::radial_action(double r_lo, double r_hi, double p) const {
  const double d = p * c_;
  const double mid = 0.5 * (r_lo + r_hi);
  if (mid >= d) {
    auto F = [d](double r) {
      const double s = std::sqrt(std::max(r * r - d * d, 0.0));
      return s - d * std::acos(std::min(1.0, d / r));
    };
    return (F(r_hi) - F(r_lo)) / c_;
  }
  auto G = [d](double r) {
    const double s = std::sqrt(std::max(d * d - r * r, 0.0));
    return s - d * std::log((d + s) / r);
  };
  return (G(r_hi) - G(r_lo)) / c_;
}

// ---- log ----

LogSpeed::LogSpeed(double a, double b) : a_(a), b_(b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("log profile needs a > 0 and b > 0");
}

double LogSpeed::c(double r) const { return r / std::sqrt(a_ + b_ * std::log(r)); }

double LogSpeed::dc(double r) const {
  const double g = a_ + b_ * std::log(r);
  return 1.0 / std::sqrt(g) - 0.5 * b_ / (g * std::sqrt(g));
}

double LogSpeed::d2c(double r) const {
  const double g = a_ + b_ * std::log(r);
  const double sg = std::sqrt(g);
  return -0.5 * b_ / (r * g * sg) + 0.75 * b_ * b_ / (r * g * g * sg);
}

nlohmann::json LogSpeed::describe() const { return {{"model", "log"}, {"a", a_}, {"b", b_}}; }

std::optional<double> LogSpeed::rho_inverse(double p, double lo, double hi) const {
  const double r = std::exp((p * p - a_) / b_);
  if (r < lo || r > hi) return std::nullopt;
  return r;
}

std::optional<double> LogSpeed::radial_action(double r_lo, double r_hi, double p) const {
  const double u_lo = a_ + b_ * std::log(r_lo) - p * p;
  const double u_hi = a_ + b_ * std::log(r_hi) - p * p;
  const double k = 2.0 / (3.0 * b_);
  if (u_lo + u_hi >= 0.0) {
    return k * (std::pow(std::max(u_hi, 0.0), 1.5) - std::pow(std::max(u_lo, 0.0), 1.5));
  }
  return k * (std::pow(std::max(-u_lo, 0.0), 1.5) - std::pow(std::max(-u_hi, 0.0), 1.5));
}

// ---- polynomial in ln r ----

LnPolySpeed::LnPolySpeed(std::vector<double> coeffs) : k_(std::move(coeffs)) {
  if (k_.empty()) throw InvalidArgument("lnpoly needs at least one coefficient");
}

double LnPolySpeed::c(double r) const {
  const double L = std::log(r);
  double v = 0.0;
  for (std::size_t i = k_.size(); i-- > 0;) v = v * L + k_[i];
  return v;
}

double LnPolySpeed::dc(double r) const {
  const double L = std::log(r);
  double v = 0.0;
  for (std::size_t i = k_.size(); i-- > 1;) v = v * L + static_cast<double>(i) * k_[i];
  return v / r;
}

double LnPolySpeed::d2c(double r) const {
  // d/dr [P'(L) / r] = (P''(L) - P'(L)) / r^2
  const double L = std::log(r);
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t i = k_.size(); i-- > 1;) d1 = d1 * L + static_cast<double>(i) * k_[i];
  for (std::size_t i = k_.size(); i-- > 2;)
    d2 = d2 * L + static_cast<double>(i * (i - 1)) * k_[i];
  return (d2 - d1) / (r * r);
}

nlohmann::json LnPolySpeed::describe() const { return {{"model", "lnpoly"}, {"coeffs", k_}}; }

// ---- polynomial in r ----

PolySpeed::PolySpeed(std::vector<double> coeffs) : k_(std::move(coeffs)) {
  if (k_.empty()) throw InvalidArgument("poly needs at least one coefficient");
}

double PolySpeed::c(double r) const {
  double v = 0.0;
  for (std::size_t i = k_.size(); i-- > 0;) v = v * r + k_[i];
  return v;
}

double PolySpeed::dc(double r) const {
  double v = 0.0;
  for (std::size_t i = k_.size(); i-- > 1;) v = v * r + static_cast<double>(i) * k_[i];
  return v;
}

double PolySpeed::d2c(double r) const {
  double v = 0.0;
  for (std::size_t i = k_.size(); i-- > 2;) v = v * r + static_cast<double>(i * (i - 1)) * k_[i];
  return v;
}

nlohmann::json PolySpeed::describe() const { return {{"model", "poly"}, {"coeffs", k_}}; }

// ---- power ----

PowerSpeed::PowerSpeed(double c0, double exponent) : c0_(c0), e_(exponent) {
  if (!(c0 > 0.0)) throw InvalidArgument("power speed needs c0 > 0");
}
double PowerSpeed::c(double r) const { return c0_ * std::pow(r, e_); }
double PowerSpeed::dc(double r) const { return c0_ * e_ * std::pow(r, e_ - 1.0); }
double PowerSpeed::d2c(double r) const { return c0_ * e_ * (e_ - 1.0) * std::pow(r, e_ - 2.0); }
nlohmann::json PowerSpeed::describe() const {
  return {{"model", "power"}, {"c0", c0_}, {"exponent", e_}};
}

// ---- pchip spline ----

struct SplineSpeed::Impl {
  boost::math::interpolators::pchip<std::vector<double>> spline;
};

SplineSpeed::SplineSpeed(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  if (knots_.size() < 4) throw InvalidArgument("spline needs at least four knots");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (i > 0 && !(knots_[i].first > knots_[i - 1].first))
      throw InvalidArgument("spline knots must have strictly increasing radii");
    if (!(knots_[i].second > 0.0)) throw InvalidArgument("spline speeds must be positive");
    x.push_back(knots_[i].first);
    y.push_back(knots_[i].second);
  }
  impl_ = std::make_shared<Impl>(Impl{{std::move(x), std::move(y)}});
}

double SplineSpeed::c(double r) const {
  const double lo = knots_.front().first, hi = knots_.back().first;
  return impl_->spline(std::clamp(r, lo, hi));
}

double SplineSpeed::dc(double r) const {
  const double lo = knots_.front().first, hi = knots_.back().first;
  return impl_->spline.prime(std::clamp(r, lo, hi));
}

nlohmann::json SplineSpeed::describe() const {
  nlohmann::json k = nlohmann::json::array();
  for (const auto& [r, c] : knots_) k.push_back({r, c});
  return {{"model", "spline"}, {"knots", k}};
}

// ---- scaled ----

ScaledSpeed::ScaledSpeed(std::shared_ptr<const SpeedModel> inner, double factor)
    : inner_(std::move(inner)), f_(factor) {
  if (!inner_ || !(factor > 0.0)) throw InvalidArgument("scaled speed needs a positive factor");
}

nlohmann::json ScaledSpeed::describe() const {
  return {{"model", "scaled"}, {"factor", f_}, {"inner", inner_->describe()}};
}

std::optional<double> ScaledSpeed::rho_inverse(double p, double lo, double hi) const {
  return inner_->rho_inverse(p * f_, lo, hi);
}

std::optional<double> ScaledSpeed::radial_action(double r_lo, double r_hi, double p) const {
  auto v = inner_->radial_action(r_lo, r_hi, p * f_);
  if (!v) return v;
  return *v / f_;
}

// ---- layered profile ----

LayeredProfile::LayeredProfile(double inner_radius, std::vector<double> interfaces,
                               std::vector<std::shared_ptr<const SpeedModel>> layers,
                               std::optional<std::vector<LayerDensity>> density, double jump_tol)
    : inner_(inner_radius),
      interfaces_(std::move(interfaces)),
      layers_(std::move(layers)),
      density_(std::move(density)),
      jump_tol_(jump_tol) {
  if (!(inner_ >= 0.0 && inner_ < 1.0)) throw InvalidArgument("inner radius must lie in [0, 1)");
  if (layers_.size() != interfaces_.size() + 1)
    throw InvalidArgument("need exactly one more layer than interfaces");
  double prev = 1.0;
  for (double r : interfaces_) {
    if (!(r < prev && r > inner_))
      throw InvalidArgument("interfaces must be strictly decreasing inside (R, 1)");
    prev = r;
  }
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    if (!layers_[k]) throw InvalidArgument("missing layer model");
    const double top = layer_top(k), bot = layer_bottom(k);
    const int n = 16;
    for (int j = 0; j <= n; ++j) {
      double r = bot + (top - bot) * j / n;
      if (r == 0.0) r = 1e-12 * top;
      const double v = layers_[k]->c(r);
      if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidArgument("speed must be positive and finite on layer " + std::to_string(k));
    }
  }
  for (std::size_t i = 0; i < interfaces_.size(); ++i) {
    const double r = interfaces_[i];
    if (!(std::abs(layers_[i]->c(r) - layers_[i + 1]->c(r)) > jump_tol_))
      throw InvalidArgument("interface " + std::to_string(i) + " has no speed jump");
  }
  if (density_) {
    if (density_->size() != layers_.size())
      throw InvalidArgument("density model needs one entry per layer");
    for (std::size_t k = 0; k < layers_.size(); ++k) {
      const auto& d = (*density_)[k];
      if (!(d.density > 0.0)) throw InvalidArgument("density must be positive");
      if (d.mu) {
        if (!(*d.mu > 0.0)) throw InvalidArgument("shear modulus must be positive");
        const double top = layer_top(k), bot = layer_bottom(k);
        for (int j = 0; j <= 16; ++j) {
          double r = bot + (top - bot) * j / 16;
          if (r == 0.0) r = 1e-12 * top;
          if (std::abs(layers_[k]->c(r) - std::sqrt(*d.mu / d.density)) >= 1e-12)
            throw InvalidArgument("density model inconsistent with c = sqrt(mu / rho) on layer " +
                                  std::to_string(k));
        }
      }
    }
  }
}

double LayeredProfile::layer_top(std::size_t k) const {
  if (k >= layers_.size()) throw InvalidArgument("layer index out of range");
  return k == 0 ? 1.0 : interfaces_[k - 1];
}

double LayeredProfile::layer_bottom(std::size_t k) const {
  if (k >= layers_.size()) throw InvalidArgument("layer index out of range");
  return k == interfaces_.size() ? inner_ : interfaces_[k];
}

std::size_t LayeredProfile::layer_at(double r, Side side) const {
  if (!(r > inner_ && r <= 1.0)) {
    std::ostringstream os;
    os << "radius " << r << " outside (" << inner_ << ", 1]";
    throw InvalidArgument(os.str());
  }
  for (std::size_t i = 0; i < interfaces_.size(); ++i) {
    if (r == interfaces_[i]) return side == Side::Above ? i : i + 1;
    if (r > interfaces_[i]) return i;
  }
  return interfaces_.size();
}

double LayeredProfile::layer_rho(std::size_t k, double r) const { return r / layers_[k]->c(r); }

double LayeredProfile::layer_drho(std::size_t k, double r) const {
  const double c = layers_[k]->c(r);
  return (c - r * layers_[k]->dc(r)) / (c * c);
}

double LayeredProfile::layer_d2rho(std::size_t k, double r) const {
  const double c = layers_[k]->c(r), c1 = layers_[k]->dc(r), c2 = layers_[k]->d2c(r);
  return -r * c2 / (c * c) - 2.0 * c1 * (c - r * c1) / (c * c * c);
}

double LayeredProfile::c(double r, Side side) const { return layer_c(layer_at(r, side), r); }
double LayeredProfile::rho(double r, Side side) const { return layer_rho(layer_at(r, side), r); }

double LayeredProfile::layer_mu(std::size_t k, double r) const {
  if (density_ && (*density_)[k].mu) return *(*density_)[k].mu;
  const double c = layers_[k]->c(r);
  return layer_density(k) * c * c;
}

double LayeredProfile::layer_density(std::size_t k) const {
  return density_ ? (*density_)[k].density : 1.0;
}

LayeredProfile LayeredProfile::with_interface(std::size_t i, double r) const {
  if (i >= interfaces_.size()) throw InvalidArgument("invalid interface index");
  auto moved = interfaces_;
  moved[i] = r;
  return LayeredProfile(inner_, moved, layers_, density_, jump_tol_);
}

nlohmann::json LayeredProfile::to_json() const {
  nlohmann::json j;
  j["inner_radius"] = inner_;
  j["interfaces"] = interfaces_;
  j["layers"] = nlohmann::json::array();
  for (const auto& m : layers_) j["layers"].push_back(m->describe());
  if (density_) {
    j["density"] = nlohmann::json::array();
    for (const auto& d : *density_) {
      nlohmann::json e{{"rho", d.density}};
      if (d.mu) e["mu"] = *d.mu;
      j["density"].push_back(e);
    }
  }
  return j;
}

std::uint64_t LayeredProfile::hash() const {
  // FNV-1a over the canonical JSON text; stable across runs and platforms.
  const std::string s = to_json().dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

bool LayeredProfile::is_c11() const {
  return std::all_of(layers_.begin(), layers_.end(), [](const auto& m) { return m->is_c11(); });
}

// ---- checks ----

HerglotzReport check_smooth_herglotz(const LayeredProfile& profile, std::size_t grid_points) {
  if (grid_points < 2) throw InvalidArgument("need at least 2 grid points per layer");
  HerglotzReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < profile.num_layers(); ++k) {
    const double top = profile.layer_top(k), bot = profile.layer_bottom(k);
    for (std::size_t j = 1; j <= grid_points; ++j) {
      const double r = bot + (top - bot) * static_cast<double>(j) / static_cast<double>(grid_points + 1);
      const double d = profile.layer_drho(k, r);
      rep.min_margin = std::min(rep.min_margin, d);
      if (!(d > 0.0)) rep.violations.push_back({r, d});
    }
  }
  rep.passed = rep.violations.empty();
  if (!profile.is_c11())
    rep.regularity_note = "spline layer is only C^1; C^{1,1} is not guaranteed";
  return rep;
}

DistributionalHerglotzReport check_distributional_herglotz(const LayeredProfile& profile,
                                                           std::size_t grid_points) {
  DistributionalHerglotzReport rep;
  rep.smooth_ok = check_smooth_herglotz(profile, grid_points).passed;
  bool jumps_ok = true;
  for (std::size_t i = 0; i < profile.num_interfaces(); ++i) {
    const double r = profile.interfaces()[i];
    InterfaceJump j{i, r, profile.layer_rho(i + 1, r), profile.layer_rho(i, r), false};
    j.positive = j.rho_below < j.rho_above;
    jumps_ok = jumps_ok && j.positive;
    rep.jump_signs.push_back(j);
  }
  rep.passed = rep.smooth_ok && jumps_ok;
  return rep;
}

LayeredProfile make_log_profile(const std::vector<LogLayer>& layers,
                                const std::vector<double>& interfaces, double inner_radius,
                                std::optional<std::vector<LayerDensity>> density) {
  if (layers.size() != interfaces.size() + 1)
    throw InvalidArgument("need exactly one more layer than interfaces");
  std::vector<std::shared_ptr<const SpeedModel>> models;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const double bot = k == interfaces.size() ? inner_radius : interfaces[k];
    // b > 0, so the radicand is smallest at the bottom of the layer.
    if (!(layers[k].a > 0.0 && layers[k].b > 0.0))
      throw InvalidArgument("log layer needs a > 0 and b > 0");
    if (!(bot > 0.0) || !(layers[k].a + layers[k].b * std::log(bot) > 0.0))
      throw InvalidArgument("log layer radicand a + b ln r is not positive on layer " +
                            std::to_string(k));
    models.push_back(std::make_shared<LogSpeed>(layers[k].a, layers[k].b));
  }
  return LayeredProfile(inner_radius, interfaces, std::move(models), std::move(density));
}

std::vector<std::vector<PhaseSample>> emit_phase_space(const LayeredProfile& profile,
                                                       std::size_t samples) {
  if (samples < 2) throw InvalidArgument("need at least 2 samples per layer");
  std::vector<std::vector<PhaseSample>> out;
  for (std::size_t k = profile.num_layers(); k-- > 0;) {
    const double top = profile.layer_top(k), bot = profile.layer_bottom(k);
    std::vector<PhaseSample> t;
    for (std::size_t j = 0; j < samples; ++j) {
      const double r = bot + (top - bot) * static_cast<double>(j) / static_cast<double>(samples - 1);
      t.push_back({r, r == 0.0 ? 0.0 : profile.layer_rho(k, r)});
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace planetspec
