#include "graphnls/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "graphnls/error.hpp"
#include "graphnls/functional.hpp"

namespace graphnls {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12);
}

// sech(y), stable for large |y|.
double sech(double y) {
  const double e = std::exp(-std::abs(y));
  return 2.0 * e / (1.0 + e * e);
}

struct HalfIntegrals {
  double mass = 0.0;      // int_0^inf phi^2
  double gradient = 0.0;  // int_0^inf phi'^2
  double lp = 0.0;        // int_0^inf phi^p
};

HalfIntegrals half_integrals(const SolitonProfile& phi) {
  const double p = phi.p();
  HalfIntegrals out;
  out.mass = integrate([&](double x) { return std::pow(phi(x), 2.0); }, 0.0, kInf);
  out.gradient = integrate([&](double x) { return std::pow(phi.derivative(x), 2.0); }, 0.0, kInf);
  out.lp = integrate([&](double x) { return std::pow(phi(x), p); }, 0.0, kInf);
  return out;
}

SolitonModel compute_model(double p) {
  SolitonModel m;
  m.p = p;
  m.beta = (p - 2.0) / (6.0 - p);
  m.alpha = 2.0 / (6.0 - p);
  // mass(lambda) = mass(1) lambda^(1 / (2 beta))
  const double m1 = 2.0 * half_integrals(SolitonProfile(p, 1.0)).mass;
  m.unit_lambda = std::pow(m1, -2.0 * m.beta);
  const HalfIntegrals unit = half_integrals(SolitonProfile(p, m.unit_lambda));
  m.theta = -(unit.gradient - 2.0 * unit.lp / p);
  return m;
}

}  // namespace

SolitonModel make_model(double p) {
  check_exponent(p);
  static std::mutex lock;
  static std::map<double, SolitonModel> cache;
  std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, compute_model(p)).first;
  return it->second;
}

SolitonProfile::SolitonProfile(double p, double lambda) : p_(p), lambda_(lambda) {
  check_exponent(p);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorKind::kInvalidArgument, "soliton frequency must be positive");
  }
  exponent_ = 2.0 / (p - 2.0);
  rate_ = 0.5 * (p - 2.0) * std::sqrt(lambda);
  amplitude_ = std::pow(0.5 * p * lambda, 1.0 / (p - 2.0));
}

double SolitonProfile::mass() const noexcept {
  const double a = 2.0 * exponent_;
  const double sech_integral = std::sqrt(M_PI) * std::tgamma(0.5 * a) / std::tgamma(0.5 * (a + 1.0));
  return amplitude_ * amplitude_ / rate_ * sech_integral;
}

double SolitonProfile::operator()(double x) const { return amplitude_ * std::pow(sech(rate_ * x), exponent_); }

double SolitonProfile::derivative(double x) const {
  const double y = rate_ * x;
  return -amplitude_ * exponent_ * rate_ * std::pow(sech(y), exponent_) * std::tanh(y);
}

double SolitonProfile::second_derivative(double x) const {
  const double y = rate_ * x;
  const double s = sech(y);
  const double t = std::tanh(y);
  return amplitude_ * exponent_ * rate_ * rate_ * std::pow(s, exponent_) * (exponent_ * t * t - s * s);
}

double SolitonProfile::residual(double x) const {
  const double v = (*this)(x);
  return second_derivative(x) + std::pow(v, p_ - 1.0) - lambda_ * v;
}

SolitonProfile soliton_profile(const SolitonModel& model, double mu) {
  if (!(mu > 0.0)) throw Error(ErrorKind::kInvalidArgument, "mass must be positive");
  return SolitonProfile(model.p, model.unit_lambda * std::pow(mu, 2.0 * model.beta));
}

bool EnergyLevels::in_sandwich(double energy, double relative_tol) const noexcept {
  return energy >= halfline - relative_tol * std::abs(halfline) && energy <= line + relative_tol * std::abs(line);
}

EnergyLevels energy_levels(const SolitonModel& model, double mu) {
  EnergyLevels out;
  out.line = -model.theta * std::pow(mu, 2.0 * model.beta + 1.0);
  out.halfline = std::pow(2.0, 2.0 * model.beta) * out.line;
  return out;
}

GnConstants gn_constants(const SolitonModel& model) {
  const double p = model.p;
  const HalfIntegrals half = half_integrals(SolitonProfile(p, 1.0));
  auto ratio = [p](double lp, double mass, double gradient) {
    return lp / (std::pow(mass, (p + 2.0) / 4.0) * std::pow(gradient, (p - 2.0) / 4.0));
  };
  GnConstants out;
  out.line = ratio(2.0 * half.lp, 2.0 * half.mass, 2.0 * half.gradient);
  out.halfline = ratio(half.lp, half.mass, half.gradient);
  return out;
}

double auto_truncation_length(double mass, double p) {
  const SolitonModel model = make_model(p);
  const double lambda = soliton_profile(model, mass).lambda();
  return std::max(20.0, 8.0 / std::sqrt(lambda));
}

namespace {

struct CutShape {
  double half_width = 0.0;
  double scale = 1.0;
  double energy = 0.0;
};

CutShape cut_shape(const SolitonModel& model, const SolitonProfile& phi, double cut) {
  const double p = model.p;
  const double level = cut * phi.amplitude();
  CutShape out;
  out.half_width = cut > 0.0 ? std::acosh(std::pow(cut, -1.0 / (2.0 / (p - 2.0)))) / phi.rate() : kInf;
  auto f = [&](double x) { return std::max(0.0, phi(x) - level); };
  const double mass = 2.0 * integrate([&](double x) { return f(x) * f(x); }, 0.0, out.half_width);
  const double gradient =
      2.0 * integrate([&](double x) { return std::pow(phi.derivative(x), 2.0); }, 0.0, out.half_width);
  const double lp = 2.0 * integrate([&](double x) { return std::pow(f(x), p); }, 0.0, out.half_width);
  out.scale = 1.0 / std::sqrt(mass);
  out.energy = 0.5 * out.scale * out.scale * gradient - std::pow(out.scale, p) * lp / p;
  return out;
}

}  // namespace

CutProfile cut_profile(const SolitonModel& model, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error(ErrorKind::kInvalidArgument, "epsilon must lie in (0, 1)");
  const SolitonProfile phi = soliton_profile(model, 1.0);
  const double target = -(1.0 - 0.9 * epsilon) * model.theta;
  double lo = 0.0;
  double hi = 0.999;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cut_shape(model, phi, mid).energy <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!(lo > 0.0)) throw Error(ErrorKind::kNumerical, "no admissible cut for the soliton");
  const CutShape shape = cut_shape(model, phi, lo);
  CutProfile out;
  out.epsilon = epsilon;
  out.cut = lo;
  out.half_width = shape.half_width;
  out.scale = shape.scale;
  out.energy = shape.energy;
  return out;
}

double fitting_mass(const SolitonModel& model, double epsilon, double edge_length, bool terminal) {
  if (!(edge_length > 0.0)) throw Error(ErrorKind::kInvalidArgument, "edge length must be positive");
  const double w = cut_profile(model, epsilon).half_width;
  if (terminal) return 0.5 * std::pow(w / edge_length, 1.0 / model.beta);
  return std::pow(2.0 * w / edge_length, 1.0 / model.beta);
}

GraphFunction compact_competitor(const SolitonModel& model, double mu, double epsilon,
                                 std::shared_ptr<const Mesh> mesh, std::size_t edge, bool terminal,
                                 double compression) {
  if (!(mu > 0.0)) throw Error(ErrorKind::kInvalidArgument, "mass must be positive");
  if (!(compression >= 1.0)) throw Error(ErrorKind::kInvalidArgument, "compression must be at least 1");
  const MetricGraph& graph = mesh->graph();
  const Edge& e = graph.edge(edge);
  if (e.halfline()) throw Error(ErrorKind::kInvalidArgument, "competitor requires a bounded edge");

  const CutProfile cut = cut_profile(model, epsilon);
  const SolitonProfile unit = soliton_profile(model, 1.0);
  const double level = cut.cut * unit.amplitude();
  const double m = compression * (terminal ? 2.0 * mu : mu);
  const double amp = std::pow(m, model.alpha) * cut.scale;
  const double squeeze = std::pow(m, model.beta);
  const double half = cut.half_width / squeeze;

  Placement pl;
  pl.edge = edge;
  if (terminal) {
    const auto tip = terminal_tip(graph, edge);
    if (!tip) throw Error(ErrorKind::kInvalidArgument, "edge '" + e.id + "' is not terminal");
    if (half > e.length) throw Error(ErrorKind::kInvalidArgument, "mass below fitting threshold");
    const bool tip_at_start = *tip == graph.from_vertex(edge);
    const double origin = tip_at_start ? 0.0 : e.length;
    pl.begin = tip_at_start ? 0.0 : e.length - half;
    pl.end = tip_at_start ? half : e.length;
    pl.profile = [=](double x) { return amp * std::max(0.0, unit(squeeze * (x - origin)) - level); };
  } else {
    if (2.0 * half > e.length) throw Error(ErrorKind::kInvalidArgument, "mass below fitting threshold");
    const double center = 0.5 * e.length;
    pl.begin = center - half;
    pl.end = center + half;
    pl.profile = [=](double x) { return amp * std::max(0.0, unit(squeeze * (x - center)) - level); };
  }
  GraphFunction out = interpolate(mesh, std::span<const Placement>(&pl, 1));
  const double discrete = mass(out);
  if (!(discrete > 0.0)) throw Error(ErrorKind::kNumerical, "competitor not resolved by the mesh");
  out.values() *= std::sqrt(mu / discrete);
  return out;
}

}  // namespace graphnls
