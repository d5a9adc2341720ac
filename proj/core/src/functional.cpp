#include "graphnls/functional.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "graphnls/error.hpp"
#include "graphnls/fixtures.hpp"

namespace graphnls {

void check_exponent(double p) {
  if (!(p > 2.0 && p < 6.0)) {
    std::ostringstream msg;
    msg << "exponent p = " << p << " outside the subcritical range (2, 6)";
    throw Error(ErrorKind::kInvalidArgument, msg.str());
  }
}

namespace {

template <class T>
double norm2(const T& z) {
  return std::norm(std::complex<double>(z));
}

template <class T>
double mass_impl(const BasicGraphFunction<T>& u) {
  const auto& v = u.values();
  double total = 0.0;
  for (const EdgeMesh& em : u.mesh().edges()) {
    double edge_total = 0.0;
    for (std::size_t i = 0; i + 1 < em.nodes(); ++i) {
      const std::complex<double> a = v[em.dofs[i]];
      const std::complex<double> b = v[em.dofs[i + 1]];
      edge_total += std::norm(a) + std::real(a * std::conj(b)) + std::norm(b);
    }
    total += edge_total * em.spacing / 3.0;
  }
  return total;
}

template <class T>
double gradient_impl(const BasicGraphFunction<T>& u) {
  const auto& v = u.values();
  double total = 0.0;
  for (const EdgeMesh& em : u.mesh().edges()) {
    double edge_total = 0.0;
    for (std::size_t i = 0; i + 1 < em.nodes(); ++i) edge_total += norm2(v[em.dofs[i + 1]] - v[em.dofs[i]]);
    total += edge_total / em.spacing;
  }
  return total;
}

double abs_pow(double modulus, double p) { return modulus == 0.0 ? 0.0 : std::pow(modulus, p); }

template <class T>
double lp_impl(const BasicGraphFunction<T>& u, double p) {
  const auto& v = u.values();
  double total = 0.0;
  for (const EdgeMesh& em : u.mesh().edges()) {
    double edge_total = 0.0;
    for (std::size_t i = 0; i + 1 < em.nodes(); ++i) {
      const T a = v[em.dofs[i]];
      const T b = v[em.dofs[i + 1]];
      const T m = (a + b) * 0.5;
      edge_total += abs_pow(std::abs(a), p) + 4.0 * abs_pow(std::abs(m), p) + abs_pow(std::abs(b), p);
    }
    total += edge_total * em.spacing / 6.0;
  }
  return total;
}

// |z|^(p-2) z
template <class T>
T focusing(const T& z, double p) {
  const double r = std::abs(z);
  return r == 0.0 ? T{0} : z * std::pow(r, p - 2.0);
}

template <class T>
Eigen::Matrix<T, Eigen::Dynamic, 1> load_impl(const BasicGraphFunction<T>& u, double p) {
  const auto& v = u.values();
  Eigen::Matrix<T, Eigen::Dynamic, 1> out = Eigen::Matrix<T, Eigen::Dynamic, 1>::Zero(v.size());
  for (const EdgeMesh& em : u.mesh().edges()) {
    const double w = em.spacing / 6.0;
    for (std::size_t i = 0; i + 1 < em.nodes(); ++i) {
      const Index ia = em.dofs[i];
      const Index ib = em.dofs[i + 1];
      const T fm = focusing<T>((v[ia] + v[ib]) * 0.5, p);
      out[ia] += w * (focusing<T>(v[ia], p) + 2.0 * fm);
      out[ib] += w * (focusing<T>(v[ib], p) + 2.0 * fm);
    }
  }
  zero_dirichlet(u.mesh(), out);
  return out;
}

template <class T>
EnergyBreakdown energy_impl(const BasicGraphFunction<T>& u, double p) {
  check_exponent(p);
  EnergyBreakdown e;
  e.p = p;
  e.kinetic = 0.5 * gradient_impl(u);
  e.potential = lp_impl(u, p) / p;
  e.total = e.kinetic - e.potential;
  return e;
}

}  // namespace

double mass(const GraphFunction& u) { return mass_impl(u); }
double mass(const ComplexGraphFunction& u) { return mass_impl(u); }
double gradient_norm_squared(const GraphFunction& u) { return gradient_impl(u); }
double gradient_norm_squared(const ComplexGraphFunction& u) { return gradient_impl(u); }
double lp_integral(const GraphFunction& u, double p) { return lp_impl(u, p); }
double lp_integral(const ComplexGraphFunction& u, double p) { return lp_impl(u, p); }
double max_abs(const GraphFunction& u) { return u.values().size() ? u.values().cwiseAbs().maxCoeff() : 0.0; }

EnergyBreakdown energy(const GraphFunction& u, double p) { return energy_impl(u, p); }
EnergyBreakdown energy(const ComplexGraphFunction& u, double p) { return energy_impl(u, p); }

Eigen::VectorXd nonlinear_load(const GraphFunction& u, double p) { return load_impl(u, p); }
Eigen::VectorXcd nonlinear_load(const ComplexGraphFunction& u, double p) { return load_impl(u, p); }

Eigen::VectorXd grad_energy(const GraphFunction& u, double p) {
  check_exponent(p);
  const auto& v = u.values();
  Eigen::VectorXd g = -load_impl(u, p);
  for (const EdgeMesh& em : u.mesh().edges()) {
    const double k = 1.0 / em.spacing;
    for (std::size_t i = 0; i + 1 < em.nodes(); ++i) {
      const Index ia = em.dofs[i];
      const Index ib = em.dofs[i + 1];
      const double flux = k * (v[ia] - v[ib]);
      g[ia] += flux;
      g[ib] -= flux;
    }
  }
  zero_dirichlet(u.mesh(), g);
  return g;
}

double gn_check(const GraphFunction& u, double p) {
  check_exponent(p);
  const double m = mass(u);
  const double k = gradient_norm_squared(u);
  if (!(m > 0.0) || !(k > 0.0)) throw Error(ErrorKind::kInvalidArgument, "GN ratio undefined: zero derivative");
  return lp_integral(u, p) / (std::pow(m, (p + 2.0) / 4.0) * std::pow(k, (p - 2.0) / 4.0));
}

double linf_check(const GraphFunction& u) {
  const double m = mass(u);
  const double k = gradient_norm_squared(u);
  if (!(m > 0.0) || !(k > 0.0)) throw Error(ErrorKind::kInvalidArgument, "L-infinity ratio undefined: zero derivative");
  const double top = max_abs(u);
  return top * top / (2.0 * std::sqrt(m) * std::sqrt(k));
}

namespace {

struct Element {
  double lo;
  double hi;
  double length;
};

std::vector<Element> elements_of(const GraphFunction& u) {
  std::vector<Element> out;
  for (const EdgeMesh& em : u.mesh().edges()) {
    for (std::size_t i = 0; i + 1 < em.nodes(); ++i) {
      const double a = u.values()[em.dofs[i]];
      const double b = u.values()[em.dofs[i + 1]];
      out.push_back(Element{std::min(a, b), std::max(a, b), em.spacing});
    }
  }
  return out;
}

void require_nonnegative(const GraphFunction& u) {
  if (u.values().size() && u.values().minCoeff() < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "negative values present");
  }
}

}  // namespace

GraphFunction rearrangement(const GraphFunction& u, std::optional<double> spacing) {
  require_nonnegative(u);
  const std::vector<Element> elements = elements_of(u);

  std::vector<double> levels;
  for (Index i = 0; i < u.values().size(); ++i) levels.push_back(u.values()[i]);
  levels.push_back(0.0);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (!(levels.front() > 0.0)) throw Error(ErrorKind::kInvalidArgument, "rearrangement of the zero function");

  // Sweep the levels downward accumulating |{u > t}| incrementally.
  // Points (s, t) of the rearranged profile, s increasing and t decreasing.
  std::vector<std::pair<double, double>> curve;
  {
    // Incremental state: elements sorted by hi and by lo (descending).
    std::vector<std::size_t> by_hi(elements.size());
    std::vector<std::size_t> by_lo(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) by_hi[i] = by_lo[i] = i;
    std::sort(by_hi.begin(), by_hi.end(), [&](auto a, auto b) { return elements[a].hi > elements[b].hi; });
    std::sort(by_lo.begin(), by_lo.end(), [&](auto a, auto b) { return elements[a].lo > elements[b].lo; });
    std::size_t ih = 0;
    std::size_t il = 0;
    double full = 0.0;  // lengths of elements with lo > t
    double w_sum = 0.0;
    double wh_sum = 0.0;  // active elements (lo <= t < hi)
    for (double t : levels) {
      while (ih < by_hi.size() && elements[by_hi[ih]].hi > t) {
        const Element& el = elements[by_hi[ih]];
        if (el.hi > el.lo) {
          const double w = el.length / (el.hi - el.lo);
          w_sum += w;
          wh_sum += w * el.hi;
        }
        ++ih;
      }
      double flat_here = 0.0;
      while (il < by_lo.size() && elements[by_lo[il]].lo > t) {
        const Element& el = elements[by_lo[il]];
        full += el.length;
        if (el.hi > el.lo) {
          const double w = el.length / (el.hi - el.lo);
          w_sum -= w;
          wh_sum -= w * el.hi;
        }
        ++il;
      }
      // Flat elements exactly at t count in |{u >= t}| only.
      for (std::size_t j = il; j < by_lo.size() && elements[by_lo[j]].lo == t; ++j) {
        const Element& el = elements[by_lo[j]];
        if (el.hi == el.lo) flat_here += el.length;
      }
      const double above = full + std::max(0.0, wh_sum - t * w_sum);
      curve.emplace_back(above, t);
      if (flat_here > 0.0 && t > 0.0) curve.emplace_back(above + flat_here, t);
    }
  }
  for (std::size_t i = 1; i < curve.size(); ++i) curve[i].first = std::max(curve[i].first, curve[i - 1].first);
  const double support = curve.back().first;
  if (!(support > 0.0)) throw Error(ErrorKind::kInvalidArgument, "rearrangement of a function with empty support");

  const double step = spacing.value_or(0.0625 * u.mesh().min_spacing());
  const double h = std::min(step, support / 10.0);
  auto mesh = build_mesh(fixtures::halfline(), h * (1.0 + 1e-12), support);

  return sample(mesh, [&](std::size_t, double s) {
    if (s <= 0.0) return curve.front().second;
    if (s >= support) return 0.0;
    auto it = std::lower_bound(curve.begin(), curve.end(), s,
                               [](const std::pair<double, double>& pt, double x) { return pt.first < x; });
    if (it == curve.begin()) return it->second;
    const auto& [s1, t1] = *it;
    const auto& [s0, t0] = *(it - 1);
    if (s1 <= s0) return t1;
    return t0 + (t1 - t0) * (s - s0) / (s1 - s0);
  });
}

namespace {

// Crossing count on an open band: elements with lo < t < hi, for t not a nodal value.
class BandCounter {
 public:
  explicit BandCounter(const std::vector<Element>& elements) {
    for (const Element& el : elements) {
      his_.push_back(el.hi);
      los_.push_back(el.lo);
    }
    std::sort(his_.begin(), his_.end());
    std::sort(los_.begin(), los_.end());
  }
  int operator()(double t) const { return greater(his_, t) - greater(los_, t); }

 private:
  static int greater(const std::vector<double>& v, double t) {
    return static_cast<int>(v.end() - std::upper_bound(v.begin(), v.end(), t));
  }
  std::vector<double> his_;
  std::vector<double> los_;
};

}  // namespace

int essential_preimage_count(const GraphFunction& u) {
  require_nonnegative(u);
  std::vector<double> values(u.values().data(), u.values().data() + u.values().size());
  values.push_back(0.0);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.size() < 2) throw Error(ErrorKind::kInvalidArgument, "preimage count of the zero function");
  const BandCounter count(elements_of(u));
  int best = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double mid = 0.5 * (values[i] + values[i + 1]);
    if (mid <= values[i] || mid >= values[i + 1]) continue;
    best = std::min(best, count(mid));
  }
  return best;
}

PreimageCounts preimage_count(const GraphFunction& u, std::span<const double> levels) {
  require_nonnegative(u);
  const double top = max_abs(u);
  const Mesh& mesh = u.mesh();
  const auto& v = u.values();

  PreimageCounts out;
  for (double t : levels) {
    if (!(t > 0.0 && t < top)) throw Error(ErrorKind::kInvalidArgument, "level outside (0, max u)");
    int count = 0;
    // A node at level t is skipped when all its elements are flat at t.
    std::vector<char> node_at_level(static_cast<std::size_t>(mesh.dofs()), 0);
    std::vector<char> node_has_slope(static_cast<std::size_t>(mesh.dofs()), 0);
    for (const EdgeMesh& em : mesh.edges()) {
      for (std::size_t i = 0; i + 1 < em.nodes(); ++i) {
        const Index ia = em.dofs[i];
        const Index ib = em.dofs[i + 1];
        const double a = v[ia] - t;
        const double b = v[ib] - t;
        if (a * b < 0.0) ++count;
        if (a == 0.0) node_at_level[static_cast<std::size_t>(ia)] = 1;
        if (b == 0.0) node_at_level[static_cast<std::size_t>(ib)] = 1;
        if (!(a == 0.0 && b == 0.0)) {
          node_has_slope[static_cast<std::size_t>(ia)] = 1;
          node_has_slope[static_cast<std::size_t>(ib)] = 1;
        }
      }
    }
    for (std::size_t i = 0; i < node_at_level.size(); ++i) {
      if (!node_at_level[i]) continue;
      // A node at level t is isolated, a plateau end, or a plateau interior.
      if (node_has_slope[i]) ++count;
    }
    out.counts.push_back(count);
  }
  out.essential_min = essential_preimage_count(u);
  return out;
}

std::vector<double> level_grid(const GraphFunction& u, int n) {
  const double top = max_abs(u);
  std::vector<double> out;
  for (int i = 1; i <= n; ++i) out.push_back(top * static_cast<double>(i) / static_cast<double>(n + 1));
  return out;
}

double ge3_bound(double nu, int preimages, const SolitonModel& model) {
  if (preimages < 1) throw Error(ErrorKind::kInvalidArgument, "preimage count must be at least 1");
  if (!(nu > 0.0)) throw Error(ErrorKind::kInvalidArgument, "mass must be positive");
  return -model.theta * std::pow(2.0 / preimages, 2.0 * model.beta) * std::pow(nu, 2.0 * model.beta + 1.0);
}

}  // namespace graphnls
