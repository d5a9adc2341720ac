#pragma once

#include <cstddef>
#include <memory>

#include "graphnls/mesh.hpp"

namespace graphnls {

/// Scaling data of the focusing NLS on the line for a subcritical exponent p.
/// beta = (p-2)/(6-p) and alpha = 2/(6-p) govern the mass scaling
/// u_mu(x) = mu^alpha u_1(mu^beta x); theta is minus the energy of the
/// unit-mass soliton, so the soliton of mass mu has energy -theta mu^(2 beta + 1).
struct SolitonModel {
  double p = 4.0;
  double beta = 1.0;
  double alpha = 1.0;
  double theta = 0.0;
  /// Multiplier of the unit-mass soliton.
  double unit_lambda = 0.0;
};

/// Throws kInvalidArgument unless 2 < p < 6. theta comes from adaptive
/// Gauss-Kronrod quadrature of the closed-form unit-mass soliton.
SolitonModel make_model(double p);

/// phi(x) = A sech(B x)^k with k = 2/(p-2), B = (p-2) sqrt(lambda) / 2 and
/// A = (p lambda / 2)^(1/(p-2)); solves phi'' + phi^(p-1) = lambda phi.
class SolitonProfile {
 public:
  SolitonProfile(double p, double lambda);

  double p() const noexcept { return p_; }
  double lambda() const noexcept { return lambda_; }
  double amplitude() const noexcept { return amplitude_; }
  double rate() const noexcept { return rate_; }
  /// Closed-form mass over the whole line.
  double mass() const noexcept;

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  /// phi'' + phi^(p-1) - lambda phi
  double residual(double x) const;

 private:
  double p_;
  double lambda_;
  double exponent_;
  double amplitude_;
  double rate_;
};

/// Centered soliton of mass mu on the line.
SolitonProfile soliton_profile(const SolitonModel& model, double mu);

struct EnergyLevels {
  double line = 0.0;      // -theta mu^(2 beta + 1)
  double halfline = 0.0;  // -2^(2 beta) theta mu^(2 beta + 1)
  /// Every ground-state level on a noncompact graph lies in [halfline, line].
  bool in_sandwich(double energy, double relative_tol) const noexcept;
};

EnergyLevels energy_levels(const SolitonModel& model, double mu);

/// Sharp Gagliardo-Nirenberg ratios ||u||_p^p / (||u||_2^(p/2+1) ||u'||_2^(p/2-1))
/// of the soliton on the line and the half-soliton on the halfline. The
/// halfline value bounds the ratio on every noncompact graph.
struct GnConstants {
  double line = 0.0;
  double halfline = 0.0;
};

GnConstants gn_constants(const SolitonModel& model);

/// Halfline truncation max(20, 8 / sqrt(lambda)) for the soliton of the given mass.
double auto_truncation_length(double mass, double p);

/// Compactly supported unit-mass approximation of the soliton: the profile
/// minus its value at a cut point, restricted to where it is positive and
/// rescaled to unit mass. The cut is the largest one whose energy stays
/// below -(1 - 0.9 eps) theta (bisection).
struct CutProfile {
  double epsilon = 0.0;
  double cut = 0.0;         // fraction of the peak subtracted
  double half_width = 0.0;  // support is [-half_width, half_width] at unit mass
  double scale = 1.0;       // mass renormalization factor
  double energy = 0.0;      // energy at unit mass
};

CutProfile cut_profile(const SolitonModel& model, double epsilon);

/// Smallest mass for which the competitor fits on an edge of this length.
double fitting_mass(const SolitonModel& model, double epsilon, double edge_length, bool terminal);

/// Competitor on a bounded edge: the cut soliton rescaled to mass mu and
/// centered on the edge, or for terminal edges the cut soliton of mass 2 mu
/// restricted to a half with the peak at the free tip. The result is
/// renormalized to discrete mass mu. `compression` > 1 builds the profile at
/// mass compression * mu before renormalizing (taller and narrower).
/// Throws kInvalidArgument "mass below fitting threshold" when the support
/// does not fit on the edge.
GraphFunction compact_competitor(const SolitonModel& model, double mu, double epsilon,
                                 std::shared_ptr<const Mesh> mesh, std::size_t edge, bool terminal,
                                 double compression = 1.0);

}  // namespace graphnls
