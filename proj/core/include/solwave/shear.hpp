/// Asymptotic shear flow model: the upstream data (g, c, d, U) and every
/// x-independent quantity derived from it -- mass flux, Froude number, the
/// depth ratio controlling the upper Froude bound, the asymptotic height
/// function and the vorticity function, plus the constant-vorticity closed
/// forms and the one-parameter family used for continuation.
#pragma once

#include <string>
#include <vector>

#include "solwave/expression.hpp"
#include "solwave/numerics.hpp"

namespace solwave {

class InvalidProfileError : public Error {
 public:
  using Error::Error;
};

class NormalizationError : public Error {
 public:
  NormalizationError(const std::string& msg, double measured)
      : Error(msg), measured_integral(measured) {}
  double measured_integral;
};

/// Horizontal velocity profile U(y) on [-d, 0], one of four representations.
/// Immutable after construction; evaluation is pure.
class UProfile {
 public:
  enum class Kind { Constant, Linear, Samples, Expression };

  UProfile() = default;
  static UProfile constant(double value);
  /// U(y) = surface + slope * y.
  static UProfile linear(double surface, double slope);
  /// Strictly increasing sample abscissae; monotone cubic interpolation.
  static UProfile samples(std::vector<double> y, std::vector<double> u);
  static UProfile expression(const std::string& text);

  double operator()(double y) const;
  double derivative(double y) const;

  Kind kind() const { return kind_; }
  double constant_value() const { return value_; }
  double linear_surface() const { return surface_; }
  double linear_slope() const { return slope_; }
  const std::vector<double>& sample_y() const { return sample_y_; }
  const std::vector<double>& sample_u() const { return sample_u_; }
  const std::string& expression_text() const { return expr_.text(); }

 private:
  Kind kind_ = Kind::Constant;
  double value_ = 0.0;
  double surface_ = 0.0, slope_ = 0.0;
  std::vector<double> sample_y_, sample_u_;
  num::PchipSpline sample_spline_;
  Expression expr_;
};

/// The problem data: gravity, wave speed, depth, and the shear profile.
struct ShearProfile {
  double g = 9.81;
  double c = 1.0;
  double d = 1.0;
  UProfile u;
};

/// Dense-sample validation record for the strict inequality sup U < c.
struct ProfileCheck {
  double min_relative_speed = 0.0;  // min over sample of (c - U), > 0
  double max_shear = 0.0;           // max |U'|
};

/// Validates profile invariants on a dense sample; throws
/// InvalidProfileError when sup U >= c. Returns the margins found.
ProfileCheck validate_profile(const ShearProfile& profile, int n_sample = 4097);

/// Mass flux m = int_{-d}^0 (c - U) dy, composite Simpson.
double compute_flux(const ShearProfile& profile, int n_sample = 1025);

/// Froude number from 1/F^2 = g int_{-d}^0 dy/(c-U)^2, composite Simpson.
double compute_froude(const ShearProfile& profile, int n_sample = 1025);

struct LambdaRatio {
  double value = 1.0;   // max over y of (c-U(0))/(c-U(y)), >= 1
  double argmax_y = 0.0;
};

/// Depth ratio controlling the upper Froude bound; dense grid maximization.
LambdaRatio compute_lambda_ratio(const ShearProfile& profile,
                                 int n_sample = 4097);

/// One-dimensional derived state on the uniform grid p in [-m, 0]:
/// the asymptotic height function, its derivative, the vorticity function
/// and its antiderivative, and the cumulative weight used by the integral
/// identities. All arrays share the grid `p`.
struct AsymptoticState {
  ShearProfile profile;
  int np = 0;

  double flux = 0.0;               // m
  double froude = 0.0;             // F from the velocity integral
  double froude_via_height = 0.0;  // F from g * int H_p^3 dp
  double lambda_ratio = 1.0;
  double lambda_ratio_argmax = 0.0;
  double bernoulli_const = 0.0;    // (U(0) - c)^2
  double min_relative_speed = 0.0; // dense-sample margin of sup U < c
  double relation_residual = 0.0;  // max |1/H_p^2 - lambda - 2*int(gamma)|

  std::vector<double> p;
  std::vector<double> height;              // H
  std::vector<double> height_p;            // H_p = 1/(c - U(H - d))
  std::vector<double> vorticity;           // -U_y at y = H - d
  std::vector<double> vorticity_integral;  // antiderivative, = 0 at p = 0
  std::vector<double> froude_weight;       // int_{-m}^p H_p^3; g*w(0) = 1/F^2

  double height_at(double pp) const;
  double height_p_at(double pp) const;
  double vorticity_at(double pp) const;
  double vorticity_integral_at(double pp) const;
  double y_at(double pp) const { return height_at(pp) - profile.d; }
  double p_at(double y) const;

  // Inverse maps between y and p, interpolated on a 4x-dense sample.
  num::PchipSpline y_of_p;
  num::PchipSpline p_of_y;
};

/// Builds the derived state; np >= 16. Throws InvalidProfileError on a
/// non-monotone stream-function coordinate (equivalently sup U >= c).
AsymptoticState build_asymptotic_state(const ShearProfile& profile, int np);

/// Shear flow c - U = froude * ustar for a fixed positive ustar satisfying
/// the normalization g * int ustar^-2 dy = 1 (checked to `tol`; throws
/// NormalizationError with the measured integral otherwise). The returned
/// profile has compute_froude == froude up to quadrature error.
ShearProfile family_profile(const UProfile& ustar, double froude, double g,
                            double d, double tol = 1e-6);

struct ConstVorticity {
  ShearProfile profile;
  double froude = 0.0;       // sqrt(lambda_star * (1 - gamma_star))
  double lambda_ratio = 0.0; // 1 / (1 - max(gamma_star, 0))
  double lambda_star = 0.0;
  double gamma_star = 0.0;
};

/// Linear shear flow in dimensionless form: c - U = sqrt(g d lambda_star) *
/// (1 + gamma_star * y / d). Requires gamma_star < 1 and lambda_star > 0.
ConstVorticity const_vorticity_params(double lambda_star, double gamma_star,
                                      double g, double d);

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
  bool applicable = true;
};

/// Closed-form constant-vorticity bounds on the Froude number and amplitude.
/// Amplitude rows carry the bound value in `rhs` with `lhs` NaN (no wave
/// attached); rows outside their gamma_star range are marked not applicable.
std::vector<BoundCheck> const_vorticity_bounds(double lambda_star,
                                               double gamma_star);

/// lambda / (g d) for display.
double lambda_star_of(const AsymptoticState& state);
/// Surface vorticity in dimensionless form, gamma(0) * d / sqrt(lambda).
double gamma_star_of(const AsymptoticState& state);

/// Parse / serialize the profile JSON schema:
/// {g, c, d, U: {kind: "constant"|"linear"|"samples"|"expression", ...}}.
ShearProfile profile_from_json_text(const std::string& text);
std::string profile_to_json_text(const ShearProfile& profile);
/// Parse {g, d, Ustar: {...}} used by the continuation family.
struct FamilyInput {
  double g = 0.0, d = 0.0;
  UProfile ustar;
};
FamilyInput family_from_json_text(const std::string& text);

}  // namespace solwave
