#include "solwave/shear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace solwave {

namespace {

// Uniform grid with exact endpoints: x_k = a * (n-1-k)/(n-1) + b * k/(n-1).
std::vector<double> uniform_grid(double a, double b, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    x[static_cast<std::size_t>(k)] = a * (1.0 - t) + b * t;
  }
  x.front() = a;
  x.back() = b;
  return x;
}

}  // namespace

UProfile UProfile::constant(double value) {
  UProfile u;
  u.kind_ = Kind::Constant;
  u.value_ = value;
  return u;
}

UProfile UProfile::linear(double surface, double slope) {
  UProfile u;
  u.kind_ = Kind::Linear;
  u.surface_ = surface;
  u.slope_ = slope;
  return u;
}

UProfile UProfile::samples(std::vector<double> y, std::vector<double> u_vals) {
  if (y.size() != u_vals.size() || y.size() < 2)
    throw InvalidProfileError("sample profile needs matching y/U arrays");
  UProfile u;
  u.kind_ = Kind::Samples;
  u.sample_y_ = y;
  u.sample_u_ = u_vals;
  u.sample_spline_ = num::PchipSpline(std::move(y), std::move(u_vals));
  return u;
}

UProfile UProfile::expression(const std::string& text) {
  UProfile u;
  u.kind_ = Kind::Expression;
  u.expr_ = Expression(text);
  return u;
}

double UProfile::operator()(double y) const {
  switch (kind_) {
    case Kind::Constant: return value_;
    case Kind::Linear: return surface_ + slope_ * y;
    case Kind::Samples: return sample_spline_(y);
    case Kind::Expression: return expr_(y);
  }
  return 0.0;
}

double UProfile::derivative(double y) const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Linear: return slope_;
    case Kind::Samples: return sample_spline_.derivative(y);
    case Kind::Expression: {
      const double h = 1e-6 * std::max(1.0, std::abs(y));
      return (expr_(y + h) - expr_(y - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

ProfileCheck validate_profile(const ShearProfile& profile, int n_sample) {
  if (!(profile.d > 0.0))
    throw InvalidProfileError("depth d must be positive");
  if (!(profile.c > 0.0))
    throw InvalidProfileError("wave speed c must be positive");
  if (!(profile.g > 0.0))
    throw InvalidProfileError("gravity g must be positive");
  if (profile.u.kind() == UProfile::Kind::Samples) {
    const auto& ys = profile.u.sample_y();
    const double tol = 1e-9 * profile.d;
    if (ys.front() > -profile.d + tol || ys.back() < -tol)
      throw InvalidProfileError("sample profile must cover [-d, 0]");
  }
  ProfileCheck check;
  check.min_relative_speed = std::numeric_limits<double>::infinity();
  const auto y = uniform_grid(-profile.d, 0.0, n_sample);
  for (double yk : y) {
    const double w = profile.c - profile.u(yk);
    check.min_relative_speed = std::min(check.min_relative_speed, w);
    check.max_shear = std::max(check.max_shear,
                               std::abs(profile.u.derivative(yk)));
  }
  if (!(check.min_relative_speed > 0.0)) {
    std::ostringstream os;
    os << "invalid profile: sup U >= c (min of c - U on " << n_sample
       << " samples is " << check.min_relative_speed << ")";
    throw InvalidProfileError(os.str());
  }
  if (!std::isfinite(check.max_shear))
    throw InvalidProfileError("invalid profile: unbounded shear U'");
  return check;
}

double compute_flux(const ShearProfile& profile, int n_sample) {
  validate_profile(profile, n_sample);
  const auto y = uniform_grid(-profile.d, 0.0, n_sample);
  std::vector<double> f(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) f[k] = profile.c - profile.u(y[k]);
  return num::integrate_simpson(f, profile.d / (n_sample - 1));
}

double compute_froude(const ShearProfile& profile, int n_sample) {
  validate_profile(profile, n_sample);
  const auto y = uniform_grid(-profile.d, 0.0, n_sample);
  std::vector<double> f(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double w = profile.c - profile.u(y[k]);
    f[k] = 1.0 / (w * w);
  }
  const double inv_f2 =
      profile.g * num::integrate_simpson(f, profile.d / (n_sample - 1));
  return 1.0 / std::sqrt(inv_f2);
}

LambdaRatio compute_lambda_ratio(const ShearProfile& profile, int n_sample) {
  validate_profile(profile, n_sample);
  const double w0 = profile.c - profile.u(0.0);
  const auto y = uniform_grid(-profile.d, 0.0, n_sample);
  LambdaRatio result;
  result.value = 0.0;
  for (double yk : y) {
    const double r = w0 / (profile.c - profile.u(yk));
    if (r > result.value) {
      result.value = r;
      result.argmax_y = yk;
    }
  }
  return result;
}

AsymptoticState build_asymptotic_state(const ShearProfile& profile, int np) {
  if (np < 16) throw Error("build_asymptotic_state: np must be >= 16");
  const int nd = 4 * (np - 1) + 1;
  const auto check = validate_profile(profile, nd);

  AsymptoticState st;
  st.profile = profile;
  st.np = np;
  st.min_relative_speed = check.min_relative_speed;

  const auto y_dense = uniform_grid(-profile.d, 0.0, nd);
  const double dy = profile.d / (nd - 1);
  std::vector<double> w_dense(y_dense.size());
  for (std::size_t k = 0; k < y_dense.size(); ++k)
    w_dense[k] = profile.c - profile.u(y_dense[k]);

  // p(y) = int_{-d}^y (c - U) ds - m, strictly increasing since c - U > 0.
  auto accum = num::cumulative_integral(w_dense, dy);
  st.flux = accum.back();
  std::vector<double> p_dense(accum.size());
  for (std::size_t k = 0; k < accum.size(); ++k)
    p_dense[k] = accum[k] - st.flux;
  p_dense.front() = -st.flux;
  p_dense.back() = 0.0;
  for (std::size_t k = 1; k < p_dense.size(); ++k)
    if (!(p_dense[k] > p_dense[k - 1]))
      throw InvalidProfileError(
          "invalid profile: stream-function coordinate is not monotone");

  st.y_of_p = num::PchipSpline(p_dense, y_dense);
  st.p_of_y = num::PchipSpline(y_dense, p_dense);

  st.p = uniform_grid(-st.flux, 0.0, np);
  st.height.resize(st.p.size());
  st.height_p.resize(st.p.size());
  st.vorticity.resize(st.p.size());
  st.vorticity_integral.resize(st.p.size());
  for (std::size_t i = 0; i < st.p.size(); ++i) {
    const double yi = st.y_of_p(st.p[i]);
    const double wi = profile.c - profile.u(yi);
    st.height[i] = yi + profile.d;
    st.height_p[i] = 1.0 / wi;
    st.vorticity[i] = -profile.u.derivative(yi);
  }
  st.height.front() = 0.0;
  st.height.back() = profile.d;

  const double w_surface = profile.c - profile.u(0.0);
  st.bernoulli_const = w_surface * w_surface;
  for (std::size_t i = 0; i < st.p.size(); ++i) {
    const double wi = 1.0 / st.height_p[i];
    st.vorticity_integral[i] = 0.5 * (wi * wi - st.bernoulli_const);
  }

  const double dp = st.flux / (np - 1);
  std::vector<double> hp3(st.p.size());
  for (std::size_t i = 0; i < st.p.size(); ++i)
    hp3[i] = st.height_p[i] * st.height_p[i] * st.height_p[i];
  st.froude_weight = num::cumulative_integral(hp3, dp);
  st.froude_via_height =
      1.0 / std::sqrt(profile.g * num::integrate_simpson(hp3, dp));

  std::vector<double> inv_w2(w_dense.size());
  for (std::size_t k = 0; k < w_dense.size(); ++k)
    inv_w2[k] = 1.0 / (w_dense[k] * w_dense[k]);
  st.froude =
      1.0 / std::sqrt(profile.g * num::integrate_simpson(inv_w2, dy));

  const auto lam = compute_lambda_ratio(profile, nd);
  st.lambda_ratio = lam.value;
  st.lambda_ratio_argmax = lam.argmax_y;

  // Cross-check: the antiderivative of the vorticity samples must rebuild
  // 1/H_p^2 - lambda up to quadrature error (the state stores the exact
  // algebraic antiderivative, so only gamma itself is being tested here).
  auto gamma_accum = num::cumulative_integral(st.vorticity, dp);
  const double gamma_bottom = st.vorticity_integral.front();
  st.relation_residual = 0.0;
  for (std::size_t i = 0; i < st.p.size(); ++i) {
    const double rebuilt = gamma_bottom + gamma_accum[i];
    const double lhs = 1.0 / (st.height_p[i] * st.height_p[i]);
    st.relation_residual =
        std::max(st.relation_residual,
                 std::abs(lhs - st.bernoulli_const - 2.0 * rebuilt));
  }
  return st;
}

double AsymptoticState::height_at(double pp) const {
  return y_of_p(pp) + profile.d;
}

double AsymptoticState::height_p_at(double pp) const {
  return 1.0 / (profile.c - profile.u(y_of_p(pp)));
}

double AsymptoticState::vorticity_at(double pp) const {
  return -profile.u.derivative(y_of_p(pp));
}

double AsymptoticState::vorticity_integral_at(double pp) const {
  const double w = profile.c - profile.u(y_of_p(pp));
  return 0.5 * (w * w - bernoulli_const);
}

double AsymptoticState::p_at(double y) const { return p_of_y(y); }

ShearProfile family_profile(const UProfile& ustar, double froude, double g,
                            double d, double tol) {
  if (!(froude > 0.0)) throw Error("family_profile: froude must be positive");
  const int n = 4097;
  const auto y = uniform_grid(-d, 0.0, n);
  std::vector<double> f(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double us = ustar(y[k]);
    if (!(us > 0.0))
      throw InvalidProfileError("family profile: ustar must be positive");
    f[k] = 1.0 / (us * us);
  }
  const double integral = g * num::integrate_simpson(f, d / (n - 1));
  if (std::abs(integral - 1.0) > tol) {
    std::ostringstream os;
    os << "family normalization violated: g * int ustar^-2 dy = " << integral
       << " (expected 1 within " << tol << ")";
    throw NormalizationError(os.str(), integral);
  }

  const double c = froude * ustar(0.0);
  ShearProfile profile;
  profile.g = g;
  profile.d = d;
  profile.c = c;
  switch (ustar.kind()) {
    case UProfile::Kind::Constant:
      profile.u = UProfile::constant(c - froude * ustar.constant_value());
      break;
    case UProfile::Kind::Linear:
      profile.u = UProfile::linear(c - froude * ustar.linear_surface(),
                                   -froude * ustar.linear_slope());
      break;
    case UProfile::Kind::Samples: {
      std::vector<double> uy = ustar.sample_y();
      std::vector<double> uv(uy.size());
      for (std::size_t k = 0; k < uy.size(); ++k)
        uv[k] = c - froude * ustar.sample_u()[k];
      profile.u = UProfile::samples(std::move(uy), std::move(uv));
      break;
    }
    case UProfile::Kind::Expression: {
      std::ostringstream os;
      os << num::format_g17(c) << " - " << num::format_g17(froude) << "*("
         << ustar.expression_text() << ")";
      profile.u = UProfile::expression(os.str());
      break;
    }
  }
  return profile;
}

ConstVorticity const_vorticity_params(double lambda_star, double gamma_star,
                                      double g, double d) {
  if (!(lambda_star > 0.0))
    throw InvalidProfileError("const vorticity: lambda_star must be positive");
  if (!(gamma_star < 1.0))
    throw InvalidProfileError(
        "const vorticity: gamma_star >= 1 violates sup U < c");
  ConstVorticity out;
  out.lambda_star = lambda_star;
  out.gamma_star = gamma_star;
  const double c = std::sqrt(g * d * lambda_star);
  out.profile.g = g;
  out.profile.d = d;
  out.profile.c = c;
  out.profile.u = UProfile::linear(0.0, -c * gamma_star / d);
  out.froude = std::sqrt(lambda_star * (1.0 - gamma_star));
  out.lambda_ratio = 1.0 / (1.0 - std::max(gamma_star, 0.0));
  return out;
}

std::vector<BoundCheck> const_vorticity_bounds(double lambda_star,
                                               double gamma_star) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double gs_cap = 1.0 - std::sqrt(3.0) / 2.0;
  const double product = lambda_star * (1.0 - gamma_star);
  const double rational =
      lambda_star * (1.0 - 8.0 * gamma_star + 4.0 * gamma_star * gamma_star) /
      (1.0 - gamma_star);

  std::vector<BoundCheck> rows;
  rows.push_back({"froude_squared_above_critical", product, 1.0,
                  product > 1.0, true});
  rows.push_back({"froude_squared_cap_nonpositive_vorticity", product, 4.0,
                  product < 4.0, gamma_star <= 0.0});
  rows.push_back({"froude_squared_cap_positive_vorticity", rational, 4.0,
                  rational < 4.0, gamma_star > 0.0 && gamma_star < gs_cap});
  rows.push_back({"amplitude_cap_nonpositive_vorticity", nan,
                  2.0 / (1.0 - gamma_star), true, gamma_star <= 0.0});
  rows.push_back({"amplitude_cap_positive_vorticity", nan,
                  2.0 * (1.0 - gamma_star) /
                      (1.0 - 8.0 * gamma_star + 4.0 * gamma_star * gamma_star),
                  true, gamma_star > 0.0 && gamma_star < gs_cap});
  return rows;
}

double lambda_star_of(const AsymptoticState& state) {
  return state.bernoulli_const / (state.profile.g * state.profile.d);
}

double gamma_star_of(const AsymptoticState& state) {
  return state.vorticity.back() * state.profile.d /
             std::sqrt(state.bernoulli_const) +
         0.0;  // normalizes -0
}

namespace {

using nlohmann::json;

UProfile uprofile_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "constant") return UProfile::constant(j.at("value").get<double>());
  if (kind == "linear")
    return UProfile::linear(j.at("surface").get<double>(),
                            j.at("slope").get<double>());
  if (kind == "samples")
    return UProfile::samples(j.at("y").get<std::vector<double>>(),
                             j.at("U").get<std::vector<double>>());
  if (kind == "expression")
    return UProfile::expression(j.at("expr").get<std::string>());
  throw InvalidProfileError("unknown profile kind \"" + kind + "\"");
}

json uprofile_to_json(const UProfile& u) {
  json j;
  switch (u.kind()) {
    case UProfile::Kind::Constant:
      j["kind"] = "constant";
      j["value"] = u.constant_value();
      break;
    case UProfile::Kind::Linear:
      j["kind"] = "linear";
      j["surface"] = u.linear_surface();
      j["slope"] = u.linear_slope();
      break;
    case UProfile::Kind::Samples:
      j["kind"] = "samples";
      j["y"] = u.sample_y();
      j["U"] = u.sample_u();
      break;
    case UProfile::Kind::Expression:
      j["kind"] = "expression";
      j["expr"] = u.expression_text();
      break;
  }
  return j;
}

}  // namespace

ShearProfile profile_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidProfileError(std::string("profile JSON parse error: ") +
                              e.what());
  }
  try {
    ShearProfile profile;
    profile.g = j.at("g").get<double>();
    profile.c = j.at("c").get<double>();
    profile.d = j.at("d").get<double>();
    profile.u = uprofile_from_json(j.at("U"));
    return profile;
  } catch (const json::exception& e) {
    throw InvalidProfileError(std::string("profile JSON schema error: ") +
                              e.what());
  }
}

std::string profile_to_json_text(const ShearProfile& profile) {
  json j;
  j["g"] = profile.g;
  j["c"] = profile.c;
  j["d"] = profile.d;
  j["U"] = uprofile_to_json(profile.u);
  return j.dump(2);
}

FamilyInput family_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidProfileError(std::string("family JSON parse error: ") +
                              e.what());
  }
  try {
    FamilyInput in;
    in.g = j.at("g").get<double>();
    in.d = j.at("d").get<double>();
    in.ustar = uprofile_from_json(j.at("Ustar"));
    return in;
  } catch (const json::exception& e) {
    throw InvalidProfileError(std::string("family JSON schema error: ") +
                              e.what());
  }
}

}  // namespace solwave
