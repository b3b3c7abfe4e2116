#include "fivmon/lubrication.hpp"

#include <cmath>
#include <numbers>

#include "fivmon/error.hpp"

namespace fivmon {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw InputError(message);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void ContactSpec::validate() const {
  require(positive(ra_m), "contact: Ra must be positive and finite");
  require(rb_m > 0.0 && !std::isnan(rb_m), "contact: Rb must be positive (may be infinite)");
  require(positive(ea_pa) || ea_pa == std::numeric_limits<double>::infinity(),
          "contact: Ea must be positive");
  require(positive(eb_pa), "contact: Eb must be positive and finite");
  require(nu_a > 0.0 && nu_a < 0.5, "contact: nu_a must be in (0, 0.5)");
  require(nu_b > 0.0 && nu_b < 0.5, "contact: nu_b must be in (0, 0.5)");
  require(std::isfinite(k_ellipticity) && k_ellipticity > 0.0, "contact: k must be positive");
  require(positive(eta_pa_s), "contact: eta must be positive");
  require(positive(entrain_velocity_m_s), "contact: entrainment velocity must be positive");
  require(positive(load_n), "contact: load must be positive");
}

ContactSpec reference_contact_spec() { return ContactSpec{}; }

std::string to_string(LubricationRegime r) {
  switch (r) {
    case LubricationRegime::kBoundary:
      return "boundary";
    case LubricationRegime::kMixed:
      return "mixed";
    case LubricationRegime::kFluid:
      break;
  }
  return "fluid";
}

double composite_roughness(const SurfacePair& pair) {
  require(positive(pair.sigma1_um) && positive(pair.sigma2_um),
          "composite_roughness: roughness values must be positive");
  return std::hypot(pair.sigma1_um, pair.sigma2_um);
}

double composite_radius(const ContactSpec& spec) {
  spec.validate();
  if (std::isinf(spec.rb_m)) return spec.ra_m;
  return 1.0 / (1.0 / spec.ra_m + 1.0 / spec.rb_m);
}

double composite_modulus(const ContactSpec& spec) {
  spec.validate();
  // (1 - nu^2)/E vanishes for a rigid body.
  const double ca = std::isinf(spec.ea_pa) ? 0.0 : (1.0 - spec.nu_a * spec.nu_a) / spec.ea_pa;
  const double cb = (1.0 - spec.nu_b * spec.nu_b) / spec.eb_pa;
  return 2.0 / (ca + cb);
}

double hamrock_dowson_hmin(const ContactSpec& spec) {
  const double r = composite_radius(spec);
  const double e_star = composite_modulus(spec);
  const double speed_group = spec.eta_pa_s * spec.entrain_velocity_m_s / (e_star * r);
  const double load_group = spec.load_n / (e_star * r * r);
  require(speed_group > 0.0 && load_group > 0.0, "hamrock_dowson_hmin: non-positive group");
  const double ellipticity = 1.0 - 0.85 * std::exp(-0.31 * spec.k_ellipticity);
  return 7.43 * r * ellipticity * std::pow(speed_group, 0.65) * std::pow(load_group, -0.21);
}

double film_thickness_ratio(double h_min_m, double sigma_c_um) {
  require(positive(h_min_m), "film_thickness_ratio: h_min must be positive");
  require(positive(sigma_c_um), "film_thickness_ratio: sigma_c must be positive");
  return h_min_m / (sigma_c_um * 1e-6);
}

LubricationRegime classify_regime(double lambda_ratio) {
  require(lambda_ratio > 0.0 && !std::isnan(lambda_ratio),
          "classify_regime: lambda must be positive");
  if (lambda_ratio < 1.0) return LubricationRegime::kBoundary;
  if (lambda_ratio <= 3.0) return LubricationRegime::kMixed;
  return LubricationRegime::kFluid;
}

HertzContact hertz_contact(const ContactSpec& spec) {
  const double r = composite_radius(spec);
  const double e_reduced = composite_modulus(spec) / 2.0;
  HertzContact out;
  out.contact_radius_m = std::cbrt(3.0 * spec.load_n * r / (4.0 * e_reduced));
  const double area = std::numbers::pi * out.contact_radius_m * out.contact_radius_m;
  out.mean_pressure_pa = spec.load_n / area;
  out.max_pressure_pa = 1.5 * out.mean_pressure_pa;
  return out;
}

ReciprocatingVelocities reciprocating_velocities(double stroke_m, double rpm) {
  require(positive(stroke_m), "reciprocating_velocities: stroke must be positive");
  require(positive(rpm), "reciprocating_velocities: rpm must be positive");
  ReciprocatingVelocities out;
  out.mean_sliding_m_s = 2.0 * stroke_m * rpm / 60.0;
  out.entrainment_m_s = out.mean_sliding_m_s / 2.0;
  return out;
}

LubricationReport lubrication_report(const ContactSpec& spec, const SurfacePair& pair,
                                     std::optional<double> h_min_override_m) {
  LubricationReport out;
  out.sigma_c_um = composite_roughness(pair);
  out.r_composite_m = composite_radius(spec);
  out.e_composite_pa = composite_modulus(spec);
  out.h_min_formula_m = hamrock_dowson_hmin(spec);
  if (h_min_override_m) {
    require(positive(*h_min_override_m), "lubrication: h_min override must be positive");
    out.h_min_m = *h_min_override_m;
    out.h_min_overridden = true;
  } else {
    out.h_min_m = out.h_min_formula_m;
  }
  out.lambda_ratio = film_thickness_ratio(out.h_min_m, out.sigma_c_um);
  out.regime = classify_regime(out.lambda_ratio);
  out.hertz = hertz_contact(spec);
  return out;
}

}  // namespace fivmon
