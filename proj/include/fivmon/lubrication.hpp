#pragma once

#include <limits>
#include <optional>
#include <string>

namespace fivmon {

// Sa roughness of the two surfaces, in micrometres.
struct SurfacePair {
  double sigma1_um = 0.0;  // ball
  double sigma2_um = 0.0;  // disk
};

// Contact and lubricant parameters, SI units throughout. rb_m may be
// +infinity (flat disk).
struct ContactSpec {
  double ra_m = 3e-3;
  double rb_m = std::numeric_limits<double>::infinity();
  double ea_pa = 208e9;
  double eb_pa = 209e9;
  double nu_a = 0.3;
  double nu_b = 0.269;
  double k_ellipticity = 1.0;
  double eta_pa_s = 0.139;
  double entrain_velocity_m_s = 0.0333;
  double load_n = 100.0;

  // Throws InputError on the first violated invariant.
  void validate() const;
};

// Ball-on-disk reference setup: 3 mm steel ball on a flat disk, CD 40 oil,
// 100 N.
ContactSpec reference_contact_spec();

enum class LubricationRegime { kBoundary, kMixed, kFluid };
std::string to_string(LubricationRegime r);

double composite_roughness(const SurfacePair& pair);  // um
double composite_radius(const ContactSpec& spec);     // m

// E* = 2 / [(1 - nu_a^2)/E_a + (1 - nu_b^2)/E_b]. Note the factor 2: this is
// twice the usual Hertzian reduced modulus.
double composite_modulus(const ContactSpec& spec);

// Hamrock-Dowson minimum film thickness (m):
//   7.43 R (1 - 0.85 e^{-0.31 k}) (eta u / (E* R))^0.65 (P / (E* R^2))^-0.21
double hamrock_dowson_hmin(const ContactSpec& spec);

// lambda = h_min / sigma_c with h_min in metres and sigma_c in micrometres.
double film_thickness_ratio(double h_min_m, double sigma_c_um);

// boundary: lambda < 1; mixed: 1 <= lambda <= 3; fluid: lambda > 3.
LubricationRegime classify_regime(double lambda_ratio);

struct HertzContact {
  double contact_radius_m = 0.0;
  double max_pressure_pa = 0.0;
  double mean_pressure_pa = 0.0;
};

// Sphere-on-flat Hertz contact using the standard reduced modulus E* / 2.
HertzContact hertz_contact(const ContactSpec& spec);
inline double hertz_max_pressure(const ContactSpec& spec) { return hertz_contact(spec).max_pressure_pa; }

struct ReciprocatingVelocities {
  double mean_sliding_m_s = 0.0;
  double entrainment_m_s = 0.0;
};

// Mean sliding speed 2 * stroke * rpm / 60; entrainment is half of it with
// one body stationary.
ReciprocatingVelocities reciprocating_velocities(double stroke_m, double rpm);

struct LubricationReport {
  double sigma_c_um = 0.0;
  double r_composite_m = 0.0;
  double e_composite_pa = 0.0;
  double h_min_m = 0.0;
  bool h_min_overridden = false;
  double h_min_formula_m = 0.0;  // Hamrock-Dowson value even when overridden
  double lambda_ratio = 0.0;
  LubricationRegime regime = LubricationRegime::kBoundary;
  HertzContact hertz;
};

LubricationReport lubrication_report(const ContactSpec& spec, const SurfacePair& pair,
                                     std::optional<double> h_min_override_m = std::nullopt);

}  // namespace fivmon
