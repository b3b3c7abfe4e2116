#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fivmon/error.hpp"
#include "fivmon/lubrication.hpp"
#include "oracles.hpp"

using namespace fivmon;
namespace orc = fivmon::oracle;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Values below were computed once with 50-digit arithmetic from the
// reference contact inputs.
constexpr double kEStar = 226.925528253314e9;
constexpr double kHmin = 3.716872763537448e-9;
constexpr double kHertzRadius = 1.25634732545836e-4;
constexpr double kHertzPmax = 3.02497609690110e9;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(CompositeRoughness, ReferenceSurfaces) {
  EXPECT_NEAR(composite_roughness({0.124, 0.547}), 0.561, 0.001);
  EXPECT_NEAR(composite_roughness({0.554, 0.279}), 0.620, 0.001);
  EXPECT_NEAR(composite_roughness({0.3, 0.3}), 0.3 * std::sqrt(2.0), 1e-15);
}

TEST(CompositeRoughness, SymmetricAndHomogeneous) {
  EXPECT_DOUBLE_EQ(composite_roughness({0.2, 0.7}), composite_roughness({0.7, 0.2}));
  EXPECT_NEAR(composite_roughness({0.5, 1.5}), 2.5 * composite_roughness({0.2, 0.6}), 1e-14);
  EXPECT_THROW(composite_roughness({0.0, 0.5}), InputError);
  EXPECT_THROW(composite_roughness({-0.1, 0.5}), InputError);
}

TEST(CompositeRadius, Cases) {
  ContactSpec s;
  EXPECT_DOUBLE_EQ(composite_radius(s), 3e-3);
  s.rb_m = 3e-3;
  EXPECT_DOUBLE_EQ(composite_radius(s), 1.5e-3);
  s.rb_m = 6e-3;
  EXPECT_NEAR(composite_radius(s), 2e-3, 1e-18);
}

TEST(CompositeModulus, ReferenceAndLimits) {
  auto s = reference_contact_spec();
  EXPECT_NEAR(composite_modulus(s) / kEStar, 1.0, 1e-12);
  EXPECT_NEAR(composite_modulus(s) / 1e9, 226.9, 0.1);

  ContactSpec same;
  same.ea_pa = same.eb_pa = 200e9;
  same.nu_a = same.nu_b = 0.3;
  EXPECT_NEAR(rel(composite_modulus(same), 200e9 / (1.0 - 0.09)), 0.0, 1e-14);

  ContactSpec rigid;
  rigid.ea_pa = kInf;
  EXPECT_NEAR(rel(composite_modulus(rigid), 2.0 * rigid.eb_pa / (1.0 - rigid.nu_b * rigid.nu_b)), 0.0,
              1e-14);
}

TEST(HamrockDowson, MatchesTermByTermOracle) {
  auto s = reference_contact_spec();
  const double oracle = orc::hmin_term_by_term(s.ra_m, s.ea_pa, s.eb_pa, s.nu_a, s.nu_b,
                                               s.k_ellipticity, s.eta_pa_s, s.entrain_velocity_m_s,
                                               s.load_n);
  EXPECT_LE(rel(hamrock_dowson_hmin(s), oracle), 1e-12);
  EXPECT_LE(rel(hamrock_dowson_hmin(s), kHmin), 1e-12);
}

TEST(HamrockDowson, PowerLawExponents) {
  auto s = reference_contact_spec();
  const double h0 = hamrock_dowson_hmin(s);
  auto eta = s;
  eta.eta_pa_s *= 2.0;
  EXPECT_LE(rel(hamrock_dowson_hmin(eta) / h0, std::pow(2.0, 0.65)), 1e-9);
  auto u = s;
  u.entrain_velocity_m_s *= 2.0;
  EXPECT_LE(rel(hamrock_dowson_hmin(u) / h0, std::pow(2.0, 0.65)), 1e-9);
  auto p = s;
  p.load_n *= 2.0;
  EXPECT_LE(rel(hamrock_dowson_hmin(p) / h0, std::pow(2.0, -0.21)), 1e-9);
  EXPECT_NEAR(hamrock_dowson_hmin(p) / h0, 0.865, 0.001);
}

TEST(HamrockDowson, RejectsInvalidSpec) {
  auto s = reference_contact_spec();
  s.eta_pa_s = 0.0;
  EXPECT_THROW(hamrock_dowson_hmin(s), InputError);
  s = reference_contact_spec();
  s.nu_a = 0.5;
  EXPECT_THROW(hamrock_dowson_hmin(s), InputError);
  s = reference_contact_spec();
  s.load_n = -1.0;
  EXPECT_THROW(hamrock_dowson_hmin(s), InputError);
}

TEST(FilmThicknessRatio, ReportedFilm) {
  EXPECT_NEAR(film_thickness_ratio(5.51e-9, 0.561), 0.0098, 0.0002);
  EXPECT_NEAR(film_thickness_ratio(5.51e-9, 0.620), 0.0089, 0.0002);
  EXPECT_NEAR(film_thickness_ratio(0.4e-6, 0.4), 1.0, 1e-12);
  EXPECT_THROW(film_thickness_ratio(0.0, 0.5), InputError);
  EXPECT_THROW(film_thickness_ratio(1e-9, -0.5), InputError);
}

TEST(ClassifyRegime, ThresholdsAndMonotonicity) {
  EXPECT_EQ(classify_regime(0.0098), LubricationRegime::kBoundary);
  EXPECT_EQ(classify_regime(1.0), LubricationRegime::kMixed);
  EXPECT_EQ(classify_regime(2.0), LubricationRegime::kMixed);
  EXPECT_EQ(classify_regime(3.0), LubricationRegime::kMixed);
  EXPECT_EQ(classify_regime(10.0), LubricationRegime::kFluid);
  EXPECT_THROW(classify_regime(0.0), InputError);
  int last = 0;
  for (double l = 0.01; l < 20.0; l *= 1.1) {
    const int idx = static_cast<int>(classify_regime(l));
    EXPECT_GE(idx, last);
    last = idx;
  }
  EXPECT_EQ(to_string(LubricationRegime::kBoundary), "boundary");
  EXPECT_EQ(to_string(LubricationRegime::kMixed), "mixed");
  EXPECT_EQ(to_string(LubricationRegime::kFluid), "fluid");
}

TEST(Hertz, ReferenceContact) {
  auto h = hertz_contact(reference_contact_spec());
  EXPECT_LE(rel(h.contact_radius_m, kHertzRadius), 1e-12);
  EXPECT_LE(rel(h.max_pressure_pa, kHertzPmax), 1e-12);
  EXPECT_NEAR(h.max_pressure_pa / 1e9, 3.0, 0.1);
  EXPECT_NEAR(h.mean_pressure_pa, 2.0 / 3.0 * h.max_pressure_pa, 1e-3);
}

TEST(Hertz, Scaling) {
  auto s = reference_contact_spec();
  const double p0 = hertz_max_pressure(s);
  auto load = s;
  load.load_n *= 4.0;
  EXPECT_LE(rel(hertz_max_pressure(load) / p0, std::cbrt(4.0)), 1e-12);
  auto radius = s;
  radius.ra_m *= 2.0;
  EXPECT_LE(rel(hertz_max_pressure(radius) / p0, std::pow(2.0, -2.0 / 3.0)), 1e-12);
}

TEST(Velocities, ReciprocatingRig) {
  auto v = reciprocating_velocities(5e-3, 400.0);
  EXPECT_NEAR(v.mean_sliding_m_s, 0.0667, 0.001);
  EXPECT_NEAR(v.entrainment_m_s, 0.0333, 0.001);
  EXPECT_DOUBLE_EQ(v.entrainment_m_s, v.mean_sliding_m_s / 2.0);
  EXPECT_THROW(reciprocating_velocities(0.0, 400.0), InputError);
  EXPECT_THROW(reciprocating_velocities(5e-3, 0.0), InputError);
}

TEST(LubricationReport, FormulaAndOverride) {
  auto spec = reference_contact_spec();
  auto r = lubrication_report(spec, {0.124, 0.547});
  EXPECT_LE(rel(r.h_min_m, kHmin), 1e-12);
  EXPECT_FALSE(r.h_min_overridden);
  EXPECT_EQ(r.regime, LubricationRegime::kBoundary);
  EXPECT_LE(rel(r.lambda_ratio * r.sigma_c_um * 1e-6, r.h_min_m), 1e-12);
  EXPECT_LT(r.lambda_ratio, 1.0);

  auto o = lubrication_report(spec, {0.554, 0.279}, 5.51e-9);
  EXPECT_TRUE(o.h_min_overridden);
  EXPECT_EQ(o.h_min_m, 5.51e-9);
  EXPECT_LE(rel(o.h_min_formula_m, kHmin), 1e-12);
  EXPECT_NEAR(o.lambda_ratio, 0.0089, 0.0002);
  EXPECT_EQ(o.regime, LubricationRegime::kBoundary);
  EXPECT_THROW(lubrication_report(spec, {0.124, 0.547}, 0.0), InputError);
}
