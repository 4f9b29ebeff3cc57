#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "plsec/fading.hpp"
#include "plsec/rng.hpp"

using namespace plsec;

namespace {

// Closed-form SNR densities for the four supported fading families.

double nakagami_pdf(double m, double gbar, double g) {
  return std::pow(m / gbar, m) * std::pow(g, m - 1.0) *
         std::exp(-m * g / gbar) / std::tgamma(m);
}

double hoyt_pdf(double q, double gbar, double g) {
  double q2 = q * q;
  double a = (1.0 + q2) / (2.0 * q * gbar);
  double b = (1.0 - q2 * q2) / (4.0 * q2 * gbar);
  double c = (1.0 + q2) * (1.0 + q2) / (4.0 * q2 * gbar);
  return a * std::exp(-c * g) * std::cyl_bessel_i(0, b * g);
}

double generalized_k_pdf(double k, double m, double gbar, double g) {
  double lam = k * m / gbar;
  return 2.0 * std::pow(lam, (k + m) / 2.0) * std::pow(g, (k + m) / 2.0 - 1.0) *
         std::cyl_bessel_k(std::fabs(k - m), 2.0 * std::sqrt(lam * g)) /
         (std::tgamma(m) * std::tgamma(k));
}

double kappa_mu_pdf(double kappa, double mu, double gbar, double g) {
  double x = g / gbar;
  double front = mu * std::pow(1.0 + kappa, (mu + 1.0) / 2.0) /
                 (std::pow(kappa, (mu - 1.0) / 2.0) * std::exp(mu * kappa) *
                  gbar);
  return front * std::pow(x, (mu - 1.0) / 2.0) *
         std::exp(-mu * (1.0 + kappa) * x) *
         std::cyl_bessel_i(mu - 1.0, 2.0 * mu * std::sqrt(kappa * (1.0 + kappa) * x));
}

double quantile(const MixtureGamma& d, double p) {
  double lo = 0.0, hi = 1.0;
  while (cdf(d, hi) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (cdf(d, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("mixtures are normalized and start at zero") {
  std::vector<MixtureGamma> dists = {
      from_nakagami(0.5, 1.0),        from_nakagami(2.0, 3.7),
      from_nakagami(6.0, 0.4),        from_hoyt(0.2, 1.0),
      from_hoyt(0.7071067811865475, 2.0), from_hoyt(0.95, 0.8),
      from_generalized_k(2.0, 1.0, 1.0),  from_generalized_k(5.0, 2.0, 3.0),
      from_generalized_k(2.0, 0.3, 1.5),  from_kappa_mu(1.0, 2.0, 1.0),
      from_kappa_mu(2.0, 1.0, 2.5),       from_kappa_mu(0.5, 3.3, 0.9)};
  for (const auto& d : dists) {
    CHECK(cdf(d, 0.0) == 0.0);
    CHECK(cdf(d, 1e9 * d.avg_snr) == doctest::Approx(1.0).epsilon(1e-9));
    double w = 0.0;
    for (const auto& comp : d.components)
      w += comp.alpha * std::tgamma(comp.beta) * std::pow(comp.zeta, -comp.beta);
    CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    double prev = 0.0;
    for (double g = 0.1; g < 8.0; g += 0.35) {
      double c = cdf(d, g * d.avg_snr);
      CHECK(c >= prev);
      CHECK(pdf(d, g * d.avg_snr) >= 0.0);
      prev = c;
    }
  }
}

TEST_CASE("mixture mean tracks the configured average SNR") {
  for (const auto& d :
       {from_nakagami(1.5, 2.0), from_hoyt(0.5, 2.0),
        from_generalized_k(4.0, 2.0, 2.0), from_kappa_mu(1.0, 2.0, 2.0)}) {
    CHECK(mean(d) == doctest::Approx(2.0).epsilon(1e-6));
  }
}

TEST_CASE("nakagami mixture equals the closed-form density") {
  for (double m : {0.5, 1.0, 2.0, 4.5}) {
    MixtureGamma d = from_nakagami(m, 1.7);
    for (double g : {0.05, 0.3, 1.0, 2.5, 6.0}) {
      CHECK(pdf(d, g) ==
            doctest::Approx(nakagami_pdf(m, 1.7, g)).epsilon(1e-12));
    }
  }
}

TEST_CASE("hoyt mixture approximates the closed-form density") {
  // The twenty-term series carries a small renormalization offset for
  // strongly unbalanced q; measured worst case is 1.6e-4 at q = 0.3.
  for (double q : {0.3, 0.7071067811865475, 0.9}) {
    MixtureGamma d = from_hoyt(q, 1.3);
    for (double g : {0.1, 0.5, 1.0, 2.0, 4.0}) {
      double want = hoyt_pdf(q, 1.3, g);
      CHECK(std::fabs(pdf(d, g) - want) <= 1e-3 * std::max(want, 1e-3));
    }
  }
}

TEST_CASE("generalized-k mixture approximates the closed-form density") {
  struct P { double k, m; };
  for (P p : {P{2.0, 1.0}, P{5.0, 2.0}, P{3.0, 3.0}}) {
    MixtureGamma d = from_generalized_k(p.k, p.m, 1.0);
    // Fifteen Laguerre terms track the Bessel density to a few parts in a
    // thousand; measured worst case is 3.8e-3 at (k, m) = (2, 1).
    for (double g : {0.2, 0.5, 1.0, 2.0}) {
      double want = generalized_k_pdf(p.k, p.m, 1.0, g);
      CHECK(std::fabs(pdf(d, g) - want) <= 2e-2 * want);
    }
  }
}

TEST_CASE("kappa-mu mixture approximates the closed-form density") {
  struct P { double kappa, mu; };
  for (P p : {P{1.0, 2.0}, P{2.0, 1.0}, P{0.8, 3.0}}) {
    MixtureGamma d = from_kappa_mu(p.kappa, p.mu, 1.0);
    for (double g : {0.1, 0.5, 1.0, 2.0, 3.5}) {
      double want = kappa_mu_pdf(p.kappa, p.mu, 1.0, g);
      CHECK(std::fabs(pdf(d, g) - want) <= 1e-8 * std::max(want, 1e-3));
    }
  }
}

TEST_CASE("cdf integrates the pdf") {
  for (const auto& d :
       {from_nakagami(2.0, 1.0), from_hoyt(0.5, 1.0),
        from_generalized_k(5.0, 2.0, 1.0), from_kappa_mu(1.0, 2.0, 1.0)}) {
    double acc = 0.0;
    double prev_g = 0.0, prev_f = pdf(d, 0.0);
    if (!std::isfinite(prev_f)) prev_f = pdf(d, 1e-12);
    const int steps = 20000;
    for (int i = 1; i <= steps; ++i) {
      double g = 4.0 * i / steps;
      double f = pdf(d, g);
      acc += 0.5 * (f + prev_f) * (g - prev_g);
      prev_g = g;
      prev_f = f;
    }
    CHECK(acc == doctest::Approx(cdf(d, 4.0)).epsilon(1e-6));
  }
}

TEST_CASE("scaling the mean rescales the density exactly") {
  auto scale_check = [](const MixtureGamma& unit, const MixtureGamma& wide,
                        double c) {
    for (double g : {0.2, 0.8, 1.9, 4.2}) {
      CHECK(pdf(wide, g) ==
            doctest::Approx(pdf(unit, g / c) / c).epsilon(1e-12));
      CHECK(cdf(wide, g) == doctest::Approx(cdf(unit, g / c)).epsilon(1e-12));
    }
  };
  scale_check(from_nakagami(2.0, 1.0), from_nakagami(2.0, 5.0), 5.0);
  scale_check(from_hoyt(0.4, 1.0), from_hoyt(0.4, 3.0), 3.0);
  scale_check(from_generalized_k(5.0, 2.0, 1.0),
              from_generalized_k(5.0, 2.0, 2.5), 2.5);
  scale_check(from_kappa_mu(1.0, 2.0, 1.0), from_kappa_mu(1.0, 2.0, 7.0), 7.0);
}

TEST_CASE("hoyt approaches rayleigh as q approaches one") {
  MixtureGamma hoyt = from_hoyt(0.999, 1.0);
  MixtureGamma rayleigh = from_nakagami(1.0, 1.0);
  for (double g = 0.1; g <= 5.0; g += 0.3) {
    CHECK(std::fabs(cdf(hoyt, g) - cdf(rayleigh, g)) < 2e-3);
  }
}

TEST_CASE("kappa-mu approaches nakagami as kappa approaches zero") {
  MixtureGamma km = from_kappa_mu(1e-9, 2.0, 1.0);
  MixtureGamma nak = from_nakagami(2.0, 1.0);
  for (double g = 0.1; g <= 5.0; g += 0.3) {
    CHECK(std::fabs(cdf(km, g) - cdf(nak, g)) < 1e-6);
  }
}

TEST_CASE("constructor domains are enforced") {
  CHECK_THROWS_AS(from_nakagami(0.4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(from_nakagami(2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(from_hoyt(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(from_hoyt(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(from_generalized_k(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(from_generalized_k(2.0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(from_kappa_mu(0.0, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(from_kappa_mu(1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("asymptotic expansion reports the documented decay exponent") {
  CHECK(asymptotic_expansion(from_nakagami(2.0, 1.0)).dominant_psi == 2.0);
  CHECK(asymptotic_expansion(from_nakagami(3.5, 2.0)).dominant_psi == 3.5);
  CHECK(asymptotic_expansion(from_hoyt(0.5, 1.0)).dominant_psi == 1.0);
  CHECK(asymptotic_expansion(from_generalized_k(5.0, 2.0, 1.0)).dominant_psi ==
        2.0);
  CHECK(asymptotic_expansion(from_kappa_mu(1.0, 2.0, 1.0)).dominant_psi == 2.0);
}

TEST_CASE("asymptotic expansion predicts the low-tail cdf") {
  for (const auto& d :
       {from_nakagami(2.0, 1.0), from_hoyt(0.5, 1.0),
        from_generalized_k(5.0, 2.0, 1.0), from_kappa_mu(1.0, 2.0, 1.0)}) {
    AsymptoticExpansion e = asymptotic_expansion(d);
    double g = 1e-3 * d.avg_snr;
    double predicted = 0.0;
    for (const AsymptoticTerm& t : e.terms)
      predicted += t.phi * std::pow(g / d.avg_snr, t.psi);
    double actual = cdf(d, g);
    CHECK(std::fabs(predicted - actual) <= 0.05 * actual);
  }
}

TEST_CASE("custom mixtures have no asymptotic expansion") {
  MixtureGamma base = from_nakagami(2.0, 1.0);
  MixtureGamma custom = from_components(base.components, 1.0);
  CHECK_THROWS_AS(asymptotic_expansion(custom), std::domain_error);
}

TEST_CASE("from_components round-trips and validates") {
  MixtureGamma base = from_nakagami(2.0, 1.5);
  MixtureGamma again = from_components(base.components, 1.5);
  for (double g : {0.3, 1.0, 2.7}) {
    CHECK(pdf(again, g) == doctest::Approx(pdf(base, g)).epsilon(1e-12));
  }
  std::vector<MgComponent> bad = base.components;
  bad[0].alpha *= 1.5;  // breaks the unit-mass constraint
  CHECK_THROWS_AS(from_components(bad, 1.5), std::invalid_argument);
  bad = base.components;
  bad[0].zeta = -1.0;
  CHECK_THROWS_AS(from_components(bad, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(from_components({}, 1.5), std::invalid_argument);
}

TEST_CASE("mixture files load and reject malformed input") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "plsec_fading_test";
  fs::create_directories(dir);

  MixtureGamma base = from_nakagami(2.0, 1.0);
  fs::path good = dir / "good.mix";
  {
    std::ofstream out(good);
    out << "# two-component mixture\n";
    out << "avg_snr 1.0\n";
    char buf[80];
    for (const auto& comp : base.components) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", comp.alpha,
                    comp.beta, comp.zeta);
      out << buf;
    }
  }
  MixtureGamma loaded = load_mixture_file(good.string());
  CHECK(loaded.family_tag == FadingFamily::Custom);
  for (double g : {0.3, 1.0, 2.7}) {
    CHECK(pdf(loaded, g) == doctest::Approx(pdf(base, g)).epsilon(1e-12));
  }

  fs::path no_avg = dir / "no_avg.mix";
  std::ofstream(no_avg) << "1.0 1.0 1.0\n";
  CHECK_THROWS_AS(load_mixture_file(no_avg.string()), std::invalid_argument);

  fs::path short_line = dir / "short.mix";
  std::ofstream(short_line) << "avg_snr 1.0\n0.5 2.0\n";
  CHECK_THROWS_AS(load_mixture_file(short_line.string()),
                  std::invalid_argument);

  fs::path unnormalized = dir / "unnorm.mix";
  std::ofstream(unnormalized) << "avg_snr 1.0\n3.0 2.0 2.0\n";
  CHECK_THROWS_AS(load_mixture_file(unnormalized.string()),
                  std::invalid_argument);

  CHECK_THROWS_AS(load_mixture_file((dir / "missing.mix").string()),
                  std::invalid_argument);
}

TEST_CASE("sampling is deterministic and matches the cdf at quantiles") {
  const int n = 200000;
  for (const auto& d :
       {from_nakagami(2.0, 1.0), from_hoyt(0.5, 1.0),
        from_generalized_k(5.0, 2.0, 1.0), from_kappa_mu(1.0, 2.0, 1.0)}) {
    Rng rng_a(split_stream(11, 0));
    Rng rng_b(split_stream(11, 0));
    std::vector<double> xs = sample(d, rng_a, n);
    std::vector<double> ys = sample(d, rng_b, n);
    REQUIRE(static_cast<int>(xs.size()) == n);
    CHECK(xs == ys);

    for (double p : {0.25, 0.5, 0.75}) {
      double qv = quantile(d, p);
      int below = 0;
      for (double x : xs) {
        REQUIRE(x >= 0.0);
        if (x <= qv) ++below;
      }
      double frac = static_cast<double>(below) / n;
      double se = std::sqrt(p * (1.0 - p) / n);
      CHECK(std::fabs(frac - p) <= 4.0 * se);
    }
  }
}

TEST_CASE("family names are stable identifiers") {
  CHECK(family_name(FadingFamily::Nakagami) == "nakagami");
  CHECK(family_name(FadingFamily::Hoyt) == "hoyt");
  CHECK(family_name(FadingFamily::GeneralizedK) == "generalized_k");
  CHECK(family_name(FadingFamily::KappaMu) == "kappa_mu");
  CHECK(family_name(FadingFamily::Custom) == "custom");
}
