#include "retlab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>

#include "retlab/errors.hpp"

namespace retlab {

namespace {

// mt19937_64 output is fixed by the standard; the transforms below use only
// +,-,*,/ and comparisons on doubles, so the whole stream is portable.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : eng_(seed) {}

  // [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Irwin-Hall sum of 12 uniforms, mean 0, sd ~1.
  double normalish() {
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += uniform();
    return s - 6.0;
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

// Monotone sigmoid-like squash onto (0,1) built from exact operations.
double squash(double s) {
  const double a = s < 0.0 ? -s : s;
  return 0.5 * (1.0 + s / (1.0 + a));
}

// Piecewise-linear curve through (xs, ys), flat outside the knot range.
double piecewise(double x, std::span<const double> xs, std::span<const double> ys) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  std::size_t k = 1;
  while (xs[k] < x) ++k;
  const double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return ys[k - 1] + t * (ys[k] - ys[k - 1]);
}

double risk_tenure(double t) {
  static constexpr double xs[] = {0.0, 3.0, 6.0, 9.0, 12.0};
  static constexpr double ys[] = {-1.1, -0.75, 0.0, 1.4, 1.9};
  return piecewise(t, xs, ys);
}

double risk_age(double a) {
  static constexpr double xs[] = {18.0, 20.0, 26.0, 33.0, 45.0};
  static constexpr double ys[] = {-0.1, 0.0, 1.1, 1.9, 2.3};
  return piecewise(a, xs, ys);
}

double risk_regularised(double r) {
  static constexpr double xs[] = {0.0, 5.0, 10.0, 14.0, 22.0, 40.0};
  static constexpr double ys[] = {1.0, 0.55, 0.0, -0.55, -1.25, -1.6};
  return piecewise(r, xs, ys);
}

double risk_failed(double f) {
  static constexpr double xs[] = {0.0, 3.0, 5.0, 10.0, 16.0, 30.0};
  static constexpr double ys[] = {-0.7, -0.45, -0.2, 0.35, 0.8, 1.3};
  return piecewise(f, xs, ys);
}

double risk_promotions(double p) { return -0.085 * std::min(p, 24.0); }

double risk_grades(double g) {
  static constexpr double xs[] = {0.0, 3.0, 5.5, 8.0, 10.0};
  static constexpr double ys[] = {0.55, 0.4, 0.0, -0.5, -0.7};
  return piecewise(g, xs, ys);
}

double round_nonneg(double x) { return x <= 0.0 ? 0.0 : std::floor(x + 0.5); }

}  // namespace

void validate(const SynthConfig& cfg) {
  if (cfg.n_students == 0) throw ConfigError("n_students must be positive");
  if (!(cfg.dropout_base_rate > 0.0 && cfg.dropout_base_rate < 1.0)) {
    throw ConfigError("dropout_base_rate must lie in (0,1)");
  }
  if (!(cfg.noise_scale >= 0.0)) throw ConfigError("noise_scale must be non-negative");
}

Cohort synth_cohort(const SynthConfig& cfg) {
  validate(cfg);
  PortableRng rng(cfg.seed);

  Cohort cohort(cfg.n_students);
  std::vector<double> risk(cfg.n_students);

  for (std::size_t i = 0; i < cfg.n_students; ++i) {
    // Trajectory scaffolding: tenure, entry age, attempted-course pace.
    const double u_type = rng.uniform();
    double tenure;
    if (u_type < 0.38) {
      tenure = rng.uniform(0.25, 3.0);
    } else if (u_type < 0.70) {
      tenure = rng.uniform(3.0, 6.0);
    } else {
      tenure = rng.uniform(6.0, 11.5);
    }
    double entry_age = 18.0 + std::floor(3.0 * rng.uniform() * rng.uniform());
    if (rng.uniform() < 0.07) entry_age += std::floor(rng.uniform(2.0, 12.0));
    const double age_last = std::floor(entry_age + tenure);

    const double ability = rng.normalish();
    const double pace = std::clamp(5.0 + 1.1 * rng.normalish(), 1.5, 8.0);

    const double cursadas = round_nonneg(pace * tenure * rng.uniform(0.75, 1.25));
    const double reg_frac = squash(0.9 + 0.75 * ability + 0.5 * rng.normalish());
    const double regulares = round_nonneg(cursadas * reg_frac * rng.uniform(0.85, 1.0));
    const double non_reg = cursadas - regulares;
    const double recursadas = round_nonneg(non_reg * rng.uniform(0.3, 0.8));
    const double libres = round_nonneg(non_reg * rng.uniform(0.1, 0.5));

    const double promo_frac = 0.55 * squash(-0.8 + 0.9 * ability + 0.4 * rng.normalish());
    const double promociones = round_nonneg(regulares * promo_frac);

    const double examenes =
        round_nonneg((regulares - promociones) * rng.uniform(1.0, 1.6));
    const double pass_frac = squash(1.1 + 0.8 * ability + 0.4 * rng.normalish());
    const double passed_finals = round_nonneg(examenes * pass_frac * rng.uniform(0.8, 1.0));
    const double aprobados = promociones + std::min(passed_finals, examenes);
    const double reprobados =
        round_nonneg(std::min(examenes - passed_finals,
                              examenes * (1.0 - pass_frac) * rng.uniform(0.7, 1.0)));
    const double ausentes = round_nonneg(examenes * rng.uniform(0.0, 0.15));

    const double notas =
        examenes > 0.0 ? std::clamp(4.2 + 1.6 * ability + 0.8 * rng.normalish(), 1.0, 10.0)
                       : 0.0;
    const double max_reg = round_nonneg(std::min(regulares, pace * rng.uniform(0.7, 1.3)));
    const double genero = rng.bernoulli(0.28) ? 1.0 : 0.0;

    FeatureVector& v = cohort[i];
    v.values[0] = genero;
    v.values[1] = age_last;
    v.values[2] = tenure;
    v.values[3] = notas;
    v.values[4] = cursadas;
    v.values[5] = regulares;
    v.values[6] = recursadas;
    v.values[7] = libres;
    v.values[8] = examenes;
    v.values[9] = promociones;
    v.values[10] = aprobados;
    v.values[11] = reprobados;
    v.values[12] = ausentes;
    v.values[13] = max_reg;

    // The squash has heavy tails, so the per-feature effects are scaled up
    // to keep the cohort learnably separable at the configured noise.
    constexpr double kRiskGain = 3.4;
    risk[i] = kRiskGain * (risk_tenure(tenure) + risk_age(age_last) +
                           risk_regularised(regulares) + risk_failed(reprobados) +
                           risk_promotions(promociones) + risk_grades(notas)) +
              cfg.noise_scale * rng.normalish();
  }

  // Calibrate the intercept so the mean dropout probability hits the
  // configured base rate, then draw labels.
  double lo = -40.0, hi = 40.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double mean = 0.0;
    for (double s : risk) mean += squash(s + mid);
    mean /= static_cast<double>(risk.size());
    if (mean < cfg.dropout_base_rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double intercept = 0.5 * (lo + hi);

  for (std::size_t i = 0; i < cfg.n_students; ++i) {
    cohort[i].label = rng.bernoulli(squash(risk[i] + intercept)) ? 1 : 0;
  }
  return cohort;
}

}  // namespace retlab
