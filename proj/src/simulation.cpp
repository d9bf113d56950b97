#include "ivbd/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "ivbd/breakdown.hpp"
#include "ivbd/estimators.hpp"
#include "parallel_for.hpp"

namespace ivbd {

namespace {

constexpr std::uint64_t kPopulationSeed = 0x9a11ce7ab1e5ull;

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Draws one record; RNG consumption per record is fixed given the copula
/// kind, so streams are reproducible independent of the drawn values.
struct Sampler {
  const DgpParams& p;
  double r;  // Gaussian-copula parameter giving corr(U, V) = rho

  explicit Sampler(const DgpParams& params)
      : p(params),
        r(2.0 * std::sin(std::numbers::pi * params.rho / 6.0)) {}

  ObservationRecord next(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> norm(0.0, 1.0);

    const int x = unif(rng) < p.p_x ? 1 : 0;
    const int z = unif(rng) < p.p_z_given_x[x] ? 1 : 0;

    double u, v;
    if (p.copula == CopulaKind::gaussian) {
      const double g1 = norm(rng);
      const double g2 = r * g1 + std::sqrt(1.0 - r * r) * norm(rng);
      u = normal_cdf(g1);
      v = normal_cdf(g2);
    } else {
      u = unif(rng);
      const double v_indep = unif(rng);
      v = unif(rng) < p.rho ? u : v_indep;
    }

    const int d = p.pi_z * z + p.pi_x * x >= v ? 1 : 0;
    const int y = p.beta_d * d + p.beta_x * x >= u ? 1 : 0;
    ObservationRecord rec;
    rec.y = static_cast<std::uint8_t>(y);
    rec.d = static_cast<std::uint8_t>(d);
    rec.z = static_cast<std::uint8_t>(z);
    rec.x = x ? "1" : "0";
    return rec;
  }
};

double breakdown_statistic(const CellTable& table, Target target, double mu) {
  switch (target) {
    case Target::first_stage:
      return breakdown_point_first_stage(table, mu, BoundVariant::separate).value;
    case Target::reduced_form:
      return breakdown_point_reduced_form(table, mu, BoundVariant::separate).value;
    case Target::late:
      return breakdown_point_joint(table, mu).value;
  }
  throw InvalidParams("unknown breakdown target");
}

std::uint64_t mix_seed(std::uint64_t seed, int replicate) {
  return seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(replicate + 1));
}

}  // namespace

void DgpParams::validate() const {
  const auto prob = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidParams(std::string(name) + " must lie in [0,1]");
    }
  };
  prob(p_x, "p_x");
  prob(p_z_given_x[0], "p_z_given_x[0]");
  prob(p_z_given_x[1], "p_z_given_x[1]");
  prob(pi_z, "pi_z");
  prob(pi_x, "pi_x");
  prob(beta_d, "beta_d");
  prob(beta_x, "beta_x");
  prob(rho, "rho");
  if (pi_z + pi_x > 1.0 + 1e-12 || beta_d + beta_x > 1.0 + 1e-12) {
    throw InvalidParams("threshold indices must stay inside [0,1]: "
                        "pi_z + pi_x <= 1 and beta_d + beta_x <= 1");
  }
}

double treatment_probability(const DgpParams& params, int z, int x) {
  return std::clamp(params.pi_z * z + params.pi_x * x, 0.0, 1.0);
}

std::vector<ObservationRecord> simulate(const DgpParams& params, std::int64_t n,
                                        std::mt19937_64& rng) {
  params.validate();
  if (n < 1) throw InvalidParams("simulation size must be positive");
  const Sampler sampler(params);
  std::vector<ObservationRecord> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out.push_back(sampler.next(rng));
  return out;
}

CellTable population_cells(const DgpParams& params, std::int64_t n_oracle) {
  params.validate();
  if (n_oracle < 1000) throw InvalidParams("population oracle size too small");
  const Sampler sampler(params);
  std::seed_seq seq{kPopulationSeed, static_cast<std::uint64_t>(n_oracle)};
  std::mt19937_64 rng(seq);
  CellAccumulator acc;
  for (std::int64_t i = 0; i < n_oracle; ++i) acc.add(sampler.next(rng));
  return acc.finish();
}

void MonteCarloConfig::validate() const {
  params.validate();
  if (n < 2) throw InvalidParams("per-replication sample size must be >= 2");
  if (replications < 1) throw InvalidParams("need at least one replication");
  if (mus.empty() || targets.empty()) {
    throw InvalidParams("need at least one mu and one target");
  }
  bootstrap.validate();
  if (threads < 1) throw InvalidParams("threads must be >= 1");
  if (population_draws < 1000) throw InvalidParams("population oracle size too small");
}

MonteCarloReport monte_carlo(const MonteCarloConfig& config) {
  config.validate();

  const CellTable population =
      population_cells(config.params, config.population_draws);

  struct RowSpec {
    Target target;
    double mu;
    double truth;
  };
  std::vector<RowSpec> rows;
  for (const Target target : config.targets) {
    for (const double mu : config.mus) {
      const double truth = breakdown_statistic(population, target, mu);
      if (truth <= 0.02) {
        throw InvalidParams(
            std::string("population breakdown value for target ") +
            to_string(target) + " at mu=" + std::to_string(mu) + " is " +
            std::to_string(truth) +
            "; coverage rows require a value above 0.02");
      }
      rows.push_back({target, mu, truth});
    }
  }

  const std::size_t n_rows = rows.size();
  const int R = config.replications;
  std::vector<std::vector<double>> estimates(n_rows, std::vector<double>(R));
  std::vector<std::vector<double>> ci_lower(n_rows, std::vector<double>(R));

  std::vector<std::function<double(const CellTable&)>> statistics;
  statistics.reserve(n_rows);
  for (const RowSpec& row : rows) {
    statistics.push_back([target = row.target, mu = row.mu](const CellTable& t) {
      return breakdown_statistic(t, target, mu);
    });
  }

  detail::parallel_for(R, config.threads, [&](int r) {
    std::seed_seq seq{config.seed, static_cast<std::uint64_t>(r)};
    std::mt19937_64 rng(seq);
    const std::vector<ObservationRecord> data = simulate(config.params, config.n, rng);

    const CellTable table =
        estimate_cells(data, EstimateOptions{.min_stratum_count = 1});
    BootstrapConfig bcfg = config.bootstrap;
    bcfg.seed = mix_seed(config.seed, r);
    const auto draws = bootstrap_distributions(data, statistics, bcfg);
    for (std::size_t s = 0; s < n_rows; ++s) {
      estimates[s][r] = statistics[s](table);
      ci_lower[s][r] = one_sided_ci_breakdown(draws[s], bcfg.alpha);
    }
  });

  MonteCarloReport report;
  report.n = config.n;
  report.bootstrap_replications = config.bootstrap.replications;
  report.alpha = config.bootstrap.alpha;
  for (std::size_t s = 0; s < n_rows; ++s) {
    MonteCarloRow row;
    row.target = rows[s].target;
    row.mu = rows[s].mu;
    row.truth = rows[s].truth;
    row.replications = R;
    std::vector<double> bias(R);
    int covered = 0;
    for (int r = 0; r < R; ++r) {
      bias[r] = estimates[s][r] - rows[s].truth;
      if (rows[s].truth >= ci_lower[s][r]) ++covered;
    }
    row.avg_bias = 0.0;
    for (const double b : bias) row.avg_bias += b;
    row.avg_bias /= R;
    std::sort(bias.begin(), bias.end());
    row.median_bias = R % 2 == 1 ? bias[R / 2]
                                 : 0.5 * (bias[R / 2 - 1] + bias[R / 2]);
    row.coverage = static_cast<double>(covered) / R;
    report.rows.push_back(row);
  }
  return report;
}

std::string format_table(const MonteCarloReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %6s %9s %10s %10s %8s\n", "target",
                "mu", "truth", "av.bias", "med.bias", "cover");
  out += line;
  for (const MonteCarloRow& row : report.rows) {
    std::snprintf(line, sizeof(line), "%-8s %6.3f %9.5f %10.5f %10.5f %8.3f\n",
                  to_string(row.target), row.mu, row.truth, row.avg_bias,
                  row.median_bias, row.coverage);
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "n=%lld replications=%d bootstrap=%d alpha=%.3f\n",
                static_cast<long long>(report.n),
                report.rows.empty() ? 0 : report.rows.front().replications,
                report.bootstrap_replications, report.alpha);
  out += line;
  return out;
}

}  // namespace ivbd
