#include "brpf/experiments/selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "brpf/alias_table.hpp"
#include "brpf/bernoulli_race.hpp"
#include "brpf/experiments/csv.hpp"
#include "brpf/kalman.hpp"
#include "brpf/models/gaussian_ssm.hpp"
#include "brpf/models/ou_process.hpp"
#include "brpf/particle_filter.hpp"
#include "brpf/stats.hpp"

namespace brpf::experiments {

namespace {

struct Check {
  const char* name;
  std::function<std::string()> run;  // empty string on success
};

std::string fail_if(bool bad, const std::string& detail) { return bad ? detail : std::string(); }

}  // namespace

int run_selftest(std::ostream& out, std::uint64_t seed) {
  const RandomStream root(seed);
  const std::vector<Check> checks = {
      {"alias table reproduces masses",
       [] {
         const std::vector<double> w{0.5, 2.0, 0.0, 1.5, 6.0};
         const AliasTable table(w);
         const auto masses = table.reconstructed_masses();
         double worst = 0.0;
         for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(masses[i] - w[i] / 10.0));
         return fail_if(worst > 1e-12, "max mass error " + std::to_string(worst));
       }},
      {"race law matches c*b",
       [&] {
         WeightFactorization f;
         const std::vector<double> c{1.0, 2.0, 0.5, 3.0, 1.0};
         const std::vector<double> b{0.9, 0.2, 0.6, 0.5, 0.05};
         std::vector<double> p(c.size());
         double total = 0.0;
         for (std::size_t i = 0; i < c.size(); ++i) {
           f.constants.push_back(c[i]);
           f.coins.push_back(Coin::with_probability(b[i]));
           total += c[i] * b[i];
         }
         for (std::size_t i = 0; i < c.size(); ++i) p[i] = c[i] * b[i] / total;
         const RaceOutcome race = race_resample(f, 100000, root.substream(1));
         std::vector<std::uint64_t> counts(c.size());
         for (const auto i : race.indices) ++counts[i];
         const auto test = stats::chi_square_gof(counts, p);
         return fail_if(test.p_value < 1e-3, "chi-square p = " + std::to_string(test.p_value));
       }},
      {"MVUE of the stopping probability is unbiased",
       [&] {
         const double rho = 0.5;
         const std::size_t n = 10, reps = 100000;
         std::vector<double> est(reps);
         for (std::size_t r = 0; r < reps; ++r) {
           RandomStream s = root.substream(2, r);
           std::uint64_t total = 0;
           for (std::size_t i = 0; i < n; ++i) total += s.geometric(rho);
           est[r] = static_cast<double>(n - 1) / static_cast<double>(total - 1);
         }
         const auto sum = stats::summarize(est);
         return fail_if(std::abs(sum.mean - rho) > 4.0 * sum.std_error,
                        "mean " + std::to_string(sum.mean) + " se " + std::to_string(sum.std_error));
       }},
      {"Kalman single step",
       [] {
         const std::vector<double> y{0.0};
         const KalmanResult k = kalman_reference(GaussianSSMParams{}, y);
         const double expected = -0.5 * std::log(2.0 * std::numbers::pi * 10.0);
         return fail_if(std::abs(k.filter_means[0]) > 1e-14 || std::abs(k.filter_variances[0] - 2.5) > 1e-12 ||
                            std::abs(k.log_likelihood - expected) > 1e-12,
                        "unexpected Kalman moments");
       }},
      {"quantile convention",
       [] {
         std::vector<double> v(100);
         for (std::size_t i = 0; i < 100; ++i) v[i] = static_cast<double>(i + 1);
         const double lo = stats::quantile_sorted(v, 0.1), hi = stats::quantile_sorted(v, 0.9);
         return fail_if(std::abs(lo - 10.9) > 1e-12 || std::abs(hi - 90.1) > 1e-12,
                        "got " + std::to_string(lo) + ", " + std::to_string(hi));
       }},
      {"OU drift exponential closed form",
       [] {
         const Mat2 e = ou_drift_exponential(-1.0, 1.0);
         const double em1 = std::exp(-1.0);
         return fail_if(std::abs(e(0, 0) - 1.0) > 1e-15 || std::abs(e(0, 1) - (1.0 - em1)) > 1e-15 ||
                            std::abs(e(1, 0)) > 0.0 || std::abs(e(1, 1) - em1) > 1e-15,
                        "closed form mismatch");
       }},
      {"filter output independent of worker count",
       [&] {
         RandomStream data_stream = root.substream(3);
         const GaussianSSMParams params;
         const Dataset d = simulate_gaussian_dataset(params, 8, data_stream);
         const GaussianSSM model(params, d.observations);
         FilterOptions options;
         options.particles = 64;
         options.workers = 1;
         const FilterOutput a = run_filter(model, options, root.substream(4));
         options.workers = 4;
         const FilterOutput b = run_filter(model, options, root.substream(4));
         return fail_if(a.functionals != b.functionals || a.likelihood.log_value != b.likelihood.log_value ||
                            a.total_flips() != b.total_flips(),
                        "outputs differ between 1 and 4 workers");
       }},
      {"CSV quoting",
       [] {
         return fail_if(csv_escape("a,b") != "\"a,b\"" || csv_escape("say \"hi\"") != "\"say \"\"hi\"\"\"" ||
                            csv_escape("plain") != "plain",
                        "unexpected escaping");
       }},
  };

  int failures = 0;
  for (const Check& check : checks) {
    std::string detail;
    try {
      detail = check.run();
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    if (detail.empty()) {
      out << "PASS " << check.name << '\n';
    } else {
      ++failures;
      out << "FAIL " << check.name << ": " << detail << '\n';
    }
  }
  return failures;
}

}  // namespace brpf::experiments
