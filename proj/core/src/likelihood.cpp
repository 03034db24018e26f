#include "brpf/likelihood.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "brpf/bernoulli_race.hpp"

namespace brpf {

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
    case Strategy::ewpf: return "EWPF";
    case Strategy::rwpf: return "RWPF";
    case Strategy::brpf: return "BRPF";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "EWPF") return Strategy::ewpf;
  if (upper == "RWPF") return Strategy::rwpf;
  if (upper == "BRPF") return Strategy::brpf;
  throw Error(Errc::invalid_parameter, "unknown strategy '" + std::string(name) + "'");
}

LikelihoodEstimate estimate_likelihood(Strategy strategy, std::span<const StepRecord> records) {
  LikelihoodEstimate out;
  out.per_step_factors.reserve(records.size());
  for (std::size_t t = 0; t < records.size(); ++t) {
    const StepRecord& r = records[t];
    const double n = static_cast<double>(r.particles);
    double factor = 0.0;
    if (strategy == Strategy::brpf) {
      factor = r.constant_sum / n * estimate_rho(r.trials).mvue;
    } else {
      factor = r.weight_sum / n;
    }
    if (!(factor > 0.0) || !std::isfinite(factor)) {
      throw Error(Errc::degenerate_step, "likelihood factor is not positive").with_step(t);
    }
    out.per_step_factors.push_back(factor);
    out.log_value += std::log(factor);
  }
  return out;
}

}  // namespace brpf
