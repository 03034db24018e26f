#include "brpf/functionals.hpp"

#include <cmath>
#include <string>

#include "brpf/error.hpp"

namespace brpf {

void Genealogy::push_step(std::vector<double> proposed_values, std::vector<std::size_t> ancestors) {
  values_.push_back(std::move(proposed_values));
  ancestors_.push_back(std::move(ancestors));
}

std::vector<double> Genealogy::trajectory(std::size_t i) const {
  const std::size_t T = steps();
  std::vector<double> path(T);
  std::size_t j = i;
  for (std::size_t t = T; t-- > 0;) {
    j = ancestors_[t][j];
    path[t] = values_[t][j];
  }
  return path;
}

std::vector<double> Genealogy::filtering_values(std::size_t t) const {
  const auto& anc = ancestors_.at(t);
  const auto& val = values_.at(t);
  std::vector<double> out(anc.size());
  for (std::size_t i = 0; i < anc.size(); ++i) out[i] = val[anc[i]];
  return out;
}

void Genealogy::validate() const {
  const std::size_t n = particles();
  for (std::size_t t = 0; t < steps(); ++t) {
    if (values_[t].size() != n || ancestors_[t].size() != n) {
      throw Error(Errc::invalid_parameter, "genealogy: particle count changed at step " + std::to_string(t));
    }
    for (const std::size_t a : ancestors_[t]) {
      if (a >= n) throw Error(Errc::invalid_parameter, "genealogy: ancestor out of range at step " + std::to_string(t));
    }
  }
}

const std::vector<TestFunction>& standard_test_functions() {
  static const std::vector<TestFunction> functions = {
      {"h1",
       [](std::span<const double> x, const EnsembleContext&) {
         double s = 0.0;
         for (const double v : x) s += v;
         return s / static_cast<double>(x.size());
       }},
      {"h2",
       [](std::span<const double> x, const EnsembleContext&) {
         double s = 0.0;
         for (const double v : x) s += v * v;
         return std::sqrt(s);
       }},
      {"h3", [](std::span<const double> x, const EnsembleContext&) { return x.back(); }},
      {"h4",
       [](std::span<const double> x, const EnsembleContext& ctx) {
         const double d = x.back() - ctx.final_mean;
         return d * d;
       }},
  };
  return functions;
}

std::map<std::string, double> estimate_functionals(const Genealogy& genealogy,
                                                   std::span<const TestFunction> functions) {
  std::map<std::string, double> out;
  const std::size_t n = genealogy.particles();
  const std::size_t T = genealogy.steps();
  if (n == 0 || T == 0) return out;

  std::vector<std::vector<double>> paths(n);
  double final_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    paths[i] = genealogy.trajectory(i);
    final_mean += paths[i].back();
  }
  final_mean /= static_cast<double>(n);
  const EnsembleContext ctx{final_mean, T};

  for (const auto& f : functions) {
    double s = 0.0;
    for (const auto& p : paths) s += f.evaluate(p, ctx);
    out[f.label] = s / static_cast<double>(n);
  }
  return out;
}

}  // namespace brpf
