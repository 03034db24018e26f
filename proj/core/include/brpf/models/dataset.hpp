#pragma once

#include <vector>

namespace brpf {

/// Simulated latent truth at the observation times and the observations.
struct Dataset {
  std::vector<double> latent;
  std::vector<double> observations;
};

}  // namespace brpf
