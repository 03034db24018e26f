#include "brpf/particle_filter.hpp"

namespace brpf {

std::vector<std::size_t> multinomial_resample(std::span<const double> weights, std::size_t draw_count,
                                              RandomStream& stream) {
  double sum = 0.0;
  for (const double w : weights) sum += w;
  if (!(sum > 0.0)) throw Error(Errc::degenerate_step, "all particle weights are zero");
  const AliasTable table(weights);
  std::vector<std::size_t> out(draw_count);
  for (auto& i : out) i = table.draw(stream);
  return out;
}

}  // namespace brpf
