#include "pdcheb/problem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pdcheb {

InitialData InitialData::tabulated(std::vector<double> nodal_values) {
  InitialData data;
  data.source_ = std::move(nodal_values);
  return data;
}

std::vector<double> InitialData::sample(const ChebGrid& grid, const AffineMap& space) const {
  if (const auto* table = std::get_if<std::vector<double>>(&source_)) {
    if (table->size() != static_cast<std::size_t>(grid.size())) {
      throw std::invalid_argument("InitialData: tabulated length " + std::to_string(table->size()) +
                                  " does not match grid size " + std::to_string(grid.size()));
    }
    return *table;
  }
  const auto& fn = std::get<Function>(source_);
  std::vector<double> out(grid.size());
  for (int k = 0; k < grid.size(); ++k) {
    out[k] = fn(space.from_reference(grid.node(k)));
    if (!std::isfinite(out[k])) throw std::invalid_argument("InitialData: non-finite value at a node");
  }
  return out;
}

void ProblemSpec::validate() const {
  if (n_max < 2) throw std::invalid_argument("ProblemSpec: n_max must be >= 2");
  if (!(space_map.hi > space_map.lo)) throw std::invalid_argument("ProblemSpec: space map not invertible");
  if (!(time_map.hi > time_map.lo)) throw std::invalid_argument("ProblemSpec: time map not invertible");
  if (!(kernel.horizon() < 0.5 * (space_map.hi - space_map.lo))) {
    throw std::invalid_argument("ProblemSpec: horizon must be smaller than half the bar length");
  }
}

}  // namespace pdcheb
