#include "support/matching_oracle.hpp"

#include <cmath>
#include <vector>

namespace gammaflow::testing {

namespace {

struct Instance {
  std::vector<Point> pos, neg;
  std::vector<double> pos_bd, neg_bd;
};

double best_from(const Instance& inst, std::size_t i, std::vector<char>& neg_used) {
  if (i == inst.pos.size()) {
    double rest = 0.0;
    for (std::size_t j = 0; j < inst.neg.size(); ++j)
      if (!neg_used[j]) rest += inst.neg_bd[j];
    return rest;
  }
  // Positive unit i goes to the boundary...
  double best = inst.pos_bd[i] + best_from(inst, i + 1, neg_used);
  // ... or to any unused negative unit.
  for (std::size_t j = 0; j < inst.neg.size(); ++j) {
    if (neg_used[j]) continue;
    neg_used[j] = 1;
    best = std::min(best, dist(inst.pos[i], inst.neg[j]) + best_from(inst, i + 1, neg_used));
    neg_used[j] = 0;
  }
  return best;
}

}  // namespace

double flat_norm_by_enumeration(const ZeroCurrent& input, const Domain& omega) {
  const ZeroCurrent t = merged(restricted(input, omega));
  Instance inst;
  for (const auto& a : t.atoms)
    for (long long k = 0; k < std::llabs(a.m); ++k) {
      if (a.m > 0) {
        inst.pos.push_back(a.p);
        inst.pos_bd.push_back(omega.boundary_distance(a.p));
      } else {
        inst.neg.push_back(a.p);
        inst.neg_bd.push_back(omega.boundary_distance(a.p));
      }
    }
  std::vector<char> used(inst.neg.size(), 0);
  return best_from(inst, 0, used);
}

}  // namespace gammaflow::testing
