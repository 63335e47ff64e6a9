#ifndef GAMMAFLOW_MINIMIZER_HPP
#define GAMMAFLOW_MINIMIZER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "gammaflow/currents.hpp"
#include "gammaflow/lattice_field.hpp"

namespace gammaflow {

/// Dirichlet datum for the p-energy minimization: a fixed phase on the
/// boundary ring of a disk (masked lattice) or box, defaulting to
/// theta = degree * arg(x - center).
struct BoundaryDatum {
  enum class Shape { Disk, Box };
  Shape shape = Shape::Disk;
  int degree = 1;
  Point center{0.0, 0.0};
  double radius = 1.0;      // disk
  BoxDomain box;            // box shape
  int grid_nodes = 128;     // nodes per axis

  Domain domain() const {
    return shape == Shape::Disk ? Domain(DiskDomain(center, radius)) : Domain(box);
  }
};

struct SolveOptions {
  double p = 1.5;
  bool variant = false;
  double tol = 1e-7;        // relative objective decrease per sweep
  int max_sweeps = 400;
  enum class Scheme { SequentialRandom, RedBlack } scheme = Scheme::SequentialRandom;
  std::uint64_t seed = 0;
  bool preserve_vorticity = false;  // reject updates that change any plaquette winding
};

struct MinimizeResult {
  LatticeField field;
  EnergyReport report;      // p_energy of the final field (no smoothing floor)
  int sweeps = 0;
  bool converged = false;   // false = sweep budget exhausted (warning)
  double objective = 0.0;   // internal floored objective at exit
};

/// Builds the masked lattice for the datum, with phases set to the datum map
/// everywhere (the default initialization).
LatticeField datum_field(const BoundaryDatum& datum);

/// Interior (free) node indices: active nodes that are not on the boundary
/// ring (boundary = active with an inactive or out-of-grid 4-neighbor).
std::vector<std::size_t> free_nodes(const LatticeField& field);

/// Winding of the datum along the boundary ring; errors if under-resolved.
int datum_boundary_winding(const BoundaryDatum& datum);

/// Coordinate descent on interior phases: each update minimizes the local
/// energy by a period-aware line search (coarse circle scan + golden
/// section); sweeps run in seeded random order until the relative objective
/// decrease per sweep drops below tol. Returns a local minimizer.
MinimizeResult minimize(const BoundaryDatum& datum, const SolveOptions& opts);

/// Same engine on a caller-supplied initial field and free-node set (used to
/// relax recovery maps under their own boundary values).
MinimizeResult minimize_field(const LatticeField& init, const std::vector<std::size_t>& free,
                              const SolveOptions& opts);

/// Per-p record of the vortex experiment.
struct VortexRecord {
  double p = 0.0;
  double energy = 0.0;           // unrescaled total
  double rescaled_energy = 0.0;  // (n-p) * total
  ZeroCurrent vortices;
  double concentration_ratio = 0.0;  // energy fraction within 0.25 of vortices
  double flat_step = 0.0;            // flat distance to the previous p's Jacobian
  bool converged = true;
};

/// Warm-started minimization along a p schedule with vorticity extraction
/// and concentration bookkeeping.
std::vector<VortexRecord> vortex_sweep(const BoundaryDatum& datum,
                                       const std::vector<double>& p_schedule,
                                       const SolveOptions& opts);

/// Rescaled per-cell density (n-p)|grad u|^p h^d; sums to the rescaled energy.
std::vector<double> energy_density_map(const LatticeField& field, double p);

}  // namespace gammaflow

#endif
