#ifndef GAMMAFLOW_LATTICE_FIELD_HPP
#define GAMMAFLOW_LATTICE_FIELD_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gammaflow/geometry.hpp"

namespace gammaflow {

/// Circle-valued fields store one phase per node (the derived unit vector is
/// exact by construction); R2-valued fields (post-mollification) store two
/// components per node.
enum class Target { S1, R2 };

/// Uniform lattice over an axis-aligned box: node (i,j,k) sits at
/// lo + h*(i,j,k), with h*(dims[a]-1) spanning the box on every axis.
/// Values are row-major with the last axis fastest. An optional mask marks
/// active nodes (disk domains are masked lattices).
struct LatticeField {
  BoxDomain box;
  double h = 0.0;
  std::array<int, 3> dims{1, 1, 1};
  int dim = 2;  // domain dimension (2 or 3); target dimension is always 2
  Target target = Target::S1;
  std::vector<double> values;       // S1: phases; R2: interleaved (x,y)
  std::vector<std::uint8_t> mask;   // empty = every node active

  LatticeField() = default;
  LatticeField(const BoxDomain& b, const std::array<int, 3>& node_dims, Target t);

  std::size_t node_count() const {
    return std::size_t(dims[0]) * dims[1] * dims[2];
  }
  std::size_t node_index(int ix, int iy, int iz = 0) const {
    return (std::size_t(ix) * dims[1] + iy) * dims[2] + iz;
  }
  Point node_point(int ix, int iy, int iz = 0) const;
  bool node_active(std::size_t idx) const { return mask.empty() || mask[idx]; }

  double phase(std::size_t idx) const { return values[idx]; }
  void set_phase(std::size_t idx, double theta) { values[idx] = theta; }
  void vec(std::size_t idx, double& vx, double& vy) const;

  /// Cells are indexed by their lower-corner node; a cell is active when all
  /// of its 2^dim corners are active.
  std::array<int, 3> cell_dims() const;
  std::size_t cell_count() const;
  std::size_t cell_index(int ix, int iy, int iz = 0) const;
  Point cell_center(int ix, int iy, int iz = 0) const;
  bool cell_active(int ix, int iy, int iz = 0) const;

  /// Squared Frobenius norm of the forward-difference gradient at the cell
  /// with lower corner (ix,iy,iz). S1 fields use chord differences of the
  /// unit vectors, so the energy depends on the map, not the phase lift.
  double cell_grad2(int ix, int iy, int iz = 0) const;
};

/// Wrap to the canonical phase interval (-pi, pi].
double wrap_phase(double x);

struct EnergyReport {
  double p = 1.5;
  bool variant = false;
  double total = 0.0;     // sum over active cells of |grad u|^p h^d (or variant)
  double rescaled = 0.0;  // (n - p) * total with n = 2
  std::vector<double> density;  // per-cell contributions; empty when skipped
};

/// One-point-per-cell quadrature of the p-energy. Rejects p outside (1,2)
/// and fields with fewer than 2 nodes per axis.
EnergyReport p_energy(const LatticeField& field, double p, bool variant,
                      bool with_density = true);

/// Same quadrature, but cell contributions are routed to buckets by a
/// classifier on the cell center (region masks, tube/skeleton/exterior
/// splits). Returns one partial total per bucket.
std::vector<double> p_energy_partition(const LatticeField& field, double p, bool variant,
                                       int bucket_count,
                                       const std::function<int(const Point&)>& classify);

/// Deterministic pairwise (tree) reduction.
double pairwise_sum(std::vector<double> xs);

/// Discrete L^q norm of the pointwise difference of unit vectors (node
/// quadrature, weight h^dim). Fields must share the lattice.
double lq_distance(const LatticeField& u, const LatticeField& v, double q);

/// Discrete L^p norm of the gradient (cell quadrature).
double lp_gradient_norm(const LatticeField& u, double p);

/// Binary field file ("SPHF"): magic, version u32, d u32, dims u32 x d,
/// h f64, origin f64 x d, payload f64 phases row-major little-endian.
/// A JSON sidecar at path + ".json" carries metadata (target, parameters,
/// and the disk mask for masked lattices).
void write_field(const LatticeField& field, const std::string& path,
                 const std::string& metadata_json = "{}");
LatticeField read_field(const std::string& path);

}  // namespace gammaflow

#endif
