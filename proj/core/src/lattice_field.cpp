#include "gammaflow/lattice_field.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>
#include "gammaflow/constants.hpp"

namespace gammaflow {

double wrap_phase(double x) {
  double r = std::remainder(x, 2.0 * kPi);
  if (r <= -kPi) r = kPi;  // remainder can return -pi; canonical interval is (-pi, pi]
  return r;
}

LatticeField::LatticeField(const BoxDomain& b, const std::array<int, 3>& node_dims, Target t)
    : box(b), dims(node_dims), dim(b.dim()), target(t) {
  if (dim == 2 && dims[2] != 1)
    throw std::invalid_argument("LatticeField: 2-D fields need dims[2] == 1");
  for (int a = 0; a < dim; ++a)
    if (dims[a] < 2) throw std::invalid_argument("LatticeField: need at least 2 nodes per axis");
  h = box.side(0) / (dims[0] - 1);
  for (int a = 1; a < dim; ++a) {
    double ha = box.side(a) / (dims[a] - 1);
    if (std::abs(ha - h) > 1e-9 * h)
      throw std::invalid_argument("LatticeField: box spans incompatible with a single spacing h");
  }
  values.assign(node_count() * (t == Target::R2 ? 2 : 1), 0.0);
}

Point LatticeField::node_point(int ix, int iy, int iz) const {
  Point p = box.lo;
  p[0] += h * ix;
  p[1] += h * iy;
  if (dim == 3) p[2] += h * iz;
  return p;
}

void LatticeField::vec(std::size_t idx, double& vx, double& vy) const {
  if (target == Target::S1) {
    vx = std::cos(values[idx]);
    vy = std::sin(values[idx]);
  } else {
    vx = values[2 * idx];
    vy = values[2 * idx + 1];
  }
}

std::array<int, 3> LatticeField::cell_dims() const {
  return {dims[0] - 1, dims[1] - 1, dim == 3 ? dims[2] - 1 : 1};
}

std::size_t LatticeField::cell_count() const {
  auto cd = cell_dims();
  return std::size_t(cd[0]) * cd[1] * cd[2];
}

std::size_t LatticeField::cell_index(int ix, int iy, int iz) const {
  auto cd = cell_dims();
  return (std::size_t(ix) * cd[1] + iy) * cd[2] + iz;
}

Point LatticeField::cell_center(int ix, int iy, int iz) const {
  Point p = box.lo;
  p[0] += h * (ix + 0.5);
  p[1] += h * (iy + 0.5);
  if (dim == 3) p[2] += h * (iz + 0.5);
  return p;
}

bool LatticeField::cell_active(int ix, int iy, int iz) const {
  if (mask.empty()) return true;
  for (int dx = 0; dx <= 1; ++dx)
    for (int dy = 0; dy <= 1; ++dy)
      for (int dz = 0; dz <= (dim == 3 ? 1 : 0); ++dz)
        if (!mask[node_index(ix + dx, iy + dy, iz + dz)]) return false;
  return true;
}

double LatticeField::cell_grad2(int ix, int iy, int iz) const {
  const std::size_t i0 = node_index(ix, iy, iz);
  const std::size_t step[3] = {std::size_t(dims[1]) * dims[2], std::size_t(dims[2]), 1};
  double g2 = 0.0;
  if (target == Target::S1) {
    const double t0 = values[i0];
    for (int a = 0; a < dim; ++a) {
      const double s = std::sin(0.5 * (values[i0 + step[a]] - t0));
      g2 += 4.0 * s * s;
    }
  } else {
    const double x0 = values[2 * i0], y0 = values[2 * i0 + 1];
    for (int a = 0; a < dim; ++a) {
      const std::size_t i1 = i0 + step[a];
      const double dx = values[2 * i1] - x0, dy = values[2 * i1 + 1] - y0;
      g2 += dx * dx + dy * dy;
    }
  }
  return g2 / (h * h);
}

double pairwise_sum(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::size_t n = xs.size();
  while (n > 1) {
    std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i + half < n; ++i) xs[i] += xs[i + half];
    n = half;
  }
  return xs[0];
}

namespace {

void check_energy_args(const LatticeField& f, double p) {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("p_energy: p must lie in (1, 2)");
  for (int a = 0; a < f.dim; ++a)
    if (f.dims[a] < 2) throw std::invalid_argument("p_energy: fewer than 2 nodes per axis");
}

}  // namespace

EnergyReport p_energy(const LatticeField& field, double p, bool variant, bool with_density) {
  check_energy_args(field, p);
  EnergyReport rep;
  rep.p = p;
  rep.variant = variant;
  const auto cd = field.cell_dims();
  const double hd = std::pow(field.h, field.dim);
  if (with_density) rep.density.assign(field.cell_count(), 0.0);

  std::vector<double> row_sums;
  row_sums.reserve(std::size_t(cd[0]));
  for (int ix = 0; ix < cd[0]; ++ix) {
    double row = 0.0;
    for (int iy = 0; iy < cd[1]; ++iy) {
      for (int iz = 0; iz < (field.dim == 3 ? cd[2] : 1); ++iz) {
        if (!field.cell_active(ix, iy, iz)) continue;
        const double g2 = field.cell_grad2(ix, iy, iz);
        const double contrib =
            (variant ? std::pow(1.0 + g2, 0.5 * p) : std::pow(g2, 0.5 * p)) * hd;
        row += contrib;
        if (with_density) rep.density[field.cell_index(ix, iy, iz)] = contrib;
      }
    }
    row_sums.push_back(row);
  }
  rep.total = pairwise_sum(std::move(row_sums));
  rep.rescaled = (2.0 - p) * rep.total;
  return rep;
}

std::vector<double> p_energy_partition(const LatticeField& field, double p, bool variant,
                                       int bucket_count,
                                       const std::function<int(const Point&)>& classify) {
  check_energy_args(field, p);
  const auto cd = field.cell_dims();
  const double hd = std::pow(field.h, field.dim);
  std::vector<std::vector<double>> rows(bucket_count);
  for (int ix = 0; ix < cd[0]; ++ix) {
    std::vector<double> row(bucket_count, 0.0);
    for (int iy = 0; iy < cd[1]; ++iy) {
      for (int iz = 0; iz < (field.dim == 3 ? cd[2] : 1); ++iz) {
        if (!field.cell_active(ix, iy, iz)) continue;
        const int bucket = classify(field.cell_center(ix, iy, iz));
        if (bucket < 0 || bucket >= bucket_count) continue;
        const double g2 = field.cell_grad2(ix, iy, iz);
        row[bucket] += (variant ? std::pow(1.0 + g2, 0.5 * p) : std::pow(g2, 0.5 * p)) * hd;
      }
    }
    for (int b = 0; b < bucket_count; ++b) rows[b].push_back(row[b]);
  }
  std::vector<double> out(bucket_count);
  for (int b = 0; b < bucket_count; ++b) out[b] = pairwise_sum(std::move(rows[b]));
  return out;
}

double lq_distance(const LatticeField& u, const LatticeField& v, double q) {
  if (u.dims != v.dims || u.dim != v.dim)
    throw std::invalid_argument("lq_distance: fields must share the lattice");
  const double hd = std::pow(u.h, u.dim);
  std::vector<double> parts;
  parts.reserve(u.node_count());
  for (std::size_t i = 0; i < u.node_count(); ++i) {
    if (!u.node_active(i) || !v.node_active(i)) continue;
    double ux, uy, vx, vy;
    u.vec(i, ux, uy);
    v.vec(i, vx, vy);
    const double d2 = (ux - vx) * (ux - vx) + (uy - vy) * (uy - vy);
    parts.push_back(std::pow(d2, 0.5 * q) * hd);
  }
  return std::pow(pairwise_sum(std::move(parts)), 1.0 / q);
}

double lp_gradient_norm(const LatticeField& u, double p) {
  const auto cd = u.cell_dims();
  const double hd = std::pow(u.h, u.dim);
  std::vector<double> parts;
  for (int ix = 0; ix < cd[0]; ++ix)
    for (int iy = 0; iy < cd[1]; ++iy)
      for (int iz = 0; iz < (u.dim == 3 ? cd[2] : 1); ++iz) {
        if (!u.cell_active(ix, iy, iz)) continue;
        parts.push_back(std::pow(u.cell_grad2(ix, iy, iz), 0.5 * p) * hd);
      }
  return std::pow(pairwise_sum(std::move(parts)), 1.0 / p);
}

void write_field(const LatticeField& field, const std::string& path,
                 const std::string& metadata_json) {
  if (field.target != Target::S1)
    throw std::invalid_argument("write_field: only S1 fields have a binary representation");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_field: cannot open " + path);
  out.write("SPHF", 4);
  auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
  auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
  put_u32(1);
  put_u32(std::uint32_t(field.dim));
  for (int a = 0; a < field.dim; ++a) put_u32(std::uint32_t(field.dims[a]));
  put_f64(field.h);
  for (int a = 0; a < field.dim; ++a) put_f64(field.box.lo[a]);
  out.write(reinterpret_cast<const char*>(field.values.data()),
            std::streamsize(field.values.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write_field: short write to " + path);

  nlohmann::json side = nlohmann::json::parse(metadata_json);
  side["target"] = "S1";
  if (!field.mask.empty()) {
    side["mask"] = "disk";  // reconstructed from domain on read
  }
  std::ofstream meta(path + ".json");
  meta << side.dump(2) << "\n";
}

LatticeField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_field: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SPHF", 4) != 0)
    throw std::runtime_error("read_field: bad magic in " + path);
  auto get_u32 = [&]() {
    std::uint32_t v;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  auto get_f64 = [&]() {
    double v;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
  };
  const std::uint32_t version = get_u32();
  if (version != 1) throw std::runtime_error("read_field: unsupported version");
  const int d = int(get_u32());
  if (d != 2 && d != 3) throw std::runtime_error("read_field: bad dimension");
  std::array<int, 3> dims{1, 1, 1};
  for (int a = 0; a < d; ++a) dims[a] = int(get_u32());
  const double h = get_f64();
  Point lo, hi;
  lo.dim = hi.dim = d;
  for (int a = 0; a < d; ++a) lo[a] = get_f64();
  for (int a = 0; a < d; ++a) hi[a] = lo[a] + h * (dims[a] - 1);
  LatticeField f(BoxDomain(lo, hi), dims, Target::S1);
  in.read(reinterpret_cast<char*>(f.values.data()),
          std::streamsize(f.values.size() * sizeof(double)));
  if (!in) throw std::runtime_error("read_field: truncated payload in " + path);

  // Masked (disk) lattices record their domain in the sidecar.
  std::ifstream meta(path + ".json");
  if (meta) {
    const nlohmann::json side = nlohmann::json::parse(meta, nullptr, false);
    if (side.is_object() && side.contains("domain") && side.at("domain").contains("radius")) {
      const auto& dom = side.at("domain");
      Point c(dom.at("center")[0].get<double>(), dom.at("center")[1].get<double>());
      const double radius = dom.at("radius").get<double>();
      f.mask.assign(f.node_count(), 0);
      for (int ix = 0; ix < f.dims[0]; ++ix)
        for (int iy = 0; iy < f.dims[1]; ++iy)
          if (dist(f.node_point(ix, iy), c) <= radius) f.mask[f.node_index(ix, iy)] = 1;
    }
  }
  return f;
}

}  // namespace gammaflow
