#include "msfv/field.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "msfv/errors.hpp"
#include "msfv/grid.hpp"

namespace msfv {

TensorField TensorField::homogeneous2(Tensor2 k, int num_cells) {
  TensorField f;
  f.dim_ = 2;
  f.homogeneous_ = true;
  f.num_cells_ = num_cells;
  f.t2_ = {k};
  f.validate_spd();
  return f;
}

TensorField TensorField::cellwise2(std::vector<Tensor2> k) {
  TensorField f;
  f.dim_ = 2;
  f.num_cells_ = static_cast<int>(k.size());
  f.t2_ = std::move(k);
  f.validate_spd();
  return f;
}

TensorField TensorField::cellwise3(std::vector<std::array<double, 3>> diag) {
  TensorField f;
  f.dim_ = 3;
  f.num_cells_ = static_cast<int>(diag.size());
  f.d3_ = std::move(diag);
  f.validate_spd();
  return f;
}

int TensorField::num_cells() const { return num_cells_; }

void TensorField::validate_spd() const {
  if (dim_ == 2) {
    for (size_t i = 0; i < t2_.size(); ++i) {
      const Tensor2& k = t2_[i];
      if (!(k.xx > 0.0) || !(k.yy > 0.0) || !(k.xx * k.yy - k.xy * k.xy > 0.0)) {
        throw DataError("tensor field: non-SPD tensor at cell " + std::to_string(i));
      }
    }
  } else {
    for (size_t i = 0; i < d3_.size(); ++i) {
      for (double v : d3_[i]) {
        if (!(v > 0.0)) {
          throw DataError("tensor field: non-positive diagonal at cell " + std::to_string(i));
        }
      }
    }
  }
}

TensorField rotated_tensor(double theta_degrees, double k1, double k2, int num_cells) {
  if (!(k1 > 0.0) || !(k2 > 0.0)) {
    throw std::invalid_argument("rotated_tensor: principal values must be positive");
  }
  const double t = theta_degrees * std::numbers::pi / 180.0;
  const double c = std::cos(t), s = std::sin(t);
  Tensor2 k;
  k.xx = c * c * k1 + s * s * k2;
  k.yy = s * s * k1 + c * c * k2;
  k.xy = c * s * (k1 - k2);
  return TensorField::homogeneous2(k, num_cells);
}

TensorField read_spe10(const std::string& path, int layer_lo, int layer_hi, bool use_ky,
                       const Spe10Dims& dims) {
  if (layer_lo < 1 || layer_hi > dims.nz || layer_lo > layer_hi) {
    throw std::invalid_argument("read_spe10: layer range out of bounds");
  }
  std::ifstream in(path);
  if (!in) throw DataError("read_spe10: cannot open " + path);

  const size_t per_component = static_cast<size_t>(dims.nx) * dims.ny * dims.nz;
  const size_t expected = 3 * per_component;
  std::vector<double> tokens;
  tokens.reserve(expected);
  double v;
  while (in >> v) {
    tokens.push_back(v);
    if (tokens.size() > expected) break;
  }
  if (tokens.size() != expected) {
    throw FormatError("read_spe10: expected " + std::to_string(expected) + " tokens, found " +
                      std::to_string(tokens.size()) +
                      (tokens.size() > expected ? " or more" : ""));
  }
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (!(tokens[i] > 0.0)) {
      throw DataError("read_spe10: non-positive value at token " + std::to_string(i) +
                      " (cell " + std::to_string(i % per_component) + ")");
    }
  }

  const int layers = layer_hi - layer_lo + 1;
  const size_t layer_cells = static_cast<size_t>(dims.nx) * dims.ny;
  auto component = [&](int comp, int ix, int iy, int iz_one_based) {
    const size_t cell = static_cast<size_t>(ix) +
                        static_cast<size_t>(dims.nx) * (iy + static_cast<size_t>(dims.ny) *
                                                                 (iz_one_based - 1));
    return tokens[comp * per_component + cell];
  };

  if (layers == 1) {
    std::vector<Tensor2> k(layer_cells);
    for (int iy = 0; iy < dims.ny; ++iy) {
      for (int ix = 0; ix < dims.nx; ++ix) {
        const double kx = component(0, ix, iy, layer_lo);
        const double ky = use_ky ? component(1, ix, iy, layer_lo) : kx;
        k[ix + static_cast<size_t>(dims.nx) * iy] = Tensor2{kx, 0.0, ky};
      }
    }
    return TensorField::cellwise2(std::move(k));
  }

  std::vector<std::array<double, 3>> k(layer_cells * layers);
  for (int iz = layer_lo; iz <= layer_hi; ++iz) {
    for (int iy = 0; iy < dims.ny; ++iy) {
      for (int ix = 0; ix < dims.nx; ++ix) {
        const size_t cell = ix + static_cast<size_t>(dims.nx) *
                                     (iy + static_cast<size_t>(dims.ny) * (iz - layer_lo));
        k[cell] = {component(0, ix, iy, iz), component(1, ix, iy, iz), component(2, ix, iy, iz)};
      }
    }
  }
  return TensorField::cellwise3(std::move(k));
}

TensorField lognormal_field(const Grid& grid, std::uint64_t seed, double mu_log,
                            double sigma_log) {
  if (sigma_log < 0.0) throw std::invalid_argument("lognormal_field: sigma_log must be >= 0");

  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  // Box-Muller with a fixed draw sequence; std::normal_distribution is
  // implementation-defined and would break cross-platform determinism.
  bool have_spare = false;
  double spare = 0.0;
  auto normal = [&]() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare = r * std::sin(a);
    have_spare = true;
    return r * std::cos(a);
  };

  const int n = grid.num_cells();
  if (grid.dim == 2) {
    std::vector<Tensor2> k(n);
    for (int c = 0; c < n; ++c) {
      const double v = std::exp(mu_log + sigma_log * normal());
      k[c] = Tensor2{v, 0.0, v};
    }
    return TensorField::cellwise2(std::move(k));
  }
  std::vector<std::array<double, 3>> k(n);
  for (int c = 0; c < n; ++c) {
    const double v = std::exp(mu_log + sigma_log * normal());
    k[c] = {v, v, v};
  }
  return TensorField::cellwise3(std::move(k));
}

}  // namespace msfv
