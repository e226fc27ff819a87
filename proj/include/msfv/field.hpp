#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace msfv {

struct Grid;

/// Symmetric 2x2 tensor in millidarcy.
struct Tensor2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

/// Per-cell permeability: full symmetric tensor in 2-D, diagonal in 3-D.
class TensorField {
public:
  static TensorField homogeneous2(Tensor2 k, int num_cells);
  static TensorField cellwise2(std::vector<Tensor2> k);
  static TensorField cellwise3(std::vector<std::array<double, 3>> diag);

  int dim() const { return dim_; }
  bool homogeneous() const { return homogeneous_; }
  int num_cells() const;

  const Tensor2& tensor2(int cell) const { return t2_[homogeneous_ ? 0 : cell]; }
  const std::array<double, 3>& diag3(int cell) const { return d3_[homogeneous_ ? 0 : cell]; }

  /// Every tensor must be symmetric positive definite; throws otherwise.
  void validate_spd() const;

private:
  int dim_ = 2;
  bool homogeneous_ = false;
  int num_cells_ = 0;
  std::vector<Tensor2> t2_;
  std::vector<std::array<double, 3>> d3_;
};

/// K = R(theta) * diag(k1, k2) * R(theta)^T, homogeneous over the grid.
TensorField rotated_tensor(double theta_degrees, double k1, double k2, int num_cells);

struct Spe10Dims {
  int nx = 60;
  int ny = 220;
  int nz = 85;
};

/// Reads the whitespace-separated permeability file: kx block, then ky, then
/// kz; within each block x varies fastest, then y, then z. layer_lo/layer_hi
/// are 1-based and inclusive; layer nz is the bottom layer. A single layer
/// yields a 2-D field with diag(kx, ky) (or isotropic kx if use_ky is false);
/// a range yields a 3-D diagonal field.
TensorField read_spe10(const std::string& path, int layer_lo, int layer_hi,
                       bool use_ky = true, const Spe10Dims& dims = {});

/// Isotropic k = exp(mu_log + sigma_log * z), z i.i.d. standard normal.
TensorField lognormal_field(const Grid& grid, std::uint64_t seed, double mu_log,
                            double sigma_log);

}  // namespace msfv
