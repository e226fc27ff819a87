#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace msfv {

using Vec3 = std::array<double, 3>;

/// Boundary side tags, also usable as face boundary markers.
enum class Side : int { XMin = 0, XMax = 1, YMin = 2, YMax = 3, ZMin = 4, ZMax = 5 };

struct Face {
  int owner = -1;
  int neighbor = -1;        ///< -1 for boundary faces
  int boundary_side = -1;   ///< Side tag for boundary faces, -1 for interior
  Vec3 centroid{};
  Vec3 area_normal{};       ///< unit normal (owner -> neighbor) scaled by face area
  std::array<int, 2> nodes{-1, -1};  ///< edge endpoints (2-D only)
};

/// Structured fine grid: Cartesian in 2-D/3-D, optionally node-perturbed in 2-D.
struct Grid {
  int dim = 2;
  std::array<int, 3> cell_counts{1, 1, 1};
  std::array<double, 3> extents{1.0, 1.0, 1.0};
  std::vector<Vec3> node_coords;
  std::vector<std::array<int, 8>> cell_nodes;  ///< 4 CCW corners in 2-D (rest -1), 8 in 3-D
  std::vector<Face> faces;
  std::vector<Vec3> cell_centroids;
  std::vector<double> cell_volumes;

  int num_cells() const { return static_cast<int>(cell_volumes.size()); }
  int num_nodes() const { return static_cast<int>(node_coords.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }

  int cell_index(int ix, int iy, int iz = 0) const {
    return ix + cell_counts[0] * (iy + cell_counts[1] * iz);
  }
  std::array<int, 3> cell_multi_index(int cell) const {
    const int nx = cell_counts[0], ny = cell_counts[1];
    return {cell % nx, (cell / nx) % ny, cell / (nx * ny)};
  }
  int node_index(int ix, int iy, int iz = 0) const {
    const int mx = cell_counts[0] + 1, my = cell_counts[1] + 1;
    return ix + mx * (iy + my * iz);
  }

  /// Face-neighbor cells of a cell (interior faces only).
  std::vector<int> cell_neighbors(int cell) const;
  std::vector<int> faces_of_cell(int cell) const;

private:
  mutable std::vector<std::vector<int>> cell_faces_cache_;
  void build_cell_faces_cache() const;
};

Grid build_cartesian_grid(const std::vector<double>& extent,
                          const std::vector<int>& cell_counts);

/// Recomputes face centroids/normals and cell centroids/volumes from the
/// current node coordinates (2-D). Throws on non-positive cell volume.
void recompute_geometry_2d(Grid& grid);

/// Displaces strictly interior nodes by a seeded uniform vector in
/// [-amplitude*h, amplitude*h] per axis, h = min cell edge length.
Grid perturb_interior_nodes(const Grid& grid, double amplitude, std::uint64_t seed);

struct CoarsePartition {
  std::array<int, 3> ratios{1, 1, 1};
  std::array<int, 3> block_counts{1, 1, 1};
  std::array<int, 3> fine_counts{1, 1, 1};
  int dim = 2;
  std::vector<int> block_of_cell;
  std::vector<std::vector<int>> cells_of_block;
  std::vector<int> block_center_cell;

  int num_blocks() const { return static_cast<int>(cells_of_block.size()); }
  int block_index(int bx, int by, int bz = 0) const {
    return bx + block_counts[0] * (by + block_counts[1] * bz);
  }
  std::array<int, 3> block_multi_index(int block) const {
    const int nbx = block_counts[0], nby = block_counts[1];
    return {block % nbx, (block / nbx) % nby, block / (nbx * nby)};
  }
};

CoarsePartition partition_uniform(const Grid& grid, const std::vector<int>& ratio);

struct SupportRegions {
  std::vector<std::vector<int>> support;    ///< sorted fine cells of I_j per block
  std::vector<std::vector<int>> boundary;   ///< halo cells adjacent to I_j, block centers excluded
  std::vector<int> global_boundary;         ///< sorted union of boundary sets
  std::vector<std::vector<int>> covering;   ///< per fine cell: sorted blocks whose support contains it
};

SupportRegions build_support_regions(const Grid& grid, const CoarsePartition& partition);

}  // namespace msfv
