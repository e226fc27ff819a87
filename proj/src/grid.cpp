#include "msfv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "msfv/errors.hpp"

namespace msfv {

namespace {

// Uniform draw in [0, 1) from the high 53 bits; avoids the
// implementation-defined std::uniform_real_distribution mapping.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void build_faces_2d(Grid& g) {
  const int nx = g.cell_counts[0], ny = g.cell_counts[1];
  const double hx = g.extents[0] / nx, hy = g.extents[1] / ny;
  g.faces.clear();
  g.faces.reserve(static_cast<size_t>((nx + 1) * ny + nx * (ny + 1)));

  // Vertical faces (x-normal). Node order is chosen so that rotating the edge
  // vector clockwise yields the owner->neighbor (or outward) normal; the same
  // rule is reused when geometry is recomputed after node perturbation.
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix <= nx; ++ix) {
      Face f;
      f.centroid = {ix * hx, (iy + 0.5) * hy, 0.0};
      if (ix == 0) {
        f.owner = g.cell_index(0, iy);
        f.boundary_side = static_cast<int>(Side::XMin);
        f.area_normal = {-hy, 0.0, 0.0};
        f.nodes = {g.node_index(0, iy + 1), g.node_index(0, iy)};
      } else if (ix == nx) {
        f.owner = g.cell_index(nx - 1, iy);
        f.boundary_side = static_cast<int>(Side::XMax);
        f.area_normal = {hy, 0.0, 0.0};
        f.nodes = {g.node_index(nx, iy), g.node_index(nx, iy + 1)};
      } else {
        f.owner = g.cell_index(ix - 1, iy);
        f.neighbor = g.cell_index(ix, iy);
        f.area_normal = {hy, 0.0, 0.0};
        f.nodes = {g.node_index(ix, iy), g.node_index(ix, iy + 1)};
      }
      g.faces.push_back(f);
    }
  }
  // Horizontal faces (y-normal).
  for (int iy = 0; iy <= ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      Face f;
      f.centroid = {(ix + 0.5) * hx, iy * hy, 0.0};
      if (iy == 0) {
        f.owner = g.cell_index(ix, 0);
        f.boundary_side = static_cast<int>(Side::YMin);
        f.area_normal = {0.0, -hx, 0.0};
        f.nodes = {g.node_index(ix, 0), g.node_index(ix + 1, 0)};
      } else if (iy == ny) {
        f.owner = g.cell_index(ix, ny - 1);
        f.boundary_side = static_cast<int>(Side::YMax);
        f.area_normal = {0.0, hx, 0.0};
        f.nodes = {g.node_index(ix + 1, ny), g.node_index(ix, ny)};
      } else {
        f.owner = g.cell_index(ix, iy - 1);
        f.neighbor = g.cell_index(ix, iy);
        f.area_normal = {0.0, hx, 0.0};
        f.nodes = {g.node_index(ix + 1, iy), g.node_index(ix, iy)};
      }
      g.faces.push_back(f);
    }
  }
}

void build_faces_3d(Grid& g) {
  const int nx = g.cell_counts[0], ny = g.cell_counts[1], nz = g.cell_counts[2];
  const double hx = g.extents[0] / nx, hy = g.extents[1] / ny, hz = g.extents[2] / nz;
  g.faces.clear();

  auto push = [&](int axis, int i, int j, int k) {
    Face f;
    if (axis == 0) {
      f.centroid = {i * hx, (j + 0.5) * hy, (k + 0.5) * hz};
      f.area_normal = {hy * hz, 0.0, 0.0};
      if (i == 0) {
        f.owner = g.cell_index(0, j, k);
        f.boundary_side = static_cast<int>(Side::XMin);
        f.area_normal[0] = -hy * hz;
      } else if (i == nx) {
        f.owner = g.cell_index(nx - 1, j, k);
        f.boundary_side = static_cast<int>(Side::XMax);
      } else {
        f.owner = g.cell_index(i - 1, j, k);
        f.neighbor = g.cell_index(i, j, k);
      }
    } else if (axis == 1) {
      f.centroid = {(i + 0.5) * hx, j * hy, (k + 0.5) * hz};
      f.area_normal = {0.0, hx * hz, 0.0};
      if (j == 0) {
        f.owner = g.cell_index(i, 0, k);
        f.boundary_side = static_cast<int>(Side::YMin);
        f.area_normal[1] = -hx * hz;
      } else if (j == ny) {
        f.owner = g.cell_index(i, ny - 1, k);
        f.boundary_side = static_cast<int>(Side::YMax);
      } else {
        f.owner = g.cell_index(i, j - 1, k);
        f.neighbor = g.cell_index(i, j, k);
      }
    } else {
      f.centroid = {(i + 0.5) * hx, (j + 0.5) * hy, k * hz};
      f.area_normal = {0.0, 0.0, hx * hy};
      if (k == 0) {
        f.owner = g.cell_index(i, j, 0);
        f.boundary_side = static_cast<int>(Side::ZMin);
        f.area_normal[2] = -hx * hy;
      } else if (k == nz) {
        f.owner = g.cell_index(i, j, nz - 1);
        f.boundary_side = static_cast<int>(Side::ZMax);
      } else {
        f.owner = g.cell_index(i, j, k - 1);
        f.neighbor = g.cell_index(i, j, k);
      }
    }
    g.faces.push_back(f);
  };

  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i <= nx; ++i) push(0, i, j, k);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i < nx; ++i) push(1, i, j, k);
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) push(2, i, j, k);
}

}  // namespace

void Grid::build_cell_faces_cache() const {
  cell_faces_cache_.assign(num_cells(), {});
  for (int f = 0; f < num_faces(); ++f) {
    cell_faces_cache_[faces[f].owner].push_back(f);
    if (faces[f].neighbor >= 0) cell_faces_cache_[faces[f].neighbor].push_back(f);
  }
}

std::vector<int> Grid::faces_of_cell(int cell) const {
  if (cell_faces_cache_.empty()) build_cell_faces_cache();
  return cell_faces_cache_[cell];
}

std::vector<int> Grid::cell_neighbors(int cell) const {
  std::vector<int> nbs;
  for (int f : faces_of_cell(cell)) {
    const Face& face = faces[f];
    if (face.neighbor < 0) continue;
    nbs.push_back(face.owner == cell ? face.neighbor : face.owner);
  }
  std::sort(nbs.begin(), nbs.end());
  return nbs;
}

Grid build_cartesian_grid(const std::vector<double>& extent, const std::vector<int>& cell_counts) {
  if (extent.size() != cell_counts.size() || (extent.size() != 2 && extent.size() != 3)) {
    throw std::invalid_argument("build_cartesian_grid: need 2 or 3 matching extents/counts");
  }
  const int dim = static_cast<int>(extent.size());
  for (int a = 0; a < dim; ++a) {
    if (cell_counts[a] < 1) throw std::invalid_argument("build_cartesian_grid: cell count < 1");
    if (!(extent[a] > 0.0)) throw std::invalid_argument("build_cartesian_grid: extent <= 0");
  }

  Grid g;
  g.dim = dim;
  for (int a = 0; a < dim; ++a) {
    g.cell_counts[a] = cell_counts[a];
    g.extents[a] = extent[a];
  }
  if (dim == 2) {
    g.cell_counts[2] = 1;
    g.extents[2] = 1.0;
  }
  const int nx = g.cell_counts[0], ny = g.cell_counts[1], nz = dim == 3 ? g.cell_counts[2] : 1;
  const double hx = g.extents[0] / nx, hy = g.extents[1] / ny;
  const double hz = dim == 3 ? g.extents[2] / nz : 1.0;

  if (dim == 2) {
    g.node_coords.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
    for (int iy = 0; iy <= ny; ++iy)
      for (int ix = 0; ix <= nx; ++ix) g.node_coords.push_back({ix * hx, iy * hy, 0.0});
    g.cell_nodes.reserve(static_cast<size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        g.cell_nodes.push_back({g.node_index(ix, iy), g.node_index(ix + 1, iy),
                                g.node_index(ix + 1, iy + 1), g.node_index(ix, iy + 1),
                                -1, -1, -1, -1});
      }
    }
    build_faces_2d(g);
  } else {
    g.node_coords.reserve(static_cast<size_t>(nx + 1) * (ny + 1) * (nz + 1));
    for (int iz = 0; iz <= nz; ++iz)
      for (int iy = 0; iy <= ny; ++iy)
        for (int ix = 0; ix <= nx; ++ix) g.node_coords.push_back({ix * hx, iy * hy, iz * hz});
    g.cell_nodes.reserve(static_cast<size_t>(nx) * ny * nz);
    for (int iz = 0; iz < nz; ++iz) {
      for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
          g.cell_nodes.push_back(
              {g.node_index(ix, iy, iz), g.node_index(ix + 1, iy, iz),
               g.node_index(ix + 1, iy + 1, iz), g.node_index(ix, iy + 1, iz),
               g.node_index(ix, iy, iz + 1), g.node_index(ix + 1, iy, iz + 1),
               g.node_index(ix + 1, iy + 1, iz + 1), g.node_index(ix, iy + 1, iz + 1)});
        }
      }
    }
    build_faces_3d(g);
  }

  const int ncells = nx * ny * nz;
  g.cell_centroids.reserve(ncells);
  g.cell_volumes.assign(ncells, dim == 2 ? hx * hy : hx * hy * hz);
  for (int iz = 0; iz < nz; ++iz)
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        g.cell_centroids.push_back(
            {(ix + 0.5) * hx, (iy + 0.5) * hy, dim == 3 ? (iz + 0.5) * hz : 0.0});
  return g;
}

void recompute_geometry_2d(Grid& grid) {
  if (grid.dim != 2) throw std::invalid_argument("recompute_geometry_2d: 2-D grids only");
  for (Face& f : grid.faces) {
    const Vec3& a = grid.node_coords[f.nodes[0]];
    const Vec3& b = grid.node_coords[f.nodes[1]];
    f.centroid = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.0};
    f.area_normal = {b[1] - a[1], -(b[0] - a[0]), 0.0};
  }
  for (int c = 0; c < grid.num_cells(); ++c) {
    double twice_area = 0.0, cx = 0.0, cy = 0.0;
    for (int k = 0; k < 4; ++k) {
      const Vec3& p = grid.node_coords[grid.cell_nodes[c][k]];
      const Vec3& q = grid.node_coords[grid.cell_nodes[c][(k + 1) % 4]];
      const double cross = p[0] * q[1] - q[0] * p[1];
      twice_area += cross;
      cx += (p[0] + q[0]) * cross;
      cy += (p[1] + q[1]) * cross;
    }
    if (!(twice_area > 0.0)) {
      throw GridError("degenerate grid: non-positive volume for cell " + std::to_string(c));
    }
    grid.cell_volumes[c] = 0.5 * twice_area;
    grid.cell_centroids[c] = {cx / (3.0 * twice_area), cy / (3.0 * twice_area), 0.0};
  }
}

Grid perturb_interior_nodes(const Grid& grid, double amplitude, std::uint64_t seed) {
  if (grid.dim != 2) throw std::invalid_argument("perturb_interior_nodes: 2-D grids only");
  if (amplitude < 0.0 || amplitude >= 0.5) {
    throw std::invalid_argument("perturb_interior_nodes: amplitude must be in [0, 0.5)");
  }
  Grid out = grid;
  if (amplitude == 0.0) return out;

  double h = std::numeric_limits<double>::infinity();
  for (const Face& f : grid.faces) {
    h = std::min(h, std::hypot(f.area_normal[0], f.area_normal[1]));
  }

  std::mt19937_64 rng(seed);
  const int nx = grid.cell_counts[0], ny = grid.cell_counts[1];
  // Fixed draw order: ascending node index, x displacement then y.
  for (int iy = 1; iy < ny; ++iy) {
    for (int ix = 1; ix < nx; ++ix) {
      const double dx = (2.0 * unit_uniform(rng) - 1.0) * amplitude * h;
      const double dy = (2.0 * unit_uniform(rng) - 1.0) * amplitude * h;
      Vec3& p = out.node_coords[grid.node_index(ix, iy)];
      p[0] += dx;
      p[1] += dy;
    }
  }
  recompute_geometry_2d(out);
  return out;
}

CoarsePartition partition_uniform(const Grid& grid, const std::vector<int>& ratio) {
  if (static_cast<int>(ratio.size()) != grid.dim) {
    throw std::invalid_argument("partition_uniform: ratio dimension mismatch");
  }
  for (int r : ratio) {
    if (r < 1) throw std::invalid_argument("partition_uniform: ratio must be >= 1");
  }

  CoarsePartition p;
  p.dim = grid.dim;
  p.fine_counts = grid.cell_counts;
  for (int a = 0; a < grid.dim; ++a) {
    p.ratios[a] = ratio[a];
    p.block_counts[a] = (grid.cell_counts[a] + ratio[a] - 1) / ratio[a];
  }

  const int m = p.block_counts[0] * p.block_counts[1] * p.block_counts[2];
  p.block_of_cell.resize(grid.num_cells());
  p.cells_of_block.assign(m, {});
  for (int c = 0; c < grid.num_cells(); ++c) {
    const auto mi = grid.cell_multi_index(c);
    const int b = p.block_index(std::min(mi[0] / p.ratios[0], p.block_counts[0] - 1),
                                std::min(mi[1] / p.ratios[1], p.block_counts[1] - 1),
                                std::min(mi[2] / p.ratios[2], p.block_counts[2] - 1));
    p.block_of_cell[c] = b;
    p.cells_of_block[b].push_back(c);
  }

  p.block_center_cell.resize(m);
  for (int b = 0; b < m; ++b) {
    const auto& cells = p.cells_of_block[b];
    Vec3 centroid{};
    for (int c : cells) {
      for (int a = 0; a < 3; ++a) centroid[a] += grid.cell_centroids[c][a];
    }
    for (int a = 0; a < 3; ++a) centroid[a] /= static_cast<double>(cells.size());
    int best = cells.front();
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int c : cells) {
      const Vec3& x = grid.cell_centroids[c];
      const double d2 = (x[0] - centroid[0]) * (x[0] - centroid[0]) +
                        (x[1] - centroid[1]) * (x[1] - centroid[1]) +
                        (x[2] - centroid[2]) * (x[2] - centroid[2]);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = c;
      }
    }
    p.block_center_cell[b] = best;
  }
  return p;
}

SupportRegions build_support_regions(const Grid& grid, const CoarsePartition& partition) {
  if (partition.fine_counts != grid.cell_counts) {
    throw std::invalid_argument("build_support_regions: partition does not match grid");
  }
  const int m = partition.num_blocks();
  SupportRegions sr;
  sr.support.resize(m);
  sr.boundary.resize(m);
  sr.covering.assign(grid.num_cells(), {});

  std::vector<char> is_center(grid.num_cells(), 0);
  for (int c : partition.block_center_cell) is_center[c] = 1;

  std::vector<char> in_support(grid.num_cells(), 0);
  std::vector<char> in_halo(grid.num_cells(), 0);
  std::vector<char> in_global(grid.num_cells(), 0);

  for (int b = 0; b < m; ++b) {
    const auto bi = partition.block_multi_index(b);
    // Per-axis closed interval between the center-cell indices of the
    // neighboring blocks on each side, clamped at the domain boundary.
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < 3; ++a) {
      if (a >= grid.dim) {
        lo[a] = hi[a] = 0;
        continue;
      }
      std::array<int, 3> nb = bi;
      if (bi[a] > 0) {
        nb[a] = bi[a] - 1;
        const int center = partition.block_center_cell[partition.block_index(nb[0], nb[1], nb[2])];
        lo[a] = grid.cell_multi_index(center)[a];
      } else {
        lo[a] = 0;
      }
      if (bi[a] < partition.block_counts[a] - 1) {
        nb = bi;
        nb[a] = bi[a] + 1;
        const int center = partition.block_center_cell[partition.block_index(nb[0], nb[1], nb[2])];
        hi[a] = grid.cell_multi_index(center)[a];
      } else {
        hi[a] = grid.cell_counts[a] - 1;
      }
    }

    auto& sup = sr.support[b];
    for (int iz = lo[2]; iz <= hi[2]; ++iz)
      for (int iy = lo[1]; iy <= hi[1]; ++iy)
        for (int ix = lo[0]; ix <= hi[0]; ++ix) sup.push_back(grid.cell_index(ix, iy, iz));

    for (int c : sup) {
      in_support[c] = 1;
      sr.covering[c].push_back(b);
    }
    // Halo: cells outside I_j with a face-neighbor inside, block centers
    // excluded (center rows are held fixed by the basis smoother instead).
    auto& halo = sr.boundary[b];
    for (int c : sup) {
      for (int nb : grid.cell_neighbors(c)) {
        if (!in_support[nb] && !in_halo[nb] && !is_center[nb]) {
          in_halo[nb] = 1;
          halo.push_back(nb);
        }
      }
    }
    std::sort(halo.begin(), halo.end());
    for (int c : sup) in_support[c] = 0;
    for (int c : halo) {
      in_halo[c] = 0;
      in_global[c] = 1;
    }
  }

  for (int c = 0; c < grid.num_cells(); ++c) {
    if (in_global[c]) sr.global_boundary.push_back(c);
  }
  return sr;
}

}  // namespace msfv
