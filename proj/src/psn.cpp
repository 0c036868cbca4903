#include "wgraphlet/psn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>

#include "wgraphlet/error.hpp"

namespace wgraphlet {
namespace {

struct BoundingSphere {
  Eigen::Vector3d center;
  double radius;
};

BoundingSphere bounding_sphere(const Residue& r) {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (const auto& a : r.atoms) c += a.coords;
  c /= static_cast<double>(r.atoms.size());
  double radius = 0.0;
  for (const auto& a : r.atoms) radius = std::max(radius, (a.coords - c).norm());
  return {c, radius};
}

// Residue pairs (a < b) whose bounding spheres come within `cutoff`.
std::vector<std::pair<std::uint32_t, std::uint32_t>> candidate_pairs(const ResidueChain& chain,
                                                                     double cutoff) {
  const std::size_t n = chain.size();
  std::vector<BoundingSphere> spheres;
  spheres.reserve(n);
  double max_radius = 0.0;
  for (const auto& r : chain.residues) {
    spheres.push_back(bounding_sphere(r));
    max_radius = std::max(max_radius, spheres.back().radius);
  }
  // Slack absorbs rounding in the sphere computation; exact distances decide.
  const double slack = 1e-6 * (1.0 + cutoff + max_radius);
  const double cell = cutoff + 2.0 * max_radius + slack;

  auto cell_of = [&](const Eigen::Vector3d& p) {
    return std::array<long, 3>{static_cast<long>(std::floor(p.x() / cell)),
                               static_cast<long>(std::floor(p.y() / cell)),
                               static_cast<long>(std::floor(p.z() / cell))};
  };
  auto hash = [](const std::array<long, 3>& k) {
    return std::hash<long>{}(k[0] * 73856093L ^ k[1] * 19349663L ^ k[2] * 83492791L);
  };
  std::unordered_map<std::array<long, 3>, std::vector<std::uint32_t>, decltype(hash)> grid(
      n, hash);
  for (std::uint32_t i = 0; i < n; ++i) grid[cell_of(spheres[i].center)].push_back(i);

  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto home = cell_of(spheres[i].center);
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy)
        for (long dz = -1; dz <= 1; ++dz) {
          auto it = grid.find({home[0] + dx, home[1] + dy, home[2] + dz});
          if (it == grid.end()) continue;
          for (std::uint32_t j : it->second) {
            if (j <= i) continue;
            const double gap = (spheres[i].center - spheres[j].center).norm() -
                               spheres[i].radius - spheres[j].radius;
            if (gap < cutoff + slack) pairs.emplace_back(i, j);
          }
        }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

double sequence_distance(const Residue& a, const Residue& b, SequencePosition mode) {
  if (mode == SequencePosition::Ordinal) return std::abs(a.ordinal - b.ordinal);
  // Insertion-code neighbours share an author number; treat them as adjacent.
  return std::max(1, std::abs(a.author_number - b.author_number));
}

}  // namespace

double space_distance(const Residue& a, const Residue& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : a.atoms)
    for (const auto& y : b.atoms) best = std::min(best, (x.coords - y.coords).norm());
  return best;
}

WeightedPSN build_psn(const ResidueChain& chain, const PsnOptions& options) {
  if (!(options.cutoff > 0.0) || !std::isfinite(options.cutoff))
    throw InputError("cutoff must be a positive finite distance");
  if (chain.size() < 2) throw DegenerateInputError("PSN needs at least 2 residues");
  if (chain.size() > 65535) throw InputError("PSN node ordinals must fit 16 bits");

  WeightedPSN psn;
  psn.node_count = chain.size();
  psn.cutoff = options.cutoff;

  auto consider = [&](std::uint32_t i, std::uint32_t j) {
    const auto& a = chain.residues[i];
    const auto& b = chain.residues[j];
    const double d = space_distance(a, b);
    if (!(d < options.cutoff)) return;
    if (d == 0.0)
      throw DegenerateInputError("residues " + std::to_string(a.author_number) + " and " +
                                 std::to_string(b.author_number) + " have coincident atoms");
    const double w = std::sqrt(sequence_distance(a, b, options.sequence_position) / d);
    psn.edges.push_back({i, j, d, w});
  };

  if (options.use_cell_list) {
    for (auto [i, j] : candidate_pairs(chain, options.cutoff)) consider(i, j);
  } else {
    for (std::uint32_t i = 0; i < chain.size(); ++i)
      for (std::uint32_t j = i + 1; j < chain.size(); ++j) consider(i, j);
  }
  return psn;
}

void write_psn(std::ostream& out, const WeightedPSN& psn) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", psn.node_count, psn.edges.size(), psn.cutoff);
  out << buf;
  for (const auto& e : psn.edges) {
    std::snprintf(buf, sizeof buf, "%u %u %.17g %.17g\n", e.u + 1, e.v + 1, e.d_space, e.weight);
    out << buf;
  }
}

WeightedPSN read_psn(std::istream& in) {
  WeightedPSN psn;
  std::size_t m = 0;
  if (!(in >> psn.node_count >> m >> psn.cutoff)) throw ParseError("bad PSN header", 1);
  psn.edges.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::uint32_t i = 0, j = 0;
    PsnEdge e;
    if (!(in >> i >> j >> e.d_space >> e.weight) || i == 0 || j <= i || j > psn.node_count)
      throw ParseError("bad PSN edge line", k + 2);
    e.u = i - 1;
    e.v = j - 1;
    psn.edges.push_back(e);
  }
  return psn;
}

}  // namespace wgraphlet
