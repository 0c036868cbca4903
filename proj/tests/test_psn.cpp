#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support/oracles.hpp"
#include "wgraphlet/error.hpp"
#include "wgraphlet/psn.hpp"

using namespace wgraphlet;

namespace {

ResidueChain line_chain(std::initializer_list<double> xs, std::initializer_list<int> numbers = {}) {
  ResidueChain c;
  int k = 0;
  auto number = numbers.begin();
  for (double x : xs) {
    Residue r;
    r.ordinal = ++k;
    r.author_number = numbers.size() ? *number++ : k;
    r.name = "GLY";
    r.atoms.push_back({"C", Eigen::Vector3d(x, 0, 0)});
    r.atoms.push_back({"O", Eigen::Vector3d(x, 1.0, 0)});
    c.residues.push_back(r);
  }
  return c;
}

}  // namespace

TEST_CASE("edges and weights on a hand-checked chain") {
  const auto chain = line_chain({0.0, 4.0, 7.0, 20.0});
  const auto psn = build_psn(chain);
  REQUIRE(psn.edge_count() == 2);
  CHECK(psn.edges[0] == PsnEdge{0, 1, 4.0, std::sqrt(1.0 / 4.0)});
  CHECK(psn.edges[1] == PsnEdge{1, 2, 3.0, std::sqrt(1.0 / 3.0)});

  const auto wide = build_psn(chain, {.cutoff = 7.5});
  REQUIRE(wide.edge_count() == 3);
  CHECK(wide.edges[1] == PsnEdge{0, 2, 7.0, std::sqrt(2.0 / 7.0)});
}

TEST_CASE("cutoff is strict") {
  const auto psn = build_psn(line_chain({0.0, 6.0}));
  CHECK(psn.edge_count() == 0);
}

TEST_CASE("author numbering changes sequence separation") {
  const auto chain = line_chain({0.0, 4.0, 8.0}, {10, 15, 16});
  const auto psn = build_psn(chain, {.cutoff = 4.5, .sequence_position = SequencePosition::AuthorNumber});
  REQUIRE(psn.edge_count() == 2);
  CHECK(psn.edges[0].weight == std::sqrt(5.0 / 4.0));
  CHECK(psn.edges[1].weight == std::sqrt(1.0 / 4.0));
}

TEST_CASE("cell list agrees with the all-pairs scan") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto residues = testing::compact_chain(120, seed);
    const auto chain = parse_pdb(testing::pdb_text(residues), 'A');
    for (double cutoff : {4.0, 6.0, 8.5}) {
      const auto fast = build_psn(chain, {.cutoff = cutoff});
      const auto slow = build_psn(chain, {.cutoff = cutoff, .use_cell_list = false});
      CHECK(fast == slow);
      for (const auto& e : fast.edges) {
        CHECK(e.u < e.v);
        CHECK(e.d_space < cutoff);
        CHECK(e.weight == std::sqrt(static_cast<double>(e.v - e.u) / e.d_space));
      }
    }
  }
}

TEST_CASE("minimum distance spans all heavy-atom pairs") {
  Residue a, b;
  a.atoms = {{"C", {0, 0, 0}}, {"N", {3, 0, 0}}};
  b.atoms = {{"O", {10, 0, 0}}, {"C", {3, 4, 0}}};
  CHECK(space_distance(a, b) == 4.0);
  CHECK(space_distance(b, a) == 4.0);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(build_psn(line_chain({0, 4}), {.cutoff = 0.0}), InputError);
  CHECK_THROWS_AS(build_psn(line_chain({0, 4}), {.cutoff = -1.0}), InputError);
  CHECK_THROWS_AS(build_psn(line_chain({0})), DegenerateInputError);
  CHECK_THROWS_AS(build_psn(line_chain({2.0, 2.0})), DegenerateInputError);
}

TEST_CASE("text round trip is lossless") {
  const auto chain = parse_pdb(testing::pdb_text(testing::compact_chain(60, 4)), 'A');
  const auto psn = build_psn(chain);
  std::stringstream text;
  write_psn(text, psn);
  CHECK(read_psn(text) == psn);
  std::istringstream broken("3 1 6\n2 1 4.0 0.5\n");
  CHECK_THROWS_AS(read_psn(broken), ParseError);
}
