#pragma once

#include <string>
#include <string_view>

#include "gridsim/error.hpp"
#include "gridsim/topology.hpp"

namespace gridsim {

// Built-in case studies. The same text ships as data/case{1,2,3}.topo.
//   case 1: 18-router mesh (approximate adjacency)
//   case 2: radial binary tree, sink 0, routers 1-14, generator per leaf
//   case 3: five-router ring, sink on router 1, three generators elsewhere

inline constexpr std::string_view kCase1Text = R"topo(# case1
# Approximate mesh: 18 routers, one generator per zone router, balancing
# authority as sink behind router 4. Edges 5-7, 7-11, 10-11, 4-8 and the
# generators next to routers 2, 9 and 10 are fixed; the remaining adjacency is
# a plausible reconstruction, not an exact one.

node 0 sink
node 1 router
node 2 router
node 3 router
node 4 router
node 5 router
node 6 router
node 7 router
node 8 router
node 9 router
node 10 router
node 11 router
node 12 router
node 13 router
node 14 router
node 15 router
node 16 router
node 17 router
node 18 router
node G12 generator
node G13 generator
node G14 generator
node G15 generator
node G16 generator
node G17 generator
node G18 generator

edge 0 4
edge 4 8
edge 4 3
edge 8 7
edge 8 12
edge 3 1
edge 1 2
edge 2 5
edge 1 6
edge 6 5
edge 5 7
edge 5 9
edge 7 11
edge 11 13
edge 11 10
edge 11 14
edge 10 15
edge 10 16
edge 14 16
edge 9 17
edge 13 18
edge 12 13
edge 15 18
edge 17 6
edge 14 10

edge 2 G12
edge 6 G13
edge 15 G14
edge 16 G15
edge 9 G16
edge 10 G17
edge 14 G18
)topo";

inline constexpr std::string_view kCase2Text = R"topo(# case2
# Radial transmission/distribution network: complete binary router tree
# rooted at the sink, one generator per leaf router.

node 0 sink
node 1 router
node 2 router
node 3 router
node 4 router
node 5 router
node 6 router
node 7 router
node 8 router
node 9 router
node 10 router
node 11 router
node 12 router
node 13 router
node 14 router
node G7 generator
node G8 generator
node G9 generator
node G10 generator
node G11 generator
node G12 generator
node G13 generator
node G14 generator

edge 0 1
edge 0 2
edge 1 3
edge 1 4
edge 2 5
edge 2 6
edge 3 7
edge 3 8
edge 4 9
edge 4 10
edge 5 11
edge 5 12
edge 6 13
edge 6 14

edge 7 G7
edge 8 G8
edge 9 G9
edge 10 G10
edge 11 G11
edge 12 G12
edge 13 G13
edge 14 G14
)topo";

inline constexpr std::string_view kCase3Text = R"topo(# case3
# Ring substation topology: five ring routers, three generators on every
# ring router except router 1, sink attached to router 1.

node 0 sink
node 1 router
node 2 router
node 6 router
node 10 router
node 14 router
node G2-1 generator
node G2-2 generator
node G2-3 generator
node G6-1 generator
node G6-2 generator
node G6-3 generator
node G10-1 generator
node G10-2 generator
node G10-3 generator
node G14-1 generator
node G14-2 generator
node G14-3 generator

edge 1 2
edge 2 6
edge 6 10
edge 10 14
edge 14 1
edge 0 1

edge 2 G2-1
edge 2 G2-2
edge 2 G2-3
edge 6 G6-1
edge 6 G6-2
edge 6 G6-3
edge 10 G10-1
edge 10 G10-2
edge 10 G10-3
edge 14 G14-1
edge 14 G14-2
edge 14 G14-3
)topo";

inline std::string_view builtin_case_text(int id) {
  switch (id) {
    case 1: return kCase1Text;
    case 2: return kCase2Text;
    case 3: return kCase3Text;
    default: throw Error("invalid built-in case id " + std::to_string(id) + " (expected 1, 2 or 3)");
  }
}

inline Topology builtin_case(int id) {
  return parse_topology(builtin_case_text(id), "case" + std::to_string(id));
}

inline bool builtin_case_is_exact(int id) { return id == 2 || id == 3; }

}  // namespace gridsim
