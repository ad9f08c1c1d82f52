#pragma once

#include <stdexcept>
#include <vector>

#include "auctiongraph/graph_model.hpp"

namespace auctiongraph {

class OracleTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AssignmentOptimum {
  double weight = 0.0;
  std::vector<Pair> matching;  // sorted by buyer
};

/// Maximum-weight matching among those of maximum cardinality. Dynamic
/// program over subsets of objects; needs at most 20 objects and 2^objects *
/// (buyers + 1) <= 2^26.
AssignmentOptimum exact_assignment(const BipartiteProblem &problem);

/// Same optimum by depth-first enumeration of injective buyer -> object maps.
/// At most 10 buyers.
AssignmentOptimum exact_assignment_enumerate(const BipartiteProblem &problem);

/// Maximum total weight of an edge subset of an undirected graph with every
/// degree <= b. Dynamic program over edges keyed by the degrees of nodes that
/// still have unprocessed edges; throws OracleTooLarge past 4e6 live states.
double exact_bmatching(const WeightedGraph &graph, int b);

/// Same optimum by enumerating all 2^|E| subsets. At most 20 edges.
double exact_bmatching_enumerate(const WeightedGraph &graph, int b);

}  // namespace auctiongraph
