#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "propsplit/ptb.hpp"
#include "propsplit/relations.hpp"
#include "propsplit/rules.hpp"

namespace propsplit {

// The linked proposition tree: inner nodes carry a rhetorical relation and a
// coordinate/subordinate arrangement, edges carry core/context, leaves carry
// minimal propositions. Inner nodes are n-ary (a coordination with three
// conjuncts makes one node).
struct PropNode;
using PropNodePtr = std::shared_ptr<const PropNode>;

struct PropEdge {
  bool core = true;
  PropNodePtr child;
};

struct PropNode {
  bool leaf = true;
  // leaf fields
  TreePtr sentence;
  int id = 0;  // 1-based, assigned in final leaf order
  // inner fields
  Relation relation = Relation::UnknownCoordination;
  Arrangement arrangement = Arrangement::Coordinate;
  std::vector<PropEdge> children;

  std::string text() const { return sentence ? yield_text(sentence) : std::string(); }
};

struct Proposition {
  int id = 0;
  int context_layer = 0;
  std::string text;
};

struct LeafLink {
  int from_id = 0;
  int to_id = 0;
  Relation relation = Relation::UnknownCoordination;
  bool directed = false;
};

struct TransformOptions {
  const RuleCatalog* catalog = nullptr;  // builtin when null
  int max_rule_applications = 100;
};

struct Diagnostics {
  struct Event {
    int step = 0;
    int rule_id = 0;
    std::string note;
  };
  std::vector<Event> events;
  bool hit_application_limit = false;
};

// Algorithm: process leaves left to right; at each leaf the first catalog
// rule (in execution order) that matches fires and replaces the leaf; repeat
// until no rule matches anywhere.
PropNodePtr transform(const TreePtr& sentence, const TransformOptions& options = {},
                      Diagnostics* diagnostics = nullptr);

std::vector<const PropNode*> prop_leaves(const PropNode& tree);
std::vector<Proposition> propositions(const PropNode& tree);
std::map<int, int> context_layers(const PropNode& tree);
std::vector<LeafLink> project_links(const PropNode& tree);

// Flat format: "#<id>\t<layer>\t<text>" per proposition, followed by one
// "\t<RELATION>\t#<target>" line per outgoing link; undirected links print on
// both endpoints, directed ones on the source only.
std::string serialize_flat(const PropNode& tree, bool coarse = false);
// JSON document with the propositions, their links, and the full tree.
std::string serialize_structured(const PropNode& tree, bool coarse = false);

}  // namespace propsplit
