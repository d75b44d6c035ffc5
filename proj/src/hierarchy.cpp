#include "propsplit/hierarchy.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace propsplit {

namespace {

struct Builder {
  bool leaf = true;
  bool settled = false;  // no rule fires on this leaf; never re-scan it
  TreePtr sentence;
  Relation relation = Relation::UnknownCoordination;
  Arrangement arrangement = Arrangement::Coordinate;
  std::vector<std::pair<bool, std::unique_ptr<Builder>>> children;
};

Builder* find_next_splittable(Builder& node, const RuleCatalog& catalog,
                              const TransformationRule** rule,
                              std::optional<RuleOutcome>* outcome, Diagnostics* diag, int step) {
  if (node.leaf) {
    if (node.settled) return nullptr;
    const TransformationRule* which = nullptr;
    std::vector<std::pair<int, std::string>> skipped;
    auto out = catalog.apply_first(node.sentence, &which, diag ? &skipped : nullptr);
    if (diag) {
      for (auto& [rule_id, what] : skipped)
        diag->events.push_back({step, rule_id, "skipped, " + what});
    }
    if (out) {
      *rule = which;
      *outcome = std::move(out);
      return &node;
    }
    node.settled = true;
    return nullptr;
  }
  for (auto& [core, child] : node.children) {
    if (auto* found = find_next_splittable(*child, catalog, rule, outcome, diag, step))
      return found;
  }
  return nullptr;
}

PropNodePtr freeze(const Builder& b) {
  auto n = std::make_shared<PropNode>();
  n->leaf = b.leaf;
  n->sentence = b.sentence;
  n->relation = b.relation;
  n->arrangement = b.arrangement;
  for (auto& [core, child] : b.children) {
    n->children.push_back(PropEdge{core, freeze(*child)});
  }
  return n;
}

void assign_ids(PropNode& node, int& next) {
  if (node.leaf) {
    node.id = ++next;
    return;
  }
  for (auto& e : node.children) assign_ids(const_cast<PropNode&>(*e.child), next);
}

void collect_leaves(const PropNode& n, std::vector<const PropNode*>& out) {
  if (n.leaf) {
    out.push_back(&n);
    return;
  }
  for (auto& e : n.children) collect_leaves(*e.child, out);
}

void layers_walk(const PropNode& n, int depth, std::map<int, int>& out) {
  if (n.leaf) {
    out[n.id] = depth;
    return;
  }
  for (auto& e : n.children) layers_walk(*e.child, depth + (e.core ? 0 : 1), out);
}

// Leaves reachable through core edges only; the representatives a link
// attaches to.
std::set<int> repset(const PropNode& n) {
  std::set<int> out;
  if (n.leaf) {
    out.insert(n.id);
    return out;
  }
  for (auto& e : n.children) {
    if (!e.core) continue;
    auto sub = repset(*e.child);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

void links_walk(const PropNode& n, std::vector<LeafLink>& out) {
  if (n.leaf) return;
  if (n.arrangement == Arrangement::Subordinate) {
    std::set<int> cores, contexts;
    for (auto& e : n.children) {
      auto sub = repset(*e.child);
      (e.core ? cores : contexts).insert(sub.begin(), sub.end());
    }
    for (int a : cores)
      for (int b : contexts) out.push_back(LeafLink{a, b, n.relation, true});
  } else {
    std::vector<std::set<int>> sets;
    for (auto& e : n.children) sets.push_back(repset(*e.child));
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (std::size_t j = i + 1; j < sets.size(); ++j)
        for (int a : sets[i])
          for (int b : sets[j]) out.push_back(LeafLink{a, b, n.relation, false});
  }
  for (auto& e : n.children) links_walk(*e.child, out);
}

}  // namespace

PropNodePtr transform(const TreePtr& sentence, const TransformOptions& options,
                      Diagnostics* diagnostics) {
  const RuleCatalog& catalog = options.catalog ? *options.catalog : RuleCatalog::builtin();
  Builder root;
  root.leaf = true;
  root.sentence = sentence;
  int applications = 0;
  while (applications < options.max_rule_applications) {
    const TransformationRule* rule = nullptr;
    std::optional<RuleOutcome> outcome;
    Builder* target =
        find_next_splittable(root, catalog, &rule, &outcome, diagnostics, applications + 1);
    if (!target) break;
    ++applications;
    if (diagnostics)
      diagnostics->events.push_back(
          {applications, rule->id, "applied " + rule->name + " to: " + yield_text(target->sentence)});
    target->leaf = false;
    target->sentence = nullptr;
    target->relation = outcome->relation;
    target->arrangement = outcome->arrangement;
    bool subordinate = outcome->arrangement == Arrangement::Subordinate;
    for (auto& part : outcome->parts) {
      auto child = std::make_unique<Builder>();
      child->leaf = true;
      child->sentence = part.tree;
      bool core = subordinate ? part.core : true;
      target->children.emplace_back(core, std::move(child));
    }
  }
  if (applications >= options.max_rule_applications) {
    const TransformationRule* rule = nullptr;
    std::optional<RuleOutcome> outcome;
    if (find_next_splittable(root, catalog, &rule, &outcome, nullptr, applications)) {
      if (diagnostics) {
        diagnostics->hit_application_limit = true;
        diagnostics->events.push_back({applications, 0, "rule application limit reached"});
      }
    }
  }
  auto frozen = freeze(root);
  int next = 0;
  assign_ids(const_cast<PropNode&>(*frozen), next);
  return frozen;
}

std::vector<const PropNode*> prop_leaves(const PropNode& tree) {
  std::vector<const PropNode*> out;
  collect_leaves(tree, out);
  return out;
}

std::vector<Proposition> propositions(const PropNode& tree) {
  auto layers = context_layers(tree);
  std::vector<Proposition> out;
  for (auto* l : prop_leaves(tree)) {
    out.push_back(Proposition{l->id, layers.at(l->id), l->text()});
  }
  return out;
}

std::map<int, int> context_layers(const PropNode& tree) {
  std::map<int, int> out;
  layers_walk(tree, 0, out);
  return out;
}

std::vector<LeafLink> project_links(const PropNode& tree) {
  std::vector<LeafLink> out;
  links_walk(tree, out);
  return out;
}

namespace {

std::string render_relation(Relation r, bool coarse) {
  if (!coarse) return relation_upper(r);
  std::string name = coarse_class(r);
  for (auto& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

struct OutLink {
  Relation rel;
  int target;
  bool directed;
};

std::map<int, std::vector<OutLink>> outgoing_links(const PropNode& tree) {
  std::map<int, std::vector<OutLink>> by_leaf;
  for (auto& l : project_links(tree)) {
    by_leaf[l.from_id].push_back(OutLink{l.relation, l.to_id, l.directed});
    if (!l.directed) by_leaf[l.to_id].push_back(OutLink{l.relation, l.from_id, false});
  }
  for (auto& [id, links] : by_leaf) {
    std::stable_sort(links.begin(), links.end(), [](const OutLink& a, const OutLink& b) {
      if (a.directed != b.directed) return a.directed;  // directed first
      return a.target < b.target;
    });
  }
  return by_leaf;
}

}  // namespace

std::string serialize_flat(const PropNode& tree, bool coarse) {
  auto layers = context_layers(tree);
  auto by_leaf = outgoing_links(tree);
  std::ostringstream out;
  for (auto* l : prop_leaves(tree)) {
    out << '#' << l->id << '\t' << layers.at(l->id) << '\t' << l->text() << '\n';
    auto it = by_leaf.find(l->id);
    if (it == by_leaf.end()) continue;
    for (auto& link : it->second) {
      out << '\t' << render_relation(link.rel, coarse) << "\t#" << link.target << '\n';
    }
  }
  return out.str();
}

namespace {

nlohmann::json tree_json(const PropNode& n, bool coarse) {
  nlohmann::json j;
  if (n.leaf) {
    j["kind"] = "leaf";
    j["id"] = n.id;
    j["text"] = n.text();
    return j;
  }
  j["kind"] = "inner";
  j["relation"] = render_relation(n.relation, coarse);
  j["arrangement"] = n.arrangement == Arrangement::Coordinate ? "coordinate" : "subordinate";
  nlohmann::json children = nlohmann::json::array();
  for (auto& e : n.children) {
    nlohmann::json edge;
    edge["label"] = e.core ? "core" : "context";
    edge["node"] = tree_json(*e.child, coarse);
    children.push_back(edge);
  }
  j["children"] = children;
  return j;
}

}  // namespace

std::string serialize_structured(const PropNode& tree, bool coarse) {
  auto layers = context_layers(tree);
  auto by_leaf = outgoing_links(tree);
  nlohmann::json doc;
  nlohmann::json props = nlohmann::json::array();
  for (auto* l : prop_leaves(tree)) {
    nlohmann::json p;
    p["id"] = l->id;
    p["layer"] = layers.at(l->id);
    p["text"] = l->text();
    nlohmann::json links = nlohmann::json::array();
    auto it = by_leaf.find(l->id);
    if (it != by_leaf.end()) {
      for (auto& link : it->second) {
        nlohmann::json lj;
        lj["rel"] = render_relation(link.rel, coarse);
        lj["target"] = link.target;
        lj["directed"] = link.directed;
        links.push_back(lj);
      }
    }
    p["links"] = links;
    props.push_back(p);
  }
  doc["propositions"] = props;
  doc["tree"] = tree_json(tree, coarse);
  return doc.dump(2);
}

}  // namespace propsplit
