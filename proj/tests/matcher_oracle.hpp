#pragma once

// Independent brute-force matcher used by the unit and acceptance suites to
// check the engine. It interprets the compiled pattern AST by exhaustive
// enumeration over an independently built node view, with no search-order
// shortcuts.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "propsplit/tpattern.hpp"

namespace matcher_oracle {

using namespace propsplit;

struct ONode {
  const ParseTree* src = nullptr;
  bool word = false;
  std::string label;
  ONode* parent = nullptr;
  int index = 0;
  std::vector<ONode*> children;
  int begin = 0, end = 0;
  int pre = 0;
};

struct OView {
  std::vector<std::unique_ptr<ONode>> pool;
  std::vector<ONode*> order;

  ONode* add(const ParseTree& t, ONode* parent, int index) {
    pool.push_back(std::make_unique<ONode>());
    ONode* n = pool.back().get();
    n->src = &t;
    n->label = t.label;
    n->parent = parent;
    n->index = index;
    n->begin = t.span_begin;
    n->end = t.span_end;
    n->pre = static_cast<int>(order.size());
    order.push_back(n);
    if (t.is_leaf()) {
      pool.push_back(std::make_unique<ONode>());
      ONode* w = pool.back().get();
      w->src = &t;
      w->word = true;
      w->label = t.token;
      w->parent = n;
      w->begin = t.span_begin;
      w->end = t.span_end;
      w->pre = static_cast<int>(order.size());
      order.push_back(w);
      n->children.push_back(w);
    } else {
      int i = 0;
      for (auto& c : t.children) n->children.push_back(add(*c, n, i++));
    }
    return n;
  }
};

using OEnv = std::map<std::string, ONode*>;

struct Oracle {
  const OView& view;

  bool rel_holds(ONode* a, RelOp op, ONode* b, const NodeDesc* chain) const {
    switch (op) {
      case RelOp::Child:
        return b->parent == a;
      case RelOp::Parent:
        return a->parent == b;
      case RelOp::Descendant: {
        for (ONode* p = b->parent; p; p = p->parent)
          if (p == a) return true;
        return false;
      }
      case RelOp::UnaryDescendant: {
        ONode* cur = a;
        while (cur->children.size() == 1) {
          cur = cur->children[0];
          if (cur == b) return true;
        }
        return false;
      }
      case RelOp::OnlyChild:
        return a->children.size() == 1 && a->children[0] == b;
      case RelOp::FirstChild:
        return !a->children.empty() && a->children.front() == b;
      case RelOp::LastChild:
        return !a->children.empty() && a->children.back() == b;
      case RelOp::LeftmostDesc: {
        ONode* cur = a;
        while (!cur->children.empty()) {
          cur = cur->children.front();
          if (cur == b) return true;
        }
        return false;
      }
      case RelOp::RightmostDesc: {
        ONode* cur = a;
        while (!cur->children.empty()) {
          cur = cur->children.back();
          if (cur == b) return true;
        }
        return false;
      }
      case RelOp::ChainChild: {
        // b reachable through intermediates matching `chain`
        if (b->parent == a) return true;
        for (ONode* p = b->parent; p && p != a; p = p->parent) {
          if (!chain->matches_label(p->label)) return false;
          if (p->parent == a) return true;
        }
        return false;
      }
      case RelOp::SisterBefore:
        return a->parent && a->parent == b->parent && a->index < b->index;
      case RelOp::SisterAfter:
        return a->parent && a->parent == b->parent && a->index > b->index;
      case RelOp::ImmSisterBefore:
        return a->parent && a->parent == b->parent && a->index + 1 == b->index;
      case RelOp::ImmSisterAfter:
        return a->parent && a->parent == b->parent && a->index == b->index + 1;
      case RelOp::Sister:
        return a->parent && a->parent == b->parent && a != b;
      case RelOp::Precedes:
        return a->end <= b->begin;
      case RelOp::Follows:
        return b->end <= a->begin;
      case RelOp::Equals:
        return a == b;
    }
    return false;
  }

  bool desc_ok(ONode* n, const PatternNode& p, const OEnv& env) const {
    if (p.desc.kind == NodeDesc::Backref) {
      auto it = env.find(p.desc.backref);
      return it != env.end() && it->second == n;
    }
    return p.desc.matches_label(n->label);
  }

  std::vector<OEnv> node_solutions(ONode* n, const PatternNode& p, const OEnv& env) const {
    if (!desc_ok(n, p, env)) return {};
    OEnv base = env;
    if (!p.capture.empty()) {
      auto it = base.find(p.capture);
      if (it != base.end()) {
        if (it->second != n) return {};
      } else {
        base[p.capture] = n;
      }
    }
    return expr_solutions(n, p.constraints, {base});
  }

  std::vector<OEnv> expr_solutions(ONode* n, const ConstraintExpr& c,
                                   std::vector<OEnv> envs) const {
    if (envs.empty()) return envs;
    switch (c.kind) {
      case ConstraintExpr::And: {
        for (auto& item : c.items) {
          std::vector<OEnv> next;
          for (auto& e : envs) {
            auto sols = expr_solutions(n, item, {e});
            next.insert(next.end(), sols.begin(), sols.end());
          }
          envs = std::move(next);
          if (envs.empty()) break;
        }
        return envs;
      }
      case ConstraintExpr::Or: {
        std::vector<OEnv> out;
        for (auto& alt : c.items) {
          auto sols = expr_solutions(n, alt, envs);
          out.insert(out.end(), sols.begin(), sols.end());
        }
        return out;
      }
      case ConstraintExpr::Rel: {
        std::vector<OEnv> out;
        for (auto& e : envs) {
          if (c.negated) {
            bool any = false;
            for (auto* w : view.order) {
              if (!rel_holds(n, c.op, w, c.chain.get())) continue;
              if (!node_solutions(w, *c.target, e).empty()) {
                any = true;
                break;
              }
            }
            if (!any) out.push_back(e);
          } else if (c.optional) {
            bool bound = false;
            for (auto* w : view.order) {
              if (!rel_holds(n, c.op, w, c.chain.get())) continue;
              auto sols = node_solutions(w, *c.target, e);
              if (!sols.empty()) {
                out.push_back(sols.front());
                bound = true;
                break;
              }
            }
            if (!bound) out.push_back(e);
          } else {
            for (auto* w : view.order) {
              if (!rel_holds(n, c.op, w, c.chain.get())) continue;
              auto sols = node_solutions(w, *c.target, e);
              out.insert(out.end(), sols.begin(), sols.end());
            }
          }
        }
        return out;
      }
    }
    return {};
  }
};

// (root preorder, sorted name->preorder) signature of one match
using Signature = std::vector<std::pair<std::string, int>>;

std::vector<Signature> oracle_matches(const TreePattern& pattern, const ParseTree& tree) {
  OView view;
  view.add(tree, nullptr, 0);
  Oracle oracle{view};
  std::vector<Signature> out;
  std::set<Signature> seen;
  for (auto* cand : view.order) {
    for (auto env : oracle.node_solutions(cand, *pattern.root, {})) {
      bool ok = true;
      for (auto& extra : pattern.extra) {
        bool found = false;
        for (auto* m : view.order) {
          auto sols = oracle.node_solutions(m, *extra, env);
          if (!sols.empty()) {
            env = sols.front();
            found = true;
            break;
          }
        }
        if (!found) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      Signature sig;
      sig.emplace_back("", cand->pre);
      for (auto& [name, node] : env) sig.emplace_back(name, node->pre);
      if (seen.insert(sig).second) out.push_back(std::move(sig));
    }
  }
  return out;
}

std::vector<Signature> engine_matches(const TreePattern& pattern, const ParseTree& tree) {
  std::vector<Signature> out;
  for (auto& m : match_all(pattern, tree)) {
    Signature sig;
    sig.emplace_back("", m.root_match.preorder);
    for (auto& [name, node] : m.bindings) sig.emplace_back(name, node.preorder);
    out.push_back(std::move(sig));
  }
  return out;
}

// Deterministic tree families over a six-label alphabet.
const char* kLabels[6] = {"S", "NP", "VP", "SBAR", "PP", "CC"};
const char* kWords[6] = {"and", "dog", "runs", "if", "to", "whom"};

TreePtr label_shape(const std::vector<int>& arity, std::size_t& pos, int& label_seed, int depth) {
  int my = label_seed++;
  if (pos >= arity.size() || arity[pos] == 0 || depth >= 4) {
    if (pos < arity.size()) ++pos;
    return make_leaf(kLabels[my % 6], kWords[my % 6]);
  }
  int n = arity[pos++];
  std::vector<TreePtr> children;
  for (int i = 0; i < n; ++i) children.push_back(label_shape(arity, pos, label_seed, depth + 1));
  return make_node(kLabels[my % 6], std::move(children));
}

std::vector<TreePtr> deterministic_trees() {
  std::vector<TreePtr> out;
  // all arity strings of length <= 4 with arities 0..3
  std::vector<std::vector<int>> strings = {{}};
  for (int len = 1; len <= 4; ++len) {
    std::vector<int> cur(len, 0);
    while (true) {
      strings.push_back(cur);
      int i = len - 1;
      while (i >= 0 && cur[i] == 3) cur[i--] = 0;
      if (i < 0) break;
      ++cur[i];
    }
  }
  for (auto& s : strings) {
    for (int seed = 0; seed < 3; ++seed) {
      std::size_t pos = 0;
      int label_seed = seed;
      auto t = label_shape(s, pos, label_seed, 0);
      out.push_back(renumber(make_node("ROOT", {t})));
    }
  }
  return out;
}

std::vector<TreePtr> random_trees(int count, int max_nodes, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<TreePtr> out;
  std::uniform_int_distribution<int> pick(0, 5);
  for (int i = 0; i < count; ++i) {
    int budget = 2 + static_cast<int>(rng() % max_nodes);
    std::function<TreePtr(int, int*)> gen = [&](int depth, int* left) -> TreePtr {
      --*left;
      if (depth >= 4 || *left <= 0 || rng() % 100 < 35) {
        int k = pick(rng);
        return make_leaf(kLabels[k], kWords[pick(rng)]);
      }
      int n = 1 + static_cast<int>(rng() % 3);
      std::vector<TreePtr> children;
      for (int j = 0; j < n && *left > 0; ++j) children.push_back(gen(depth + 1, left));
      return make_node(kLabels[pick(rng)], std::move(children));
    };
    int left = budget;
    out.push_back(renumber(make_node("ROOT", {gen(0, &left)})));
  }
  return out;
}

std::vector<std::string> synthetic_patterns() {
  std::vector<std::string> out;
  const char* ops[] = {"<",  ">",   "<<",  "<<:", "<:", "<,", "<-", "<<,", "<<-",
                       "$..", "$++", "$+",  "$-",  "$,,", "$",  "..", ",,"};
  const char* descs[] = {"S", "NP", "/N.*/", "__"};
  int i = 0;
  for (auto* op : ops) {
    out.push_back(std::string("NP ") + op + " " + descs[i % 4]);
    out.push_back(std::string("__=x ") + op + " (" + descs[(i + 1) % 4] + "=y)");
    ++i;
  }
  out.push_back("S <+(VP) NP");
  out.push_back("S <+(VP|PP) /r.*/");
  out.push_back("NP !< NN");
  out.push_back("NP !<< CC");
  out.push_back("NP ?$.. CC=c & $.. NP");
  out.push_back("S [< NP | < VP]");
  out.push_back("S [< (NP $+ VP) | < (VP $+ NP)]");
  out.push_back("__ == S=s");
  out.push_back("S < NP=a & < VP=b");
  out.push_back("S <, NP & <- VP");
  out.push_back("SBAR < (S < (NP $.. VP))");
  out.push_back("S << (NP !$ CC)");
  out.push_back("S < (NP=subj $.. VP) : (=subj << dog)");
  out.push_back("VP <<, /(T|t)o/");
  out.push_back("S ?< (PP ?<: IN)");
  out.push_back("NP $+ (CC $+ NP)");
  return out;
}

}  // namespace matcher_oracle
