#pragma once

#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "propsplit/ptb.hpp"

namespace propsplit {

// Tree-pattern query engine covering the operator subset used by the rule
// catalog: < << <<: <: <, <- <<, <<- <+(C) $.. $++ $,, $+ $- .. ,, == plus
// negation (!), optionality (?), bracketed disjunction, conjunction, node
// captures (=name), back-references and trailing ": (constraint)" clauses.
//
// Patterns are matched against a view of the parse tree in which every leaf
// expands into a preterminal node plus a word node, so leaf-token tests like
// (WP <: whom) or /(T|t)o/ behave as in the notation the rules are written in.

struct PatternError : std::runtime_error {
  enum Kind { Syntax, UnknownOperator, DuplicateCapture };
  Kind kind;
  std::size_t position;
  PatternError(Kind k, std::size_t pos, const std::string& msg)
      : std::runtime_error(msg), kind(k), position(pos) {}
};

enum class RelOp {
  Child,            // <
  Parent,           // >
  Descendant,       // <<
  UnaryDescendant,  // <<:
  OnlyChild,        // <:
  FirstChild,       // <,
  LastChild,        // <-
  LeftmostDesc,     // <<,
  RightmostDesc,    // <<-
  ChainChild,       // <+(C)
  SisterBefore,     // $.. / $++
  SisterAfter,      // $,, / $--
  ImmSisterBefore,  // $+
  ImmSisterAfter,   // $-
  Sister,           // $ (either side)
  Precedes,         // ..
  Follows,          // ,,
  Equals,           // ==
};

struct NodeDesc {
  enum Kind { Exact, Alternation, Regex, Wildcard, Backref };
  Kind kind = Wildcard;
  std::vector<std::string> labels;
  std::string regex_src;
  std::regex regex;
  std::string backref;

  bool matches_label(const std::string& label) const;
};

struct PatternNode;

struct ConstraintExpr {
  enum Kind { Rel, And, Or };
  Kind kind = And;
  // Rel:
  bool negated = false;
  bool optional = false;
  RelOp op = RelOp::Child;
  std::shared_ptr<NodeDesc> chain;  // for <+(C)
  std::shared_ptr<PatternNode> target;
  // And/Or:
  std::vector<ConstraintExpr> items;
};

struct PatternNode {
  NodeDesc desc;
  std::string capture;
  ConstraintExpr constraints;  // And at top level
};

struct TreePattern {
  std::shared_ptr<const PatternNode> root;
  std::vector<std::shared_ptr<const PatternNode>> extra;  // ": (...)" clauses
  std::vector<std::string> capture_names;
  std::string source;
};

TreePattern compile(const std::string& pattern);

struct MatchedNode {
  const ParseTree* node = nullptr;  // leaf node for word-level matches
  bool word = false;
  int preorder = -1;

  bool operator==(const MatchedNode& o) const {
    return node == o.node && word == o.word;
  }
};

struct MatchBinding {
  MatchedNode root_match;
  std::vector<std::pair<std::string, MatchedNode>> bindings;  // sorted by name

  const MatchedNode* find(const std::string& name) const;
};

std::optional<MatchBinding> match_first(const TreePattern& pattern, const ParseTree& tree);
std::vector<MatchBinding> match_all(const TreePattern& pattern, const ParseTree& tree);

}  // namespace propsplit
