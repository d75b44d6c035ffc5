#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace propsplit {

// Immutable constituency tree node. Leaves carry a surface token; internal
// nodes own their children. Spans are half-open token-index intervals over
// the sentence, assigned left to right on construction.
struct ParseTree;
using TreePtr = std::shared_ptr<const ParseTree>;

struct ParseTree {
  std::string label;
  std::string token;  // present iff leaf
  std::vector<TreePtr> children;
  int span_begin = 0;
  int span_end = 0;

  bool is_leaf() const { return children.empty(); }
  int span_length() const { return span_end - span_begin; }
};

struct PtbError : std::runtime_error {
  enum Kind { UnbalancedBrackets, EmptyLabel, EmptyTree };
  Kind kind;
  std::size_t position;
  PtbError(Kind k, std::size_t pos, const std::string& msg)
      : std::runtime_error(msg), kind(k), position(pos) {}
};

// Leaf and node constructors. make_node recomputes nothing; finalize_tree
// wraps a ROOT if needed and assigns spans.
TreePtr make_leaf(std::string label, std::string token);
TreePtr make_node(std::string label, std::vector<TreePtr> children);

// Structural copy with spans reassigned from `start` (returns next index).
TreePtr renumber(const TreePtr& t, int start = 0);

// Parse a single bracketed tree. Wraps a ROOT if absent, drops -NONE-
// subtrees, assigns spans. Throws PtbError.
TreePtr parse_bracketed(std::string_view text);

// Canonical one-line bracketed form; parse(serialize(t)) is structurally
// identical to t.
std::string serialize_bracketed(const TreePtr& tree);

// Surface string with punctuation reattached (no space before , . ; : ? !
// ' '' n't 'd ..., -LRB-/-RRB- rendered as bare brackets, `` '' as ").
std::string yield_text(const TreePtr& tree);
std::string yield_text(const std::vector<std::pair<std::string, std::string>>& tagged_tokens);

// Leaves in order, as (tag, token) pairs or raw pointers.
std::vector<const ParseTree*> leaves(const ParseTree& tree);
std::vector<std::pair<std::string, std::string>> tagged_tokens(const ParseTree& tree);
std::vector<std::string> tokens(const ParseTree& tree);

bool structurally_equal(const ParseTree& a, const ParseTree& b);

}  // namespace propsplit
