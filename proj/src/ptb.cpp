#include "propsplit/ptb.hpp"

#include <cctype>
#include <sstream>

namespace propsplit {

namespace {

int assign_spans(ParseTree& node, int start) {
  node.span_begin = start;
  if (node.children.empty()) {
    node.span_end = start + 1;
    return node.span_end;
  }
  int pos = start;
  for (auto& c : node.children) {
    pos = assign_spans(const_cast<ParseTree&>(*c), pos);
  }
  node.span_end = pos;
  return pos;
}

TreePtr deep_copy(const ParseTree& t) {
  auto n = std::make_shared<ParseTree>();
  n->label = t.label;
  n->token = t.token;
  for (auto& c : t.children) n->children.push_back(deep_copy(*c));
  return n;
}

}  // namespace

TreePtr make_leaf(std::string label, std::string token) {
  auto n = std::make_shared<ParseTree>();
  n->label = std::move(label);
  n->token = std::move(token);
  n->span_end = 1;
  return n;
}

TreePtr make_node(std::string label, std::vector<TreePtr> children) {
  auto n = std::make_shared<ParseTree>();
  n->label = std::move(label);
  n->children = std::move(children);
  return n;
}

TreePtr renumber(const TreePtr& t, int start) {
  TreePtr copy = deep_copy(*t);
  assign_spans(const_cast<ParseTree&>(*copy), start);
  return copy;
}

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  [[noreturn]] void fail(PtbError::Kind k, const std::string& msg) {
    throw PtbError(k, pos, msg + " at position " + std::to_string(pos));
  }

  std::string read_atom() {
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')') {
      ++pos;
    }
    return std::string(text.substr(start, pos - start));
  }

  // Parses "(LABEL child ... )" or "(LABEL token)". Returns nullptr for
  // -NONE- subtrees, which are dropped.
  std::shared_ptr<ParseTree> parse_node() {
    skip_ws();
    if (pos >= text.size() || text[pos] != '(') fail(PtbError::UnbalancedBrackets, "expected '('");
    ++pos;
    skip_ws();
    std::string label = read_atom();
    if (label.empty()) {
      // Allow the bare "( ... )" wrapper some tools emit around trees.
      skip_ws();
      if (pos < text.size() && text[pos] == '(') {
        auto node = std::make_shared<ParseTree>();
        node->label = "ROOT";
        while (true) {
          skip_ws();
          if (pos >= text.size()) fail(PtbError::UnbalancedBrackets, "unclosed bracket");
          if (text[pos] == ')') { ++pos; break; }
          auto child = parse_node();
          if (child) node->children.push_back(child);
        }
        if (node->children.empty()) fail(PtbError::EmptyTree, "empty tree");
        return node;
      }
      fail(PtbError::EmptyLabel, "empty label");
    }
    auto node = std::make_shared<ParseTree>();
    node->label = label;
    skip_ws();
    while (pos < text.size() && text[pos] != ')') {
      if (text[pos] == '(') {
        auto child = parse_node();
        if (child) node->children.push_back(child);
      } else {
        std::string tok = read_atom();
        if (tok.empty()) fail(PtbError::UnbalancedBrackets, "bad token");
        if (!node->token.empty()) node->token += " ";  // multiword leaf, joined
        node->token += tok;
      }
      skip_ws();
    }
    if (pos >= text.size()) fail(PtbError::UnbalancedBrackets, "unclosed bracket");
    ++pos;  // ')'
    if (node->label == "-NONE-") return nullptr;
    if (!node->token.empty() && !node->children.empty())
      fail(PtbError::UnbalancedBrackets, "mixed token and children");
    if (node->token.empty() && node->children.empty()) return nullptr;  // emptied by -NONE-
    return node;
  }
};

}  // namespace

TreePtr parse_bracketed(std::string_view text) {
  Parser p{text};
  p.skip_ws();
  if (p.pos >= text.size()) throw PtbError(PtbError::EmptyTree, 0, "empty input");
  auto node = p.parse_node();
  p.skip_ws();
  if (p.pos != text.size()) throw PtbError(PtbError::UnbalancedBrackets, p.pos, "trailing input");
  if (!node) throw PtbError(PtbError::EmptyTree, 0, "empty tree");
  std::shared_ptr<ParseTree> root;
  if (node->label == "ROOT" || node->label == "TOP") {
    node->label = "ROOT";
    root = node;
  } else {
    root = std::make_shared<ParseTree>();
    root->label = "ROOT";
    root->children.push_back(node);
  }
  assign_spans(*root, 0);
  return root;
}

namespace {

void serialize_into(const ParseTree& t, std::string& out) {
  out += '(';
  out += t.label;
  if (t.is_leaf()) {
    out += ' ';
    out += t.token;
  } else {
    for (auto& c : t.children) {
      out += ' ';
      serialize_into(*c, out);
    }
  }
  out += ')';
}

void collect_leaves(const ParseTree& t, std::vector<const ParseTree*>& out) {
  if (t.is_leaf()) {
    out.push_back(&t);
    return;
  }
  for (auto& c : t.children) collect_leaves(*c, out);
}

bool no_space_before(const std::string& tok) {
  if (tok.empty()) return false;
  if (tok == "," || tok == "." || tok == ";" || tok == ":" || tok == "?" || tok == "!" ||
      tok == "''" || tok == "'" || tok == "%" || tok == "-RRB-" || tok == ")")
    return true;
  if (tok == "n't" || tok == "N'T") return true;
  if (tok[0] == '\'' && tok.size() <= 3) return true;  // 's 're 'll 've 'd 'm
  return false;
}

}  // namespace

std::string serialize_bracketed(const TreePtr& tree) {
  std::string out;
  serialize_into(*tree, out);
  return out;
}

std::vector<const ParseTree*> leaves(const ParseTree& tree) {
  std::vector<const ParseTree*> out;
  collect_leaves(tree, out);
  return out;
}

std::vector<std::pair<std::string, std::string>> tagged_tokens(const ParseTree& tree) {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto* l : leaves(tree)) out.emplace_back(l->label, l->token);
  return out;
}

std::vector<std::string> tokens(const ParseTree& tree) {
  std::vector<std::string> out;
  for (auto* l : leaves(tree)) out.push_back(l->token);
  return out;
}

std::string yield_text(const std::vector<std::pair<std::string, std::string>>& tagged) {
  std::string out;
  bool open_quote_pending = false;   // just emitted an opening quote
  bool straight_quote_open = false;  // parity for bare " tokens
  for (auto& [tag, tok0] : tagged) {
    std::string tok = tok0;
    bool opening = false;
    bool closing = false;
    if (tok == "``") {
      tok = "\"";
      opening = true;
    } else if (tok == "''") {
      tok = "\"";
      closing = true;
    } else if (tok == "\"" && tag != "POS") {
      if (straight_quote_open) {
        closing = true;
      } else {
        opening = true;
      }
      straight_quote_open = !straight_quote_open;
    } else if (tok == "-LRB-") {
      tok = "(";
      opening = true;
    } else if (tok == "-RRB-") {
      tok = ")";
      closing = true;
    }
    bool attach = closing || no_space_before(tok);
    if (!out.empty() && !attach && !open_quote_pending) out += ' ';
    out += tok;
    open_quote_pending = opening;
  }
  return out;
}

std::string yield_text(const TreePtr& tree) { return yield_text(tagged_tokens(*tree)); }

bool structurally_equal(const ParseTree& a, const ParseTree& b) {
  if (a.label != b.label || a.token != b.token || a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!structurally_equal(*a.children[i], *b.children[i])) return false;
  return true;
}

}  // namespace propsplit
