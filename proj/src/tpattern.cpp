#include "propsplit/tpattern.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <functional>
#include <set>

namespace propsplit {

bool NodeDesc::matches_label(const std::string& label) const {
  switch (kind) {
    case Wildcard:
      return true;
    case Exact:
      return labels[0] == label;
    case Alternation:
      return std::find(labels.begin(), labels.end(), label) != labels.end();
    case Regex:
      return std::regex_match(label, regex);
    case Backref:
      return true;  // identity is checked against the environment
  }
  return false;
}

const MatchedNode* MatchBinding::find(const std::string& name) const {
  for (auto& [n, m] : bindings)
    if (n == name) return &m;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Compiler

namespace {

bool is_label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '$' ||
         c == '.' || c == '\'' || c == '`' || c == '@' || c == '#';
}

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= src.size();
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool consume(const std::string& s) {
    skip_ws();
    if (src.compare(pos, s.size(), s) == 0) {
      pos += s.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& expected) {
    throw PatternError(PatternError::Syntax, pos,
                       "pattern syntax error at " + std::to_string(pos) + ": expected " + expected);
  }
};

struct Compiler {
  Lexer lex;
  std::vector<std::string> captures;

  explicit Compiler(const std::string& src) : lex{src} {}

  void declare_capture(const std::string& name) {
    if (std::find(captures.begin(), captures.end(), name) != captures.end())
      throw PatternError(PatternError::DuplicateCapture, lex.pos, "duplicate capture =" + name);
    captures.push_back(name);
  }

  std::string read_name() {
    std::string name;
    while (lex.pos < lex.src.size() && (std::isalnum(static_cast<unsigned char>(lex.src[lex.pos])) ||
                                        lex.src[lex.pos] == '_')) {
      name += lex.src[lex.pos++];
    }
    if (name.empty()) lex.fail("capture name");
    return name;
  }

  NodeDesc parse_desc() {
    lex.skip_ws();
    NodeDesc d;
    if (lex.consume("__")) {
      d.kind = NodeDesc::Wildcard;
      return d;
    }
    if (lex.peek() == '=') {
      ++lex.pos;
      d.kind = NodeDesc::Backref;
      d.backref = read_name();
      return d;
    }
    if (lex.peek() == '/') {
      ++lex.pos;
      std::string re;
      while (lex.pos < lex.src.size() && lex.src[lex.pos] != '/') {
        if (lex.src[lex.pos] == '\\' && lex.pos + 1 < lex.src.size()) {
          re += lex.src[lex.pos];
          re += lex.src[lex.pos + 1];
          lex.pos += 2;
        } else {
          re += lex.src[lex.pos++];
        }
      }
      if (lex.pos >= lex.src.size()) lex.fail("closing /");
      ++lex.pos;
      d.kind = NodeDesc::Regex;
      d.regex_src = re;
      if (re == ".*") d.kind = NodeDesc::Wildcard;
      try {
        d.regex = std::regex(re);
      } catch (const std::regex_error&) {
        lex.fail("valid regex");
      }
      return d;
    }
    // Label, possibly an alternation A|B|C.
    std::string label;
    while (lex.pos < lex.src.size() && is_label_char(lex.src[lex.pos])) label += lex.src[lex.pos++];
    if (label.empty()) lex.fail("node description");
    d.labels.push_back(label);
    while (lex.pos < lex.src.size() && lex.src[lex.pos] == '|' && lex.pos + 1 < lex.src.size() &&
           is_label_char(lex.src[lex.pos + 1])) {
      ++lex.pos;
      std::string alt;
      while (lex.pos < lex.src.size() && is_label_char(lex.src[lex.pos])) alt += lex.src[lex.pos++];
      d.labels.push_back(alt);
    }
    d.kind = d.labels.size() > 1 ? NodeDesc::Alternation : NodeDesc::Exact;
    return d;
  }

  // Relation operators lex as a maximal run of operator characters, then a
  // table lookup; an unrecognized run is an UnknownOperator error.
  std::optional<RelOp> try_relop(std::shared_ptr<NodeDesc>* chain) {
    lex.skip_ws();
    std::string tok;
    if (lex.src.compare(lex.pos, 2, "==") == 0) {
      tok = "==";
    } else {
      std::size_t len = 0;
      while (lex.pos + len < lex.src.size() &&
             std::strchr("<>$,.+-:", lex.src[lex.pos + len])) {
        ++len;
      }
      tok = lex.src.substr(lex.pos, len);
    }
    if (tok.empty()) return std::nullopt;
    static const std::map<std::string, RelOp> table = {
        {"<<:", RelOp::UnaryDescendant}, {"<<,", RelOp::LeftmostDesc},
        {"<<-", RelOp::RightmostDesc},   {"<<", RelOp::Descendant},
        {"<+", RelOp::ChainChild},       {"<:", RelOp::OnlyChild},
        {"<,", RelOp::FirstChild},       {"<-", RelOp::LastChild},
        {"<", RelOp::Child},             {">", RelOp::Parent},
        {"$..", RelOp::SisterBefore},    {"$++", RelOp::SisterBefore},
        {"$,,", RelOp::SisterAfter},     {"$--", RelOp::SisterAfter},
        {"$+", RelOp::ImmSisterBefore},  {"$-", RelOp::ImmSisterAfter},
        {"$", RelOp::Sister},            {"==", RelOp::Equals},
        {",,", RelOp::Follows},          {"..", RelOp::Precedes},
    };
    auto it = table.find(tok);
    if (it == table.end())
      throw PatternError(PatternError::UnknownOperator, lex.pos,
                         "unknown operator '" + tok + "' at " + std::to_string(lex.pos));
    lex.pos += tok.size();
    if (it->second == RelOp::ChainChild) {
      if (!lex.consume("(")) lex.fail("( after <+");
      auto c = std::make_shared<NodeDesc>(parse_desc());
      if (!lex.consume(")")) lex.fail(")");
      *chain = c;
    }
    return it->second;
  }

  // A relation target: parenthesized full node, or a bare description with
  // optional capture.
  std::shared_ptr<PatternNode> parse_target() {
    if (lex.peek() == '(') return std::make_shared<PatternNode>(parse_node_parens());
    auto n = std::make_shared<PatternNode>();
    n->desc = parse_desc();
    if (lex.pos < lex.src.size() && lex.src[lex.pos] == '=') {
      ++lex.pos;
      n->capture = read_name();
      declare_capture(n->capture);
    }
    n->constraints.kind = ConstraintExpr::And;
    return n;
  }

  ConstraintExpr parse_constraint() {
    ConstraintExpr c;
    c.kind = ConstraintExpr::Rel;
    if (lex.consume("[")) {
      // Bracketed disjunction of conjunction sequences.
      ConstraintExpr orx;
      orx.kind = ConstraintExpr::Or;
      while (true) {
        ConstraintExpr andx;
        andx.kind = ConstraintExpr::And;
        while (lex.peek() != '|' && lex.peek() != ']') {
          lex.consume("&");
          if (lex.peek() == '|' || lex.peek() == ']') break;
          andx.items.push_back(parse_constraint());
        }
        orx.items.push_back(std::move(andx));
        if (lex.consume("|")) continue;
        if (lex.consume("]")) break;
        lex.fail("| or ]");
      }
      return orx;
    }
    if (lex.consume("!")) c.negated = true;
    if (lex.consume("?")) c.optional = true;
    if ((c.negated || c.optional) && lex.peek() == '[')
      lex.fail("a relation after ! or ? (flags on bracket groups are not supported)");
    auto op = try_relop(&c.chain);
    if (!op) lex.fail("relation operator");
    c.op = *op;
    c.target = parse_target();
    return c;
  }

  bool at_constraint_start() {
    char ch = lex.peek();
    if (ch == '<' || ch == '>' || ch == '$' || ch == '[' || ch == '!' || ch == '?' || ch == '&')
      return true;
    if (ch == ',' && lex.src.compare(lex.pos, 2, ",,") == 0) return true;
    if (ch == '.' && lex.src.compare(lex.pos, 2, "..") == 0) return true;
    if (ch == '=' && lex.src.compare(lex.pos, 2, "==") == 0) return true;
    return false;
  }

  PatternNode parse_node_inner() {
    PatternNode n;
    if (lex.peek() == '(') {
      // Parenthesized head node, as in ((SBAR < S) $.. NP).
      n = parse_node_parens();
    } else {
      n.desc = parse_desc();
      if (lex.pos < lex.src.size() && lex.src[lex.pos] == '=' &&
          lex.src.compare(lex.pos, 2, "==") != 0) {
        ++lex.pos;
        n.capture = read_name();
        declare_capture(n.capture);
      }
      n.constraints.kind = ConstraintExpr::And;
    }
    while (true) {
      lex.consume("&");
      if (!at_constraint_start()) break;
      n.constraints.items.push_back(parse_constraint());
    }
    return n;
  }

  PatternNode parse_node_parens() {
    if (!lex.consume("(")) lex.fail("(");
    PatternNode n = parse_node_inner();
    if (!lex.consume(")")) lex.fail(")");
    return n;
  }

  TreePattern compile() {
    TreePattern p;
    lex.skip_ws();
    PatternNode root = (lex.peek() == '(') ? parse_node_parens() : parse_node_inner();
    p.root = std::make_shared<PatternNode>(std::move(root));
    while (lex.consume(":")) {
      if (!lex.consume("(")) lex.fail("( after :");
      PatternNode extra = parse_node_inner();
      if (!lex.consume(")")) lex.fail(")");
      p.extra.push_back(std::make_shared<PatternNode>(std::move(extra)));
    }
    if (!lex.eof()) lex.fail("end of pattern");
    p.capture_names = captures;
    return p;
  }
};

}  // namespace

TreePattern compile(const std::string& pattern) {
  Compiler c(pattern);
  TreePattern p = c.compile();
  p.source = pattern;
  return p;
}

// ---------------------------------------------------------------------------
// Match view: leaves expand into preterminal + word nodes.

namespace {

struct MNode {
  const ParseTree* src = nullptr;
  bool word = false;
  std::string label;
  MNode* parent = nullptr;
  int index = 0;  // position among siblings
  std::vector<MNode*> children;
  int span_begin = 0, span_end = 0;
  int preorder = 0;
};

struct MatchView {
  std::vector<std::unique_ptr<MNode>> pool;
  std::vector<MNode*> order;  // preorder
  MNode* root = nullptr;

  MNode* build(const ParseTree& t, MNode* parent, int index) {
    auto* n = alloc();
    n->src = &t;
    n->label = t.label;
    n->parent = parent;
    n->index = index;
    n->span_begin = t.span_begin;
    n->span_end = t.span_end;
    n->preorder = static_cast<int>(order.size());
    order.push_back(n);
    if (t.is_leaf()) {
      auto* w = alloc();
      w->src = &t;
      w->word = true;
      w->label = t.token;
      w->parent = n;
      w->index = 0;
      w->span_begin = t.span_begin;
      w->span_end = t.span_end;
      w->preorder = static_cast<int>(order.size());
      order.push_back(w);
      n->children.push_back(w);
    } else {
      int i = 0;
      for (auto& c : t.children) n->children.push_back(build(*c, n, i++));
    }
    return n;
  }

  MNode* alloc() {
    pool.push_back(std::make_unique<MNode>());
    return pool.back().get();
  }

  static MatchView make(const ParseTree& t) {
    MatchView v;
    v.root = v.build(t, nullptr, 0);
    return v;
  }
};

using Env = std::map<std::string, MNode*>;

struct Evaluator {
  const MatchView& view;

  // Witness candidates for (node, op), in canonical left-to-right/top-down
  // order.
  std::vector<MNode*> witnesses(MNode* n, const ConstraintExpr& c) const {
    std::vector<MNode*> out;
    switch (c.op) {
      case RelOp::Child:
        out = n->children;
        break;
      case RelOp::Parent:
        if (n->parent) out.push_back(n->parent);
        break;
      case RelOp::Descendant:
        collect_descendants(n, out);
        break;
      case RelOp::UnaryDescendant: {
        MNode* cur = n;
        while (cur->children.size() == 1) {
          cur = cur->children[0];
          out.push_back(cur);
        }
        break;
      }
      case RelOp::OnlyChild:
        if (n->children.size() == 1) out.push_back(n->children[0]);
        break;
      case RelOp::FirstChild:
        if (!n->children.empty()) out.push_back(n->children.front());
        break;
      case RelOp::LastChild:
        if (!n->children.empty()) out.push_back(n->children.back());
        break;
      case RelOp::LeftmostDesc: {
        MNode* cur = n;
        while (!cur->children.empty()) {
          cur = cur->children.front();
          out.push_back(cur);
        }
        break;
      }
      case RelOp::RightmostDesc: {
        MNode* cur = n;
        while (!cur->children.empty()) {
          cur = cur->children.back();
          out.push_back(cur);
        }
        break;
      }
      case RelOp::ChainChild:
        collect_chain(n, *c.chain, out);
        break;
      case RelOp::SisterBefore:
        if (n->parent)
          for (std::size_t i = n->index + 1; i < n->parent->children.size(); ++i)
            out.push_back(n->parent->children[i]);
        break;
      case RelOp::SisterAfter:
        if (n->parent)
          for (int i = 0; i < n->index; ++i) out.push_back(n->parent->children[i]);
        break;
      case RelOp::ImmSisterBefore:
        if (n->parent && n->index + 1 < static_cast<int>(n->parent->children.size()))
          out.push_back(n->parent->children[n->index + 1]);
        break;
      case RelOp::ImmSisterAfter:
        if (n->parent && n->index > 0) out.push_back(n->parent->children[n->index - 1]);
        break;
      case RelOp::Sister:
        if (n->parent)
          for (auto* s : n->parent->children)
            if (s != n) out.push_back(s);
        break;
      case RelOp::Precedes:
        for (auto* m : view.order)
          if (n->span_end <= m->span_begin) out.push_back(m);
        break;
      case RelOp::Follows:
        for (auto* m : view.order)
          if (m->span_end <= n->span_begin) out.push_back(m);
        break;
      case RelOp::Equals:
        out.push_back(n);
        break;
    }
    return out;
  }

  static void collect_descendants(MNode* n, std::vector<MNode*>& out) {
    for (auto* c : n->children) {
      out.push_back(c);
      collect_descendants(c, out);
    }
  }

  // <+(C): children, plus descendants through intermediates matching C.
  void collect_chain(MNode* n, const NodeDesc& chain, std::vector<MNode*>& out) const {
    for (auto* c : n->children) {
      out.push_back(c);
      if (chain.matches_label(c->label)) collect_chain(c, chain, out);
    }
  }

  bool desc_ok(MNode* n, const PatternNode& p, const Env& env) const {
    if (p.desc.kind == NodeDesc::Backref) {
      auto it = env.find(p.desc.backref);
      return it != env.end() && it->second == n;
    }
    return p.desc.matches_label(n->label);
  }

  // Enumerates all consistent environments extending env such that node n
  // satisfies pattern node p; calls k for each. Returns true if k ever
  // requested an early stop (via returning true).
  bool sat_node(MNode* n, const PatternNode& p, Env& env, const std::function<bool()>& k) const {
    if (!desc_ok(n, p, env)) return false;
    bool bound_here = false;
    if (!p.capture.empty()) {
      auto it = env.find(p.capture);
      if (it != env.end()) {
        if (it->second != n) return false;
      } else {
        env[p.capture] = n;
        bound_here = true;
      }
    }
    bool stop = sat_expr(n, p.constraints, 0, env, k);
    if (bound_here) env.erase(p.capture);
    return stop;
  }

  // And-sequences evaluate items in order; Or tries alternatives in order.
  bool sat_expr(MNode* n, const ConstraintExpr& c, std::size_t idx, Env& env,
                const std::function<bool()>& k) const {
    switch (c.kind) {
      case ConstraintExpr::And: {
        if (idx == c.items.size()) return k();
        auto next = [&]() { return sat_expr(n, c, idx + 1, env, k); };
        return sat_one(n, c.items[idx], env, next);
      }
      case ConstraintExpr::Or: {
        bool stop = false;
        for (auto& alt : c.items) {
          stop = sat_expr(n, alt, 0, env, k);
          if (stop) return true;
        }
        return stop;
      }
      case ConstraintExpr::Rel:
        return sat_one(n, c, env, k);
    }
    return false;
  }

  bool sat_one(MNode* n, const ConstraintExpr& c, Env& env, const std::function<bool()>& k) const {
    if (c.kind != ConstraintExpr::Rel) return sat_expr(n, c, 0, env, k);
    auto ws = witnesses(n, c);
    if (c.negated) {
      // No witness may satisfy the target; bindings never escape.
      for (auto* w : ws) {
        Env probe = env;
        bool found = false;
        sat_node(w, *c.target, probe, [&]() {
          found = true;
          return true;
        });
        if (found) return false;
      }
      return k();
    }
    if (c.optional) {
      // First full solution binds; absence is fine. The snapshot is taken
      // inside the continuation, while the target's captures are still live.
      for (auto* w : ws) {
        Env probe = env;
        Env snapshot;
        bool found = false;
        sat_node(w, *c.target, probe, [&]() {
          found = true;
          snapshot = probe;
          return true;
        });
        if (found) {
          Env saved = env;
          env = snapshot;
          bool stop = k();
          env = saved;
          return stop;
        }
      }
      return k();
    }
    bool stop = false;
    for (auto* w : ws) {
      stop = sat_node(w, *c.target, env, k);
      if (stop) return true;
    }
    return stop;
  }
};

MatchedNode to_matched(MNode* n) {
  MatchedNode m;
  m.node = n->src;
  m.word = n->word;
  m.preorder = n->preorder;
  return m;
}

std::vector<MatchBinding> run_matches(const TreePattern& pattern, const ParseTree& tree,
                                      bool first_only) {
  MatchView view = MatchView::make(tree);
  Evaluator ev{view};
  std::vector<MatchBinding> out;
  std::set<std::vector<int>> seen;
  for (auto* cand : view.order) {
    Env env;
    ev.sat_node(cand, *pattern.root, env, [&]() {
      // Trailing ": (...)" clauses are extra conjuncts over the bound names.
      Env full = env;
      for (auto& extra : pattern.extra) {
        bool ok = false;
        for (auto* m : view.order) {
          Env probe = full;
          ev.sat_node(m, *extra, probe, [&]() {
            ok = true;
            full = probe;
            return true;
          });
          if (ok) break;
        }
        if (!ok) return false;
      }
      std::vector<int> key;
      key.push_back(cand->preorder);
      MatchBinding b;
      b.root_match = to_matched(cand);
      for (auto& [name, node] : full) {
        b.bindings.emplace_back(name, to_matched(node));
        key.push_back(node->preorder);
      }
      if (seen.insert(key).second) out.push_back(std::move(b));
      return first_only;
    });
    if (first_only && !out.empty()) break;
  }
  return out;
}

}  // namespace

std::optional<MatchBinding> match_first(const TreePattern& pattern, const ParseTree& tree) {
  auto ms = run_matches(pattern, tree, true);
  if (ms.empty()) return std::nullopt;
  return ms.front();
}

std::vector<MatchBinding> match_all(const TreePattern& pattern, const ParseTree& tree) {
  return run_matches(pattern, tree, false);
}

}  // namespace propsplit
