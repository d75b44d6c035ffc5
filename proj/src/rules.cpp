#include "propsplit/rules.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>
#include <set>

namespace propsplit {

std::string construct_name(Construct c) {
  switch (c) {
    case Construct::CoordinateClause: return "coordinate-clause";
    case Construct::AdverbialClause: return "adverbial-clause";
    case Construct::RelativeClauseNonRestrictive: return "relative-clause-nonrestrictive";
    case Construct::RelativeClauseRestrictive: return "relative-clause-restrictive";
    case Construct::ReportedSpeech: return "reported-speech";
    case Construct::CoordinateVP: return "coordinate-VP";
    case Construct::CoordinateNP: return "coordinate-NP";
    case Construct::Participial: return "participial";
    case Construct::AppositionNonRestrictive: return "apposition-nonrestrictive";
    case Construct::AppositionRestrictive: return "apposition-restrictive";
    case Construct::Prepositional: return "prepositional";
    case Construct::AdjectivalAdverbial: return "adjectival-adverbial";
    case Construct::LeadNP: return "lead-NP";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------------------
// Tree surgery. All functions are pure; they rebuild the touched spine.

using NodeSet = std::set<const ParseTree*>;

TreePtr prune(const TreePtr& node, const NodeSet& remove) {
  if (remove.count(node.get())) return nullptr;
  if (node->is_leaf()) return node;
  std::vector<TreePtr> kept;
  bool changed = false;
  for (auto& c : node->children) {
    auto k = prune(c, remove);
    if (!k) {
      changed = true;
      continue;
    }
    changed |= (k != c);
    kept.push_back(k);
  }
  if (kept.empty()) return nullptr;
  if (!changed) return node;
  return make_node(node->label, std::move(kept));
}

TreePtr substitute(const TreePtr& node, const ParseTree* target, const TreePtr& replacement) {
  if (node.get() == target) return replacement;
  if (node->is_leaf()) return node;
  std::vector<TreePtr> cs;
  bool changed = false;
  for (auto& c : node->children) {
    auto r = substitute(c, target, replacement);
    changed |= (r != c);
    cs.push_back(r);
  }
  return changed ? make_node(node->label, std::move(cs)) : node;
}

TreePtr insert_before_leaf(const TreePtr& node, const ParseTree* leaf, const TreePtr& newnode) {
  if (node->is_leaf()) return node;
  std::vector<TreePtr> cs;
  bool changed = false;
  for (auto& c : node->children) {
    if (c.get() == leaf) {
      cs.push_back(newnode);
      cs.push_back(c);
      changed = true;
    } else {
      auto r = insert_before_leaf(c, leaf, newnode);
      changed |= (r != c);
      cs.push_back(r);
    }
  }
  return changed ? make_node(node->label, std::move(cs)) : node;
}

const ParseTree* first_alpha_leaf(const ParseTree& t) {
  for (auto* l : leaves(t)) {
    if (!l->token.empty() && std::isalpha(static_cast<unsigned char>(l->token[0]))) return l;
  }
  return nullptr;
}

bool is_sentence_final(const std::string& tok) { return tok == "." || tok == "?" || tok == "!"; }
bool is_comma_like(const std::string& tok) {
  return tok == "," || tok == ";" || tok == ":" || tok == "--";
}
bool is_quote(const std::string& tok) { return tok == "''" || tok == "``" || tok == "\""; }

// Cleans up a freshly assembled (ROOT (S ...)): strips edge commas and
// doubled commas, guarantees terminal punctuation (inside a final quote),
// uppercases the first alphabetic token.
TreePtr finish_sentence(TreePtr root) {
  // Edge and doubled punctuation.
  for (bool again = true; again;) {
    again = false;
    auto ls = leaves(*root);
    if (ls.empty()) break;
    NodeSet drop;
    // leading commas / stray leading closing quotes
    std::size_t i = 0;
    while (i < ls.size() && (is_comma_like(ls[i]->token) || ls[i]->token == "''")) {
      drop.insert(ls[i]);
      ++i;
    }
    for (std::size_t k = 0; k + 1 < ls.size(); ++k) {
      if (drop.count(ls[k])) continue;
      if (is_comma_like(ls[k]->token) &&
          (is_comma_like(ls[k + 1]->token) || is_sentence_final(ls[k + 1]->token))) {
        drop.insert(ls[k]);
      }
      // comma directly before a closing quote that ends the sentence
      if (is_comma_like(ls[k]->token) && k + 2 == ls.size() && ls[k + 1]->token == "''") {
        drop.insert(ls[k]);
      }
    }
    if (!ls.empty() && is_comma_like(ls.back()->token)) drop.insert(ls.back());
    if (!drop.empty()) {
      auto pruned = prune(root, drop);
      if (!pruned) break;
      root = pruned;
      again = true;
    }
  }
  // Terminal punctuation.
  auto ls = leaves(*root);
  if (!ls.empty()) {
    const ParseTree* last = ls.back();
    bool ok = is_sentence_final(last->token);
    if (!ok && is_quote(last->token) && ls.size() >= 2 &&
        is_sentence_final(ls[ls.size() - 2]->token)) {
      ok = true;
    }
    if (!ok) {
      auto period = make_leaf(".", ".");
      if (is_quote(last->token) && last->token != "``") {
        root = insert_before_leaf(root, last, period);
      } else {
        // append to the S under ROOT
        auto s = root->children.size() == 1 && !root->children[0]->is_leaf() ? root->children[0]
                                                                             : nullptr;
        if (s) {
          auto cs = s->children;
          cs.push_back(period);
          root = make_node(root->label, {make_node(s->label, std::move(cs))});
        }
      }
    }
  }
  // Capitalization.
  if (auto* first = first_alpha_leaf(*root)) {
    std::string tok = first->token;
    if (std::islower(static_cast<unsigned char>(tok[0]))) {
      tok[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(tok[0])));
      root = substitute(root, first, make_leaf(first->label, tok));
    }
  }
  return renumber(root);
}

TreePtr sentence_from_children(std::vector<TreePtr> s_children) {
  auto s = make_node("S", std::move(s_children));
  return finish_sentence(make_node("ROOT", {s}));
}

// Lowercases the first token of a fragment unless it opens a proper name
// ("The Byrds") or is "I"/an acronym. Used when a sentence-initial fragment
// moves mid-sentence.
TreePtr decap_first(const TreePtr& fragment) {
  auto* first = first_alpha_leaf(*fragment);
  if (!first) return fragment;
  const std::string& tok = first->token;
  if (first->label == "NNP" || first->label == "NNPS") return fragment;
  if (tok == "I") return fragment;
  if (tok.size() > 1 && std::isupper(static_cast<unsigned char>(tok[1]))) return fragment;
  if (!std::isupper(static_cast<unsigned char>(tok[0]))) return fragment;
  if (first->label == "DT") {
    auto ls = leaves(*fragment);
    for (std::size_t i = 0; i + 1 < ls.size(); ++i) {
      if (ls[i] == first) {
        if (ls[i + 1]->label == "NNP" || ls[i + 1]->label == "NNPS") return fragment;
        break;
      }
    }
  }
  std::string low = tok;
  low[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(low[0])));
  return substitute(fragment, first, make_leaf(first->label, low));
}

// ---------------------------------------------------------------------------
// Number, tense, copula.

// Head of a noun phrase: the last noun leaf of its base segment, before any
// PP/SBAR/VP attachment ("a physicist from Poland" heads at "physicist").
const ParseTree* np_head_leaf(const ParseTree& np) {
  const ParseTree* head = nullptr;
  for (auto& c : np.children) {
    if (c->label == "PP" || c->label == "SBAR" || c->label == "S" || c->label == "VP" ||
        c->label == ",")
      break;
    if (c->is_leaf()) {
      if (c->label.rfind("NN", 0) == 0) head = c.get();
    } else if (c->label == "NP" || c->label == "NML" || c->label == "WHNP" ||
               c->label == "NX") {
      if (auto* h = np_head_leaf(*c)) head = h;
    }
  }
  return head;
}

bool np_is_plural(const ParseTree& np) {
  int np_children = 0;
  bool has_cc = false;
  for (auto& c : np.children) {
    if (c->label == "NP") ++np_children;
    if (c->label == "CC") has_cc = true;
  }
  if (has_cc && np_children >= 2) return true;
  const ParseTree* head = np_head_leaf(np);
  if (!head) {
    auto ls = leaves(np);
    head = ls.empty() ? nullptr : ls.back();
  }
  return head && (head->label == "NNS" || head->label == "NNPS");
}

Tense tense_from_leaves(const std::vector<const ParseTree*>& ls) {
  for (auto* l : ls) {
    if (l->label == "VBD") return Tense::Past;
    if (l->label == "VBZ" || l->label == "VBP") return Tense::Present;
    if (l->label == "MD") {
      std::string low = lowercase(l->token);
      return (low == "would" || low == "could" || low == "might") ? Tense::Past : Tense::Present;
    }
  }
  for (auto* l : ls)
    if (l->label == "VBN") return Tense::Past;
  return Tense::Present;
}

const ParseTree* top_clause(const ParseTree& root) {
  if (root.label == "ROOT" && !root.children.empty()) return root.children[0].get();
  return &root;
}

}  // namespace

Tense detect_tense(const ParseTree& sentence) {
  const ParseTree* s = top_clause(sentence);
  for (auto& c : s->children) {
    if (c->label == "VP") return tense_from_leaves(leaves(*c));
  }
  return tense_from_leaves(leaves(*s));
}

std::string select_copula(const TreePtr& subject, Tense tense) {
  bool plural = subject && np_is_plural(*subject);
  if (tense == Tense::Past) return plural ? "were" : "was";
  return plural ? "are" : "is";
}

namespace {

TreePtr copula_leaf(const std::string& form) {
  std::string tag = (form == "was" || form == "were" || form == "had") ? "VBD"
                    : (form == "are" || form == "have")                ? "VBP"
                                                                       : "VBZ";
  return make_leaf(tag, form);
}

TreePtr this_np() { return make_node("NP", {make_leaf("DT", "This")}); }

// (ROOT (S (NP This) (VP be <fragment>) (. .)))
TreePtr this_be(const TreePtr& fragment, Tense tense) {
  auto vp = make_node("VP", {copula_leaf(tense == Tense::Past ? "was" : "is"),
                             decap_first(fragment)});
  return sentence_from_children({this_np(), vp});
}

// (ROOT (S (NP This) (VP be (SBAR (WHNP what) (S <attribution>))) (. .)))
TreePtr this_be_what(std::vector<TreePtr> attribution_children, Tense tense) {
  auto inner = make_node("S", std::move(attribution_children));
  auto sbar = make_node("SBAR", {make_node("WHNP", {make_leaf("WP", "what")}), inner});
  auto vp = make_node("VP", {copula_leaf(tense == Tense::Past ? "was" : "is"), sbar});
  return sentence_from_children({this_np(), vp});
}

// (ROOT (S <subject> (VP be <predicate...>) (. .)))
TreePtr subj_be(const TreePtr& subject, Tense tense, std::vector<TreePtr> predicate) {
  std::vector<TreePtr> vp_children{copula_leaf(select_copula(subject, tense))};
  for (auto& p : predicate) vp_children.push_back(p);
  auto vp = make_node("VP", std::move(vp_children));
  return sentence_from_children({subject, vp});
}

TreePtr subj_have(const TreePtr& subject, Tense tense, std::vector<TreePtr> predicate) {
  std::vector<TreePtr> vp_children{copula_leaf(tense == Tense::Past ? "had" : "has")};
  for (auto& p : predicate) vp_children.push_back(p);
  auto vp = make_node("VP", std::move(vp_children));
  return sentence_from_children({subject, vp});
}

// Leaves of `node` whose token index is outside `exclude`'s span; commas are
// dropped. Used to pull cue words out of connective constituents.
std::vector<std::string> cue_tokens(const ParseTree* node, const ParseTree* exclude) {
  std::vector<std::string> out;
  if (!node) return out;
  for (auto* l : leaves(*node)) {
    if (exclude && l->span_begin >= exclude->span_begin && l->span_end <= exclude->span_end)
      continue;
    if (is_comma_like(l->token) || is_quote(l->token)) continue;
    out.push_back(l->token);
  }
  return out;
}

// Temporal cues carry a direction: the extracted span of "after ..." lies
// before the core event, and vice versa.
Relation refine_temporal(Relation r, const std::vector<std::string>& cue) {
  if (r != Relation::Temporal) return r;
  for (auto& c : cue) {
    std::string low = lowercase(c);
    if (low == "after") return Relation::TemporalBefore;
    if (low == "before") return Relation::TemporalAfter;
  }
  return r;
}

struct RuleCtx {
  const TransformationRule* rule;
  const TreePtr& sentence;
  const CueTable& cues;
};

const ParseTree* cap_node(const MatchBinding& m, const std::string& name) {
  auto* mn = m.find(name);
  return mn ? mn->node : nullptr;
}

TreePtr share(const ParseTree* node) {
  // Wraps a borrowed subtree pointer for splicing into a new tree. The
  // original trees are immutable and outlive the rule application.
  return renumber(std::make_shared<ParseTree>(*node));
}

// Outcome assembly: parts ordered by source position, labels from the
// arrangement with the attribution and contrast exceptions applied by the
// callers.
RuleOutcome make_outcome(const RuleCtx& ctx, std::vector<RulePart> parts,
                         std::vector<std::string> cue, Relation rel, Arrangement arr) {
  if (rel == Relation::Contrast) arr = Arrangement::Coordinate;
  if (arr == Arrangement::Coordinate)
    for (auto& p : parts) p.core = true;
  std::stable_sort(parts.begin(), parts.end(),
                   [](const RulePart& a, const RulePart& b) { return a.order_key < b.order_key; });
  RuleOutcome out;
  out.rule_id = ctx.rule->id;
  out.parts = std::move(parts);
  out.cue = std::move(cue);
  out.relation = rel;
  out.arrangement = arr;
  return out;
}

// Remainder sentence: the source minus the listed nodes.
RulePart remainder_part(const RuleCtx& ctx, const NodeSet& removed) {
  auto pruned = prune(ctx.sentence, removed);
  if (!pruned) throw RephraseFailure(ctx.rule->id, "nothing left after extraction");
  int key = 0;
  for (auto* l : leaves(*ctx.sentence)) {
    if (removed.count(l)) continue;
    bool inside = false;
    for (auto* r : removed) {
      if (!r->is_leaf() && l->span_begin >= r->span_begin && l->span_end <= r->span_end) {
        inside = true;
        break;
      }
    }
    if (!inside) {
      key = l->span_begin;
      break;
    }
  }
  RulePart part;
  part.tree = finish_sentence(pruned);
  part.core = true;
  part.order_key = key;
  return part;
}

RulePart part_from(TreePtr tree, bool core, int key) {
  RulePart p;
  p.tree = std::move(tree);
  p.core = core;
  p.order_key = key;
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Referent rephrasing helpers (public; the rule recipes use the same logic).

std::string rephrase_with_referent(const TreePtr& extracted, const TreePtr& referent,
                                   ReferentMode mode) {
  if (!referent) throw RephraseFailure(0, "missing referent");
  TreePtr ref = referent;
  if (mode == ReferentMode::Demonstrative) {
    auto ls = leaves(*ref);
    if (!ls.empty()) {
      std::string first = lowercase(ls[0]->token);
      if (first == "a" || first == "an") {
        ref = substitute(ref, ls[0], make_leaf("DT", "This"));
      }
    }
  }
  if (mode == ReferentMode::Possessive) {
    auto ls = leaves(*ref);
    std::string pos = (!ls.empty() && !ls.back()->token.empty() &&
                       (ls.back()->token.back() == 's' || ls.back()->token.back() == 'S'))
                          ? "'"
                          : "'s";
    auto np = make_node("NP", {ref, make_leaf("POS", pos)});
    auto root = sentence_from_children({np, decap_first(extracted)});
    return yield_text(root);
  }
  std::vector<TreePtr> children{ref};
  if (extracted) {
    if (extracted->label == "S") {
      for (auto& c : extracted->children) children.push_back(c);
    } else {
      children.push_back(extracted);
    }
  }
  return yield_text(sentence_from_children(std::move(children)));
}

// ---------------------------------------------------------------------------
// The catalog.

namespace {

struct RuleSpec {
  int id;
  const char* name;
  Construct construct;
  Arrangement hierarchy;
  const char* pattern;
  RelationSource source;
  ApplyFn apply;
};

using Apply = std::optional<RuleOutcome>;

}  // namespace

// The 35 rule recipes follow, in id order. Each returns absent when the
// pattern does not match or a guard rejects, and throws RephraseFailure when
// a matched template cannot be filled.
#include "rules_catalog.inc"

RuleCatalog::RuleCatalog(const CueTable& cues) : cues_(&cues) {
  rules_ = build_rules();
  // Execution order: attribution, coordinate clauses, participials,
  // coordinate NP lists, adverbial clauses (preposed before postposed),
  // non-restrictive relatives, appositions, restrictive relatives,
  // coordinate VPs, prepositional phrases (offset-by-comma before VP
  // complements), adjectival/adverbial phrases, lead NPs.
  static const int kOrder[] = {17, 18, 19, 20, 1,  24, 25, 26, 27, 22, 23, 3,
                               5,  7,  2,  4,  6,  8,  9,  10, 11, 12, 28, 29,
                               13, 14, 15, 16, 21, 31, 32, 30, 33, 34, 35};
  for (int id : kOrder) order_.push_back(&by_id(id));
}

const RuleCatalog& RuleCatalog::builtin() {
  static const RuleCatalog catalog(CueTable::builtin());
  return catalog;
}

const TransformationRule& RuleCatalog::by_id(int id) const {
  for (auto& r : rules_)
    if (r.id == id) return r;
  throw std::out_of_range("no rule #" + std::to_string(id));
}

std::optional<RuleOutcome> RuleCatalog::apply(const TransformationRule& rule,
                                              const TreePtr& sentence) const {
  return rule.apply_fn(rule, sentence, *cues_);
}

std::optional<RuleOutcome> RuleCatalog::apply_first(
    const TreePtr& sentence, const TransformationRule** which,
    std::vector<std::pair<int, std::string>>* rephrase_failures) const {
  for (auto* r : order_) {
    std::optional<RuleOutcome> out;
    try {
      out = apply(*r, sentence);
    } catch (const RephraseFailure& f) {
      // pattern/template mismatch: leave the leaf to the next rule
      if (rephrase_failures) rephrase_failures->emplace_back(f.rule_id, f.what());
      continue;
    }
    if (out) {
      if (which) *which = r;
      return out;
    }
  }
  if (which) *which = nullptr;
  return std::nullopt;
}

}  // namespace propsplit
