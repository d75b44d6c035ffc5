#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "propsplit/ptb.hpp"
#include "propsplit/relations.hpp"
#include "propsplit/tpattern.hpp"

namespace propsplit {

enum class Construct {
  CoordinateClause,
  AdverbialClause,
  RelativeClauseNonRestrictive,
  RelativeClauseRestrictive,
  ReportedSpeech,
  CoordinateVP,
  CoordinateNP,
  Participial,
  AppositionNonRestrictive,
  AppositionRestrictive,
  Prepositional,
  AdjectivalAdverbial,
  LeadNP,
};
std::string construct_name(Construct c);

enum class RelationSource { Cue, Fixed, EntityScan, Attribution };

struct RulePart {
  TreePtr tree;  // stand-alone sentence, ROOT-rooted
  bool core = true;
  int order_key = 0;  // source span position, for textual ordering

  std::string text() const { return yield_text(tree); }
};

struct RuleOutcome {
  int rule_id = 0;
  std::vector<RulePart> parts;      // >= 2, textual order
  std::vector<std::string> cue;     // cue tokens, possibly empty
  Relation relation = Relation::UnknownSubordination;
  Arrangement arrangement = Arrangement::Subordinate;
};

struct RephraseFailure : std::runtime_error {
  int rule_id;
  RephraseFailure(int id, const std::string& reason)
      : std::runtime_error("rule #" + std::to_string(id) + ": " + reason), rule_id(id) {}
};

struct TransformationRule;
using ApplyFn = std::function<std::optional<RuleOutcome>(const TransformationRule&,
                                                         const TreePtr&, const CueTable&)>;

struct TransformationRule {
  int id = 0;
  std::string name;
  Construct construct = Construct::CoordinateClause;
  Arrangement hierarchy = Arrangement::Subordinate;  // Table column, not per-outcome
  std::string pattern_source;  // pattern string; token-level procedure note for #29
  RelationSource relation_source = RelationSource::Fixed;
  std::optional<TreePattern> pattern;  // compiled; absent for #29
  ApplyFn apply_fn;
};

class RuleCatalog {
 public:
  explicit RuleCatalog(const CueTable& cues);
  static const RuleCatalog& builtin();

  // Catalog order: ids 1..35.
  const std::vector<TransformationRule>& rules() const { return rules_; }
  // Fixed execution order: attribution first, then clause before phrase
  // level (see rule_order.cc for the exact sequence).
  const std::vector<const TransformationRule*>& execution_order() const { return order_; }
  const TransformationRule& by_id(int id) const;
  const CueTable& cues() const { return *cues_; }

  // One rule application on a ROOT-rooted sentence tree. Absent = no match
  // or a guard rejected. Throws RephraseFailure when the pattern matched but
  // a template slot was unbound.
  std::optional<RuleOutcome> apply(const TransformationRule& rule, const TreePtr& sentence) const;

  // First rule (in execution order) that yields an outcome. Rules whose
  // pattern matched but whose template could not be filled are skipped and
  // reported through `rephrase_failures` when given.
  std::optional<RuleOutcome> apply_first(
      const TreePtr& sentence, const TransformationRule** which = nullptr,
      std::vector<std::pair<int, std::string>>* rephrase_failures = nullptr) const;

 private:
  const CueTable* cues_;
  std::vector<TransformationRule> rules_;
  std::vector<const TransformationRule*> order_;
};

// Rephrasing helpers (exposed for tests).
enum class ReferentMode { Direct, Demonstrative, Possessive };
std::string rephrase_with_referent(const TreePtr& extracted, const TreePtr& referent,
                                   ReferentMode mode);
enum class CanonicalFrame { ThisBe, ThisBeWhat, RefBe, RefHaveBe };
enum class Tense { Present, Past };
std::string select_copula(const TreePtr& subject, Tense tense);
Tense detect_tense(const ParseTree& sentence);

}  // namespace propsplit
