#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace propsplit {

enum class Relation {
  Contrast,
  List,
  Disjunction,
  Cause,
  Result,
  Background,
  Condition,
  Elaboration,
  ElaborationDefining,
  ElaborationNonDefining,
  Explanation,
  Attribution,
  Purpose,
  TemporalBefore,
  TemporalAfter,
  Temporal,
  Spatial,
  UnknownCoordination,
  UnknownSubordination,
};

enum class Arrangement { Coordinate, Subordinate };

// Canonical name, e.g. "ElaborationDefining".
std::string relation_name(Relation r);
// Flat-output form, e.g. "ELABORATION_DEFINING".
std::string relation_upper(Relation r);
std::optional<Relation> relation_from_name(const std::string& name);

// Coarse display classes: List/Disjunction -> Joint, Result -> Cause,
// Temporal-Before/-After -> Temporal, Purpose -> Enablement, rest identity.
std::string coarse_class(Relation r);
std::string coarse_class_name(const std::string& name);  // idempotent on names

// Cue phrases, attribution verbs and the entity gazetteer. Rows keep their
// source order; earlier rows win ties between equally long cue matches.
struct CueTable {
  std::vector<std::pair<std::string, Relation>> entries;
  std::set<std::string> attribution_verbs;  // lemmas
  std::set<std::string> locations;          // lowercased

  static const CueTable& builtin();

  // Optional config overrides; '#' starts a comment line. Formats:
  //   cues.tsv               phrase TAB relation
  //   attribution_verbs.txt  one lemma per line
  //   locations.txt          one name per line
  void load_cues(const std::string& path);
  void load_attribution_verbs(const std::string& path);
  void load_locations(const std::string& path);
};

// Longest matching cue phrase wins; ties resolve to the earlier row. Empty or
// unmatched cues fall back to Unknown-Coordination/-Subordination.
Relation classify_cue(const CueTable& table, const std::vector<std::string>& cue_tokens,
                      Arrangement arrangement);
Relation classify_cue(const CueTable& table, const std::string& cue, Arrangement arrangement);

bool is_attribution_verb(const CueTable& table, const std::string& verb_token);

// Exception table plus suffix rules (-ied/-ies -> -y, -es/-s, -ing, -ed with
// consonant-doubling undo).
std::string lemmatize_verb(const std::string& token);

// DATE evidence (year 1000-2999, month, weekday, "Nth century") -> Temporal;
// LOCATION evidence (gazetteer, or in/at/near + NNP run) -> Spatial. DATE
// wins when both are present. `ne_tags`, when supplied, provides external
// per-token annotations ("DATE", "LOCATION", anything else ignored).
std::optional<Relation> classify_entities(
    const CueTable& table, const std::vector<std::pair<std::string, std::string>>& tagged_tokens,
    const std::vector<std::string>* ne_tags = nullptr);

std::string lowercase(std::string s);

}  // namespace propsplit
