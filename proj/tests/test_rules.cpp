#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "golden_rules.hpp"
#include "propsplit/parser_bridge.hpp"
#include "propsplit/rules.hpp"

using namespace propsplit;

namespace {

TreePtr fixture(int id) {
  char path[256];
  std::snprintf(path, sizeof(path), "%s/data/fixtures/rule%02d.mrg", PROPSPLIT_SOURCE_DIR, id);
  auto trees = load_trees(path);
  REQUIRE(trees.size() == 1);
  return trees[0];
}

std::vector<std::pair<std::string, bool>> labelled_texts(const RuleOutcome& out) {
  std::vector<std::pair<std::string, bool>> got;
  for (auto& p : out.parts) got.emplace_back(p.text(), p.core);
  std::sort(got.begin(), got.end());
  return got;
}

}  // namespace

TEST_CASE("catalog shape") {
  auto& catalog = RuleCatalog::builtin();
  CHECK(catalog.rules().size() == 35);
  CHECK(catalog.execution_order().size() == 35);
  // ids unique and 1..35
  std::set<int> ids;
  for (auto& r : catalog.rules()) ids.insert(r.id);
  CHECK(ids.size() == 35);
  CHECK(*ids.begin() == 1);
  CHECK(*ids.rbegin() == 35);
  // rule #20 is triggered before rule #2
  auto pos = [&](int id) {
    auto& order = catalog.execution_order();
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i]->id == id) return i;
    return
#ifdef _MSC_VER
        std::size_t(-1)
#else
        static_cast<std::size_t>(-1)
#endif
        ;
  };
  CHECK(pos(20) < pos(2));
  // attribution rules run first
  CHECK(pos(17) == 0);
  CHECK(pos(18) == 1);
  CHECK(pos(19) == 2);
  CHECK(pos(20) == 3);
}

TEST_CASE("per-construct counts match the catalog inventory") {
  std::map<Construct, int> counts;
  std::map<Construct, Arrangement> arr;
  for (auto& r : RuleCatalog::builtin().rules()) {
    counts[r.construct]++;
    arr[r.construct] = r.hierarchy;
  }
  CHECK(counts[Construct::CoordinateClause] == 1);
  CHECK(counts[Construct::AdverbialClause] == 6);
  CHECK(counts[Construct::RelativeClauseNonRestrictive] == 5);
  CHECK(counts[Construct::RelativeClauseRestrictive] == 4);
  CHECK(counts[Construct::ReportedSpeech] == 4);
  CHECK(counts[Construct::CoordinateVP] == 1);
  CHECK(counts[Construct::CoordinateNP] == 2);
  CHECK(counts[Construct::Participial] == 4);
  CHECK(counts[Construct::AppositionNonRestrictive] == 1);
  CHECK(counts[Construct::AppositionRestrictive] == 1);
  CHECK(counts[Construct::Prepositional] == 3);
  CHECK(counts[Construct::AdjectivalAdverbial] == 2);
  CHECK(counts[Construct::LeadNP] == 1);
  CHECK(arr[Construct::CoordinateClause] == Arrangement::Coordinate);
  CHECK(arr[Construct::CoordinateVP] == Arrangement::Coordinate);
  CHECK(arr[Construct::CoordinateNP] == Arrangement::Coordinate);
  CHECK(arr[Construct::AdverbialClause] == Arrangement::Subordinate);
  CHECK(arr[Construct::LeadNP] == Arrangement::Subordinate);
}

TEST_CASE("each rule reproduces its catalog example") {
  auto& catalog = RuleCatalog::builtin();
  for (auto& g : golden_rules()) {
    CAPTURE(g.id);
    auto tree = fixture(g.id);
    const TransformationRule* which = nullptr;
    auto out = catalog.apply_first(tree, &which);
    REQUIRE_MESSAGE(out.has_value(), "rule " << g.id << ": no rule fired");
    REQUIRE_MESSAGE(which->id == g.id,
                    "rule " << g.id << ": rule #" << which->id << " fired instead");
    CHECK(relation_name(out->relation) == g.relation);
    std::string arr = out->arrangement == Arrangement::Coordinate ? "coordinate" : "subordinate";
    CHECK(arr == g.arrangement);
    std::vector<std::pair<std::string, bool>> want;
    for (auto& p : g.parts) want.emplace_back(p.text, p.core);
    std::sort(want.begin(), want.end());
    auto got = labelled_texts(*out);
    CHECK_MESSAGE(got == want, "rule " << g.id << " parts differ");
  }
}

TEST_CASE("produced parts are well-formed sentences") {
  auto& catalog = RuleCatalog::builtin();
  for (auto& g : golden_rules()) {
    auto out = catalog.apply_first(fixture(g.id));
    REQUIRE(out.has_value());
    CHECK(out->parts.size() >= 2);
    for (auto& p : out->parts) {
      std::string text = p.text();
      REQUIRE(!text.empty());
      // first alphabetic character is uppercase
      for (char c : text) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
          CHECK(std::isupper(static_cast<unsigned char>(c)));
          break;
        }
      }
      char last = text.back();
      CHECK((last == '.' || last == '?' || last == '!' || last == '"'));
      CHECK(text.find("  ") == std::string::npos);
    }
  }
}

TEST_CASE("labels follow the hierarchy with the documented exceptions") {
  auto& catalog = RuleCatalog::builtin();
  for (auto& g : golden_rules()) {
    auto out = catalog.apply_first(fixture(g.id));
    REQUIRE(out.has_value());
    if (out->arrangement == Arrangement::Coordinate) {
      for (auto& p : out->parts) CHECK(p.core);
    } else {
      int context = 0;
      for (auto& p : out->parts) context += p.core ? 0 : 1;
      CHECK(context == 1);
    }
  }
}

TEST_CASE("rules do not fire on plain sentences") {
  auto plain = parse_bracketed("(ROOT (S (NP (PRP It)) (VP (VBZ works)) (. .)))");
  auto& catalog = RuleCatalog::builtin();
  CHECK(!catalog.apply(catalog.by_id(1), plain).has_value());
  CHECK(!catalog.apply_first(plain).has_value());
}

TEST_CASE("rule application is pure") {
  auto& catalog = RuleCatalog::builtin();
  auto tree = fixture(2);
  auto a = catalog.apply_first(tree);
  auto b = catalog.apply_first(tree);
  REQUIRE(a.has_value());
  REQUIRE(b.has_value());
  CHECK(labelled_texts(*a) == labelled_texts(*b));
  CHECK(a->relation == b->relation);
}

TEST_CASE("rule #28 rejects enumerations (scan-ahead for and/or)") {
  // "Obama has talked about using alcohol, marijuana, and cocaine."
  auto t = parse_bracketed(
      "(ROOT (S (NP (NNP Obama)) (VP (VBZ has) (VP (VBN talked) (PP (IN about) (S (VP (VBG "
      "using) (NP (NP (NN alcohol)) (, ,) (NP (NN marijuana)) (, ,) (CC and) (NP (NN "
      "cocaine)))))))) (. .)))");
  auto& catalog = RuleCatalog::builtin();
  CHECK(!catalog.apply(catalog.by_id(28), t).has_value());
  // the NP-list rule takes it instead
  auto out = catalog.apply(catalog.by_id(22), t);
  REQUIRE(out.has_value());
  CHECK(out->parts.size() == 3);
  CHECK(out->relation == Relation::List);
}

TEST_CASE("rule #22/#23 guards: topmost NPs in subject/object position only") {
  // appositive NP,NP without a conjunction is not a list
  auto appos = parse_bracketed(
      "(ROOT (S (NP (NP (DT The) (NN man)) (, ,) (NP (NN teacher)) (, ,)) (VP (VBZ smiles)) "
      "(. .)))");
  auto& catalog = RuleCatalog::builtin();
  CHECK(!catalog.apply(catalog.by_id(22), appos).has_value());
  CHECK(!catalog.apply(catalog.by_id(23), appos).has_value());
  // plain two-item coordinations stay together
  auto pair = parse_bracketed(
      "(ROOT (S (NP (NP (NNP Phobos)) (CC and) (NP (NNP Deimos))) (VP (VBP orbit) (NP (NNP "
      "Mars))) (. .)))");
  CHECK(!catalog.apply(catalog.by_id(23), pair).has_value());
  // three items with commas in object position split
  auto triple = parse_bracketed(
      "(ROOT (S (NP (PRP He)) (VP (VBD saw) (NP (NP (DT a) (NN cat)) (, ,) (NP (DT a) (NN "
      "dog)) (CC and) (NP (DT a) (NN bird)))) (. .)))");
  auto out = catalog.apply(catalog.by_id(22), triple);
  REQUIRE(out.has_value());
  CHECK(out->parts.size() == 3);
}

TEST_CASE("rule #30 guard: a constituent must remain in object position") {
  // "Radio France is headquartered in Paris."  -> no other complement, no split
  auto t = parse_bracketed(
      "(ROOT (S (NP (NNP Radio) (NNP France)) (VP (VBZ is) (VP (VBN headquartered) (PP (IN in) "
      "(NP (NNP Paris))))) (. .)))");
  auto& catalog = RuleCatalog::builtin();
  CHECK(!catalog.apply(catalog.by_id(30), t).has_value());
}

TEST_CASE("rephrase helpers") {
  auto referent = parse_bracketed("(NP (DT a) (JJ small) (NN dog))")->children[0];
  auto extracted = parse_bracketed("(S (VP (VBZ barks)))")->children[0];
  CHECK(rephrase_with_referent(extracted, referent, ReferentMode::Demonstrative) ==
        "This small dog barks.");
  auto an_ref = parse_bracketed("(NP (DT an) (JJ old) (NN map))")->children[0];
  auto hangs = parse_bracketed("(S (VP (VBZ hangs)))")->children[0];
  CHECK(rephrase_with_referent(hangs, an_ref, ReferentMode::Demonstrative) ==
        "This old map hangs.");
  auto the_ref = parse_bracketed("(NP (DT the) (NN map))")->children[0];
  CHECK(rephrase_with_referent(hangs, the_ref, ReferentMode::Demonstrative) == "The map hangs.");
  auto maggie = parse_bracketed("(NP (NNP Maggie))")->children[0];
  auto family = parse_bracketed("(S (VP (VBZ cares)))")->children[0];
  CHECK(rephrase_with_referent(family, maggie, ReferentMode::Possessive) == "Maggie's cares.");
  auto husband = parse_bracketed("(NP (PRP$ her) (NN husband))")->children[0];
  auto clause = parse_bracketed("(S (VP (VBD slept)))")->children[0];
  CHECK(rephrase_with_referent(clause, husband, ReferentMode::Direct) == "Her husband slept.");
}

TEST_CASE("whom-clause referents slot in before trailing modifiers") {
  // "the singer whom she admired when young praised him"
  auto t = parse_bracketed(
      "(ROOT (S (NP (NP (DT The) (NN singer)) (SBAR (WHNP (WP whom)) (S (NP (PRP she)) (VP "
      "(VBD admired) (SBAR (WHADVP (WRB when)) (S (NP (PRP she)) (VP (VBD was) (ADJP (JJ "
      "young))))))))) (VP (VBD bowed)) (. .)))");
  auto& catalog = RuleCatalog::builtin();
  auto out = catalog.apply(catalog.by_id(13), t);
  REQUIRE(out.has_value());
  CHECK(out->parts[1].text() == "She admired the singer when she was young.");
}

TEST_CASE("a matched pattern with an unfillable template throws RephraseFailure") {
  auto t = parse_bracketed(
      "(ROOT (S (NP (NNP Pauli)) (VP (`` ``) (SBAR (S (NP (PRP It)) (VP (VBZ is)))) ('' '')) "
      "(. .)))");
  auto& catalog = RuleCatalog::builtin();
  CHECK_THROWS_AS(catalog.apply(catalog.by_id(18), t), RephraseFailure);
  // the driver skips it and reports the rule id
  std::vector<std::pair<int, std::string>> skipped;
  auto out = catalog.apply_first(t, nullptr, &skipped);
  CHECK(!out.has_value());
  REQUIRE(!skipped.empty());
  CHECK(skipped[0].first == 18);
}

TEST_CASE("attribution guard rejects non-attribution verbs") {
  // same shape as rule #20's example, but with a non-attribution verb
  auto t = parse_bracketed(
      "(ROOT (S (NP (NNP Ellis)) (VP (VBD demanded) (SBAR (IN that) (S (NP (DT the) (NN "
      "character)) (VP (VBD leave))))) (. .)))");
  auto& catalog = RuleCatalog::builtin();
  CHECK(!catalog.apply(catalog.by_id(20), t).has_value());
}
