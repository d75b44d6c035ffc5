#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "matcher_oracle.hpp"
#include "propsplit/rules.hpp"

using namespace propsplit;
using namespace matcher_oracle;

TEST_CASE("engine agrees with the brute-force oracle") {
  std::vector<TreePattern> patterns;
  for (auto& r : RuleCatalog::builtin().rules()) {
    if (r.pattern) patterns.push_back(*r.pattern);
  }
  for (auto& s : synthetic_patterns()) patterns.push_back(compile(s));
  CHECK(patterns.size() >= 34 + 50);

  auto trees = deterministic_trees();
  auto extra = random_trees(200, 15, 99);
  trees.insert(trees.end(), extra.begin(), extra.end());

  long long checked = 0;
  for (auto& t : trees) {
    for (auto& p : patterns) {
      auto a = engine_matches(p, *t);
      auto b = oracle_matches(p, *t);
      ++checked;
      REQUIRE_MESSAGE(a == b, "pattern '" << p.source << "' on tree " << serialize_bracketed(t));
    }
  }
  CHECK(checked > 10000);
}

TEST_CASE("oracle agreement on the rule fixtures") {
  std::vector<TreePattern> patterns;
  for (auto& r : RuleCatalog::builtin().rules())
    if (r.pattern) patterns.push_back(*r.pattern);
  for (int id = 1; id <= 35; ++id) {
    char path[256];
    std::snprintf(path, sizeof(path), "%s/data/fixtures/rule%02d.mrg", PROPSPLIT_SOURCE_DIR, id);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    auto t = parse_bracketed(buf.str());
    for (auto& p : patterns) {
      REQUIRE_MESSAGE(engine_matches(p, *t) == oracle_matches(p, *t),
                      "pattern '" << p.source << "' on fixture " << id);
    }
  }
}
