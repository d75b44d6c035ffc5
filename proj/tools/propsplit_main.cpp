#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "propsplit/eval.hpp"
#include "propsplit/hierarchy.hpp"
#include "propsplit/parser_bridge.hpp"
#include "propsplit/ptb.hpp"
#include "propsplit/relations.hpp"
#include "propsplit/rules.hpp"
#include "propsplit/tpattern.hpp"

namespace {

using namespace propsplit;

struct ResourceFlags {
  std::string cues, verbs, locations;
};

// Resource resolution: explicit flag, then $PROPSPLIT_RESOURCES, then a
// ./resources directory, then the compiled-in defaults.
std::string find_resource(const std::string& flag, const std::string& filename) {
  if (!flag.empty()) return flag;
  std::vector<std::string> dirs;
  if (const char* env = std::getenv("PROPSPLIT_RESOURCES")) dirs.push_back(env);
  dirs.push_back("resources");
  for (auto& dir : dirs) {
    std::string path = dir + "/" + filename;
    if (std::ifstream(path).good()) return path;
  }
  return {};
}

CueTable make_cue_table(const ResourceFlags& res) {
  CueTable table = CueTable::builtin();
  std::string cues = find_resource(res.cues, "cues.tsv");
  std::string verbs = find_resource(res.verbs, "attribution_verbs.txt");
  std::string locations = find_resource(res.locations, "locations.txt");
  if (!cues.empty()) table.load_cues(cues);
  if (!verbs.empty()) table.load_attribution_verbs(verbs);
  if (!locations.empty()) table.load_locations(locations);
  return table;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

int cmd_simplify(const std::string& trees_file, const std::string& text_file,
                 const std::string& parser_cmd, const std::string& parser_url,
                 const std::string& format, bool coarse, const std::string& diagnostics_file,
                 int jobs, int max_applications, const std::string& cache_dir, bool no_cache,
                 const ResourceFlags& res) {
  std::vector<TreePtr> trees;
  if (!trees_file.empty()) {
    trees = load_trees(trees_file);
  } else {
    auto sentences = read_lines(text_file);
    ParserEndpoint ep;
    if (!parser_cmd.empty()) {
      ep.kind = ParserEndpoint::Process;
      ep.target = parser_cmd;
    } else if (!parser_url.empty()) {
      ep.kind = ParserEndpoint::Http;
      ep.target = parser_url;
    } else if (const char* env = std::getenv("PROPSPLIT_PARSER")) {
      std::string t = env;
      ep.kind = t.rfind("http://", 0) == 0 ? ParserEndpoint::Http : ParserEndpoint::Process;
      ep.target = t;
    } else {
      std::cerr << "simplify: --text requires --parser-cmd or --parser-url\n";
      return 2;
    }
    if (!no_cache) ep.cache_dir = cache_dir;
    trees = parse_external(sentences, ep);
  }

  CueTable table = make_cue_table(res);
  RuleCatalog catalog(table);
  TransformOptions options;
  options.catalog = &catalog;
  options.max_rule_applications = max_applications;

  struct Result {
    std::string text;
    Diagnostics diag;
  };
  std::vector<Result> results(trees.size());
  auto work = [&](std::size_t i) {
    Diagnostics diag;
    auto tree = transform(trees[i], options, &diag);
    Result r;
    r.text = format == "structured" ? serialize_structured(*tree, coarse)
                                    : serialize_flat(*tree, coarse);
    r.diag = std::move(diag);
    return r;
  };
  if (jobs <= 1) {
    for (std::size_t i = 0; i < trees.size(); ++i) results[i] = work(i);
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<std::size_t> next{0};
    for (int j = 0; j < jobs; ++j) {
      futs.push_back(std::async(std::launch::async, [&]() {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= trees.size()) break;
          results[i] = work(i);
        }
      }));
    }
    for (auto& f : futs) f.get();
  }

  if (format == "structured") {
    std::cout << "[\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      std::cout << results[i].text;
      if (i + 1 < results.size()) std::cout << ",";
      std::cout << "\n";
    }
    std::cout << "]\n";
  } else {
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (i) std::cout << "\n";
      std::cout << results[i].text;
    }
  }

  if (!diagnostics_file.empty()) {
    std::ostream* out = &std::cerr;
    std::ofstream file;
    if (diagnostics_file != "-") {
      file.open(diagnostics_file);
      out = &file;
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
      for (auto& e : results[i].diag.events) {
        (*out) << "sentence " << (i + 1) << "\tstep " << e.step << "\trule #" << e.rule_id << "\t"
               << e.note << "\n";
      }
      if (results[i].diag.hit_application_limit)
        (*out) << "sentence " << (i + 1) << "\tWARNING: rule application limit reached\n";
    }
  }
  return 0;
}

int cmd_stats(const std::string& corpus_file, bool split_punct, const std::string& format) {
  auto corpus = load_corpus_tsv(corpus_file);
  auto stats = corpus_stats(corpus, split_punct);
  if (format == "json") {
    nlohmann::json j;
    j["lines"] = corpus.size();
    j["tokens_per_sentence"] = stats.tokens_per_sentence;
    j["sentences_per_input"] = stats.sentences_per_input;
    j["percent_same"] = stats.percent_same;
    j["ld_sc"] = stats.ld_sc;
    if (stats.has_references) {
      j["bleu"] = stats.bleu;
      j["sari"] = stats.sari;
    } else {
      j["bleu"] = nullptr;
      j["sari"] = nullptr;
    }
    j["samsa"] = nullptr;
    j["samsa_abl"] = nullptr;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << format_stats_table(stats);
  }
  return 0;
}

int cmd_rules_list() {
  const auto& catalog = RuleCatalog::builtin();
  for (auto& r : catalog.rules()) {
    std::cout << '#' << r.id << '\t' << r.name << '\t' << construct_name(r.construct) << '\t'
              << (r.hierarchy == Arrangement::Coordinate ? "coordinate" : "subordinate") << '\t'
              << r.pattern_source << '\n';
  }
  return 0;
}

int cmd_match(const std::string& pattern_str, const std::string& tree_file) {
  TreePattern pattern = compile(pattern_str);
  auto trees = load_trees(tree_file);
  for (std::size_t t = 0; t < trees.size(); ++t) {
    auto matches = match_all(pattern, *trees[t]);
    std::cout << "tree " << (t + 1) << ": " << matches.size() << " match(es)\n";
    for (std::size_t i = 0; i < matches.size(); ++i) {
      auto& m = matches[i];
      std::cout << "  match " << (i + 1) << " root=" << m.root_match.node->label << " ["
                << m.root_match.node->span_begin << "," << m.root_match.node->span_end << ")\n";
      for (auto& [name, node] : m.bindings) {
        std::cout << "    " << name << " -> " << node.node->label << " [" << node.node->span_begin
                  << "," << node.node->span_end << ")";
        if (node.node->is_leaf()) std::cout << " \"" << node.node->token << "\"";
        std::cout << "\n";
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"propsplit: split complex sentences into linked minimal propositions"};
  app.require_subcommand(1);

  ResourceFlags res;

  auto* simplify = app.add_subcommand("simplify", "transform sentences into proposition trees");
  std::string trees_file, text_file, parser_cmd, parser_url, format = "flat", diagnostics_file;
  std::string cache_dir = ".propsplit-cache";
  bool coarse = false, no_cache = false, split_punct = false;
  int jobs = 1, max_applications = 100;
  auto* trees_opt = simplify->add_option("--trees", trees_file, "file of bracketed parse trees");
  auto* text_opt =
      simplify->add_option("--text", text_file, "file of raw sentences, one per line");
  simplify->add_option("--parser-cmd", parser_cmd,
                       "constituency parser command (line in, tree out)");
  simplify->add_option("--parser-url", parser_url, "constituency parser HTTP endpoint");
  simplify->add_option("--format", format, "flat|structured")
      ->check(CLI::IsMember({"flat", "structured"}));
  simplify->add_flag("--coarse", coarse, "render coarse relation classes");
  simplify->add_option("--diagnostics", diagnostics_file, "diagnostics file ('-' for stderr)");
  simplify->add_option("--jobs", jobs, "parallel sentences");
  simplify->add_option("--max-applications", max_applications, "rule application bound");
  simplify->add_option("--parser-cache", cache_dir, "parser result cache directory");
  simplify->add_flag("--no-parser-cache", no_cache, "disable the parser cache");
  simplify->add_option("--cues", res.cues, "cue table file (phrase TAB relation)");
  simplify->add_option("--attribution-verbs", res.verbs, "attribution verb lemma file");
  simplify->add_option("--locations", res.locations, "location gazetteer file");
  trees_opt->excludes(text_opt);

  auto* stats = app.add_subcommand("stats", "corpus simplification statistics");
  std::string corpus_file, stats_format = "table";
  stats->add_option("--corpus", corpus_file, "TSV corpus: input, outputs, refs...")->required();
  stats->add_flag("--split-punctuation", split_punct, "naive punctuation splitting");
  stats->add_option("--format", stats_format, "table|json")
      ->check(CLI::IsMember({"table", "json"}));

  auto* rules = app.add_subcommand("rules", "rule catalog");
  auto* rules_list = rules->add_subcommand("list", "print the 35-rule catalog");

  auto* match = app.add_subcommand("match", "debug a tree pattern");
  std::string pattern_str, match_tree_file;
  match->add_option("--pattern", pattern_str, "pattern string")->required();
  match->add_option("--tree", match_tree_file, "tree file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (simplify->parsed()) {
      if (trees_file.empty() && text_file.empty()) {
        std::cerr << "simplify: one of --trees or --text is required\n";
        return 2;
      }
      return cmd_simplify(trees_file, text_file, parser_cmd, parser_url, format, coarse,
                          diagnostics_file, jobs, max_applications, cache_dir, no_cache, res);
    }
    if (stats->parsed()) return cmd_stats(corpus_file, split_punct, stats_format);
    if (rules->parsed()) {
      if (rules_list->parsed()) return cmd_rules_list();
      std::cerr << "rules: expected subcommand 'list'\n";
      return 2;
    }
    if (match->parsed()) return cmd_match(pattern_str, match_tree_file);
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BridgeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PtbError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PatternError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
