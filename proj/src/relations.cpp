#include "propsplit/relations.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace propsplit {

std::string lowercase(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

namespace {

const std::map<Relation, std::string>& names() {
  static const std::map<Relation, std::string> m = {
      {Relation::Contrast, "Contrast"},
      {Relation::List, "List"},
      {Relation::Disjunction, "Disjunction"},
      {Relation::Cause, "Cause"},
      {Relation::Result, "Result"},
      {Relation::Background, "Background"},
      {Relation::Condition, "Condition"},
      {Relation::Elaboration, "Elaboration"},
      {Relation::ElaborationDefining, "ElaborationDefining"},
      {Relation::ElaborationNonDefining, "ElaborationNonDefining"},
      {Relation::Explanation, "Explanation"},
      {Relation::Attribution, "Attribution"},
      {Relation::Purpose, "Purpose"},
      {Relation::TemporalBefore, "TemporalBefore"},
      {Relation::TemporalAfter, "TemporalAfter"},
      {Relation::Temporal, "Temporal"},
      {Relation::Spatial, "Spatial"},
      {Relation::UnknownCoordination, "UnknownCoordination"},
      {Relation::UnknownSubordination, "UnknownSubordination"},
  };
  return m;
}

}  // namespace

std::string relation_name(Relation r) { return names().at(r); }

std::string relation_upper(Relation r) {
  switch (r) {
    case Relation::ElaborationDefining: return "ELABORATION_DEFINING";
    case Relation::ElaborationNonDefining: return "ELABORATION_NON_DEFINING";
    case Relation::TemporalBefore: return "TEMPORAL_BEFORE";
    case Relation::TemporalAfter: return "TEMPORAL_AFTER";
    case Relation::UnknownCoordination: return "UNKNOWN_COORDINATION";
    case Relation::UnknownSubordination: return "UNKNOWN_SUBORDINATION";
    default: {
      std::string s = relation_name(r);
      for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      return s;
    }
  }
}

std::optional<Relation> relation_from_name(const std::string& name) {
  for (auto& [r, n] : names())
    if (n == name) return r;
  return std::nullopt;
}

std::string coarse_class(Relation r) {
  switch (r) {
    case Relation::List:
    case Relation::Disjunction:
      return "Joint";
    case Relation::Result:
      return "Cause";
    case Relation::TemporalBefore:
    case Relation::TemporalAfter:
      return "Temporal";
    case Relation::Purpose:
      return "Enablement";
    default:
      return relation_name(r);
  }
}

std::string coarse_class_name(const std::string& name) {
  auto r = relation_from_name(name);
  return r ? coarse_class(*r) : name;
}

const CueTable& CueTable::builtin() {
  static const CueTable table = [] {
    CueTable t;
    auto row = [&t](Relation r, std::initializer_list<const char*> cues) {
      for (auto* c : cues) t.entries.emplace_back(c, r);
    };
    row(Relation::Contrast, {"although", "but", "but now", "despite", "even though", "even when",
                             "except when", "however", "instead", "rather", "still", "though",
                             "thus", "until recently", "while", "yet"});
    row(Relation::List, {"and", "in addition", "in addition to", "moreover"});
    row(Relation::Disjunction, {"or"});
    row(Relation::Cause, {"largely because", "because", "since"});
    row(Relation::Result, {"as a result", "as a result of"});
    row(Relation::Temporal, {"after", "and after", "next", "then", "before", "previously"});
    row(Relation::Background, {"as", "now", "once", "when", "with", "without"});
    row(Relation::Condition, {"if", "in case", "unless", "until"});
    row(Relation::Elaboration, {"more provocatively", "even before", "for example", "further",
                                "recently", "since", "since now", "so", "so far", "where",
                                "whereby", "whether"});
    row(Relation::Explanation, {"simply because", "because of", "indeed", "so", "so that"});
    t.attribution_verbs = {
        "say",     "announce", "claim",   "note",    "remark",  "report",  "state",
        "think",   "believe",  "argue",   "declare", "tell",    "reply",   "insist",
        "observe", "add",      "mention", "suggest", "assert",  "explain", "warn",
        "estimate", "predict", "agree",   "acknowledge", "admit", "conclude", "deny",
        "emphasize", "fear",   "hope",    "know",    "maintain", "recall", "respond",
        "shout",   "whisper",  "write",   "feel",    "indicate", "realize", "reveal",
        "confirm", "complain", "propose", "comment", "contend",  "speculate",
    };
    t.locations = {
        "india",   "canada",  "france",   "lithuania", "geneva",  "chicago",  "washington",
        "paris",   "london",  "rome",     "berlin",    "moscow",  "africa",   "europe",
        "asia",    "america", "australia", "england",  "germany", "russia",   "china",
        "japan",   "spain",   "italy",    "ireland",   "scotland", "mexico",  "brazil",
        "rostov",  "novocherkassk",
    };
    return t;
  }();
  return table;
}

namespace {

std::vector<std::string> config_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    line = line.substr(start);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace

void CueTable::load_cues(const std::string& path) {
  entries.clear();
  for (auto& line : config_lines(path)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error("cues.tsv: missing TAB in: " + line);
    std::string phrase = line.substr(0, tab);
    std::string rel = line.substr(tab + 1);
    while (!rel.empty() && std::isspace(static_cast<unsigned char>(rel.back()))) rel.pop_back();
    auto r = relation_from_name(rel);
    if (!r) throw std::runtime_error("cues.tsv: unknown relation: " + rel);
    entries.emplace_back(lowercase(phrase), *r);
  }
}

void CueTable::load_attribution_verbs(const std::string& path) {
  attribution_verbs.clear();
  for (auto& line : config_lines(path)) attribution_verbs.insert(lowercase(line));
}

void CueTable::load_locations(const std::string& path) {
  locations.clear();
  for (auto& line : config_lines(path)) locations.insert(lowercase(line));
}

namespace {

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

bool contains_at_word_boundary(const std::vector<std::string>& words,
                               const std::vector<std::string>& phrase) {
  if (phrase.empty() || phrase.size() > words.size()) return false;
  for (std::size_t i = 0; i + phrase.size() <= words.size(); ++i) {
    bool ok = true;
    for (std::size_t j = 0; j < phrase.size(); ++j)
      if (words[i + j] != phrase[j]) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

}  // namespace

Relation classify_cue(const CueTable& table, const std::vector<std::string>& cue_tokens,
                      Arrangement arrangement) {
  std::vector<std::string> words;
  for (auto& t : cue_tokens) {
    for (auto& w : split_words(lowercase(t))) words.push_back(w);
  }
  const std::pair<std::string, Relation>* best = nullptr;
  std::size_t best_len = 0;
  for (auto& entry : table.entries) {
    auto phrase = split_words(entry.first);
    if (!contains_at_word_boundary(words, phrase)) continue;
    if (best == nullptr || phrase.size() > best_len) {
      best = &entry;
      best_len = phrase.size();
    }
  }
  if (best) return best->second;
  return arrangement == Arrangement::Coordinate ? Relation::UnknownCoordination
                                                : Relation::UnknownSubordination;
}

Relation classify_cue(const CueTable& table, const std::string& cue, Arrangement arrangement) {
  return classify_cue(table, split_words(cue), arrangement);
}

std::string lemmatize_verb(const std::string& token) {
  static const std::map<std::string, std::string> exceptions = {
      {"said", "say"},       {"says", "say"},       {"saying", "say"},
      {"thought", "think"},  {"told", "tell"},      {"felt", "feel"},
      {"knew", "know"},      {"wrote", "write"},    {"written", "write"},
      {"spoke", "speak"},    {"spoken", "speak"},   {"saw", "see"},
      {"seen", "see"},       {"began", "begin"},    {"begun", "begin"},
      {"kept", "keep"},      {"held", "hold"},      {"met", "meet"},
      {"heard", "hear"},     {"meant", "mean"},     {"understood", "understand"},
      {"found", "find"},     {"left", "leave"},     {"made", "make"},
      {"gave", "give"},      {"given", "give"},     {"took", "take"},
      {"taken", "take"},     {"got", "get"},        {"gotten", "get"},
      {"came", "come"},      {"went", "go"},        {"gone", "go"},
      {"ran", "run"},        {"did", "do"},         {"done", "do"},
      {"does", "do"},        {"has", "have"},       {"had", "have"},
      {"is", "be"},          {"are", "be"},         {"was", "be"},
      {"were", "be"},        {"been", "be"},        {"being", "be"},
      {"am", "be"},          {"read", "read"},      {"led", "lead"},
      {"lied", "lie"},       {"dying", "die"},      {"lying", "lie"},
      {"tying", "tie"},      {"sang", "sing"},      {"sung", "sing"},
      {"brought", "bring"},  {"bought", "buy"},     {"caught", "catch"},
      {"taught", "teach"},   {"sought", "seek"},    {"fought", "fight"},
      {"sold", "sell"},      {"paid", "pay"},       {"sent", "send"},
      {"built", "build"},    {"lost", "lose"},      {"stood", "stand"},
      {"withdrew", "withdraw"}, {"drew", "draw"},   {"drawn", "draw"},
      {"grew", "grow"},      {"grown", "grow"},     {"flew", "fly"},
      {"threw", "throw"},    {"thrown", "throw"},   {"rose", "rise"},
      {"risen", "rise"},     {"chose", "choose"},   {"chosen", "choose"},
      {"fell", "fall"},      {"fallen", "fall"},    {"won", "win"},        {"writing", "write"},
      {"showed", "show"},    {"shown", "show"},     {"broke", "break"},
      {"broken", "break"},   {"forgot", "forget"},  {"forgotten", "forget"},
      {"added", "add"},      {"adding", "add"},     {"avoided", "avoid"},
      {"avoiding", "avoid"}, {"changed", "change"}, {"changing", "change"},
      {"developed", "develop"},        {"developing", "develop"},
      {"acknowledged", "acknowledge"}, {"acknowledging", "acknowledge"},
      {"declared", "declare"},         {"declaring", "declare"},
      {"compared", "compare"},         {"comparing", "compare"},
      {"welcomed", "welcome"},         {"welcoming", "welcome"},
  };
  std::string w = lowercase(token);
  auto it = exceptions.find(w);
  if (it != exceptions.end()) return it->second;

  auto is_vowel = [](char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; };
  // admitt -> admit; ll/ss/zz stems keep their doubling (recall, buzz).
  auto undouble = [&](std::string s, bool* changed) {
    std::size_t n = s.size();
    if (n >= 3 && s[n - 1] == s[n - 2] && !is_vowel(s[n - 1]) && s[n - 1] != 'l' &&
        s[n - 1] != 's' && s[n - 1] != 'z') {
      s.pop_back();
      *changed = true;
    }
    return s;
  };
  // announc -> announce, conclud -> conclude. Per-letter because English
  // drops the silent e inconsistently (hope vs develop, state vs visit).
  auto restore_e = [&](std::string s) {
    std::size_t n = s.size();
    if (n < 2) return s;
    char c = s[n - 1];
    char p = s[n - 2];
    char pp = n >= 3 ? s[n - 3] : '\0';
    bool pv = is_vowel(p);
    switch (c) {
      case 'c': if (pv || p == 'n' || p == 'r' || p == 'l') return s + "e"; break;
      case 'v': return s + "e";
      case 'b': if (pv) return s + "e"; break;
      case 'z': if (pv) return s + "e"; break;
      case 'g': if (p == 'r' || p == 'u') return s + "e"; break;
      case 's': if (pv && p != 'e') return s + "e"; break;
      case 't':
        // compute -> compute but shout -> shout: a vowel digraph keeps its form
        if (p == 'a' || p == 'o') return s + "e";
        if (p == 'u' && !is_vowel(pp)) return s + "e";
        break;
      case 'd': if (p == 'u' || p == 'i') return s + "e"; break;
      case 'r': if (p == 'i' || p == 'u') return s + "e"; break;
      case 'p': if (pv && n <= 4) return s + "e"; break;
      case 'm': if (p == 'u') return s + "e"; break;
      case 'u': return s + "e";
      default: break;
    }
    return s;
  };
  auto strip_stem = [&](std::string stem) {
    bool doubled = false;
    stem = undouble(std::move(stem), &doubled);
    return doubled ? stem : restore_e(stem);
  };

  if (w.size() > 4 && w.ends_with("ied")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 4 && w.ends_with("ies")) return w.substr(0, w.size() - 3) + "y";
  if (w.size() > 3 && w.ends_with("ed")) {
    if (w[w.size() - 3] == 'e' || w[w.size() - 3] == 'u')
      return w.substr(0, w.size() - 1);  // agreed -> agree, argued -> argue
    return strip_stem(w.substr(0, w.size() - 2));
  }
  if (w.size() > 4 && w.ends_with("ing")) return strip_stem(w.substr(0, w.size() - 3));
  if (w.size() > 3 && w.ends_with("es")) {
    // -es attaches to sibilant/velar stems (pushes, fixes, goes); elsewhere
    // the stem already ends in e (proposes, emphasizes).
    std::string stem = w.substr(0, w.size() - 2);
    if (stem.ends_with("ss") || stem.ends_with("sh") || stem.ends_with("ch") ||
        stem.ends_with("x") || stem.ends_with("zz") || stem.ends_with("o")) {
      return stem;
    }
  }
  if (w.size() > 2 && w.ends_with("s") && !w.ends_with("ss")) return w.substr(0, w.size() - 1);
  return w;
}

bool is_attribution_verb(const CueTable& table, const std::string& verb_token) {
  return table.attribution_verbs.count(lemmatize_verb(verb_token)) > 0;
}

namespace {

bool is_month(const std::string& lower) {
  static const std::set<std::string> months = {
      "january", "february", "march",     "april",   "may",      "june",
      "july",    "august",   "september", "october", "november", "december"};
  return months.count(lower) > 0;
}

bool is_weekday(const std::string& lower) {
  static const std::set<std::string> days = {"monday", "tuesday",  "wednesday", "thursday",
                                             "friday", "saturday", "sunday"};
  return days.count(lower) > 0;
}

bool is_year(const std::string& tok) {
  if (tok.size() != 4) return false;
  for (char c : tok)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  int y = std::stoi(tok);
  return y >= 1000 && y <= 2999;
}

bool is_ordinal(const std::string& tok) {
  std::size_t i = 0;
  while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
  if (i == 0 || i + 2 != tok.size()) return false;
  std::string suf = lowercase(tok.substr(i));
  return suf == "st" || suf == "nd" || suf == "rd" || suf == "th";
}

}  // namespace

std::optional<Relation> classify_entities(
    const CueTable& table, const std::vector<std::pair<std::string, std::string>>& tagged,
    const std::vector<std::string>* ne_tags) {
  bool date = false, location = false;
  if (ne_tags) {
    for (std::size_t i = 0; i < ne_tags->size() && i < tagged.size(); ++i) {
      if ((*ne_tags)[i] == "DATE") date = true;
      if ((*ne_tags)[i] == "LOCATION") location = true;
    }
  }
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    const std::string& tag = tagged[i].first;
    const std::string& tok = tagged[i].second;
    std::string low = lowercase(tok);
    if (is_year(tok) || is_month(low) || is_weekday(low)) date = true;
    if (is_ordinal(tok) && i + 1 < tagged.size() && lowercase(tagged[i + 1].second) == "century")
      date = true;
    if (table.locations.count(low)) location = true;
    if ((low == "in" || low == "at" || low == "near") && i + 1 < tagged.size() &&
        (tagged[i + 1].first == "NNP" || tagged[i + 1].first == "NNPS")) {
      location = true;
    }
    (void)tag;
  }
  if (date) return Relation::Temporal;
  if (location) return Relation::Spatial;
  return std::nullopt;
}

}  // namespace propsplit
