#include "propsplit/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace propsplit {

std::vector<std::string> metric_tokens(const std::string& s, bool split_punctuation) {
  std::vector<std::string> raw;
  std::istringstream in(s);
  std::string w;
  while (in >> w) raw.push_back(w);
  if (!split_punctuation) return raw;
  auto is_punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)); };
  std::vector<std::string> out;
  for (auto& tok : raw) {
    std::size_t a = 0, b = tok.size();
    while (a < b && is_punct(tok[a])) out.push_back(std::string(1, tok[a++]));
    std::vector<std::string> tail;
    while (b > a && is_punct(tok[b - 1])) tail.push_back(std::string(1, tok[--b]));
    if (b > a) out.push_back(tok.substr(a, b - a));
    out.insert(out.end(), tail.rbegin(), tail.rend());
  }
  return out;
}

double tokens_per_sentence(const std::vector<std::string>& outputs) {
  if (outputs.empty()) throw EvalError(EvalError::EmptyOutput, "no output sentences");
  std::size_t total = 0;
  for (auto& s : outputs) total += metric_tokens(s).size();
  return static_cast<double>(total) / static_cast<double>(outputs.size());
}

int levenshtein_words(const std::string& a, const std::string& b, bool split_punctuation) {
  auto x = metric_tokens(a, split_punctuation);
  auto y = metric_tokens(b, split_punctuation);
  std::vector<int> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= y.size(); ++j) {
      int sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

namespace {

using Gram = std::vector<std::string>;
using Counts = std::map<Gram, int>;

Counts ngram_counts(const std::vector<std::string>& toks, std::size_t n) {
  Counts out;
  if (toks.size() < n) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    out[Gram(toks.begin() + i, toks.begin() + i + n)]++;
  }
  return out;
}

}  // namespace

double bleu(const std::vector<std::string>& candidates,
            const std::vector<std::vector<std::string>>& reference_sets, bool split_punctuation) {
  if (candidates.size() != reference_sets.size())
    throw EvalError(EvalError::MalformedCorpus, "candidate/reference count mismatch");
  long long cand_len = 0, ref_len = 0;
  double clipped[4] = {0, 0, 0, 0};
  double total[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto cand = metric_tokens(candidates[i], split_punctuation);
    cand_len += static_cast<long long>(cand.size());
    // closest reference length; ties to the shorter
    long long best = -1;
    for (auto& r : reference_sets[i]) {
      long long len = static_cast<long long>(metric_tokens(r, split_punctuation).size());
      if (best < 0 || std::llabs(len - (long long)cand.size()) <
                          std::llabs(best - (long long)cand.size()) ||
          (std::llabs(len - (long long)cand.size()) ==
               std::llabs(best - (long long)cand.size()) &&
           len < best)) {
        best = len;
      }
    }
    if (best > 0) ref_len += best;
    for (std::size_t n = 1; n <= 4; ++n) {
      auto cc = ngram_counts(cand, n);
      Counts max_ref;
      for (auto& r : reference_sets[i]) {
        auto rc = ngram_counts(metric_tokens(r, split_punctuation), n);
        for (auto& [g, c] : rc) max_ref[g] = std::max(max_ref[g], c);
      }
      for (auto& [g, c] : cc) {
        total[n - 1] += c;
        auto it = max_ref.find(g);
        if (it != max_ref.end()) clipped[n - 1] += std::min(c, it->second);
      }
    }
  }
  // Orders with no candidate n-grams (short sentences) drop out of the
  // geometric mean; an order with grams but no matches zeroes the score.
  double log_sum = 0;
  int orders = 0;
  for (int n = 0; n < 4; ++n) {
    if (total[n] == 0) continue;
    if (clipped[n] == 0) return 0.0;
    log_sum += std::log(clipped[n] / total[n]);
    ++orders;
  }
  if (orders == 0) return 0.0;
  log_sum /= orders;
  double bp = 1.0;
  if (cand_len < ref_len && cand_len > 0)
    bp = std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(cand_len));
  if (cand_len == 0) return 0.0;
  return bp * std::exp(log_sum);  // log_sum already averaged over non-empty orders
}

SariScores sari(const std::string& input, const std::string& candidate,
                const std::vector<std::string>& references, bool split_punctuation) {
  if (references.empty()) throw EvalError(EvalError::NoReferences, "sari needs references");
  const int r = static_cast<int>(references.size());
  auto in_toks = metric_tokens(input, split_punctuation);
  auto cand_toks = metric_tokens(candidate, split_punctuation);
  std::vector<std::vector<std::string>> ref_toks;
  for (auto& ref : references) ref_toks.push_back(metric_tokens(ref, split_punctuation));

  double p_add = 0, r_add = 0, p_keep = 0, r_keep = 0, p_del = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    Counts ic = ngram_counts(in_toks, n);
    Counts cc = ngram_counts(cand_toks, n);
    Counts rsum;
    std::set<Gram> runion;
    for (auto& rt : ref_toks) {
      for (auto& [g, c] : ngram_counts(rt, n)) {
        rsum[g] += c;
        runion.insert(g);
      }
    }
    // add (set-based)
    std::set<Gram> cset, iset;
    for (auto& [g, c] : cc) cset.insert(g);
    for (auto& [g, c] : ic) iset.insert(g);
    std::set<Gram> added, add_target;
    for (auto& g : cset)
      if (!iset.count(g)) added.insert(g);
    for (auto& g : runion)
      if (!iset.count(g)) add_target.insert(g);
    int add_good = 0;
    for (auto& g : added)
      if (runion.count(g)) ++add_good;
    p_add += added.empty() ? 1.0 : static_cast<double>(add_good) / added.size();
    r_add += add_target.empty() ? 1.0 : static_cast<double>(add_good) / add_target.size();
    // keep (multiset, reference-replicated)
    double keep_good = 0, keep_total = 0, keep_all = 0;
    for (auto& [g, ci] : ic) {
      int kept = std::min(ci, cc.count(g) ? cc.at(g) : 0);
      int in_refs = rsum.count(g) ? rsum.at(g) : 0;
      keep_total += kept * r;
      keep_good += std::min(kept * r, in_refs);
      keep_all += std::min(ci * r, in_refs);
    }
    p_keep += keep_total == 0 ? 1.0 : keep_good / keep_total;
    r_keep += keep_all == 0 ? 1.0 : keep_good / keep_all;
    // delete (precision only)
    double del_good = 0, del_total = 0;
    for (auto& [g, ci] : ic) {
      int kept = cc.count(g) ? cc.at(g) : 0;
      int deleted = std::max(ci - kept, 0);
      int in_refs = rsum.count(g) ? rsum.at(g) : 0;
      del_total += deleted * r;
      del_good += std::min(deleted * r, std::max(ci * r - in_refs, 0));
    }
    p_del += del_total == 0 ? 1.0 : del_good / del_total;
  }
  SariScores s;
  s.precision_add = p_add / 4;
  s.recall_add = r_add / 4;
  s.precision_keep = p_keep / 4;
  s.recall_keep = r_keep / 4;
  s.precision_delete = p_del / 4;
  auto f1 = [](double p, double q) { return (p + q) == 0 ? 0.0 : 2 * p * q / (p + q); };
  s.sari = (f1(s.precision_add, s.recall_add) + f1(s.precision_keep, s.recall_keep) +
            s.precision_delete) /
           3.0;
  return s;
}

std::string join_outputs(const std::vector<std::string>& outputs) {
  std::string out;
  for (auto& s : outputs) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

double sentences_per_input(const std::vector<CorpusLine>& corpus) {
  if (corpus.empty()) throw EvalError(EvalError::EmptyOutput, "empty corpus");
  std::size_t total = 0;
  for (auto& line : corpus) total += line.outputs.size();
  return static_cast<double>(total) / corpus.size();
}

double percent_same(const std::vector<CorpusLine>& corpus) {
  if (corpus.empty()) throw EvalError(EvalError::EmptyOutput, "empty corpus");
  auto normalize = [](const std::string& s) {
    auto toks = metric_tokens(s);
    std::string out;
    for (auto& t : toks) {
      if (!out.empty()) out += ' ';
      out += t;
    }
    return out;
  };
  std::size_t same = 0;
  for (auto& line : corpus) {
    if (line.outputs.size() == 1 && normalize(line.outputs[0]) == normalize(line.input)) ++same;
  }
  return 100.0 * static_cast<double>(same) / corpus.size();
}

CorpusStats corpus_stats(const std::vector<CorpusLine>& corpus, bool split_punctuation) {
  CorpusStats stats;
  if (corpus.empty()) throw EvalError(EvalError::EmptyOutput, "empty corpus");
  std::vector<std::string> all_outputs;
  std::vector<std::string> joined;
  for (auto& line : corpus) {
    for (auto& o : line.outputs) all_outputs.push_back(o);
    joined.push_back(join_outputs(line.outputs));
  }
  stats.tokens_per_sentence = tokens_per_sentence(all_outputs);
  stats.sentences_per_input = sentences_per_input(corpus);
  stats.percent_same = percent_same(corpus);
  double ld = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    ld += levenshtein_words(corpus[i].input, joined[i], split_punctuation);
  stats.ld_sc = ld / corpus.size();
  stats.has_references = std::all_of(corpus.begin(), corpus.end(),
                                     [](const CorpusLine& l) { return !l.references.empty(); });
  if (stats.has_references) {
    std::vector<std::vector<std::string>> refs;
    for (auto& line : corpus) refs.push_back(line.references);
    stats.bleu = bleu(joined, refs, split_punctuation);
    double s = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i)
      s += sari(corpus[i].input, joined[i], corpus[i].references, split_punctuation).sari;
    stats.sari = s / corpus.size();
  }
  return stats;
}

std::vector<CorpusLine> load_corpus_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EvalError(EvalError::MalformedCorpus, "cannot open corpus: " + path);
  std::vector<CorpusLine> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      if (tab == std::string::npos) {
        cols.push_back(line.substr(start));
        break;
      }
      cols.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (cols.size() < 2)
      throw EvalError(EvalError::MalformedCorpus,
                      "line " + std::to_string(line_no) + ": expected at least 2 TSV columns",
                      line_no);
    CorpusLine cl;
    cl.input = cols[0];
    const std::string sep = " <::> ";
    std::string outputs = cols[1];
    std::size_t pos = 0;
    while (true) {
      auto hit = outputs.find(sep, pos);
      if (hit == std::string::npos) {
        cl.outputs.push_back(outputs.substr(pos));
        break;
      }
      cl.outputs.push_back(outputs.substr(pos, hit - pos));
      pos = hit + sep.size();
    }
    for (std::size_t i = 2; i < cols.size(); ++i)
      if (!cols[i].empty()) cl.references.push_back(cols[i]);
    out.push_back(std::move(cl));
  }
  return out;
}

std::string format_stats_table(const CorpusStats& stats) {
  std::ostringstream out;
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };
  out << "#T/S\t#S/C\t%SAME\tLD_SC\tBLEU\tSARI\tSAMSA\tSAMSA_abl\n";
  out << fmt(stats.tokens_per_sentence) << '\t' << fmt(stats.sentences_per_input) << '\t'
      << fmt(stats.percent_same) << '\t' << fmt(stats.ld_sc) << '\t';
  if (stats.has_references) {
    out << fmt(stats.bleu * 100) << '\t' << fmt(stats.sari * 100);
  } else {
    out << "n/a\tn/a";
  }
  out << "\tn/a\tn/a\n";
  return out.str();
}

}  // namespace propsplit
