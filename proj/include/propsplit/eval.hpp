#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace propsplit {

struct EvalError : std::runtime_error {
  enum Kind { EmptyOutput, NoReferences, MalformedCorpus };
  Kind kind;
  int line;
  EvalError(Kind k, const std::string& msg, int line_no = 0)
      : std::runtime_error(msg), kind(k), line(line_no) {}
};

// Whitespace tokenization over already-tokenized text; the flag additionally
// splits leading/trailing ASCII punctuation off each token for raw text.
std::vector<std::string> metric_tokens(const std::string& s, bool split_punctuation = false);

double tokens_per_sentence(const std::vector<std::string>& outputs);

int levenshtein_words(const std::string& a, const std::string& b, bool split_punctuation = false);

// Corpus BLEU, n<=4, uniform weights, brevity penalty, no smoothing.
double bleu(const std::vector<std::string>& candidates,
            const std::vector<std::vector<std::string>>& reference_sets,
            bool split_punctuation = false);

struct SariScores {
  double precision_add = 0;
  double recall_add = 0;
  double precision_keep = 0;
  double recall_keep = 0;
  double precision_delete = 0;
  double sari = 0;
};

// Arithmetic mean over n=1..4 of the add/keep/delete components; SARI is the
// mean of the add F-score, keep F-score and delete precision. Components with
// an empty candidate set default to 1 (nothing to get wrong).
SariScores sari(const std::string& input, const std::string& candidate,
                const std::vector<std::string>& references, bool split_punctuation = false);

struct CorpusLine {
  std::string input;
  std::vector<std::string> outputs;
  std::vector<std::string> references;
};

struct CorpusStats {
  double tokens_per_sentence = 0;  // #T/S
  double sentences_per_input = 0;  // #S/C
  double percent_same = 0;         // %SAME
  double ld_sc = 0;                // mean word Levenshtein, input vs joined output
  double bleu = 0;                 // corpus BLEU of joined outputs
  double sari = 0;                 // mean per-line SARI
  bool has_references = false;
};

double sentences_per_input(const std::vector<CorpusLine>& corpus);
double percent_same(const std::vector<CorpusLine>& corpus);
CorpusStats corpus_stats(const std::vector<CorpusLine>& corpus, bool split_punctuation = false);

// TSV: input TAB outputs (joined by " <::> ") TAB ref1 TAB ref2 ...
std::vector<CorpusLine> load_corpus_tsv(const std::string& path);
std::string format_stats_table(const CorpusStats& stats);

std::string join_outputs(const std::vector<std::string>& outputs);

}  // namespace propsplit
