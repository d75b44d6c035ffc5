#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "propsplit/ptb.hpp"

namespace propsplit {

struct BridgeError : std::runtime_error {
  enum Kind { EndpointUnreachable, MalformedTree, CountMismatch };
  Kind kind;
  int line;
  BridgeError(Kind k, const std::string& msg, int line_no = 0)
      : std::runtime_error(msg), kind(k), line(line_no) {}
};

// Tree files hold either one bracketed tree per line or pretty-printed trees;
// chunks are detected by bracket balance. '#' comment lines between trees are
// skipped.
std::vector<TreePtr> load_trees(const std::string& path);
std::vector<TreePtr> load_trees_text(const std::string& text, const std::string& origin = "");

struct ParserEndpoint {
  enum Kind { Process, Http };
  Kind kind = Process;
  // Process: a shell command reading one sentence per line on stdin and
  // writing one bracketed tree per line on stdout. Http: a URL accepting
  // POST {"sentences": [...]} and returning {"trees": [...]}.
  std::string target;
  int timeout_seconds = 30;
  std::string cache_dir;  // content-addressed tree cache; empty = no cache
};

std::uint64_t content_hash(const std::string& s);

// Order-preserving; uncached sentences are sent in one batch.
std::vector<TreePtr> parse_external(const std::vector<std::string>& sentences,
                                    const ParserEndpoint& endpoint);

}  // namespace propsplit
