#include "propsplit/parser_bridge.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

namespace propsplit {

namespace fs = std::filesystem;

std::vector<TreePtr> load_trees_text(const std::string& text, const std::string& origin) {
  std::vector<TreePtr> out;
  std::string chunk;
  int depth = 0;
  int line_no = 1, chunk_line = 1;
  auto flush = [&]() {
    bool blank = chunk.find('(') == std::string::npos;
    if (!blank) {
      try {
        out.push_back(parse_bracketed(chunk));
      } catch (const PtbError& e) {
        throw BridgeError(BridgeError::MalformedTree,
                          origin + "line " + std::to_string(chunk_line) + ": " + e.what(),
                          chunk_line);
      }
    }
    chunk.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '\n') ++line_no;
    if (depth == 0 && (c == '\n' || c == '\r')) {
      // Between trees; comment lines never accumulate.
      if (!chunk.empty()) flush();
      chunk_line = line_no;
      continue;
    }
    if (depth == 0 && chunk.empty()) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      if (c == '#') {
        while (i < text.size() && text[i] != '\n') ++i;
        ++line_no;
        chunk_line = line_no;
        continue;
      }
      chunk_line = line_no;
    }
    chunk += c;
    if (c == '(') ++depth;
    if (c == ')') {
      --depth;
      if (depth < 0)
        throw BridgeError(BridgeError::MalformedTree,
                          origin + "line " + std::to_string(line_no) + ": unbalanced ')'",
                          line_no);
    }
  }
  if (depth != 0)
    throw BridgeError(BridgeError::MalformedTree,
                      origin + "line " + std::to_string(chunk_line) + ": unbalanced tree",
                      chunk_line);
  if (!chunk.empty()) flush();
  return out;
}

std::vector<TreePtr> load_trees(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw BridgeError(BridgeError::EndpointUnreachable, "cannot open tree file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_trees_text(buf.str(), path + ": ");
}

std::uint64_t content_hash(const std::string& s) {
  // FNV-1a 64
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

std::string cache_path(const std::string& dir, const std::string& sentence) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(content_hash(sentence)));
  return dir + "/" + buf + ".mrg";
}

std::optional<std::string> cache_lookup(const std::string& dir, const std::string& sentence) {
  if (dir.empty()) return std::nullopt;
  std::ifstream in(cache_path(dir, sentence));
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string s = buf.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  if (s.empty()) return std::nullopt;
  return s;
}

void cache_store(const std::string& dir, const std::string& sentence, const std::string& tree) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(cache_path(dir, sentence));
  out << tree << "\n";
}

std::vector<std::string> run_process(const std::vector<std::string>& sentences,
                                     const ParserEndpoint& ep) {
  auto tmpdir = fs::temp_directory_path();
  auto tag = std::to_string(
      content_hash(ep.target + std::to_string(reinterpret_cast<std::uintptr_t>(&sentences))));
  fs::path in_path = tmpdir / ("propsplit_in_" + tag + ".txt");
  fs::path out_path = tmpdir / ("propsplit_out_" + tag + ".txt");
  {
    std::ofstream in(in_path);
    for (auto& s : sentences) in << s << "\n";
  }
  std::string cmd = "timeout " + std::to_string(ep.timeout_seconds) + "s sh -c '" + ep.target +
                    "' < " + in_path.string() + " > " + out_path.string() + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  std::vector<std::string> lines;
  {
    std::ifstream out(out_path);
    std::string line;
    while (std::getline(out, line)) {
      if (!line.empty()) lines.push_back(line);
    }
  }
  std::error_code ec;
  fs::remove(in_path, ec);
  fs::remove(out_path, ec);
  if (status != 0 && lines.empty())
    throw BridgeError(BridgeError::EndpointUnreachable,
                      "parser command failed: " + ep.target);
  return lines;
}

std::vector<std::string> run_http(const std::vector<std::string>& sentences,
                                  const ParserEndpoint& ep) {
  // Accepts http://host:port/path URLs.
  std::string url = ep.target;
  std::string rest;
  if (url.rfind("http://", 0) == 0) {
    rest = url.substr(7);
  } else {
    throw BridgeError(BridgeError::EndpointUnreachable, "unsupported URL: " + url);
  }
  auto slash = rest.find('/');
  std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
  std::string host = hostport;
  int port = 80;
  auto colon = hostport.rfind(':');
  if (colon != std::string::npos) {
    host = hostport.substr(0, colon);
    port = std::atoi(hostport.c_str() + colon + 1);
  }
  httplib::Client client(host, port);
  client.set_connection_timeout(ep.timeout_seconds, 0);
  client.set_read_timeout(ep.timeout_seconds, 0);
  nlohmann::json body;
  body["sentences"] = sentences;
  auto res = client.Post(path.c_str(), body.dump(), "application/json");
  if (!res || res->status != 200)
    throw BridgeError(BridgeError::EndpointUnreachable, "parser endpoint unreachable: " + url);
  std::vector<std::string> lines;
  try {
    auto doc = nlohmann::json::parse(res->body);
    for (auto& t : doc.at("trees")) lines.push_back(t.get<std::string>());
  } catch (const std::exception& e) {
    throw BridgeError(BridgeError::MalformedTree, std::string("bad parser response: ") + e.what());
  }
  return lines;
}

}  // namespace

std::vector<TreePtr> parse_external(const std::vector<std::string>& sentences,
                                    const ParserEndpoint& endpoint) {
  std::vector<std::string> brackets(sentences.size());
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (auto hit = cache_lookup(endpoint.cache_dir, sentences[i])) {
      brackets[i] = *hit;
    } else {
      missing.push_back(i);
    }
  }
  if (!missing.empty()) {
    std::vector<std::string> batch;
    for (auto i : missing) batch.push_back(sentences[i]);
    std::vector<std::string> lines = endpoint.kind == ParserEndpoint::Process
                                         ? run_process(batch, endpoint)
                                         : run_http(batch, endpoint);
    if (lines.size() != batch.size())
      throw BridgeError(BridgeError::CountMismatch,
                        "parser returned " + std::to_string(lines.size()) + " trees for " +
                            std::to_string(batch.size()) + " sentences");
    for (std::size_t k = 0; k < missing.size(); ++k) {
      brackets[missing[k]] = lines[k];
      cache_store(endpoint.cache_dir, sentences[missing[k]], lines[k]);
    }
  }
  std::vector<TreePtr> out;
  for (std::size_t i = 0; i < brackets.size(); ++i) {
    try {
      out.push_back(parse_bracketed(brackets[i]));
    } catch (const PtbError& e) {
      throw BridgeError(BridgeError::MalformedTree,
                        "tree " + std::to_string(i + 1) + ": " + e.what(),
                        static_cast<int>(i + 1));
    }
  }
  return out;
}

}  // namespace propsplit
