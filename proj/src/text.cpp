#include "air/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>

#include "air/errors.hpp"

namespace air {

namespace {

inline bool is_token_byte(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& config) {
  std::vector<std::string> out;
  std::string current;
  for (unsigned char c : text) {
    if (is_token_byte(c)) {
      if (config.lowercase && c >= 'A' && c <= 'Z') c = c - 'A' + 'a';
      current.push_back(static_cast<char>(c));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

StopwordList StopwordList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError(path.string(), "cannot open stopword file");
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return from_text(content);
}

StopwordList StopwordList::from_text(std::string_view text) {
  StopwordList list;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    const auto last = line.find_last_not_of(" \t");
    line = line.substr(first, last - first + 1);
    if (line.empty() || line[0] == '#') continue;
    list.words_.insert(std::string(line));
  }
  return list;
}

StopwordList StopwordList::from_words(std::vector<std::string> words) {
  StopwordList list;
  for (auto& w : words) list.words_.insert(std::move(w));
  return list;
}

bool StopwordList::contains(std::string_view word) const {
  return words_.find(word) != words_.end();
}

TermSet content_terms(const std::vector<std::string>& tokens,
                      const StopwordList& stopwords) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stopwords.contains(t)) kept.push_back(t);
  }
  return TermSet(std::move(kept));
}

Sentence TextPipeline::make_sentence(SentenceId id, std::string text) const {
  Sentence s;
  s.id = id;
  s.text = std::move(text);
  for (auto& tok : tokens(s.text)) {
    if (!stopwords.contains(tok)) s.content_tokens.push_back(std::move(tok));
  }
  s.terms = TermSet(s.content_tokens);
  s.length = static_cast<std::int32_t>(s.content_tokens.size());
  return s;
}

}  // namespace air
