#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lrlm {

enum class TokenizerKind { whitespace, character };

// Immutable text with token boundaries. Token i covers
// [starts[i], starts[i+1]) and owns its trailing whitespace, so joining any
// contiguous run of tokens reproduces the original bytes.
struct TokenizedText {
  std::string text;
  std::vector<std::uint32_t> starts;
  TokenizerKind kind = TokenizerKind::whitespace;

  std::size_t size() const noexcept { return starts.size(); }
  std::size_t byte_end(std::size_t i) const noexcept {
    return i + 1 < starts.size() ? starts[i + 1] : text.size();
  }
  std::string_view raw(std::size_t i) const noexcept {
    return std::string_view(text).substr(starts[i], byte_end(i) - starts[i]);
  }
  // Token without surrounding whitespace.
  std::string_view token(std::size_t i) const noexcept;
};

std::shared_ptr<const TokenizedText> tokenize(std::string text, TokenizerKind kind);

struct Segment {
  std::shared_ptr<const TokenizedText> src;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
};

// A token sequence stored as a rope of views into shared tokenized texts.
// Split, peek and concat never copy text.
class Document {
 public:
  Document() = default;

  static Document from_text(std::string text, TokenizerKind kind = TokenizerKind::whitespace);

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }
  TokenizerKind tokenizer() const noexcept { return kind_; }
  const std::vector<Segment>& segments() const noexcept { return segs_; }

  // Joined text; a space is inserted where two separate sources meet
  // without whitespace.
  std::string text() const;
  std::string_view token(std::size_t i) const;

  template <class F>
  void for_each_token(F&& f) const {
    for (const auto& s : segs_)
      for (std::size_t i = s.begin; i < s.end; ++i) f(s.src->token(i));
  }

  std::vector<std::string> tokens() const;

  friend Document peek(const Document& doc, std::size_t start, std::size_t end);
  friend Document concat(std::span<const Document> parts);

 private:
  void append(const Segment& s);

  std::vector<Segment> segs_;
  std::size_t n_ = 0;
  TokenizerKind kind_ = TokenizerKind::whitespace;
};

// Tokens [start, end). Throws OutOfBounds unless start <= end <= size.
Document peek(const Document& doc, std::size_t start, std::size_t end);

Document concat(std::span<const Document> parts);
Document concat(const Document& a, const Document& b);

// Exactly k contiguous chunks; chunk i is [min(i*c, n), min((i+1)*c, n))
// with c = ceil(n/k). Trailing chunks may be empty. Throws InvalidSplit
// when k == 0.
std::vector<Document> split(const Document& doc, std::size_t k);

std::size_t ceil_div(std::size_t a, std::size_t b) noexcept;

}  // namespace lrlm
