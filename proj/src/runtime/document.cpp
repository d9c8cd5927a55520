#include "lrlm/document.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "lrlm/error.hpp"

namespace lrlm {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::string_view TokenizedText::token(std::size_t i) const noexcept {
  auto t = raw(i);
  if (kind == TokenizerKind::character) return t;
  while (!t.empty() && is_space(t.front())) t.remove_prefix(1);
  while (!t.empty() && is_space(t.back())) t.remove_suffix(1);
  return t;
}

std::shared_ptr<const TokenizedText> tokenize(std::string text, TokenizerKind kind) {
  if (text.size() > std::numeric_limits<std::uint32_t>::max())
    throw Error("InvalidDocument", "text larger than 4 GiB");
  auto out = std::make_shared<TokenizedText>();
  out->kind = kind;
  if (kind == TokenizerKind::character) {
    out->starts.resize(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) out->starts[i] = static_cast<std::uint32_t>(i);
  } else {
    bool prev_space = true;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const bool sp = is_space(text[i]);
      if (!sp && prev_space) out->starts.push_back(static_cast<std::uint32_t>(i));
      prev_space = sp;
    }
    // Leading whitespace rides along with the first token.
    if (!out->starts.empty()) out->starts.front() = 0;
  }
  out->text = std::move(text);
  return out;
}

Document Document::from_text(std::string text, TokenizerKind kind) {
  Document d;
  d.kind_ = kind;
  auto src = tokenize(std::move(text), kind);
  if (src->size() > 0) d.append(Segment{src, 0, src->size()});
  return d;
}

void Document::append(const Segment& s) {
  if (s.size() == 0) return;
  if (!segs_.empty()) {
    auto& last = segs_.back();
    if (last.src == s.src && last.end == s.begin) {
      last.end = s.end;
      n_ += s.size();
      return;
    }
  }
  segs_.push_back(s);
  n_ += s.size();
}

std::string Document::text() const {
  std::string out;
  for (const auto& s : segs_) {
    // Segments from different texts may meet without a separator.
    if (kind_ == TokenizerKind::whitespace && !out.empty() && !is_space(out.back()) &&
        !is_space(s.src->text[s.src->starts[s.begin]]))
      out += ' ';
    const auto b = s.src->starts[s.begin];
    const auto e = s.src->byte_end(s.end - 1);
    out.append(s.src->text, b, e - b);
  }
  return out;
}

std::string_view Document::token(std::size_t i) const {
  if (i >= n_) throw OutOfBounds("token " + std::to_string(i) + " of " + std::to_string(n_));
  for (const auto& s : segs_) {
    if (i < s.size()) return s.src->token(s.begin + i);
    i -= s.size();
  }
  return {};
}

std::vector<std::string> Document::tokens() const {
  std::vector<std::string> out;
  out.reserve(n_);
  for_each_token([&](std::string_view t) { out.emplace_back(t); });
  return out;
}

Document peek(const Document& doc, std::size_t start, std::size_t end) {
  if (start > end || end > doc.n_)
    throw OutOfBounds("peek [" + std::to_string(start) + ", " + std::to_string(end) +
                      ") outside document of " + std::to_string(doc.n_) + " tokens");
  Document out;
  out.kind_ = doc.kind_;
  std::size_t offset = 0;
  for (const auto& s : doc.segs_) {
    const std::size_t lo = offset, hi = offset + s.size();
    offset = hi;
    if (hi <= start) continue;
    if (lo >= end) break;
    const std::size_t b = std::max(start, lo) - lo;
    const std::size_t e = std::min(end, hi) - lo;
    out.append(Segment{s.src, s.begin + b, s.begin + e});
  }
  return out;
}

Document concat(std::span<const Document> parts) {
  Document out;
  if (!parts.empty()) out.kind_ = parts.front().kind_;
  for (const auto& p : parts)
    for (const auto& s : p.segs_) out.append(s);
  return out;
}

Document concat(const Document& a, const Document& b) {
  const Document parts[] = {a, b};
  return concat(parts);
}

std::size_t ceil_div(std::size_t a, std::size_t b) noexcept { return a / b + (a % b != 0); }

std::vector<Document> split(const Document& doc, std::size_t k) {
  if (k == 0) throw InvalidSplit("split requires k >= 1");
  const std::size_t n = doc.size();
  const std::size_t c = ceil_div(n, k);
  std::vector<Document> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t b = std::min(i * c, n);
    const std::size_t e = std::min((i + 1) * c, n);
    out.push_back(peek(doc, b, e));
  }
  return out;
}

}  // namespace lrlm
