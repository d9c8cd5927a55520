#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "lrlm/document.hpp"
#include "lrlm/profile.hpp"

namespace lrlm {

struct OracleCallRecord {
  std::size_t input_tokens = 0;
  std::size_t output_tokens = 0;
  double cost = 0.0;
  std::optional<bool> was_correct;
};

struct OracleReply {
  std::string answer;
  OracleCallRecord record;
};

class Oracle {
 public:
  explicit Oracle(OracleProfile profile);
  virtual ~Oracle() = default;

  // Throws ContextOverflow when the prompt exceeds the window.
  OracleReply call(const Document& prompt, std::uint64_t index);

  const OracleProfile& profile() const noexcept { return profile_; }
  virtual std::string_view backend() const noexcept = 0;

 protected:
  virtual OracleReply do_call(const Document& prompt, std::uint64_t index) = 0;

  OracleCallRecord priced(std::size_t input_tokens, std::size_t output_tokens) const noexcept;

  OracleProfile profile_;
};

enum class AnswerKind { task_name, value, counts, labels, summary, facts, synthesis };

struct Interpretation {
  AnswerKind kind = AnswerKind::summary;
  std::string answer;
};

// Ground-truth reading of a prompt: the behaviour of a perfect model on
// the synthetic task formats.
Interpretation interpret_prompt(const Document& prompt);

inline constexpr std::size_t summary_lead_tokens = 8;

class SymbolicOracle final : public Oracle {
 public:
  using Oracle::Oracle;
  std::string_view backend() const noexcept override { return "symbolic"; }

 protected:
  OracleReply do_call(const Document& prompt, std::uint64_t index) override;
};

// Answers correctly with probability A(|prompt|); otherwise returns a
// minimally corrupted answer of the same shape. Outcomes depend only on
// (seed, call index, prompt length).
class StochasticOracle final : public Oracle {
 public:
  StochasticOracle(OracleProfile profile, std::uint64_t seed);

  // Same profile and answer cache, different seed.
  StochasticOracle with_seed(std::uint64_t seed) const;

  bool draw_correct(std::uint64_t index, std::size_t length) const noexcept;

  // Like call(), but without the window check; A(n) is extrapolated.
  OracleReply simulate(const Document& prompt, std::uint64_t index);

  std::uint64_t seed() const noexcept { return seed_; }
  std::string_view backend() const noexcept override { return "stochastic"; }

  struct Cache;

 protected:
  OracleReply do_call(const Document& prompt, std::uint64_t index) override;

 private:
  StochasticOracle(OracleProfile profile, std::uint64_t seed, std::shared_ptr<Cache> cache);

  std::uint64_t seed_;
  std::shared_ptr<Cache> cache_;
};

std::string corrupt_answer(AnswerKind kind, const std::string& answer, std::uint64_t seed);

struct RemoteConfig {
  std::string url;
  double timeout_seconds = 30.0;
  std::size_t max_tokens = 256;
  // Name of the environment variable holding the bearer token.
  std::string token_env = "LRLM_REMOTE_TOKEN";
};

// POSTs {"prompt", "max_tokens"} and expects {"text"}. Transport failures
// surface as OracleError with cause Timeout, HttpError or MalformedResponse.
class RemoteOracle final : public Oracle {
 public:
  RemoteOracle(OracleProfile profile, RemoteConfig config);
  std::string_view backend() const noexcept override { return "remote"; }

 protected:
  OracleReply do_call(const Document& prompt, std::uint64_t index) override;

 private:
  RemoteConfig config_;
};

}  // namespace lrlm
