#include "lrlm/oracle.hpp"

#include "lrlm/error.hpp"

namespace lrlm {

Oracle::Oracle(OracleProfile profile) : profile_(std::move(profile)) { validate_profile(profile_); }

OracleReply Oracle::call(const Document& prompt, std::uint64_t index) {
  if (prompt.size() > profile_.K) throw ContextOverflow(prompt.size(), profile_.K);
  return do_call(prompt, index);
}

OracleCallRecord Oracle::priced(std::size_t input_tokens, std::size_t output_tokens) const noexcept {
  OracleCallRecord r;
  r.input_tokens = input_tokens;
  r.output_tokens = output_tokens;
  r.cost = profile_.c_in * static_cast<double>(input_tokens) +
           profile_.c_out * static_cast<double>(output_tokens);
  return r;
}

}  // namespace lrlm
