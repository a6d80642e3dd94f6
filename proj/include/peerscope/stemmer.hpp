#pragma once

#include <string>
#include <string_view>

namespace peerscope::textprep {

// Snowball English (Porter2) stem of a lowercase alphabetic token.
// Tokens of length <= 2 are returned unchanged.
std::string stem(std::string_view token);

}  // namespace peerscope::textprep
