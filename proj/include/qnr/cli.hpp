#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>

#include "qnr/qrange.hpp"

namespace qnr {

// Exit codes: 0 success, 1 domain error, 2 usage error. Errors go to err as
// "error: kind=<Kind> message=<text>".
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// "v" or "re,im"; nullopt when malformed or |q| outside (0, 1].
std::optional<QParam> parse_q(std::string_view text);

}  // namespace qnr
