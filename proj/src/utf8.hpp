#pragma once

#include <string_view>

namespace ddoif::detail {

/// Strict UTF-8 check: no overlong forms, surrogates or code points past
/// U+10FFFF.
bool is_valid_utf8(std::string_view text) noexcept;

}  // namespace ddoif::detail
