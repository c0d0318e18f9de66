#pragma once

#include <string>
#include <string_view>

namespace zsbench {

/// The original Porter (1980) suffix-stripping algorithm, without the later
/// departures of the reference C implementation. Expects a lowercase ASCII
/// word; input containing any other byte is returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace zsbench
