#pragma once

#include <functional>
#include <string_view>

namespace polyenc {

using WarningSink = std::function<void(std::string_view)>;

/// Routes library warnings; the default sink writes to stderr. Passing an
/// empty function restores the default. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

}  // namespace polyenc
