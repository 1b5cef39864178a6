#ifndef DECWAVE_LOG_HPP
#define DECWAVE_LOG_HPP

#include <functional>
#include <string_view>

namespace decwave {

using WarningSink = std::function<void(std::string_view)>;

/// Routes library warnings (default: "warning: ..." lines on stderr).
/// Passing an empty function silences them. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

} // namespace decwave

#endif
