#pragma once

#include <functional>
#include <string>

namespace specscreen {

using WarningSink = std::function<void(const std::string&)>;

// Warnings go to stderr unless a sink is installed. Passing an empty
// function restores the default. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);

void warn(const std::string& message);

}  // namespace specscreen
