/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

namespace recaudit {

inline constexpr const char* kToolName = "recaudit";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace recaudit
