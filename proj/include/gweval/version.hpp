// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace gweval {

inline constexpr std::string_view kToolName = "gweval";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Version of the JSON report schema emitted by the CLI.
inline constexpr int kReportSchemaVersion = 1;

}  // namespace gweval
