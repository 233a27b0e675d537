#pragma once

namespace folkbangla {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace folkbangla
