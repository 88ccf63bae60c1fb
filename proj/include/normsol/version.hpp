#pragma once

namespace normsol {

inline constexpr const char* kVersion = "0.1.0";

} // namespace normsol
