#pragma once

namespace frbe {

inline constexpr const char* version_string = "1.0.0";

}
