#pragma once

#include <cstdio>
#include <string>

namespace fibft {

/// Scientific notation, 6 significant digits.
inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

}  // namespace fibft
