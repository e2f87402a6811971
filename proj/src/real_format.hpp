#ifndef BREGBENCH_REAL_FORMAT_HPP
#define BREGBENCH_REAL_FORMAT_HPP

#include <cstdio>
#include <string>

namespace bregbench::detail {

// 17 significant digits: the shortest fixed precision that round-trips any
// double through from_chars.
inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string format_fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

} // namespace bregbench::detail

#endif // BREGBENCH_REAL_FORMAT_HPP
