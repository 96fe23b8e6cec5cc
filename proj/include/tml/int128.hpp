#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tml {

using int128 = __int128;
using uint128 = unsigned __int128;

inline std::string to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    uint128 u = neg ? uint128(-(v + 1)) + 1 : uint128(v);
    std::string s;
    while (u > 0) {
        s.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
}

inline int128 abs128(int128 v) { return v < 0 ? -v : v; }

// Narrowing check used by the int64 cache writer.
inline int64_t checked_int64(int128 v) {
    if (v > int128(INT64_MAX) || v < int128(INT64_MIN))
        throw std::overflow_error("value exceeds signed 64-bit range");
    return int64_t(v);
}

}  // namespace tml
