// Copyright 2026 the bpseg authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small UTF-8 and whitespace helpers shared by the ingestion code.

#ifndef BPSEG_TEXT_HPP
#define BPSEG_TEXT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bpseg::text {

inline bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string_view trim(std::string_view s) noexcept {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && is_space(s[begin])) {
        ++begin;
    }
    while (end > begin && is_space(s[end - 1])) {
        --end;
    }
    return s.substr(begin, end - begin);
}

namespace detail {

// Length of the well-formed UTF-8 sequence starting at s[i], 0 if malformed.
inline std::size_t utf8_sequence_length(std::string_view s, std::size_t i) noexcept {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    const unsigned char lead = byte(i);
    if (lead < 0x80) {
        return 1;
    }
    std::size_t len = 0;
    std::uint32_t min_cp = 0;
    std::uint32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        len = 2;
        min_cp = 0x80;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        len = 3;
        min_cp = 0x800;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        len = 4;
        min_cp = 0x10000;
        cp = lead & 0x07;
    } else {
        return 0;
    }
    if (i + len > s.size()) {
        return 0;
    }
    for (std::size_t k = 1; k < len; ++k) {
        if ((byte(i + k) & 0xC0) != 0x80) {
            return 0;
        }
        cp = (cp << 6) | (byte(i + k) & 0x3F);
    }
    if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        return 0;
    }
    return len;
}

}  // namespace detail

/// Replaces every malformed UTF-8 byte with U+FFFD. Returns the number of
/// replacements made.
inline std::size_t sanitize_utf8(std::string& s) {
    std::string out;
    out.reserve(s.size());
    std::size_t replaced = 0;
    for (std::size_t i = 0; i < s.size();) {
        const std::size_t len = detail::utf8_sequence_length(s, i);
        if (len == 0) {
            out += "\xEF\xBF\xBD";
            ++replaced;
            ++i;
        } else {
            out.append(s, i, len);
            i += len;
        }
    }
    if (replaced != 0) {
        s = std::move(out);
    }
    return replaced;
}

/// Splits valid UTF-8 into code points, each kept as its byte sequence.
/// ASCII letters are lowercased; other code points pass through unchanged.
inline std::vector<std::string> lowercase_code_points(std::string_view s) {
    std::vector<std::string> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        std::size_t len = detail::utf8_sequence_length(s, i);
        if (len == 0) {
            len = 1;
        }
        std::string cp(s.substr(i, len));
        if (len == 1 && cp[0] >= 'A' && cp[0] <= 'Z') {
            cp[0] = static_cast<char>(cp[0] - 'A' + 'a');
        }
        out.push_back(std::move(cp));
        i += len;
    }
    return out;
}

}  // namespace bpseg::text

#endif  // BPSEG_TEXT_HPP
