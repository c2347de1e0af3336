#include "utf8.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace offd::utf8 {

char32_t decode(std::string_view s, std::size_t& pos)
{
    const auto lead = static_cast<unsigned char>(s[pos]);
    if (lead < 0x80) {
        ++pos;
        return lead;
    }
    int extra = 0;
    char32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        extra = 1;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        extra = 2;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        extra = 3;
        cp = lead & 0x07;
    } else {
        ++pos;
        return replacement;
    }
    if (pos + extra >= s.size()) {
        ++pos;
        return replacement;
    }
    for (int i = 1; i <= extra; ++i) {
        const auto c = static_cast<unsigned char>(s[pos + i]);
        if ((c & 0xC0) != 0x80) {
            ++pos;
            return replacement;
        }
        cp = (cp << 6) | (c & 0x3F);
    }
    pos += extra + 1;
    return cp;
}

void append(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

namespace {

// Inclusive ranges of letter code points, sorted.
constexpr std::array<std::pair<char32_t, char32_t>, 40> letter_ranges{{
    {0x0041, 0x005A}, {0x0061, 0x007A}, {0x00AA, 0x00AA}, {0x00B5, 0x00B5},
    {0x00BA, 0x00BA}, {0x00C0, 0x00D6}, {0x00D8, 0x00F6}, {0x00F8, 0x02AF},
    {0x0370, 0x0373}, {0x0376, 0x0377}, {0x037B, 0x037D}, {0x0386, 0x0386},
    {0x0388, 0x03FF}, {0x0400, 0x0481}, {0x048A, 0x052F}, {0x0531, 0x0556},
    {0x0561, 0x0587}, {0x05D0, 0x05EA}, {0x0620, 0x064A}, {0x0671, 0x06D3},
    {0x0904, 0x0939}, {0x0958, 0x0961}, {0x0985, 0x09B9}, {0x0A05, 0x0A39},
    {0x0B05, 0x0B39}, {0x0C05, 0x0C39}, {0x0D05, 0x0D3A}, {0x0E01, 0x0E30},
    {0x10A0, 0x10FA}, {0x1E00, 0x1FBC}, {0x1FC2, 0x1FFC}, {0x3041, 0x3096},
    {0x30A1, 0x30FA}, {0x3105, 0x312F}, {0x3131, 0x318E}, {0x3400, 0x4DBF},
    {0x4E00, 0x9FFF}, {0xAC00, 0xD7A3}, {0xF900, 0xFAFF}, {0xFF21, 0xFF5A},
}};

}  // namespace

bool is_letter(char32_t cp)
{
    if (cp >= 0xFF3B && cp <= 0xFF40) {
        return false;  // fullwidth punctuation between A-Z and a-z
    }
    const auto it = std::upper_bound(letter_ranges.begin(), letter_ranges.end(), cp,
                                     [](char32_t v, const auto& r) { return v < r.first; });
    if (it == letter_ranges.begin()) {
        return false;
    }
    return cp <= std::prev(it)->second;
}

bool is_apostrophe(char32_t cp)
{
    return cp == U'\'' || cp == 0x2019;
}

bool is_space(char32_t cp)
{
    return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' || cp == U'\f' || cp == U'\v' ||
           cp == 0x00A0 || cp == 0x2028 || cp == 0x2029 || cp == 0x3000 ||
           (cp >= 0x2000 && cp <= 0x200A);
}

char32_t to_lower(char32_t cp)
{
    if (cp >= U'A' && cp <= U'Z') {
        return cp + 0x20;
    }
    if (cp < 0xC0) {
        return cp;
    }
    if (cp <= 0xDE && cp != 0xD7) {
        return cp + 0x20;
    }
    if (cp >= 0x0100 && cp <= 0x0137) {
        return cp | 1;
    }
    if (cp >= 0x0139 && cp <= 0x0148) {
        return (cp & 1) ? cp + 1 : cp;
    }
    if (cp >= 0x014A && cp <= 0x0177) {
        return cp | 1;
    }
    if (cp == 0x0178) {
        return 0x00FF;
    }
    if (cp >= 0x0179 && cp <= 0x017E) {
        return (cp & 1) ? cp + 1 : cp;
    }
    if (cp >= 0x0391 && cp <= 0x03AB && cp != 0x03A2) {
        return cp + 0x20;
    }
    if (cp >= 0x0410 && cp <= 0x042F) {
        return cp + 0x20;
    }
    if (cp >= 0x0400 && cp <= 0x040F) {
        return cp + 0x50;
    }
    if (cp >= 0x0460 && cp <= 0x0481) {
        return cp | 1;
    }
    if (cp >= 0x048A && cp <= 0x04BF) {
        return cp | 1;
    }
    if (cp >= 0x0531 && cp <= 0x0556) {
        return cp + 0x30;
    }
    if (cp >= 0x1E00 && cp <= 0x1E95) {
        return cp | 1;
    }
    if (cp >= 0xFF21 && cp <= 0xFF3A) {
        return cp + 0x20;
    }
    return cp;
}

}  // namespace offd::utf8
