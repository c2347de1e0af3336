#include "offd/corpus.hpp"

#include "offd/error.hpp"
#include "utf8.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

namespace offd {

std::string_view label_name(Label label)
{
    return label == Label::offensive ? "OFF" : "NOT";
}

Label parse_label(std::string_view text)
{
    if (text == "OFF") {
        return Label::offensive;
    }
    if (text == "NOT") {
        return Label::not_offensive;
    }
    throw DataError("unknown label '" + std::string(text) + "' (expected OFF or NOT)");
}

std::string_view split_name(Split split)
{
    switch (split) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
    }
    return "unknown";
}

bool LabeledCorpus::fully_labeled() const
{
    return std::all_of(records.begin(), records.end(),
                       [](const TweetRecord& r) { return r.label.has_value(); });
}

std::size_t LabeledCorpus::count(Label label) const
{
    return static_cast<std::size_t>(std::count_if(
        records.begin(), records.end(), [label](const TweetRecord& r) { return r.label == label; }));
}

namespace {

void strip_cr(std::string& line)
{
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

std::vector<std::string_view> split_on(std::string_view line, char sep)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

LabeledCorpus load_olid_tsv(std::istream& tweets, std::istream* labels, Split split)
{
    LabeledCorpus corpus;
    corpus.split = split;

    std::string line;
    if (!std::getline(tweets, line)) {
        throw DataError("tweet file: missing header row");
    }
    strip_cr(line);
    const auto header = split_on(line, '\t');
    std::optional<std::size_t> id_col, text_col, label_col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "id") {
            id_col = i;
        } else if (header[i] == "tweet") {
            text_col = i;
        } else if (header[i] == "subtask_a") {
            label_col = i;
        }
    }
    if (!id_col || !text_col) {
        throw DataError("tweet file: header must name 'id' and 'tweet' columns");
    }

    std::unordered_map<std::string, std::size_t> index;
    std::size_t line_no = 1;
    while (std::getline(tweets, line)) {
        ++line_no;
        strip_cr(line);
        if (line.empty()) {
            continue;
        }
        const auto fields = split_on(line, '\t');
        if (fields.size() != header.size()) {
            throw DataError("tweet file line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " columns, found " +
                            std::to_string(fields.size()));
        }
        TweetRecord rec;
        rec.id = std::string(fields[*id_col]);
        rec.text = std::string(fields[*text_col]);
        if (rec.id.empty()) {
            throw DataError("tweet file line " + std::to_string(line_no) + ": empty id");
        }
        if (label_col) {
            try {
                rec.label = parse_label(fields[*label_col]);
            } catch (const DataError& e) {
                throw DataError("tweet file line " + std::to_string(line_no) + ": " + e.what());
            }
        }
        if (!index.emplace(rec.id, corpus.records.size()).second) {
            throw DataError("tweet file line " + std::to_string(line_no) + ": duplicate id '" +
                            rec.id + "'");
        }
        corpus.records.push_back(std::move(rec));
    }

    if (labels != nullptr) {
        line_no = 0;
        while (std::getline(*labels, line)) {
            ++line_no;
            strip_cr(line);
            if (line.empty()) {
                continue;
            }
            const auto fields = split_on(line, ',');
            if (fields.size() != 2) {
                throw DataError("label file line " + std::to_string(line_no) +
                                ": expected 'id,label'");
            }
            const auto it = index.find(std::string(fields[0]));
            if (it == index.end()) {
                throw DataError("label file line " + std::to_string(line_no) + ": unknown id '" +
                                std::string(fields[0]) + "'");
            }
            try {
                corpus.records[it->second].label = parse_label(fields[1]);
            } catch (const DataError& e) {
                throw DataError("label file line " + std::to_string(line_no) + ": " + e.what());
            }
        }
    }
    return corpus;
}

namespace {

enum class TokenKind { url, hashtag, mention, other };

bool starts_with_ci(std::string_view s, std::string_view prefix)
{
    if (s.size() < prefix.size()) {
        return false;
    }
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) {
            return false;
        }
    }
    return true;
}

bool is_url(std::string_view token)
{
    return starts_with_ci(token, "http://") || starts_with_ci(token, "https://") ||
           starts_with_ci(token, "www.");
}

// Offset of the first URL prefix inside `token`, or npos.
std::size_t find_url(std::string_view token)
{
    for (std::size_t i = 0; i < token.size(); ++i) {
        if (is_url(token.substr(i))) {
            return i;
        }
    }
    return std::string_view::npos;
}

TokenKind classify(std::string_view token)
{
    if (is_url(token)) {
        return TokenKind::url;
    }
    if (token.size() > 1 && token[0] == '#') {
        return TokenKind::hashtag;
    }
    if (token.size() > 1 && token[0] == '@') {
        return TokenKind::mention;
    }
    return TokenKind::other;
}

struct Piece {
    std::string_view space;  // whitespace preceding the token
    std::string_view token;
};

// Splits into (leading whitespace, token) pairs; trailing whitespace is
// returned separately.
std::vector<Piece> split_whitespace(std::string_view text, std::string_view& trailing)
{
    std::vector<Piece> pieces;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto space_start = pos;
        while (pos < text.size()) {
            auto next = pos;
            if (!utf8::is_space(utf8::decode(text, next))) {
                break;
            }
            pos = next;
        }
        const auto token_start = pos;
        while (pos < text.size()) {
            auto next = pos;
            if (utf8::is_space(utf8::decode(text, next))) {
                break;
            }
            pos = next;
        }
        if (token_start == pos) {
            trailing = text.substr(space_start);
            return pieces;
        }
        pieces.push_back({text.substr(space_start, token_start - space_start),
                          text.substr(token_start, pos - token_start)});
    }
    trailing = {};
    return pieces;
}

}  // namespace

std::string normalize_social(std::string_view text)
{
    std::string_view trailing;
    const auto pieces = split_whitespace(text, trailing);
    std::string out;
    out.reserve(text.size());
    auto previous = TokenKind::other;
    for (const auto& piece : pieces) {
        const auto kind = classify(piece.token);
        switch (kind) {
        case TokenKind::hashtag:
        case TokenKind::mention:
            if (kind != previous) {
                out += piece.space;
                out += kind == TokenKind::hashtag ? "#TAG" : "@MENTION";
            }
            break;
        case TokenKind::url:
            out += piece.space;
            out += "URLS";
            break;
        case TokenKind::other:
            out += piece.space;
            out += piece.token;
            break;
        }
        previous = kind;
    }
    out += trailing;
    return out;
}

namespace {

bool is_word_char(char32_t cp)
{
    return utf8::is_letter(cp) || (cp >= U'0' && cp <= U'9') || cp == U'_';
}

void scan_letters(std::string_view token, std::vector<std::u32string>& words)
{
    std::u32string cps;
    for (std::size_t pos = 0; pos < token.size();) {
        cps.push_back(utf8::decode(token, pos));
    }
    std::u32string current;
    auto flush = [&] {
        if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    };
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t cp = cps[i];
        if (utf8::is_letter(cp)) {
            current.push_back(utf8::to_lower(cp));
        } else if (utf8::is_apostrophe(cp) && !current.empty() && i + 1 < cps.size() &&
                   utf8::is_letter(cps[i + 1])) {
            current.push_back(U'\'');
        } else if (cp == U'#' || cp == U'@') {
            flush();
            while (i + 1 < cps.size() && is_word_char(cps[i + 1])) {
                ++i;
            }
        } else {
            flush();
        }
    }
    flush();
}

}  // namespace

TokenSeq tokenize_clean(std::string_view text, const StopwordSet& stopwords)
{
    std::string_view trailing;
    const auto pieces = split_whitespace(text, trailing);
    std::vector<std::u32string> words;
    for (const auto& piece : pieces) {
        const auto url_at = find_url(piece.token);
        scan_letters(piece.token.substr(0, url_at), words);
    }
    TokenSeq tokens;
    tokens.reserve(words.size());
    for (const auto& word : words) {
        std::string encoded;
        for (const char32_t cp : word) {
            utf8::append(encoded, cp);
        }
        if (!stopwords.contains(encoded)) {
            tokens.push_back(std::move(encoded));
        }
    }
    return tokens;
}

StopwordSet load_stopwords(std::istream& in)
{
    StopwordSet words;
    std::string line;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (!line.empty()) {
            words.insert(line);
        }
    }
    return words;
}

}  // namespace offd
