#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace offd {

enum class Label { offensive, not_offensive };

/// "OFF" / "NOT".
std::string_view label_name(Label label);
/// Parses "OFF" or "NOT"; throws DataError on anything else.
Label parse_label(std::string_view text);
/// OFF -> +1, NOT -> -1.
inline int label_sign(Label label) { return label == Label::offensive ? 1 : -1; }
inline Label label_from_sign(double score) { return score > 0.0 ? Label::offensive : Label::not_offensive; }

enum class Split { train, validation, test };

std::string_view split_name(Split split);

struct TweetRecord {
    std::string id;
    std::string text;
    std::optional<Label> label;
};

struct LabeledCorpus {
    std::vector<TweetRecord> records;
    Split split = Split::train;

    std::size_t size() const { return records.size(); }
    bool fully_labeled() const;
    std::size_t count(Label label) const;
};

using TokenSeq = std::vector<std::string>;
using StopwordSet = std::unordered_set<std::string>;

/// Reads an OLID-style TSV (header row naming at least `id` and `tweet`,
/// optionally `subtask_a`). When `labels` is given it must hold `id,label`
/// lines; those labels override any `subtask_a` column.
LabeledCorpus load_olid_tsv(std::istream& tweets, std::istream* labels = nullptr,
                            Split split = Split::train);

/// Collapses hashtag runs to `#TAG`, mention runs to `@MENTION` and replaces
/// each URL with `URLS`. Used for sentence-encoder inputs.
std::string normalize_social(std::string_view text);

/// Strips URLs, hashtags, mentions, digits, punctuation and symbols, then
/// splits on runs of letters (with internal apostrophes), lowercases and
/// drops stopwords.
TokenSeq tokenize_clean(std::string_view text, const StopwordSet& stopwords);

/// One token per line; blank lines ignored.
StopwordSet load_stopwords(std::istream& in);

}  // namespace offd
