#pragma once

#include "offd/corpus.hpp"

#include <Eigen/Core>

#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace offd {

using SentenceVector = Eigen::VectorXd;

/// Word vectors for one tweet, one column per in-vocabulary token, in order.
using EmbeddingSequence = Eigen::MatrixXd;

/// Static word-vector table read from a fastText `.vec` text file.
class WordVectorTable {
public:
    WordVectorTable() = default;
    explicit WordVectorTable(Eigen::Index dim) : dim_(dim) {}

    Eigen::Index dim() const { return dim_; }
    std::size_t size() const { return index_.size(); }
    bool contains(const std::string& token) const { return index_.contains(token); }

    /// Column view of the vector for `token`, or nullopt when out of vocabulary.
    std::optional<Eigen::Map<const Eigen::VectorXd>> find(const std::string& token) const;

    /// Inserts or replaces; `values.size()` must equal dim().
    void insert(const std::string& token, const Eigen::Ref<const Eigen::VectorXd>& values);

private:
    Eigen::Index dim_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<double> data_;  // row-major: entry i occupies [i*dim, (i+1)*dim)
};

/// Reads a `.vec` file: header `count dim`, then `token v1 ... v_dim` lines.
/// When `vocab_filter` is set only those tokens are kept.
WordVectorTable load_vec_table(std::istream& in,
                               const std::unordered_set<std::string>* vocab_filter = nullptr);

/// Mean of the in-vocabulary token vectors; the zero vector when none are known.
SentenceVector average_embedding(const TokenSeq& tokens, const WordVectorTable& table);

/// dim x (#in-vocabulary tokens) matrix of token vectors in token order.
EmbeddingSequence token_matrix(const TokenSeq& tokens, const WordVectorTable& table);

/// Sentence vectors produced outside this program, keyed by tweet id.
class PrecomputedTable {
public:
    /// Unset until the first row is added.
    std::optional<Eigen::Index> dim() const { return dim_; }
    std::size_t size() const { return rows_.size(); }
    bool contains(const std::string& id) const { return rows_.contains(id); }

    /// Throws DataError if the table is empty or `id` is missing.
    const SentenceVector& at(const std::string& id) const;

    /// Throws DataError on duplicate id or dimension mismatch.
    void insert(const std::string& id, SentenceVector values);

private:
    std::optional<Eigen::Index> dim_;
    std::unordered_map<std::string, SentenceVector> rows_;
};

/// Reads `id v1 ... v_dim` lines; dim is taken from the first line.
PrecomputedTable load_precomputed(std::istream& in);

}  // namespace offd
