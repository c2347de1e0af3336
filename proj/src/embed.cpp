#include "offd/embed.hpp"

#include "offd/error.hpp"
#include "text_fields.hpp"

namespace offd {

std::optional<Eigen::Map<const Eigen::VectorXd>> WordVectorTable::find(const std::string& token) const
{
    const auto it = index_.find(token);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return Eigen::Map<const Eigen::VectorXd>(data_.data() + it->second * dim_, dim_);
}

void WordVectorTable::insert(const std::string& token, const Eigen::Ref<const Eigen::VectorXd>& values)
{
    if (values.size() != dim_) {
        throw DataError("word vector for '" + token + "' has dimension " +
                        std::to_string(values.size()) + ", table expects " + std::to_string(dim_));
    }
    const auto [it, inserted] = index_.emplace(token, index_.size());
    if (inserted) {
        data_.resize(data_.size() + dim_);
    }
    std::copy(values.data(), values.data() + dim_, data_.begin() + it->second * dim_);
}

WordVectorTable load_vec_table(std::istream& in, const std::unordered_set<std::string>* vocab_filter)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(".vec file: missing header line");
    }
    const auto header = detail::split_fields(line);
    if (header.size() != 2) {
        throw DataError(".vec file line 1: expected 'count dim' header");
    }
    const auto count = detail::parse_int(header[0], 1);
    const auto dim = detail::parse_int(header[1], 1);
    if (count < 0 || dim <= 0) {
        throw DataError(".vec file line 1: invalid count/dim");
    }

    WordVectorTable table(dim);
    Eigen::VectorXd values(dim);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = detail::split_fields(line);
        if (fields.empty()) {
            continue;
        }
        if (static_cast<Eigen::Index>(fields.size()) != dim + 1) {
            throw DataError(".vec file line " + std::to_string(line_no) + ": expected " +
                            std::to_string(dim) + " values, found " +
                            std::to_string(fields.size() - 1));
        }
        const std::string token(fields[0]);
        if (vocab_filter != nullptr && !vocab_filter->contains(token)) {
            continue;
        }
        for (Eigen::Index j = 0; j < dim; ++j) {
            values[j] = detail::parse_double(fields[j + 1], line_no);
        }
        table.insert(token, values);
    }
    return table;
}

SentenceVector average_embedding(const TokenSeq& tokens, const WordVectorTable& table)
{
    SentenceVector sum = SentenceVector::Zero(table.dim());
    std::size_t used = 0;
    for (const auto& token : tokens) {
        if (const auto vec = table.find(token)) {
            sum += *vec;
            ++used;
        }
    }
    if (used > 0) {
        sum /= static_cast<double>(used);
    }
    return sum;
}

EmbeddingSequence token_matrix(const TokenSeq& tokens, const WordVectorTable& table)
{
    std::vector<Eigen::Map<const Eigen::VectorXd>> columns;
    columns.reserve(tokens.size());
    for (const auto& token : tokens) {
        if (auto vec = table.find(token)) {
            columns.push_back(*vec);
        }
    }
    EmbeddingSequence seq(table.dim(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        seq.col(static_cast<Eigen::Index>(j)) = columns[j];
    }
    return seq;
}

const SentenceVector& PrecomputedTable::at(const std::string& id) const
{
    if (!dim_) {
        throw DataError("precomputed vector table is empty; no vector for id '" + id + "'");
    }
    const auto it = rows_.find(id);
    if (it == rows_.end()) {
        throw DataError("no precomputed vector for id '" + id + "'");
    }
    return it->second;
}

void PrecomputedTable::insert(const std::string& id, SentenceVector values)
{
    if (dim_ && values.size() != *dim_) {
        throw DataError("precomputed vector for id '" + id + "' has dimension " +
                        std::to_string(values.size()) + ", expected " + std::to_string(*dim_));
    }
    if (rows_.contains(id)) {
        throw DataError("duplicate precomputed id '" + id + "'");
    }
    dim_ = values.size();
    rows_.emplace(id, std::move(values));
}

PrecomputedTable load_precomputed(std::istream& in)
{
    PrecomputedTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = detail::split_fields(line);
        if (fields.empty()) {
            continue;
        }
        if (fields.size() < 2) {
            throw DataError("precomputed file line " + std::to_string(line_no) +
                            ": expected 'id v1 ... v_dim'");
        }
        SentenceVector values(static_cast<Eigen::Index>(fields.size() - 1));
        for (std::size_t j = 1; j < fields.size(); ++j) {
            values[static_cast<Eigen::Index>(j - 1)] = detail::parse_double(fields[j], line_no);
        }
        try {
            table.insert(std::string(fields[0]), std::move(values));
        } catch (const DataError& e) {
            throw DataError("precomputed file line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return table;
}

}  // namespace offd
