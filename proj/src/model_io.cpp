// Binary model format; layout documented in docs/model_format.md.

#include "offd/error.hpp"
#include "offd/learn.hpp"

#include <bit>
#include <istream>
#include <ostream>

namespace offd {

namespace {

constexpr char kMagic[5] = {'O', 'F', 'F', 'D', '1'};
constexpr std::uint16_t kFormatVersion = 1;

// FNV-1a, 64 bit.
class Checksum {
public:
    void update(const unsigned char* data, std::size_t size)
    {
        for (std::size_t i = 0; i < size; ++i) {
            hash_ ^= data[i];
            hash_ *= 0x100000001b3ULL;
        }
    }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void bytes(const void* data, std::size_t size)
    {
        const auto* p = static_cast<const unsigned char*>(data);
        sum_.update(p, size);
        out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(size));
    }

    template <typename Uint>
    void uint(Uint value)
    {
        unsigned char buf[sizeof(Uint)];
        for (std::size_t i = 0; i < sizeof(Uint); ++i) {
            buf[i] = static_cast<unsigned char>(value >> (8 * i));
        }
        bytes(buf, sizeof buf);
    }

    void f64(double value) { uint(std::bit_cast<std::uint64_t>(value)); }

    void f64s(const double* data, Eigen::Index count)
    {
        for (Eigen::Index i = 0; i < count; ++i) {
            f64(data[i]);
        }
    }

    void finish()
    {
        const auto sum = sum_.value();
        uint(sum);
        if (!out_) {
            throw DataError("failed to write model stream");
        }
    }

private:
    std::ostream& out_;
    Checksum sum_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    void bytes(void* data, std::size_t size)
    {
        in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
        if (static_cast<std::size_t>(in_.gcount()) != size) {
            throw DataError("model file is truncated");
        }
        sum_.update(static_cast<const unsigned char*>(data), size);
    }

    template <typename Uint>
    Uint uint()
    {
        unsigned char buf[sizeof(Uint)];
        bytes(buf, sizeof buf);
        Uint value = 0;
        for (std::size_t i = 0; i < sizeof(Uint); ++i) {
            value |= static_cast<Uint>(buf[i]) << (8 * i);
        }
        return value;
    }

    double f64() { return std::bit_cast<double>(uint<std::uint64_t>()); }

    void f64s(double* data, Eigen::Index count)
    {
        for (Eigen::Index i = 0; i < count; ++i) {
            data[i] = f64();
        }
    }

    void verify()
    {
        const auto expected = sum_.value();
        unsigned char buf[8];
        in_.read(reinterpret_cast<char*>(buf), 8);
        if (in_.gcount() != 8) {
            throw DataError("model file is truncated");
        }
        std::uint64_t stored = 0;
        for (int i = 0; i < 8; ++i) {
            stored |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
        }
        if (stored != expected) {
            throw DataError("model file checksum mismatch (corrupt file)");
        }
        if (in_.peek() != std::char_traits<char>::eof()) {
            throw DataError("model file has trailing data after the checksum");
        }
    }

private:
    std::istream& in_;
    Checksum sum_;
};

// Dimensions are capped to keep a corrupt header from requesting huge buffers.
constexpr std::uint32_t kMaxDim = 1u << 24;

std::uint32_t checked_dim(std::uint32_t dim, const char* what)
{
    if (dim == 0 || dim > kMaxDim) {
        throw DataError(std::string("model file has invalid ") + what);
    }
    return dim;
}

void write_hyper(Writer& w, const Hyperparams& h)
{
    w.f64(h.lambda);
    w.f64(h.C);
    w.f64(h.lr);
    w.f64(h.l2);
    w.f64(h.var_floor);
    w.uint(h.epochs);
    w.uint(h.seed);
}

Hyperparams read_hyper(Reader& r)
{
    Hyperparams h;
    h.lambda = r.f64();
    h.C = r.f64();
    h.lr = r.f64();
    h.l2 = r.f64();
    h.var_floor = r.f64();
    h.epochs = r.uint<std::uint32_t>();
    h.seed = r.uint<std::uint64_t>();
    return h;
}

void write_rks(Writer& w, const std::optional<RksMap>& rks)
{
    w.uint(static_cast<std::uint8_t>(rks ? 1 : 0));
    if (!rks) {
        return;
    }
    const auto& algo = rks->algorithm();
    w.uint(static_cast<std::uint16_t>(algo.size()));
    w.bytes(algo.data(), algo.size());
    w.uint(rks->seed());
    w.f64(rks->sigma());
    w.uint(static_cast<std::uint32_t>(rks->in_dim()));
    w.uint(static_cast<std::uint32_t>(rks->pairs()));
    w.f64s(rks->frequencies().data(), rks->frequencies().size());
}

std::optional<RksMap> read_rks(Reader& r)
{
    const auto flag = r.uint<std::uint8_t>();
    if (flag == 0) {
        return std::nullopt;
    }
    if (flag != 1) {
        throw DataError("model file has invalid RKS flag");
    }
    std::string algo(r.uint<std::uint16_t>(), '\0');
    r.bytes(algo.data(), algo.size());
    const auto seed = r.uint<std::uint64_t>();
    const double sigma = r.f64();
    const auto in_dim = checked_dim(r.uint<std::uint32_t>(), "RKS input dimension");
    const auto pairs = checked_dim(r.uint<std::uint32_t>(), "RKS pair count");
    Eigen::MatrixXd freq(in_dim, pairs);
    r.f64s(freq.data(), freq.size());
    return RksMap(std::move(freq), sigma, seed, std::move(algo));
}

}  // namespace

void save_model(const Model& model, std::ostream& out)
{
    Writer w(out);
    w.bytes(kMagic, sizeof kMagic);
    w.uint(kFormatVersion);
    std::visit(
        [&w](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, LinearModel>) {
                w.uint(static_cast<std::uint8_t>(m.kind));
                write_hyper(w, m.hyper);
                w.uint(static_cast<std::uint32_t>(m.weights.size()));
                w.f64s(m.weights.data(), m.weights.size());
                w.f64(m.bias);
            } else {
                w.uint(static_cast<std::uint8_t>(ModelKind::gnb));
                write_hyper(w, m.hyper);
                const auto dim = m.mean.cols();
                w.uint(static_cast<std::uint32_t>(dim));
                w.f64(m.prior[0]);
                w.f64(m.prior[1]);
                for (int c = 0; c < 2; ++c) {
                    const Eigen::VectorXd mean = m.mean.row(c).transpose();
                    const Eigen::VectorXd var = m.variance.row(c).transpose();
                    w.f64s(mean.data(), dim);
                    w.f64s(var.data(), dim);
                }
            }
            write_rks(w, m.rks);
        },
        model);
    w.finish();
}

Model load_model(std::istream& in)
{
    Reader r(in);
    char magic[sizeof kMagic];
    r.bytes(magic, sizeof magic);
    if (!std::equal(std::begin(magic), std::end(magic), std::begin(kMagic))) {
        throw DataError("not a model file (bad magic)");
    }
    const auto version = r.uint<std::uint16_t>();
    if (version != kFormatVersion) {
        throw DataError("unsupported model format version " + std::to_string(version));
    }
    const auto kind_byte = r.uint<std::uint8_t>();
    if (kind_byte > static_cast<std::uint8_t>(ModelKind::gnb)) {
        throw DataError("model file has unknown classifier kind " + std::to_string(kind_byte));
    }
    const auto kind = static_cast<ModelKind>(kind_byte);
    const Hyperparams hyper = read_hyper(r);
    const auto dim = checked_dim(r.uint<std::uint32_t>(), "feature dimension");

    Model model;
    if (kind == ModelKind::gnb) {
        GnbModel m;
        m.hyper = hyper;
        m.prior[0] = r.f64();
        m.prior[1] = r.f64();
        m.mean.resize(2, dim);
        m.variance.resize(2, dim);
        for (int c = 0; c < 2; ++c) {
            Eigen::VectorXd mean(dim);
            Eigen::VectorXd var(dim);
            r.f64s(mean.data(), dim);
            r.f64s(var.data(), dim);
            m.mean.row(c) = mean.transpose();
            m.variance.row(c) = var.transpose();
        }
        m.rks = read_rks(r);
        model = std::move(m);
    } else {
        LinearModel m;
        m.kind = kind;
        m.hyper = hyper;
        m.weights.resize(dim);
        r.f64s(m.weights.data(), dim);
        m.bias = r.f64();
        m.rks = read_rks(r);
        model = std::move(m);
    }
    r.verify();

    const auto classifier_dim = std::visit(
        [](const auto& m) -> Eigen::Index {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, LinearModel>) {
                return m.weights.size();
            } else {
                return m.mean.cols();
            }
        },
        model);
    const auto* rks = std::visit([](const auto& m) { return m.rks ? &*m.rks : nullptr; }, model);
    if (rks != nullptr && rks->out_dim() != classifier_dim) {
        throw DataError("model file: RKS output dimension does not match classifier dimension");
    }
    return model;
}

}  // namespace offd
