#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace offd {

/// Portable seeded generator. std::mt19937_64 has a bit-exact definition in
/// the standard, but the std distributions do not, so the conversions to
/// uniform/normal/bounded integers are written out here. The identifier is
/// stored next to anything sampled with it.
class Rng {
public:
    static constexpr std::string_view algorithm = "mt19937_64+boxmuller/1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal via the Box-Muller transform (pairs are cached).
    double normal();

    /// Uniform integer in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace offd
