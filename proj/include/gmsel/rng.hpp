#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace gmsel {

/// Philox4x32-10 block function: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream keyed by (master_seed, stream_index).
///
/// The key is the master seed and the stream index occupies the upper half
/// of the Philox counter, so distinct pairs never share a counter block.
/// Copying a stream copies its position; the copy replays the same draws.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : seed_(master_seed), stream_(stream_index) {}

    std::uint64_t master_seed() const noexcept { return seed_; }
    std::uint64_t stream_index() const noexcept { return stream_; }

    std::uint64_t next_u64();
    /// Uniform on the open interval (0, 1).
    double uniform();
    double gaussian();
    /// Gamma(shape, 1) by Marsaglia-Tsang.
    double gamma(double shape);
    double chisq(double dof) { return 2.0 * gamma(0.5 * dof); }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
    double spare_gaussian_ = 0.0;
    bool has_spare_ = false;
};

/// `count` i.i.d. standard normal draws; advances `stream`.
std::vector<double> sample_gaussian(RngStream& stream, std::size_t count);

}  // namespace gmsel
