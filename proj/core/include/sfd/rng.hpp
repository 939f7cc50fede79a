#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace sfd {

/// Philox4x32-10 block cipher (Salmon et al., SC'11). Stateless: the output
/// is a pure function of (counter, key).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Which independent family of Gaussian draws a coefficient uses.
enum class DrawRole : std::uint32_t {
    Initial = 0,       ///< Z^{(1)}, Z^{(2)} of the initial field
    Noise = 1,         ///< Gaussian behind the stochastic integrals at the first time
    NoiseSecond = 2,   ///< extra Gaussian for the second time of a correlated pair
};

/// Counter-based stream of standard normals keyed by (seed, realization).
/// Draws for a coefficient are addressed by (ell, m, role), so they do not
/// depend on evaluation order or worker count.
class RngStream {
public:
    RngStream() = default;
    RngStream(std::uint64_t seed, std::uint32_t realization) : seed_(seed), realization_(realization) {}

    std::uint64_t seed() const { return seed_; }
    std::uint32_t realization() const { return realization_; }

    /// Two independent N(0,1) variates for coordinate (ell, m, role).
    std::pair<double, double> normals(int ell, int m, DrawRole role) const;

    /// Two uniforms in the open interval (0,1) for the same coordinates.
    std::pair<double, double> uniforms(int ell, int m, DrawRole role) const;

private:
    std::uint64_t seed_ = 0;
    std::uint32_t realization_ = 0;
};

}  // namespace sfd
