#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sfd {

/// Harmonic coefficients {V_{ell,m} : 0 <= m <= ell <= L} of a real field.
/// Negative orders are implied by V_{ell,-m} = (-1)^m conj(V_{ell,m}); V_{ell,0} is real.
class CoefficientSet {
public:
    using value_type = std::complex<double>;

    CoefficientSet() = default;
    explicit CoefficientSet(int L, double time = 0.0);

    int degree() const { return L_; }
    double time() const { return time_; }
    void setTime(double t) { time_ = t; }

    std::uint64_t seed() const { return seed_; }
    std::uint32_t realization() const { return realization_; }
    void setOrigin(std::uint64_t seed, std::uint32_t realization) {
        seed_ = seed;
        realization_ = realization;
    }

    static constexpr std::size_t index(int ell, int m) {
        return static_cast<std::size_t>(ell) * static_cast<std::size_t>(ell + 1) / 2 + static_cast<std::size_t>(m);
    }
    static constexpr std::size_t sizeFor(int L) { return index(L + 1, 0); }

    value_type& operator()(int ell, int m) { return values_[index(ell, m)]; }
    const value_type& operator()(int ell, int m) const { return values_[index(ell, m)]; }
    /// Bounds-checked access; also accepts m < 0 via the conjugation rule.
    value_type at(int ell, int m) const;

    std::span<value_type> values() { return values_; }
    std::span<const value_type> values() const { return values_; }

    /// |V_{ell,0}|^2 + 2 sum_{m>=1} |V_{ell,m}|^2, the L2 energy carried by degree ell.
    double degreeEnergy(int ell) const;

    CoefficientSet& operator+=(const CoefficientSet& other);
    CoefficientSet& operator-=(const CoefficientSet& other);
    CoefficientSet& operator*=(double s);

    friend bool operator==(const CoefficientSet& a, const CoefficientSet& b) {
        return a.L_ == b.L_ && a.values_ == b.values_;
    }

private:
    int L_ = -1;
    double time_ = 0.0;
    std::uint64_t seed_ = 0;
    std::uint32_t realization_ = 0;
    std::vector<value_type> values_;
};

/// CSV with header `ell,m,re,im`, one row per stored coefficient, 17 significant digits.
void writeCoefficientsCsv(const CoefficientSet& set, const std::filesystem::path& path);
CoefficientSet readCoefficientsCsv(const std::filesystem::path& path);

/// Little-endian binary: "SFDC", u32 version (=1), u32 L, then (re, im) f64 pairs
/// ordered by ell then m.
void writeCoefficientsBinary(const CoefficientSet& set, const std::filesystem::path& path);
CoefficientSet readCoefficientsBinary(const std::filesystem::path& path);

}  // namespace sfd
