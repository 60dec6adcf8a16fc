#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace foilspace {

// Deterministic random streams.
//
// Every stream is keyed by (seed, stream index) and backed by std::mt19937_64,
// whose output sequence is fixed by the C++ standard. Values are converted to
// doubles by hand (the standard distributions are implementation-defined), so
// a given key yields bit-identical draws on every conforming toolchain.
//
// Generator name/version is recorded in artifacts as kRngName.
inline constexpr std::string_view kRngName = "mt19937_64+splitmix64-key/v1";

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Mix a parent seed with a stream index into an independent child seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// Mix a parent seed with a text label (FNV-1a of the label, then splitmix).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) noexcept;

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream);

    // Uniform on [0, 1) with 53 random bits.
    double uniform01();
    // Uniform on [lo, hi).
    double uniform(double lo, double hi);
    // Standard normal via Box-Muller.
    double normal();
    // Uniform integer on [0, n).
    std::uint64_t index(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace foilspace
