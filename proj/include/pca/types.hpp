#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace pca {

using Bits = std::int64_t;
using Count = std::int64_t;
using FlowId = std::int32_t;
using FrameIndex = std::int64_t;

// Simulation clock: integer microsecond ticks. Frame multiples stay exact,
// which is what keeps departure timestamps on frame boundaries bit-for-bit.
using Ticks = std::int64_t;
constexpr Ticks kTicksPerSecond = 1'000'000;

constexpr FrameIndex kFrameNever = std::numeric_limits<FrameIndex>::max();

enum class Access { dedicated, random };

inline const char* to_string(Access a) {
    return a == Access::dedicated ? "dedicated" : "random";
}

inline Ticks seconds_to_ticks(double s) {
    return static_cast<Ticks>(s * static_cast<double>(kTicksPerSecond) + 0.5);
}

inline double ticks_to_seconds(Ticks t) {
    return static_cast<double>(t) / static_cast<double>(kTicksPerSecond);
}

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error(what + " (line " + std::to_string(line) +
                             ", column " + std::to_string(column) + ")"),
          line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

inline Count ceil_div(Count a, Count b) {
    return (a + b - 1) / b;
}

// floor(a * b) computed with a relative nudge so products that are integers
// in exact arithmetic (e.g. 1e6 * 0.045) do not land one below.
inline Count floor_product(double a, double b) {
    const double p = a * b;
    return static_cast<Count>(p + p * 1e-12);
}

}  // namespace pca
