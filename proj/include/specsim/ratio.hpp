// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace specsim {

__extension__ using uint128 = unsigned __int128;

// Non-negative rational over 64-bit costs, kept in lowest terms.
class Ratio {
  public:
    constexpr Ratio() = default;
    constexpr Ratio(std::uint64_t num, std::uint64_t den) : num_{num}, den_{den} {
        if (den_ == 0) throw std::domain_error("Ratio with zero denominator");
        const auto g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    [[nodiscard]] constexpr std::uint64_t num() const noexcept { return num_; }
    [[nodiscard]] constexpr std::uint64_t den() const noexcept { return den_; }
    [[nodiscard]] constexpr double value() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    // floor(this * scale)
    [[nodiscard]] constexpr std::uint64_t floor_scaled(std::uint64_t scale) const noexcept {
        return static_cast<std::uint64_t>(static_cast<uint128>(num_) * scale / den_);
    }

    [[nodiscard]] std::string to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

    friend constexpr std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept {
        const auto lhs = static_cast<uint128>(a.num_) * b.den_;
        const auto rhs = static_cast<uint128>(b.num_) * a.den_;
        return lhs <=> rhs;
    }
    friend constexpr bool operator==(const Ratio& a, const Ratio& b) noexcept {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

  private:
    std::uint64_t num_{1};
    std::uint64_t den_{1};
};

}  // namespace specsim
