#pragma once

#include <cstdint>
#include <string>

namespace safefault {

// An exact ratio; percent() renders it for tables.
struct Coverage {
  std::uint64_t covered = 0;
  std::uint64_t population = 0;

  double fraction() const { return static_cast<double>(covered) / static_cast<double>(population); }
  std::string percent() const;
};

// 100 * numerator / denominator with two decimals, rounded half to even on
// the exact rational value. denominator must be non-zero.
std::string format_percent(std::uint64_t numerator, std::uint64_t denominator);

// detected / total. InputError when total is 0 or detected > total.
Coverage fc(std::uint64_t detected, std::uint64_t total);

// Fault coverage without safe faults: detected / (total - safe).
// InputError when safe >= total or detected > total - safe.
Coverage fc_safe(std::uint64_t detected, std::uint64_t total, std::uint64_t safe);

}  // namespace safefault
