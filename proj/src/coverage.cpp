#include "safefault/coverage.hpp"

#include <cstdio>

#include "safefault/errors.hpp"

namespace safefault {

std::string format_percent(std::uint64_t numerator, std::uint64_t denominator) {
  if (denominator == 0) throw InputError("percentage with zero denominator");
  __extension__ typedef unsigned __int128 Wide;
  const Wide scaled = static_cast<Wide>(numerator) * 10000u;
  Wide hundredths = scaled / denominator;
  const Wide twice_remainder = 2 * (scaled % denominator);
  if (twice_remainder > denominator || (twice_remainder == denominator && (hundredths & 1) != 0)) {
    ++hundredths;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%llu.%02llu", static_cast<unsigned long long>(hundredths / 100),
                static_cast<unsigned long long>(hundredths % 100));
  return buf;
}

std::string Coverage::percent() const { return format_percent(covered, population); }

Coverage fc(std::uint64_t detected, std::uint64_t total) {
  if (total == 0) throw InputError("fault coverage of an empty fault list");
  if (detected > total) {
    throw InputError("detected count " + std::to_string(detected) + " exceeds fault count " +
                     std::to_string(total));
  }
  return {detected, total};
}

Coverage fc_safe(std::uint64_t detected, std::uint64_t total, std::uint64_t safe) {
  if (safe >= total) {
    throw InputError("safe count " + std::to_string(safe) + " leaves no faults out of " +
                     std::to_string(total));
  }
  if (detected > total - safe) {
    throw InputError("detected count " + std::to_string(detected) +
                     " exceeds the non-safe faults (" + std::to_string(total - safe) +
                     "); were patterns graded outside the operational constraints?");
  }
  return {detected, total - safe};
}

}  // namespace safefault
