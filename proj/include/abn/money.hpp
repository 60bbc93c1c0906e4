#pragma once

#include <cmath>
#include <string>

#include <fmt/format.h>

namespace abn {

// Currency is unitless; amounts are doubles held at cent precision wherever
// they pass through a negotiation ledger.
inline double round_cents(double amount) { return std::round(amount * 100.0) / 100.0; }

inline std::string format_price(double amount) { return fmt::format("{:.2f}", amount); }

}  // namespace abn
