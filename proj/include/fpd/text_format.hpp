#pragma once

#include <string>

namespace fpd {

// Fixed-point with exactly `decimals` digits.
std::string fixed(double value, int decimals);

// Rounded to `decimals` digits with trailing zeros (and a bare point) removed:
// 104.138080 -> "104.13808", 75.00 -> "75".
std::string compact(double value, int decimals);

// 1 -> "1st", 2 -> "2nd", 11 -> "11th", 23 -> "23rd".
std::string ordinal(int n);

}  // namespace fpd
