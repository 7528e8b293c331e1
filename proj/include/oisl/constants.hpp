#pragma once

namespace oisl {

// Speed of light in vacuum, m/s (SI exact value).
inline constexpr double speed_of_light = 299792458.0;

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double ln2 = 0.69314718055994530942;

}  // namespace oisl
