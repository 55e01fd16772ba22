#pragma once

// Values recorded from the first build and frozen. A change here means the
// RNG, the sampling order or the file format changed.

#include <cstdint>
#include <string_view>
#include <vector>

namespace golden {

inline constexpr std::string_view kRandomFunctionSha =
    "1c7aecc0810762b06fc75e38fa64678ea571fe14fa28d20d455770da92daef15";
inline const std::vector<int> kJuntaSubset = {1, 3, 6, 7, 8, 9};
inline constexpr std::string_view kJuntaInner = "882d35141b9f766a";
inline constexpr std::string_view kDatasetContentHash =
    "365b4f2227fe398c72185ed459fa094aed3ab57db8fbabc27b8b416d34f67062";
inline constexpr std::uint64_t kStreamFirst = 15381340408456295118ULL;
inline constexpr std::uint64_t kStreamSecond = 12074680432912537551ULL;

}  // namespace golden
