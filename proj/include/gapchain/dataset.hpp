#pragma once

#include <string_view>

#include "gapchain/state_space.hpp"

namespace gapchain {

/// The bundled gap series (12 graduation cycles, 2007/08 through 2014/15),
/// byte-identical to data/gap_series.csv in the repository.
std::string_view bundled_series_csv();

/// The bundled series, parsed.
CycleSeries bundled_series();

}  // namespace gapchain
