#include "gapchain/dataset.hpp"

#include "gapchain/io.hpp"

namespace gapchain {

std::string_view bundled_series_csv() {
    static constexpr std::string_view csv =
        "cycle,d,favoured\n"
        "07/08,0.52,male\n"
        "08/09,0.06,male\n"
        "09/10,0.14,male\n"
        "10/11,0.06,male\n"
        "11/12/A,0.08,female\n"
        "11/12/B,0.36,female\n"
        "12/13/A,0.08,male\n"
        "12/13/B,0.04,male\n"
        "13/14/A,0.29,female\n"
        "13/14/B,0.10,female\n"
        "14/15/A,0.35,male\n"
        "14/15/B,0.01,female\n";
    return csv;
}

CycleSeries bundled_series() { return parse_series_csv(std::string(bundled_series_csv())); }

}  // namespace gapchain
