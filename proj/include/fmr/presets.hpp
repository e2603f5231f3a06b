#ifndef FMR_PRESETS_HPP
#define FMR_PRESETS_HPP

#include <string_view>
#include <vector>

#include "fmr/energy.hpp"

namespace fmr
{

// One of the twelve shipped (K_u, K_4) parameter sets.
struct Preset {
    int id = 0;
    double freq_ghz = 0.0;
    double g = 0.0;
    double four_pi_ms = 0.0;
    double k_u = 0.0; // erg/cm^3
    double k_4 = 0.0;

    [[nodiscard]] MaterialParams params() const;
};

// Parsed from the presets file compiled into the library. Ordered by id.
const std::vector<Preset> &presets();

// Throws std::out_of_range for an unknown id.
const Preset &preset(int id);

// Parses a presets document; exposed for tests. Throws std::runtime_error.
std::vector<Preset> parse_presets(std::string_view json_text);

} // namespace fmr

#endif
