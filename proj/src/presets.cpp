#include "fmr/presets.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fmr/presets_data.hpp"

namespace fmr
{

MaterialParams Preset::params() const
{
    return MaterialParams::from_frequency_ghz(freq_ghz, g, four_pi_ms, k_u, k_4);
}

std::vector<Preset> parse_presets(std::string_view json_text)
{
    using nlohmann::json;
    std::vector<Preset> out;
    try {
        const json doc = json::parse(json_text);
        const json &common = doc.at("common");
        for (const json &entry : doc.at("presets")) {
            Preset p;
            p.id = entry.at("id").get<int>();
            p.freq_ghz = entry.value("freq_ghz", common.at("freq_ghz").get<double>());
            p.g = entry.value("g", common.at("g").get<double>());
            p.four_pi_ms = entry.value("ms4pi", common.at("ms4pi").get<double>());
            p.k_u = entry.at("ku").get<double>();
            p.k_4 = entry.at("k4").get<double>();
            out.push_back(p);
        }
    } catch (const json::exception &e) {
        throw std::runtime_error(std::string("presets: ") + e.what());
    }
    std::sort(out.begin(), out.end(), [](const Preset &a, const Preset &b) { return a.id < b.id; });
    return out;
}

const std::vector<Preset> &presets()
{
    static const std::vector<Preset> all = parse_presets(detail::presets_json);
    return all;
}

const Preset &preset(int id)
{
    for (const Preset &p : presets()) {
        if (p.id == id) {
            return p;
        }
    }
    throw std::out_of_range("no preset with id " + std::to_string(id));
}

} // namespace fmr
