#pragma once

#include <string_view>

#include <json.hpp>

namespace cognate::engine {

// Executes a run configuration (see README for the key reference). The
// command selects the workflow:
//   evaluate / ablate -> {"reports": [...]}   (ablate needs >= 2 sets)
//   predict           -> {"predictions": [...]}
// Every report embeds the expanded RunConfig under provenance.run_config.
nlohmann::json run(const nlohmann::json& run_config);
nlohmann::json run_json(std::string_view run_config_text);

}  // namespace cognate::engine
