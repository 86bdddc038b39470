#ifndef PROXJOBS_MODEL_JSON_HPP
#define PROXJOBS_MODEL_JSON_HPP

#include <filesystem>

#include <json.hpp>

#include "proxjobs/modelset.hpp"

namespace proxjobs {

// Full-precision JSON form of a ModelSet, so reloaded fits predict exactly
// the same values.
nlohmann::json model_set_to_json(const ModelSet& modelset);
ModelSet model_set_from_json(const nlohmann::json& doc);

void save_model_set(const ModelSet& modelset,
                    const std::filesystem::path& path);
ModelSet load_model_set(const std::filesystem::path& path);

}  // namespace proxjobs

#endif  // PROXJOBS_MODEL_JSON_HPP
