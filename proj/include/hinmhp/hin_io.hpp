#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "hinmhp/hin.hpp"

namespace hinmhp {

/// {"nodes": {kind: [label...]}, "edges": {kind: [[u_label, v_label, weight]...]}}
nlohmann::json to_json(const Hin& hin);
Hin hin_from_json(const nlohmann::json& doc);

void save_hin(const Hin& hin, const std::filesystem::path& path);
Hin load_hin(const std::filesystem::path& path);

}  // namespace hinmhp
