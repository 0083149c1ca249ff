#pragma once

#include <json.hpp>

#include "satsim/rating.hpp"

namespace satsim::rating {

// Sheet and catalog serialization. to_json/from_json round-trip every field
// bit-exactly.
nlohmann::json to_json(const RatingSheet& sheet);
RatingSheet sheet_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CatalogEntry& entry);
CatalogEntry entry_from_json(const nlohmann::json& j);

// Catalog file: {"attacks": [{"name", "expertise", "knowledge", "window",
// "equipment", "notes"?, "elapsed_time"?}, ...]}
std::vector<CatalogEntry> load_catalog(const std::string& path);
std::vector<CatalogEntry> parse_catalog_text(const std::string& json_text);

}  // namespace satsim::rating
