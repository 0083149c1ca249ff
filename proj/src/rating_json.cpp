#include "satsim/rating_json.hpp"

#include <fstream>
#include <sstream>

namespace satsim::rating {

using nlohmann::json;

json to_json(const RatingSheet& sheet) {
  json j{{"name", sheet.attack_name},
         {"expertise", to_string(sheet.factors.expertise)},
         {"knowledge", to_string(sheet.factors.knowledge)},
         {"window", to_string(sheet.factors.window)},
         {"equipment", to_string(sheet.factors.equipment)},
         {"attack_potential", sheet.attack_potential},
         {"severity", to_string(sheet.severity)},
         {"unbounded_equipment", sheet.unbounded_equipment},
         {"notes", sheet.notes}};
  if (sheet.factors.elapsed_time) {
    j["elapsed_time"] = *sheet.factors.elapsed_time;
  } else {
    j["elapsed_time"] = nullptr;
  }
  return j;
}

namespace {

Severity severity_from_string(const std::string& s) {
  if (s == "Basic") return Severity::Basic;
  if (s == "Moderate") return Severity::Moderate;
  if (s == "High") return Severity::High;
  if (s == "Beyond High") return Severity::BeyondHigh;
  throw std::invalid_argument("unknown severity '" + s + "'");
}

FactorLevels factors_from_json(const json& j) {
  FactorLevels f;
  f.expertise = expertise_from_string(j.at("expertise").get<std::string>());
  f.knowledge = knowledge_from_string(j.at("knowledge").get<std::string>());
  f.window = window_from_string(j.at("window").get<std::string>());
  f.equipment = equipment_from_string(j.at("equipment").get<std::string>());
  if (j.contains("elapsed_time") && !j.at("elapsed_time").is_null()) {
    f.elapsed_time = j.at("elapsed_time").get<int>();
  }
  return f;
}

}  // namespace

RatingSheet sheet_from_json(const json& j) {
  RatingSheet sheet;
  sheet.attack_name = j.at("name").get<std::string>();
  sheet.factors = factors_from_json(j);
  sheet.attack_potential = j.at("attack_potential").get<int>();
  sheet.severity = severity_from_string(j.at("severity").get<std::string>());
  sheet.unbounded_equipment = j.at("unbounded_equipment").get<bool>();
  sheet.notes = j.at("notes").get<std::string>();
  return sheet;
}

json to_json(const CatalogEntry& entry) {
  json j{{"name", entry.name},
         {"expertise", to_string(entry.factors.expertise)},
         {"knowledge", to_string(entry.factors.knowledge)},
         {"window", to_string(entry.factors.window)},
         {"equipment", to_string(entry.factors.equipment)},
         {"notes", entry.notes}};
  if (entry.factors.elapsed_time) j["elapsed_time"] = *entry.factors.elapsed_time;
  return j;
}

CatalogEntry entry_from_json(const json& j) {
  CatalogEntry entry;
  entry.name = j.at("name").get<std::string>();
  entry.factors = factors_from_json(j);
  entry.notes = j.value("notes", std::string{});
  return entry;
}

std::vector<CatalogEntry> parse_catalog_text(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    throw std::invalid_argument(std::string("catalog is not valid JSON: ") + ex.what());
  }
  if (!j.is_object() || !j.contains("attacks") || !j.at("attacks").is_array()) {
    throw std::invalid_argument("catalog: expected an object with an 'attacks' array");
  }
  std::vector<CatalogEntry> entries;
  for (const auto& item : j.at("attacks")) entries.push_back(entry_from_json(item));
  return entries;
}

std::vector<CatalogEntry> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open catalog file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_catalog_text(buffer.str());
}

}  // namespace satsim::rating
