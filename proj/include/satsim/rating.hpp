#pragma once

#include <optional>
#include <string>
#include <vector>

namespace satsim::rating {

// Common Evaluation Methodology factor levels, four of the five CEM factors.
// Elapsed time is deliberately not rated for a laboratory system; the sheet
// schema reserves an optional field for it so future CEM-complete ratings
// stay file-compatible.
enum class Expertise { Laymen = 0, Proficient = 3, Expert = 6, MultipleExperts = 8 };
enum class Knowledge { Public = 0, Restricted = 3, Sensitive = 7, Critical = 11 };
enum class Window { Unnecessary = 0, Easy = 1, Moderate = 4, Difficult = 10 };
// Quantum is the reserved sentinel for equipment (quantum memories, quantum
// computers) treated as unbounded: excluded from sums and flagged.
enum class Equipment { Standard = 0, Specialized = 4, Bespoke = 7, MultipleBespoke = 9, Quantum = -1 };

enum class Severity { Basic, Moderate, High, BeyondHigh };

struct FactorLevels {
  Expertise expertise = Expertise::Laymen;
  Knowledge knowledge = Knowledge::Public;
  Window window = Window::Unnecessary;
  Equipment equipment = Equipment::Standard;
  std::optional<int> elapsed_time;  // reserved, never part of the sum
};

struct RatingSheet {
  std::string attack_name;
  FactorLevels factors;
  int attack_potential = 0;
  Severity severity = Severity::Basic;
  bool unbounded_equipment = false;  // quantum-equipment flag
  std::string notes;
};

// Name <-> level lookups; unknown names throw and list the valid vocabulary.
Expertise expertise_from_string(const std::string& name);
Knowledge knowledge_from_string(const std::string& name);
Window window_from_string(const std::string& name);
Equipment equipment_from_string(const std::string& name);
const char* to_string(Expertise);
const char* to_string(Knowledge);
const char* to_string(Window);
const char* to_string(Equipment);
const char* to_string(Severity);

// Sum of the four factor values; quantum equipment contributes nothing to the
// sum and is reported through the unbounded flag instead.
int attack_potential(const FactorLevels& f);

// Basic 0-10, Moderate 11-15, High 16-19, Beyond High 20 and up.
Severity severity(int ap);

struct CatalogEntry {
  std::string name;
  FactorLevels factors;
  std::string notes;
};

// Rates each entry and sorts ascending by attack potential (lowest effort =
// highest-priority threat), ties broken by name. Duplicate names rejected.
std::vector<RatingSheet> rate_catalog(const std::vector<CatalogEntry>& entries);

RatingSheet rate(const std::string& name, const FactorLevels& f, const std::string& notes = "");

}  // namespace satsim::rating
