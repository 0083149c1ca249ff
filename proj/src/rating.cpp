#include "satsim/rating.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace satsim::rating {

namespace {

std::string lowered(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void unknown_level(const std::string& factor, const std::string& name,
                                const char* vocabulary) {
  throw std::invalid_argument("unknown " + factor + " level '" + name + "' (expected one of: " +
                              vocabulary + ")");
}

}  // namespace

Expertise expertise_from_string(const std::string& name) {
  const std::string n = lowered(name);
  if (n == "laymen" || n == "layman") return Expertise::Laymen;
  if (n == "proficient") return Expertise::Proficient;
  if (n == "expert") return Expertise::Expert;
  if (n == "multiple-experts" || n == "multiple_experts") return Expertise::MultipleExperts;
  unknown_level("expertise", name, "laymen, proficient, expert, multiple-experts");
}

Knowledge knowledge_from_string(const std::string& name) {
  const std::string n = lowered(name);
  if (n == "public") return Knowledge::Public;
  if (n == "restricted") return Knowledge::Restricted;
  if (n == "sensitive") return Knowledge::Sensitive;
  if (n == "critical") return Knowledge::Critical;
  unknown_level("knowledge", name, "public, restricted, sensitive, critical");
}

Window window_from_string(const std::string& name) {
  const std::string n = lowered(name);
  if (n == "unnecessary" || n == "unlimited") return Window::Unnecessary;
  if (n == "easy") return Window::Easy;
  if (n == "moderate") return Window::Moderate;
  if (n == "difficult") return Window::Difficult;
  unknown_level("window", name, "unnecessary, easy, moderate, difficult");
}

Equipment equipment_from_string(const std::string& name) {
  const std::string n = lowered(name);
  if (n == "standard") return Equipment::Standard;
  if (n == "specialized") return Equipment::Specialized;
  if (n == "bespoke") return Equipment::Bespoke;
  if (n == "multiple-bespoke" || n == "multiple_bespoke") return Equipment::MultipleBespoke;
  if (n == "quantum") return Equipment::Quantum;
  unknown_level("equipment", name, "standard, specialized, bespoke, multiple-bespoke, quantum");
}

const char* to_string(Expertise e) {
  switch (e) {
    case Expertise::Laymen: return "laymen";
    case Expertise::Proficient: return "proficient";
    case Expertise::Expert: return "expert";
    case Expertise::MultipleExperts: return "multiple-experts";
  }
  return "?";
}

const char* to_string(Knowledge k) {
  switch (k) {
    case Knowledge::Public: return "public";
    case Knowledge::Restricted: return "restricted";
    case Knowledge::Sensitive: return "sensitive";
    case Knowledge::Critical: return "critical";
  }
  return "?";
}

const char* to_string(Window w) {
  switch (w) {
    case Window::Unnecessary: return "unnecessary";
    case Window::Easy: return "easy";
    case Window::Moderate: return "moderate";
    case Window::Difficult: return "difficult";
  }
  return "?";
}

const char* to_string(Equipment e) {
  switch (e) {
    case Equipment::Standard: return "standard";
    case Equipment::Specialized: return "specialized";
    case Equipment::Bespoke: return "bespoke";
    case Equipment::MultipleBespoke: return "multiple-bespoke";
    case Equipment::Quantum: return "quantum";
  }
  return "?";
}

const char* to_string(Severity s) {
  switch (s) {
    case Severity::Basic: return "Basic";
    case Severity::Moderate: return "Moderate";
    case Severity::High: return "High";
    case Severity::BeyondHigh: return "Beyond High";
  }
  return "?";
}

int attack_potential(const FactorLevels& f) {
  int sum = static_cast<int>(f.expertise) + static_cast<int>(f.knowledge) +
            static_cast<int>(f.window);
  if (f.equipment != Equipment::Quantum) sum += static_cast<int>(f.equipment);
  return sum;
}

Severity severity(int ap) {
  if (ap < 0) throw std::invalid_argument("severity: attack potential must be >= 0");
  if (ap <= 10) return Severity::Basic;
  if (ap <= 15) return Severity::Moderate;
  if (ap <= 19) return Severity::High;
  return Severity::BeyondHigh;
}

RatingSheet rate(const std::string& name, const FactorLevels& f, const std::string& notes) {
  RatingSheet sheet;
  sheet.attack_name = name;
  sheet.factors = f;
  sheet.attack_potential = attack_potential(f);
  sheet.unbounded_equipment = f.equipment == Equipment::Quantum;
  // Unbounded equipment dominates every finite band.
  sheet.severity = sheet.unbounded_equipment ? Severity::BeyondHigh : severity(sheet.attack_potential);
  sheet.notes = notes;
  return sheet;
}

std::vector<RatingSheet> rate_catalog(const std::vector<CatalogEntry>& entries) {
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (!seen.insert(e.name).second) {
      throw std::invalid_argument("rate_catalog: duplicate attack name '" + e.name + "'");
    }
  }
  std::vector<RatingSheet> sheets;
  sheets.reserve(entries.size());
  for (const auto& e : entries) sheets.push_back(rate(e.name, e.factors, e.notes));
  std::sort(sheets.begin(), sheets.end(), [](const RatingSheet& a, const RatingSheet& b) {
    if (a.attack_potential != b.attack_potential) return a.attack_potential < b.attack_potential;
    return a.attack_name < b.attack_name;
  });
  return sheets;
}

}  // namespace satsim::rating
