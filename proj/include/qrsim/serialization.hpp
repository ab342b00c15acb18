#pragma once

#include <json.hpp>

#include "qrsim/configuration.hpp"
#include "qrsim/rules.hpp"

// nlohmann ADL hooks shared by the rule-file and scenario readers.
namespace qrsim {

void to_json(nlohmann::json& j, const LatticeGeometry& g);
void from_json(const nlohmann::json& j, LatticeGeometry& g);

void to_json(nlohmann::json& j, const RuleMatch& m);
void from_json(const nlohmann::json& j, RuleMatch& m);

void to_json(nlohmann::json& j, const RuleOutcome& o);
void from_json(const nlohmann::json& j, RuleOutcome& o);

void to_json(nlohmann::json& j, const LocalRule& r);
void from_json(const nlohmann::json& j, LocalRule& r);

void to_json(nlohmann::json& j, const RuleSet& s);
void from_json(const nlohmann::json& j, RuleSet& s);

} // namespace qrsim
