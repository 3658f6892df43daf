#pragma once

#include <string>

#include "json.hpp"

#include "ciarisk/ahp.hpp"
#include "ciarisk/engine.hpp"
#include "ciarisk/fair.hpp"

namespace ciarisk::render {

// Money is rounded to one decimal in every output format; probabilities and
// weights keep the same digits across table, CSV and JSON so the formats
// carry identical numeric content.
double round_money(double value);

nlohmann::json report_to_json(const fair::RiskReport& report);
nlohmann::json residual_to_json(const engine::ResidualReport& residual);
fair::RiskReport report_from_json(const nlohmann::json& j);

std::string report_table(const fair::RiskReport& report);
std::string residual_table(const engine::ResidualReport& residual);
std::string report_csv(const fair::RiskReport& report);

nlohmann::json ranking_to_json(const ahp::PriorityVector& ranking);
// Descending by weight, ties kept in input label order; decimal and
// percentage columns.
std::string ranking_table(const ahp::PriorityVector& ranking);
std::string ranking_csv(const ahp::PriorityVector& ranking);

}  // namespace ciarisk::render
