#pragma once

#include "specscreen/aggregate.hpp"
#include "specscreen/theory.hpp"

#include <json.hpp>

namespace specscreen {

nlohmann::json to_json(const HubReport& report);
HubReport hub_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AggregateResult& result);

}  // namespace specscreen
