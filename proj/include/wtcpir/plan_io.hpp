#pragma once

#include <string>

#include <json.hpp>

#include "wtcpir/plan.hpp"

namespace wtcpir {

using Json = nlohmann::ordered_json;

inline constexpr int kPlanFormatVersion = 1;

Json plan_to_json(const QueryPlan& plan);

// Rebuilds a plan from its JSON form. Checks types, ranges and shapes and
// throws UsageError on malformed input; it does not check that the plan is a
// correct scheme, which is what the audits are for.
QueryPlan plan_from_json(const Json& doc);

void save_plan(const QueryPlan& plan, const std::string& path);
QueryPlan load_plan(const std::string& path);

}  // namespace wtcpir
