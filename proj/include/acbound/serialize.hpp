#ifndef ACBOUND_SERIALIZE_HPP
#define ACBOUND_SERIALIZE_HPP

#include <json.hpp>

#include "acbound/lb_family.hpp"
#include "acbound/margin.hpp"

namespace acbound {

// Family <-> JSON with a bit-exact double round trip (shortest-representation
// serialization). Deserialization recomputes every derived constant and
// rejects documents whose stored values disagree.
nlohmann::json family_to_json(const LowerBoundFamily& family);
LowerBoundFamily family_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const FamilyReport& report);

} // namespace acbound

#endif
