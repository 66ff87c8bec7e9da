#pragma once

#include "utilrisk/risk.hpp"
#include "utilrisk/scenarios.hpp"
#include "utilrisk/utility.hpp"

#include <string>

namespace utilrisk::io {

/// mean | exp:a | power:g | sshaped:a,b | linear:a | boundedexp |
/// pwl:x1,y1;x2,y2;...  (ParseError on malformed text, DomainError from the
/// factories on inadmissible values).
UtilitySpec parse_utility_spec(const std::string& text);

/// id | expm1:a | pospart:c | powplus:p,c | pwl:x1,y1;x2,y2;...
LossFunction parse_loss_spec(const std::string& text);

/// zero | var:a | es:a | worstcase | entropic:a | lvar:file.json |
/// adjes:file.json | ew:&lt;loss&gt; | sr:&lt;loss&gt; | oce:&lt;loss&gt;
RiskSpec parse_risk_spec(const std::string& text);

/// {"rate": r, "probs": [...], "returns": [[...], ...]} with one row of
/// excess returns per scenario. Validates through make_scenario_set.
ScenarioSet load_scenarios(const std::string& path);

/// {"breakpoints": [...], "levels": [...]}; "values" is accepted as an alias
/// for "levels".
ThresholdDistribution load_threshold_distribution(const std::string& path);

/// {"breakpoints": [...], "values": [...], "limit_at_zero": g0}; numbers may
/// be the strings "inf" / "-inf".
RiskProfile load_risk_profile(const std::string& path);

/// %.17g (round-trip exact); infinities print as inf / -inf.
std::string format_number(double v);

} // namespace utilrisk::io
