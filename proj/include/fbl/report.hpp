#pragma once

#include "fbl/fblnorm.hpp"

#include <json.hpp>

namespace fbl {

/// {"lower_bound", "objective", "constraint", "witness", "certificate_signs",
///  "restarts", "evaluations", "seed"}
nlohmann::json to_json(const NormEstimate& estimate);

nlohmann::json to_json(const UpperBound& bound);

} // namespace fbl
