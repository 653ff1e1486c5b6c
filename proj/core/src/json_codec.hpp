#pragma once

// Internal JSON encoding shared by the report, the cache and verification.

#include <json.hpp>

#include "fibcert/reduction.hpp"

namespace fibcert::detail {

using Json = nlohmann::ordered_json;

Json encode(const ReductionOutcome& o);
ReductionOutcome decode_outcome(const Json& j);

}  // namespace fibcert::detail
