#pragma once

#include <json.hpp>

#include "tensorange/applications.hpp"
#include "tensorange/numrange.hpp"
#include "tensorange/oracle.hpp"

namespace tensorange {

// Report schema: keys are stable; new keys may be added, existing ones are
// never renamed.

nlohmann::json to_json(const DiagonalBound& b);
nlohmann::json to_json(const TrivialBounds& t);
nlohmann::json to_json(const CertificateReport& r);
nlohmann::json to_json(const StudyResult& s);
nlohmann::json to_json(const SampleResult& s);
nlohmann::json to_json(const AscentResult& a);
nlohmann::json to_json(const GridResult& g);

}  // namespace tensorange
