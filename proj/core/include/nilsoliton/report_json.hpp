#pragma once

#include "nilsoliton/certification.hpp"
#include "nilsoliton/flow.hpp"
#include "nilsoliton/indecomposability.hpp"
#include "nilsoliton/moduli.hpp"
#include "nilsoliton/moment.hpp"

#include <json.hpp>

namespace nilsoliton {

nlohmann::json to_json(const DistinguishedReport& r);
nlohmann::json to_json(const MomentImage& m);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const ChainCertificate& c);
nlohmann::json to_json(const HDetectionReport& r);
nlohmann::json to_json(const CoefficientValues& v);
nlohmann::json to_json(const OrbitInvariant& o);
/// The final tensor is included only when with_tensor is set.
nlohmann::json to_json(const FlowResult& r, bool with_tensor = true);
nlohmann::json to_json(const ScanSummary& s);
nlohmann::json to_json(const Decomposition& d);
nlohmann::json to_json(const ModuliEntry& e);
nlohmann::json to_json(const RegionResult& r);

/// Rectangular matrix as nested rows.
nlohmann::json rect_to_json(const Matrix& m);
nlohmann::json vector_to_json(const Vector& v);

}  // namespace nilsoliton
