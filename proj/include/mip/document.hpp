#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "mip/constructor.hpp"
#include "mip/oracle.hpp"

namespace mip::document {

using Json = nlohmann::ordered_json;

class schema_error : public std::runtime_error {
  public:
    explicit schema_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolName = "mip";
inline constexpr const char* kToolVersion = "0.1.0";

struct Provenance {
    std::string policy;  // empty when not applicable
    uint64_t witness_scan_bound = 0;
    bool with_timestamp = true;
};

// Arbitrary-precision values travel as decimal strings; structural counts
// (indices, exponents) stay JSON numbers.
Json int_json(const Int& v);
Int int_from_json(const Json& j);

Json certificate_json(const certifier::IntersectivityCertificate& cert);
certifier::IntersectivityCertificate certificate_from_json(const Json& j);

Json report_json(const minimality::MinimalityReport& report);
minimality::MinimalityReport report_from_json(const Json& j);

Json trace_json(const constructor::ConstructionTrace& trace);
Json sweep_json(const oracle::SweepResult& result);
Json density_json(const oracle::DensityEstimate& est);

Json make_document(const std::string& command, Json inputs, Json result, const Provenance& prov);

// Semantic re-validation of an emitted document: certificates and reports
// re-verify through the oracle; sweep and density results re-check against
// fresh scans.  Structural problems raise schema_error.
bool verify_document(const Json& doc);

}  // namespace mip::document
