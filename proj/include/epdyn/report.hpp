#pragma once

#include <json.hpp>

#include "epdyn/algebra.hpp"
#include "epdyn/dynamics.hpp"
#include "epdyn/epset.hpp"
#include "epdyn/filters.hpp"
#include "epdyn/ipcore.hpp"

namespace epdyn {

/// Key order is insertion order, so dumps are byte-stable.
using Json = nlohmann::ordered_json;

/// Infinite exponents become null.
Json exponent_json(const Exponent& e);

Json to_json(const GapCertificate& c);
Json to_json(const Algebra& a);
Json to_json(const RecurrenceCertificate& c);
Json to_json(const ProximalityCertificate& c);
Json to_json(const IpConstructionCertificate& c);
Json to_json(const IpLimitVerdict& v);
Json to_json(const SearchResult& r);
Json to_json(const PipelineResult& r);
Json to_json(const MembershipCertificate& c);
Json to_json(const FilterReport& r);
Json to_json(const BuiltFilter& f);
Json to_json(const ExtendedFilter& f);
Json to_json(const CentralReport& r);

}  // namespace epdyn
