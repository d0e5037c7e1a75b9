#include "epdyn/report.hpp"

namespace epdyn {

namespace {

template <class T>
Json literals(const std::vector<T>& items) {
  Json out = Json::array();
  for (const auto& item : items) out.push_back(item.literal());
  return out;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json law_json(const LawVerdict& v) { return Json{{"pass", v.pass}, {"witness", literals(v.witness)}}; }

}  // namespace

Json exponent_json(const Exponent& e) { return optional_json(e); }

Json to_json(const GapCertificate& c) {
  Json j{{"syndetic", c.bound.has_value()}};
  if (c.bound)
    j["gap"] = *c.bound;
  else
    j["misses_from"] = c.misses_from;
  return j;
}

Json to_json(const Algebra& a) {
  return Json{{"downward", a.downward_closed()},
              {"generators", literals(a.generators())},
              {"size", a.size()},
              {"atoms", literals(a.atoms())},
              {"members", literals(a.members())}};
}

Json to_json(const RecurrenceCertificate& c) {
  Json j{{"uniformly_recurrent", c.uniformly_recurrent}, {"checked_up_to", c.checked_up_to}};
  if (c.uniformly_recurrent) {
    Json gaps = Json::array();
    for (const auto& g : c.gaps) gaps.push_back(Json{{"resolution", g.resolution}, {"max_return_gap", g.max_return_gap}});
    j["gaps"] = std::move(gaps);
  } else {
    j["refuting_resolution"] = optional_json(c.refuting_resolution);
    j["return_times"] = c.return_times;
    j["witness_word"] = c.witness_word;
  }
  return j;
}

Json to_json(const ProximalityCertificate& c) {
  return Json{{"proximal", c.proximal},
              {"asymptotic_from", c.asymptotic_from},
              {"separation_exponent", optional_json(c.separation_exponent)}};
}

Json to_json(const IpConstructionCertificate& c) {
  const auto failure = certificate_failure(c);
  return Json{{"generator", c.generator.literal()},
              {"terms", c.generator.head()},
              {"source", c.source.literal()},
              {"target", c.target.literal()},
              {"neighborhoods", literals(c.neighborhoods)},
              {"verified", !failure.has_value()},
              {"failure", optional_json(failure)}};
}

Json to_json(const IpLimitVerdict& v) {
  Json j{{"pass", v.pass}, {"bounded", true}, {"offset", optional_json(v.offset)}};
  j["limit"] = v.limit ? Json(v.limit->literal()) : Json(nullptr);
  if (v.counterexample) {
    const auto& c = *v.counterexample;
    j["counterexample"] = Json{{"reference_sum", c.reference_sum},
                               {"sum", c.sum},
                               {"indices", c.indices},
                               {"exponent", exponent_json(c.exponent)}};
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

Json to_json(const SearchResult& r) {
  return Json{{"witness", optional_json(r.witness)}, {"bound", r.bound}, {"exhausted", r.exhausted()}};
}

Json to_json(const PipelineResult& r) {
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts)
    verdicts.push_back(Json{{"coloring", v.coloring},
                            {"homogeneous", v.homogeneous},
                            {"color", optional_json(v.color)},
                            {"failing_sum", optional_json(v.failing_sum)}});
  return Json{{"point", r.point.literal()},
              {"solution", r.solution.literal()},
              {"generator", r.certificate.generator.literal()},
              {"terms", r.terms},
              {"colorings", std::move(verdicts)},
              {"all_pass", r.all_homogeneous()}};
}

Json to_json(const MembershipCertificate& c) {
  Json j{{"member", c.member}};
  if (!c.member) {
    j["witness_sum"] = optional_json(c.witness_sum);
    j["witness_indices"] = c.witness_indices;
  }
  j["tail"] = c.tail;
  j["modulus"] = c.modulus;
  j["tail_residues"] = c.tail_residues;
  j["closure"] = c.closure;
  return j;
}

Json to_json(const FilterReport& r) {
  Json members = Json::array();
  for (const auto& m : r.members)
    members.push_back(Json{{"set", m.set.literal()},
                           {"dset", m.dset.literal()},
                           {"idempotent", m.idempotent},
                           {"syndetic_gap", optional_json(m.gap)},
                           {"hirst_witness", optional_json(m.hirst)},
                           {"pass", m.pass()}});
  return Json{{"all_pass", r.all_pass()},
              {"generator", r.generator},
              {"algebra_size", r.algebra_size},
              {"member_count", r.members.size()},
              {"laws",
               Json{{"upward_closure", law_json(r.upward_closure)},
                    {"intersection", law_json(r.intersection)},
                    {"non_principal", law_json(r.non_principal)},
                    {"dichotomy", law_json(r.dichotomy)}}},
              {"members", std::move(members)}};
}

Json to_json(const BuiltFilter& f) {
  return Json{{"generator", f.filter.generator().literal()},
              {"scope", literals(f.filter.scope().members())},
              {"point", f.point.literal()},
              {"solution", f.solution.literal()},
              {"certificate", to_json(f.certificate)},
              {"report", to_json(f.report)},
              {"all_pass", f.report.all_pass()}};
}

Json to_json(const ExtendedFilter& f) {
  Json checks = Json::array();
  for (const auto& c : f.refinement)
    checks.push_back(Json{{"set", c.set.literal()}, {"before", c.before}, {"after", c.after}});
  return Json{{"generator", f.filter.generator().literal()},
              {"scope", literals(f.filter.scope().members())},
              {"point", f.point.literal()},
              {"solution", f.solution.literal()},
              {"certificate", to_json(f.certificate)},
              {"report", to_json(f.report)},
              {"refinement", Json{{"agrees", f.agrees()}, {"checks", std::move(checks)}}},
              {"all_pass", f.report.all_pass() && f.agrees()}};
}

Json to_json(const CentralReport& r) {
  Json search = to_json(r.ip_search);
  search["terms"] = kCentralSearchTerms;
  return Json{{"syndetic", to_json(r.syndetic)},
              {"ip", Json{{"holds", r.ip}, {"exact", true}, {"search", std::move(search)}}},
              {"filter", Json{{"member", r.filter_member}, {"generator", r.filter_generator}}}};
}

}  // namespace epdyn
