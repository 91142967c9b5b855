#include "json_report.hpp"

namespace cardcsp::report {

Json number(const Rational& value) {
  return Json{{"exact", to_string(value)}, {"float", static_cast<double>(to_long_double(value))}};
}

Json number(const QuadScalar& value) {
  return Json{{"exact", value.to_string()}, {"float", value.to_double()}};
}

Json assignment(const Assignment& a) { return Json(a.values()); }

Json variables(const std::vector<std::uint32_t>& vars) { return Json(vars); }

Json polynomial(const MultilinearPoly& f) {
  Json terms = Json::array();
  for (const auto& [set, coeff] : f.terms()) {
    terms.push_back(Json{{"set", set}, {"coeff", number(coeff)}});
  }
  return terms;
}

Json kernel_report(const KernelReport& report) {
  const RoundingOutcome& rounding = report.rounding;
  Json out{{"path", report.path},
           {"active_set", variables(rounding.active_set)},
           {"granularity", number(rounding.granularity)},
           {"h", polynomial(rounding.h)},
           {"reduced", polynomial(rounding.reduced)},
           {"offset", number(rounding.offset)},
           {"projection_exact", report.projection_exact}};
  out["blowup"] = rounding.norm_blowup ? number(*rounding.norm_blowup) : Json(nullptr);
  Json check{{"blowup_bound", number(report.blowup_bound)}};
  check["blowup_within_bound"] =
      report.blowup_within_bound ? Json(*report.blowup_within_bound) : Json(nullptr);
  check["h_on_lattice"] = report.h_on_lattice;
  check["kernel_bound"] = number(report.kernel_bound);
  check["kernel_within_bound"] = report.kernel_within_bound;
  out["bound_check"] = check;
  out["warnings"] = report.warnings;
  return out;
}

Json verdict(const Verdict& v) {
  Json out{{"answer", to_string(v.answer)},
           {"yes", v.yes},
           {"branch", to_string(v.branch)},
           {"t", number(v.t)},
           {"avg", number(v.avg)},
           {"variance", number(v.variance)},
           {"threshold", number(v.threshold)}};
  if (v.opt) out["opt"] = number(*v.opt);
  if (v.witness) out["witness"] = assignment(*v.witness);
  if (v.kernel) out["kernel"] = variables(*v.kernel);
  if (v.kernel_report) {
    const KernelReport& r = *v.kernel_report;
    Json rounding{{"path", r.path}, {"projection_exact", r.projection_exact}};
    rounding["blowup"] = r.rounding.norm_blowup ? number(*r.rounding.norm_blowup) : Json(nullptr);
    rounding["h_on_lattice"] = r.h_on_lattice;
    rounding["kernel_bound"] = number(r.kernel_bound);
    out["rounding"] = rounding;
  }
  out["warnings"] = v.warnings;
  return out;
}

Json eigen_summary(const EigenSummary& summary) {
  Json clusters = Json::array();
  for (const auto& c : summary.clusters) {
    clusters.push_back(Json{{"value", c.value},
                            {"multiplicity", c.multiplicity},
                            {"closed_form", c.closed_form},
                            {"gap", c.gap}});
  }
  Json spaces = Json::array();
  for (const auto& s : summary.spaces) {
    spaces.push_back(Json{{"k", s.k},
                          {"dimension", s.dimension},
                          {"closed_form", number(s.closed_form)},
                          {"predicted", s.predicted},
                          {"measured", s.measured}});
  }
  Json out{{"dimension", summary.dimension},
           {"null_dim", summary.null_dim},
           {"clusters", clusters},
           {"spaces", spaces},
           {"residual", summary.residual}};
  if (!summary.nonzero.empty()) {
    out["min_nonzero"] = summary.nonzero.front();
    out["max_nonzero"] = summary.nonzero.back();
  }
  return out;
}

Json document(const char* command, const Json& body) {
  Json out{{"schema", 1}, {"command", command}};
  out.update(body);
  return out;
}

}  // namespace cardcsp::report
