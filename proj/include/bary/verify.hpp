#pragma once

// Independent validation of a barycenter result document against its input
// measures: transport-plan structure (one target per measure at each support
// point, targets centered on the support point) and the four dual-potential
// certificate properties.

#include <string>
#include <vector>

#include <json.hpp>

#include "bary/barycenter.hpp"
#include "bary/measure.hpp"
#include "bary/transport.hpp"

namespace bary {

struct VerifyReport {
  bool no_mass_splitting = false;
  bool attainment = false;        // transported pairs maximize their potential piece
  bool upper_bound = false;       // potential sum bounded by the quadratic everywhere
  bool support_equality = false;  // ... with equality on the support
  bool strong_duality = false;    // per-measure dual values meet the primal costs
  std::vector<std::string> violations;

  bool pass() const {
    return no_mass_splitting && attainment && upper_bound && support_equality &&
           strong_duality;
  }
};

template <class T>
VerifyReport verify_result(const MeasureSet<T>& input, const BarycenterResult<T>& r,
                           double tol = 1e-7) {
  VerifyReport rep;
  auto split = check_no_mass_splitting(input, r, tol);
  rep.no_mass_splitting = split.no_splitting && split.means_match;
  if (!split.no_splitting)
    rep.violations.push_back("a support point sends mass to several targets in one measure");
  if (!split.means_match)
    rep.violations.push_back("a support point is not the mean of its transport targets");

  auto cert = certify_potentials(input, r, tol);
  const double allow = tol * cert.scale;
  rep.attainment = cert.attainment_gap <= allow;
  rep.upper_bound = cert.inequality_violation <= allow;
  rep.support_equality = cert.support_equality_gap <= allow;
  rep.strong_duality = cert.duality_gap <= allow;
  if (!rep.attainment)
    rep.violations.push_back("a transported pair misses its potential maximum by " +
                             std::to_string(cert.attainment_gap));
  if (!rep.upper_bound)
    rep.violations.push_back("the potential sum exceeds its quadratic bound by " +
                             std::to_string(cert.inequality_violation));
  if (!rep.support_equality)
    rep.violations.push_back("a support point misses the equality case by " +
                             std::to_string(cert.support_equality_gap));
  if (!rep.strong_duality)
    rep.violations.push_back("dual and primal objectives differ by " +
                             std::to_string(cert.duality_gap));
  return rep;
}

inline nlohmann::json report_to_json(const VerifyReport& rep) {
  nlohmann::json j;
  j["no_mass_splitting"] = rep.no_mass_splitting;
  j["theorem2"] = {{"i", rep.attainment},
                   {"ii", rep.upper_bound},
                   {"iii", rep.support_equality},
                   {"iv", rep.strong_duality}};
  j["violations"] = rep.violations;
  j["pass"] = rep.pass();
  return j;
}

}  // namespace bary
