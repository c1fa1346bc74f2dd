#pragma once

// Batch verification pipeline and its JSON/text reports.

#include "divfield/congruence.hpp"
#include "divfield/curve.hpp"
#include "divfield/galois.hpp"
#include "divfield/towergen.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace divfield {

using Json = nlohmann::ordered_json;

/// An error tagged with the pipeline stage that raised it.
struct PipelineError : std::runtime_error {
  PipelineError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage(std::move(stage)) {}
  std::string stage;
};

inline const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> c = {"identities", "torsion",      "theorem1a",
                                             "theorem1b",  "galois_group", "congruence"};
  return c;
}

struct JobSpec {
  CurveMode mode = CurveMode::degree3;
  std::vector<Rational> roots;
  std::vector<std::string> checks = all_checks();
  std::string output_path;

  CurveInput curve() const { return {mode, roots}; }

  bool wants(std::string_view check) const {
    return std::find(checks.begin(), checks.end(), check) != checks.end();
  }

  void validate() const {
    if (checks.empty()) throw ParseError("no checks requested");
    for (const auto& c : checks)
      if (std::find(all_checks().begin(), all_checks().end(), c) == all_checks().end())
        throw ParseError("unknown check '" + c + "'");
    curve().validate();
  }

  /// {"mode": "degree3", "roots": ["0", "1", "10"], "checks": [...], "output_path": "..."}
  /// Roots may also be JSON integers.
  static JobSpec from_json(const Json& j) {
    JobSpec s;
    if (!j.is_object()) throw ParseError("job must be a JSON object");
    if (j.contains("mode")) s.mode = parse_mode(j.at("mode").get<std::string>());
    if (!j.contains("roots") || !j.at("roots").is_array()) throw ParseError("job needs a roots array");
    for (const auto& r : j.at("roots")) {
      if (r.is_string()) s.roots.push_back(parse_rational(r.get<std::string>()));
      else if (r.is_number_integer()) s.roots.push_back(parse_rational(std::to_string(r.get<long long>())));
      else throw ParseError("roots must be strings \"p/q\" or integers");
    }
    if (j.contains("checks")) s.checks = j.at("checks").get<std::vector<std::string>>();
    if (j.contains("output_path")) s.output_path = j.at("output_path").get<std::string>();
    return s;
  }
};

inline Json rationals_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(to_string(r));
  return a;
}

inline Json input_json(const CurveInput& in) {
  return Json{{"mode", to_string(in.mode)}, {"roots", rationals_json(in.roots)}};
}

inline Json tower_json(const GeneratorSet& g) {
  Json j;
  j["tower_id"] = g.tower.id();
  j["dimension"] = g.tower.dimension();
  j["cubic_roots"] = rationals_json({g.cubic.begin(), g.cubic.end()});
  if (g.gamma) j["gamma"] = rationals_json({g.gamma->begin(), g.gamma->end()});
  Json levels = Json::array();
  for (std::size_t k = 0; k < g.tower.depth(); ++k) {
    const Tower below = g.tower.prefix(k);
    levels.push_back({{"label", g.tower.label(k)},
                      {"radicand", to_string(TowerElement(below, g.tower.radicand_coeffs(k)))}});
  }
  j["levels"] = levels;
  j["collapsed"] = g.collapsed;
  Json gens;
  for (const auto& name : GeneratorSet::generator_names()) gens[name] = to_string(g.element(name));
  for (int i = 0; i < 3; ++i) gens["B" + std::to_string(i + 1) + "'"] = to_string(g.Bp[i]);
  j["generators"] = gens;
  return j;
}

inline Json torsion_json(const Torsion& t) {
  const auto c = t.census();
  Json j;
  j["census"] = {{"1", c[0]}, {"2", c[1]}, {"4", c[2]}, {"8", c[3]}};
  j["max_scratch_levels"] = t.max_scratch_levels;
  Json pts = Json::array();
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    const Point& p = t.points[i];
    Json e{{"index", i}, {"order", t.orders[i]}};
    e["x"] = p.infinity ? Json(nullptr) : Json(to_string(p.x));
    e["y"] = p.infinity ? Json(nullptr) : Json(to_string(p.y));
    pts.push_back(e);
  }
  j["points"] = pts;
  return j;
}

inline Json relations_json(const std::vector<RelationVerdict>& rs) {
  Json j = Json::array();
  for (const auto& r : rs) j.push_back({{"relation", r.name}, {"holds", r.holds}});
  return j;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline Json mat_json(const Mat2& m) { return {m.a(), m.b(), m.c(), m.d()}; }

/// The congruence-subgroup suite; independent of any curve.
inline Json group_report(bool* pass = nullptr) {
  const auto gs = check_group_structure();
  const auto g2p = gamma2_prime(3);
  const auto pres = check_presentation(g2p, sigma_tilde(3), tau_tilde(3));
  const auto uq = unique_quotient_check();
  const auto H = congruence_image(3, 1);
  bool ok = gs.gamma2_order == 64 && gs.gamma2_prime_order == 32 && gs.minus_one_outside_prime &&
            gs.direct_product && pres.all_pass() && uq.all_pass();
  Json layers = Json::array();
  for (unsigned n : {1u, 2u}) {
    const auto l = check_layer(n);
    ok = ok && l.order == 8 && l.elementary_abelian;
    layers.push_back({{"quotient", "Gamma(" + std::to_string(1u << n) + ")/Gamma(" +
                                       std::to_string(1u << (n + 1)) + ")"},
                      {"order", l.order},
                      {"elementary_abelian", l.elementary_abelian}});
  }
  Json j;
  j["gamma2_mod8_order"] = gs.gamma2_order;
  j["gamma2_prime_mod8_order"] = gs.gamma2_prime_order;
  j["minus_one_outside_gamma2_prime"] = gs.minus_one_outside_prime;
  j["direct_product"] = gs.direct_product;
  j["layers"] = layers;
  j["presentation"] = {{"relations", relations_json(pres.relations)},
                       {"generates_gamma2_prime", pres.generates},
                       {"presented_order", pres.presented_order},
                       {"commutator_subgroup_order", pres.commutator_subgroup_order},
                       {"commutator_element_order_two", pres.commutator_element_order_two},
                       {"abelianization_z4_z4", pres.abelianization_z4_z4}};
  j["unique_quotient"] = {{"h_order_mod16", uq.h_order},
                          {"generated_by_sigma_tau", uq.generated_by_sigma_tau},
                          {"normal_closure_order", uq.normal_closure_order},
                          {"kernel_order", uq.kernel_order},
                          {"closure_equals_kernel", uq.closure_equals_kernel},
                          {"center_elementary_abelian", uq.center_elementary_abelian},
                          {"prime_center_elementary_abelian", uq.prime_center_elementary_abelian},
                          {"gamma2_not_two_generated", uq.gamma2_not_two_generated}};
  j["gamma2_mod8_table_hash"] = hex64(H.group.table_hash());
  j["generators"] = {{"sigma", mat_json(sigma_tilde(3))}, {"tau", mat_json(tau_tilde(3))},
                     {"minus_one", mat_json(-Mat2::identity(3))}};
  j["verdict"] = ok ? "pass" : "fail";
  if (pass) *pass = ok;
  return j;
}

struct StageResult {
  std::string name;
  std::string verdict;  // pass, fail or not_applicable
  Json detail;
  double seconds = 0;
};

struct Report {
  Json input;
  Json tower;
  std::vector<StageResult> stages;
  Json degeneracy;
  bool pass = false;

  /// Timings are left out so the JSON is byte-stable.
  Json to_json() const {
    Json j;
    j["input"] = input;
    if (!tower.is_null()) j["tower"] = tower;
    Json checks;
    for (const auto& s : stages) {
      Json c{{"verdict", s.verdict}};
      for (const auto& [k, v] : s.detail.items()) c[k] = v;
      checks[s.name] = c;
    }
    j["checks"] = checks;
    if (!degeneracy.is_null()) j["degeneracy"] = degeneracy;
    j["verdict"] = pass ? "pass" : "fail";
    return j;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "curve " << input["mode"].get<std::string>() << " roots";
    for (const auto& r : input["roots"]) os << ' ' << r.get<std::string>();
    os << '\n';
    if (!tower.is_null())
      os << "tower " << tower["tower_id"].get<std::string>() << " (dimension "
         << tower["dimension"].get<std::size_t>() << ")\n";
    for (const auto& s : stages) {
      char t[32];
      std::snprintf(t, sizeof t, "%.3f", s.seconds);
      os << "  " << s.name << ": " << s.verdict << "  [" << t << " s]";
      if (s.detail.contains("summary")) os << "  " << s.detail["summary"].get<std::string>();
      os << '\n';
    }
    os << "verdict: " << (pass ? "pass" : "fail") << '\n';
    return os.str();
  }
};

namespace detail {
template <class F>
auto staged(const std::string& stage, F&& f) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what());
  }
}

inline double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace detail

inline Report run(const JobSpec& job) {
  detail::staged("parse", [&] {
    job.validate();
    return 0;
  });
  Report rep;
  rep.input = input_json(job.curve());
  auto verdict = [](bool ok) { return std::string(ok ? "pass" : "fail"); };
  using clock = std::chrono::steady_clock;

  const bool needs_curve = job.wants("identities") || job.wants("torsion") || job.wants("theorem1a") ||
                           job.wants("theorem1b") || job.wants("galois_group");
  std::optional<GeneratorSet> g;
  std::optional<Curve> curve;
  std::optional<Torsion> tor;
  double torsion_seconds = 0;
  if (needs_curve) {
    g = detail::staged("towergen", [&] { return build_tower(job.curve()); });
    curve.emplace(*g);
    rep.tower = tower_json(*g);
  }
  auto need_torsion = [&] {
    if (!tor) {
      const auto t0 = clock::now();
      tor = detail::staged("torsion", [&] { return enumerate_torsion(*curve); });
      torsion_seconds = detail::since(t0);
    }
  };

  std::optional<GaloisReport> galois;
  for (const auto& name : all_checks()) {
    if (!job.wants(name)) continue;
    StageResult s{name, "", Json::object(), 0};
    const auto t0 = clock::now();
    detail::staged(name, [&] {
      if (name == "identities") {
        const auto r = verify_identities(*g);
        Json failures = Json::array(), skipped = Json::array();
        for (const auto& c : r.checks) {
          const std::string id = c.name + (c.index ? " [i=" + std::to_string(c.index) + "]" : "");
          if (c.skipped) skipped.push_back(id);
          else if (!c.pass) failures.push_back(id);
        }
        s.verdict = verdict(r.all_pass());
        s.detail = {{"checked", r.count(false)}, {"skipped", skipped}, {"failures", failures}};
        s.detail["summary"] = std::to_string(r.count(false)) + " identities, " +
                              std::to_string(r.count(true)) + " skipped";
      } else if (name == "torsion") {
        need_torsion();
        const auto c = tor->census();
        const bool ok = tor->points.size() == 64 && c == std::vector<int>{1, 3, 12, 48};
        s.verdict = verdict(ok);
        s.detail = {{"points", tor->points.size()},
                    {"census", {{"1", c[0]}, {"2", c[1]}, {"4", c[2]}, {"8", c[3]}}},
                    {"max_scratch_levels", tor->max_scratch_levels}};
        s.detail["summary"] = "census 1/" + std::to_string(c[1]) + "/" + std::to_string(c[2]) + "/" +
                              std::to_string(c[3]);
      } else if (name == "theorem1a") {
        need_torsion();
        const auto r = check_division_field(*g, *tor);
        Json members;
        for (const auto& [k, v] : r.members) members[k] = v;
        s.verdict = verdict(r.pass());
        s.detail = {{"coordinates_in_tower", r.coordinates_in_tower},
                    {"max_scratch_levels", r.max_scratch_levels},
                    {"tower_dimension", r.tower_dimension},
                    {"closure_dimension", r.closure_dimension},
                    {"members", members}};
        s.detail["summary"] = "closure dimension " + std::to_string(r.closure_dimension) + " of " +
                              std::to_string(r.tower_dimension);
      } else if (name == "theorem1b") {
        need_torsion();
        const auto r = check_minus_one_action(*g, *curve, *tor);
        s.verdict = verdict(r.pass());
        s.detail = {{"literal_mu_defined", r.literal_mu_defined}};
        if (r.literal_mu_defined) {
          s.detail["mu_negates_e8"] = r.literal_mu_negates;
          s.detail["summary"] = std::string("mu(Q) = -Q on E[8]: ") + (r.literal_mu_negates ? "yes" : "no");
        } else {
          s.detail["literal_mu_error"] = r.literal_mu_error;
          s.detail["automorphisms_enumerated"] = r.enumerated;
          s.detail["automorphisms"] = r.automorphisms;
          s.detail["acting_as_minus_one"] = r.acting_as_minus_one;
          s.detail["minus_one_elements_flip_generators"] = r.minus_one_elements_flip_generators;
          s.detail["summary"] = "mu undefined; " + std::to_string(r.acting_as_minus_one) + " of " +
                                std::to_string(r.automorphisms) + " automorphisms act as -1";
        }
      } else if (name == "galois_group") {
        if (job.wants("torsion") || job.wants("theorem1a") || job.wants("theorem1b")) need_torsion();
        galois = check_galois_group(*g, tor ? &*curve : nullptr, tor ? &*tor : nullptr);
        const auto& r = *galois;
        if (!r.constructed) {
          s.verdict = "not_applicable";
          s.detail = {{"reason", r.error}};
          s.detail["summary"] = "sigma, tau, mu are not automorphisms of this tower";
        } else {
          Json patterns = Json::array();
          for (const auto& p : r.sign_patterns)
            patterns.push_back({{"element", p.element},
                                {"b_signs", p.b_signs},
                                {"expected", p.expected},
                                {"fixes_a_and_zeta8", p.fixes_a_and_zeta8}});
          s.verdict = verdict(r.all_pass());
          s.detail = {{"order_sigma_tau", r.order_sigma_tau},
                      {"order_sigma_tau_mu", r.order_sigma_tau_mu},
                      {"relations", relations_json(r.relations)},
                      {"sign_patterns", patterns},
                      {"mu_central_involution", r.mu_central_involution},
                      {"mu_outside_sigma_tau", r.mu_outside_sigma_tau},
                      {"isomorphism",
                       {{"ok", r.isomorphism.ok},
                        {"witness", r.isomorphism.witness},
                        {"generator_images",
                         {{"sigma", mat_json(sigma_tilde(3))},
                          {"tau", mat_json(tau_tilde(3))},
                          {"mu", mat_json(-Mat2::identity(3))}}},
                        {"table_hash", hex64(r.table_hash)}}}};
          if (r.transpose_swap) s.detail["transpose_swap_isomorphism"] = *r.transpose_swap;
          if (r.certificates_checked)
            s.detail["e8_certificates"] = {{"in_gamma2", r.certificates_in_gamma2},
                                           {"faithful", r.certificates_faithful},
                                           {"homomorphism", r.certificate_homomorphism}};
          s.detail["summary"] = "|<sigma,tau>| = " + std::to_string(r.order_sigma_tau) +
                                ", |<sigma,tau,mu>| = " + std::to_string(r.order_sigma_tau_mu);
        }
      } else if (name == "congruence") {
        bool ok = false;
        s.detail = group_report(&ok);
        s.detail.erase("verdict");
        s.verdict = verdict(ok);
        s.detail["summary"] = "presented order " +
                              std::to_string(s.detail["presentation"]["presented_order"].get<std::size_t>());
      }
      return 0;
    });
    s.seconds = detail::since(t0);
    rep.stages.push_back(std::move(s));
  }
  if (torsion_seconds > 0)
    for (auto& s : rep.stages)
      if (s.name == "torsion") s.seconds = std::max(s.seconds, torsion_seconds);

  if (g) {
    rep.degeneracy = {{"collapsed_generators", g->collapsed},
                      {"full_dimension", g->tower.dimension() == 256}};
    if (galois) rep.degeneracy["galois_generators_defined"] = galois->constructed;
  }
  rep.pass = true;
  for (const auto& s : rep.stages) rep.pass = rep.pass && s.verdict != "fail";
  return rep;
}

inline Json dump_tower(const JobSpec& job) {
  const auto g = detail::staged("towergen", [&] {
    job.curve().validate();
    return build_tower(job.curve());
  });
  Json j{{"input", input_json(job.curve())}};
  const Json body = tower_json(g);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

inline Json dump_torsion(const JobSpec& job) {
  const auto g = detail::staged("towergen", [&] {
    job.curve().validate();
    return build_tower(job.curve());
  });
  const Curve c(g);
  const auto t = detail::staged("torsion", [&] { return enumerate_torsion(c); });
  Json j{{"input", input_json(job.curve())}, {"tower_id", g.tower.id()}};
  const Json body = torsion_json(t);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

}  // namespace divfield
