// divfield: batch front-end over the division-field library.
//
//   divfield verify  --roots 0,1,10 [--mode degree3] [--checks identities,torsion] [--out r.json]
//   divfield tower   --roots 0,1,2,5 --mode degree4
//   divfield torsion --roots 0,1,10 --format json
//   divfield group
//   divfield verify  --job job.json      (or --job - for stdin)

#include "divfield/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>

namespace {

using divfield::Json;

struct Common {
  std::string mode = "degree3";
  std::vector<std::string> roots;
  std::vector<std::string> checks;
  std::string out;
  std::string format = "text";
  std::string job;
};

void add_common(CLI::App* cmd, Common& c, bool with_checks) {
  cmd->add_option("--mode", c.mode, "degree3 or degree4")->check(CLI::IsMember({"degree3", "degree4"}));
  cmd->add_option("--roots", c.roots, "comma-separated rationals p/q (use --roots=-1,2,3 for a leading minus)")
      ->delimiter(',');
  if (with_checks)
    cmd->add_option("--checks", c.checks, "comma-separated subset of the checks")->delimiter(',');
  cmd->add_option("--out", c.out, "write the JSON report here");
  cmd->add_option("--format", c.format, "stdout format")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--job", c.job, "JSON job file, '-' for stdin");
}

divfield::JobSpec make_job(const Common& c) {
  divfield::JobSpec job;
  if (!c.job.empty()) {
    std::string text;
    if (c.job == "-") {
      text.assign(std::istreambuf_iterator<char>(std::cin), {});
    } else {
      std::ifstream in(c.job);
      if (!in) throw divfield::PipelineError("io", "cannot read " + c.job);
      text.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
      job = divfield::JobSpec::from_json(Json::parse(text));
    } catch (const Json::exception& e) {
      throw divfield::PipelineError("parse", e.what());
    } catch (const std::exception& e) {
      throw divfield::PipelineError("parse", e.what());
    }
  }
  try {
    if (c.job.empty() || !c.roots.empty()) {
      job.mode = divfield::parse_mode(c.mode);
      job.roots.clear();
      for (const auto& r : c.roots) job.roots.push_back(divfield::parse_rational(r));
    }
    if (!c.checks.empty()) job.checks = c.checks;
    if (!c.out.empty()) job.output_path = c.out;
    job.validate();
  } catch (const std::exception& e) {
    throw divfield::PipelineError("parse", e.what());
  }
  return job;
}

void write_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw divfield::PipelineError("io", "cannot write " + path);
  out << j.dump(2) << '\n';
}

void emit(const Common& c, const std::string& out_path, const Json& j, const std::string& text) {
  if (!out_path.empty()) write_file(out_path, j);
  if (c.format == "json") std::cout << j.dump(2) << '\n';
  else std::cout << text;
}

std::string census_text(const Json& t) {
  std::string s = "tower " + t["tower_id"].get<std::string>() + "\n";
  s += "census";
  for (const auto& [k, v] : t["census"].items()) s += " order " + k + ": " + std::to_string(v.get<int>());
  s += "\n";
  for (const auto& p : t["points"]) {
    s += "  [" + std::to_string(p["index"].get<int>()) + "] order " + std::to_string(p["order"].get<int>()) + "  ";
    s += p["x"].is_null() ? std::string("O") : "(" + p["x"].get<std::string>() + ", " + p["y"].get<std::string>() + ")";
    s += "\n";
  }
  return s;
}

std::string tower_text(const Json& t) {
  std::string s = "tower " + t["tower_id"].get<std::string>() + " (dimension " +
                  std::to_string(t["dimension"].get<std::size_t>()) + ")\n";
  for (const auto& l : t["levels"])
    s += "  " + l["label"].get<std::string>() + "^2 = " + l["radicand"].get<std::string>() + "\n";
  for (const auto& c : t["collapsed"]) s += "  " + c.get<std::string>() + " already in the tower\n";
  for (const auto& [k, v] : t["generators"].items()) s += "  " + k + " = " + v.get<std::string>() + "\n";
  return s;
}

std::string group_text(const Json& g) {
  std::string s;
  s += "|Gamma(2)/Gamma(8)| = " + std::to_string(g["gamma2_mod8_order"].get<int>()) + "\n";
  s += "|Gamma(2)'/Gamma(8)| = " + std::to_string(g["gamma2_prime_mod8_order"].get<int>()) + "\n";
  for (const auto& r : g["presentation"]["relations"])
    s += "  " + r["relation"].get<std::string>() + ": " + (r["holds"].get<bool>() ? "holds" : "FAILS") + "\n";
  s += "presented order " + std::to_string(g["presentation"]["presented_order"].get<int>()) + "\n";
  s += "normal closure mod 16 = kernel: " +
       std::string(g["unique_quotient"]["closure_equals_kernel"].get<bool>() ? "yes" : "no") + "\n";
  s += "verdict: " + g["verdict"].get<std::string>() + "\n";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact 4- and 8-division fields of elliptic curves"};
  app.require_subcommand(1);
  Common verify_opts, tower_opts, torsion_opts, group_opts;
  auto* verify = app.add_subcommand("verify", "run the verification pipeline");
  auto* tower = app.add_subcommand("tower", "print the generator tower");
  auto* torsion = app.add_subcommand("torsion", "list the 64 points of E[8]");
  auto* group = app.add_subcommand("group", "congruence-subgroup report");
  add_common(verify, verify_opts, true);
  add_common(tower, tower_opts, false);
  add_common(torsion, torsion_opts, false);
  group->add_option("--out", group_opts.out, "write the JSON report here");
  group->add_option("--format", group_opts.format, "stdout format")->check(CLI::IsMember({"json", "text"}));
  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      const auto job = make_job(verify_opts);
      const auto rep = divfield::run(job);
      emit(verify_opts, job.output_path, rep.to_json(), rep.to_text());
      return rep.pass ? 0 : 1;
    }
    if (*tower) {
      const auto job = make_job(tower_opts);
      const Json j = divfield::dump_tower(job);
      emit(tower_opts, job.output_path, j, tower_text(j));
      return 0;
    }
    if (*torsion) {
      const auto job = make_job(torsion_opts);
      const Json j = divfield::dump_torsion(job);
      emit(torsion_opts, job.output_path, j, census_text(j));
      return 0;
    }
    bool ok = false;
    const Json j = divfield::group_report(&ok);
    emit(group_opts, group_opts.out, j, group_text(j));
    return ok ? 0 : 1;
  } catch (const divfield::PipelineError& e) {
    std::cerr << "error in stage " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
