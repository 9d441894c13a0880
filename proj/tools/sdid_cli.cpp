// Copyright 2026 The sdid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: check | smooth | condense | eval | vpi | vpi-batch | oracle.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "sdid/generator.hpp"
#include "sdid/sdid.hpp"

namespace {

using namespace sdid;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Args {
  std::string input;
  std::optional<std::uint64_t> seed;
  std::string c;
  std::string d_s;
  std::string cache;
  std::string queries;
  std::string out;
  std::string format = "json";
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

InfluenceDiagram load_diagram(const Args& a) {
  if (a.seed) {
    auto g = random_sdid(*a.seed);
    if (!g) throw Error(ErrorCode::kSchema, "generator found no diagram for this seed");
    return *g;
  }
  if (a.input.empty()) throw UsageError("an input file or --seed is required");
  return parse_diagram(read_file(a.input));
}

void emit(const Args& a, const std::string& text) {
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file(a.out, text);
  }
}

std::string verdict_line(const InfluenceDiagram& g) {
  bool sdid = is_stepwise_decomposable(g);
  std::string line = std::string("SDID: ") + (sdid ? "yes" : "no");
  if (!sdid) return line + "\n";
  auto rough = non_smooth_decisions(g);
  if (rough.empty()) return line + ", smooth: yes\n";
  line += ", smooth: no (";
  for (std::size_t i = 0; i < rough.size(); ++i) {
    if (i) line += ", ";
    line += g.id(rough[i]);
  }
  return line + ")\n";
}

int run_check(const Args& a) {
  InfluenceDiagram g = load_diagram(a);
  auto report = validate(g);
  if (!report.ok()) {
    std::cout << "valid: no\n";
    for (const auto& v : report.violations) {
      std::cout << v.rule << " [" << v.node << "]: " << v.message << "\n";
    }
    return kFailure;
  }
  std::cout << "valid: yes\n";
  std::vector<NodeIndex> order;
  try {
    order = decision_ordering(g);
  } catch (const Error& e) {
    std::cout << "regular: no (" << e.what() << ")\n";
    return kFailure;
  }
  std::cout << "regular: yes (";
  for (std::size_t i = 0; i < order.size(); ++i) std::cout << (i ? ", " : "") << g.id(order[i]);
  std::cout << ")\n" << verdict_line(g);
  return kOk;
}

InfluenceDiagram smoothed(const InfluenceDiagram& g) {
  return is_smooth(g) ? g : smooth(g);
}

int run_smooth(const Args& a) {
  emit(a, serialize_diagram(smooth(load_diagram(a))));
  return kOk;
}

int run_condense(const Args& a) {
  emit(a, serialize_condensation(condense(smoothed(load_diagram(a)))));
  return kOk;
}

std::string solution_text(const Args& a, const std::vector<Node>& nodes, double value,
                          const Policy& p) {
  if (a.format == "tsv") {
    std::string out = "value\t" + format_tsv_real(value) + "\n";
    for (std::size_t i = 0; i < p.functions.size(); ++i) {
      const auto& f = p.functions[i];
      out += std::to_string(i + 1) + "\t" + nodes.at(f.decision).id + "\t";
      for (std::size_t r = 0; r < f.table.size(); ++r) {
        out += (r ? "," : "") + nodes.at(f.decision).frame.at(f.table[r]);
      }
      out += "\n";
    }
    return out;
  }
  Json j;
  j["value"] = value;
  j["policy"] = policy_to_json(nodes, p);
  return to_text(j);
}

int run_eval(const Args& a) {
  Condensation c;
  if (!a.seed && !a.input.empty()) {
    Json j = parse_json_text(read_file(a.input));
    if (j.is_object() && j.contains("stages")) {
      c = condensation_from_json(j);
    } else {
      c = condense(smoothed(diagram_from_json(j)));
    }
  } else {
    c = condense(smoothed(load_diagram(a)));
  }
  auto sol = backward_induction(c);
  emit(a, solution_text(a, c.nodes, sol.value, to_diagram_policy(c, sol.policy)));
  return kOk;
}

int run_oracle(const Args& a) {
  InfluenceDiagram g = load_diagram(a);
  auto best = brute_force_optimal(g);
  emit(a, solution_text(a, g.nodes(), best.value, best.policy));
  return kOk;
}

// Loads the cache into the engine, or writes the base condensation to it when
// the file does not exist yet.
void attach_cache(const Args& a, VpiEngine& engine) {
  if (a.cache.empty()) return;
  if (std::filesystem::exists(a.cache)) {
    engine.preload(parse_condensation(read_file(a.cache)));
  } else {
    write_file(a.cache, serialize_condensation(engine.base_condensation()));
  }
}

std::string reports_text(const Args& a, const std::vector<VpiReport>& reports, bool single) {
  if (a.format == "tsv") return reports_to_tsv(reports);
  if (single) return to_text(report_to_json(reports.front()));
  Json out = Json::array();
  for (const auto& r : reports) out.push_back(report_to_json(r));
  return to_text(out);
}

int run_vpi(const Args& a) {
  if (a.c.empty() || a.d_s.empty()) throw UsageError("vpi needs --c and --ds");
  VpiEngine engine(load_diagram(a));
  attach_cache(a, engine);
  std::vector<VpiReport> reports{engine.run(VpiQuery{a.c, a.d_s})};
  std::cout << reports_text(a, reports, true);
  return kOk;
}

int run_vpi_batch(const Args& a) {
  if (a.queries.empty()) throw UsageError("vpi-batch needs --queries");
  VpiEngine engine(load_diagram(a));
  attach_cache(a, engine);
  auto queries = queries_from_json(parse_json_text(read_file(a.queries)));
  std::vector<VpiReport> reports;
  for (const auto& q : queries) reports.push_back(engine.run(q));
  std::cout << reports_text(a, reports, false);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Influence diagram evaluation through condensation, with VPI queries."};
  app.require_subcommand(1, 1);
  Args a;

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", a.input, "diagram file (JSON)");
    sub->add_option("--seed", a.seed, "use the bundled random generator instead of a file");
    sub->add_option("--format", a.format, "output format")->check(CLI::IsMember({"json", "tsv"}));
    return sub;
  };
  auto* check = common(app.add_subcommand("check", "validate and report SDID/smoothness"));
  auto* smooth_cmd = common(app.add_subcommand("smooth", "write the smoothed diagram"));
  smooth_cmd->add_option("--out", a.out, "output file (default: stdout)");
  auto* condense_cmd = common(app.add_subcommand("condense", "write the condensation"));
  condense_cmd->add_option("--out", a.out, "output file (default: stdout)");
  auto* eval = common(app.add_subcommand("eval", "optimal value and policy"));
  eval->add_option("--out", a.out, "output file (default: stdout)");
  auto* vpi_cmd = common(app.add_subcommand("vpi", "value of perfect information for one query"));
  vpi_cmd->add_option("--c", a.c, "observed random node");
  vpi_cmd->add_option("--ds", a.d_s, "first decision that observes it");
  vpi_cmd->add_option("--cache", a.cache, "condensation cache file");
  auto* batch = common(app.add_subcommand("vpi-batch", "VPI for a list of queries"));
  batch->add_option("--queries", a.queries, "JSON list of {c, d_s}");
  batch->add_option("--cache", a.cache, "condensation cache file");
  auto* oracle = common(app.add_subcommand("oracle", "brute-force optimal value and policy"));
  oracle->add_option("--out", a.out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (check->parsed()) return run_check(a);
    if (smooth_cmd->parsed()) return run_smooth(a);
    if (condense_cmd->parsed()) return run_condense(a);
    if (eval->parsed()) return run_eval(a);
    if (vpi_cmd->parsed()) return run_vpi(a);
    if (batch->parsed()) return run_vpi_batch(a);
    if (oracle->parsed()) return run_oracle(a);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
