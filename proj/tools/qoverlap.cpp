// Copyright 2026 The qoverlap Authors
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

// qoverlap command-line tool: distance, derive, sweep.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qoverlap/qoverlap.hpp"
#include "qoverlap/state_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qoverlap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResidual = 3;

struct Common {
  std::uint64_t seed = 20260101;
  std::uint64_t derive_seed = 1;
  unsigned threads = 1;
  std::string out;
  std::string format = "text";
  std::string tables;
};

/// Report sink: always stdout, and a copy in `path` when one is given.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ValidationError(path + ": cannot open for writing");
    }
  }
  Output(const Output&) = delete;
  Output& operator=(const Output&) = delete;
  ~Output() {
    std::cout << buf_.str() << std::flush;
    if (file_.is_open()) file_ << buf_.str();
  }
  std::ostream& stream() { return buf_; }

 private:
  std::ofstream file_;
  std::ostringstream buf_;
};

WorkflowNeeds needs_from(const std::string& measures) {
  WorkflowNeeds n{false, false, false, false};
  std::stringstream ss(measures);
  std::string m;
  while (std::getline(ss, m, ',')) {
    if (m == "H") n.h = true;
    else if (m == "G") n.g = true;
    else if (m == "E") n.e = true;
    else if (m == "T") n.t = true;
    else throw CLI::ValidationError("--measures", "unknown measure '" + m + "'");
  }
  return n;
}

/// Loads tables written by `derive`, or derives them in-process.
WorkflowFits obtain_fits(const Common& c, WorkflowNeeds needs) {
  if (c.tables.empty()) {
    return derive_workflows(build_basis(4), c.derive_seed, c.threads, needs);
  }
  WorkflowFits f;
  const auto load = [&](const std::string& name, std::optional<CoefficientVector>& slot) {
    const fs::path p = fs::path(c.tables) / (name + ".tsv");
    std::ifstream in(p);
    if (!in) throw ValidationError(p.string() + ": missing coefficient table");
    slot = read_table(in);
  };
  if (needs.h || needs.t) load("pi2", f.pi2);
  if (needs.t) {
    load("pi3", f.pi3);
    load("pi4", f.pi4);
  }
  if (needs.e) load("o2", f.o2);
  if (needs.g) {
    load("o11", f.o11);
    load("o22", f.o22);
  }
  if (needs.g || needs.e) load("o12", f.o12);
  return f;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

int cmd_distance(const Common& c, const std::string& p1, const std::string& p2,
                 std::uint64_t simulate, const std::string& measures) {
  const auto s1 = load_state(p1);
  const auto s2 = load_state(p2);
  const auto oracle = distance_set(s1.state, s2.state);
  const auto overlaps = overlap_set(s1.state, s2.state);
  const auto mom = moments(overlaps);
  const auto formula = distances_from_overlaps(overlaps, mom);
  const auto audit = oracle.audit();

  std::optional<EstimationReport> est;
  if (simulate > 0) {
    const auto needs = needs_from(measures);
    const auto fits = obtain_fits(c, needs);
    const auto wf = to_workflow(fits);
    const auto plan = plan_configurations(wf.required_graphs());
    EstimationOptions eo;
    eo.threads = c.threads;
    est = estimate_distances(plan, wf, s1.state, s2.state, simulate, c.seed, eo);
  }

  struct Row {
    std::string name;
    std::optional<double> oracle, formula;
  };
  const std::vector<Row> rows{
      {"F", oracle.fidelity, std::nullopt},
      {"sqrtF", oracle.sqrt_fidelity, std::nullopt},
      {"D_B^2", oracle.bures_sq, std::nullopt},
      {"T", oracle.trace_distance, formula.trace_distance},
      {"H", oracle.hilbert_schmidt, formula.hilbert_schmidt},
      {"E", oracle.subfidelity, formula.subfidelity},
      {"G", oracle.superfidelity, formula.superfidelity},
      {"S_L1", oracle.linear_entropy_1, std::nullopt},
      {"S_L2", oracle.linear_entropy_2, std::nullopt},
  };

  Output out(c.out);
  auto& os = out.stream();
  if (c.format == "json") {
    json j;
    j["version"] = version();
    j["seed"] = c.seed;
    j["state1"] = {{"path", p1}, {"label", s1.label}};
    j["state2"] = {{"path", p2}, {"label", s2.label}};
    json m = json::array();
    for (const auto& r : rows) {
      json e{{"measure", r.name}};
      e["oracle"] = r.oracle ? json(*r.oracle) : json(nullptr);
      e["formula"] = r.formula ? json(*r.formula) : json(nullptr);
      if (est) {
        if (const auto* x = est->find(r.name)) {
          e["estimate"] = x->estimate;
          e["std_err"] = x->std_err;
          e["shots_per_configuration"] = est->shots_per_configuration;
          e["photon_pairs"] = est->photon_pairs;
        }
      }
      m.push_back(e);
    }
    j["measures"] = m;
    j["moments"] = {{"pi2", mom.pi2}, {"pi3", mom.pi3}, {"pi4", mom.pi4}};
    json a = json::array();
    for (const auto& l : audit)
      a.push_back({{"inequality", l.name}, {"lhs", l.lhs}, {"rhs", l.rhs}, {"pass", l.pass}, {"enforced", l.enforced}});
    j["audit"] = a;
    if (est) {
      j["simulation"] = {{"shots_per_configuration", est->shots_per_configuration},
                         {"configurations", est->configurations},
                         {"photon_pairs", est->photon_pairs},
                         {"photon_pairs_used", est->photon_pairs_used},
                         {"graphs", est->graphs.size()}};
    }
    os << j.dump(2) << "\n";
  } else {
    os << "qoverlap " << version() << "  seed " << c.seed << "\n";
    os << "state 1: " << p1 << " (" << s1.label << ")\n";
    os << "state 2: " << p2 << " (" << s2.label << ")\n\n";
    os << std::left << std::setw(8) << "measure" << std::setw(18) << "oracle" << std::setw(18)
       << "formula";
    if (est) os << std::setw(18) << "estimate" << std::setw(14) << "std_err";
    os << "\n";
    for (const auto& r : rows) {
      os << std::setw(8) << r.name << std::setw(18) << (r.oracle ? fmt(*r.oracle) : "-")
         << std::setw(18) << (r.formula ? fmt(*r.formula) : "-");
      if (est) {
        const auto* x = est->find(r.name);
        os << std::setw(18) << (x ? fmt(x->estimate) : "-") << std::setw(14)
           << (x ? fmt(x->std_err) : "-");
      }
      os << "\n";
    }
    if (est) {
      os << "\nsimulation: " << est->shots_per_configuration << " shots per configuration, "
         << est->configurations << " configurations, " << est->photon_pairs
         << " photon pairs per round (" << est->photon_pairs_used << " in total), "
         << est->graphs.size() << " graph statistics\n";
    }
    os << "\ninequality audit (slack " << kAuditSlack << ")\n";
    for (const auto& l : audit)
      os << "  " << (l.pass ? "pass " : (l.enforced ? "FAIL " : "info ")) << std::setw(22) << l.name << " " << fmt(l.lhs)
         << " vs " << fmt(l.rhs) << "\n";
  }
  for (const auto& l : audit) {
    if (l.enforced && !l.pass) {
      std::cerr << "error: inequality violated: " << l.name << "\n";
      return kExitInvalid;
    }
  }
  return kExitOk;
}

int cmd_derive(const Common& c, const std::vector<std::string>& targets, std::size_t samples,
               int basis_copies) {
  const auto basis = build_basis(basis_copies);
  if (!c.out.empty()) fs::create_directories(c.out);
  Output out(c.out.empty() ? std::string{} : (fs::path(c.out) / "claims.txt").string());
  auto& os = out.stream();
  os << "qoverlap " << version() << "  seed " << c.derive_seed << "\n";
  os << "basis: " << basis.max_copies << " copies, " << basis.graphs.size()
     << " connected graph classes, " << basis.monomials.size() << " monomials\n";

  const auto write = [&](const CoefficientVector& cv) {
    os << to_string(cv.target) << ": " << cv.entries.size() << " monomials, "
       << cv.graphs().size() << " graphs, rank " << cv.rank << "/" << cv.candidates
       << (cv.unique ? "" : " (non-unique, minimal support reported)") << ", held-out residual "
       << cv.residual << ", denominators divide 3: " << (cv.denominators_divide(3) ? "yes" : "no")
       << "\n";
    if (!c.out.empty()) {
      std::ofstream f(fs::path(c.out) / (to_string(cv.target) + ".tsv"));
      write_table(f, cv);
    }
  };

  if (targets.empty()) {
    if (basis_copies != 4) throw CLI::ValidationError("--basis", "workflows need the 4-copy basis");
    const auto fits = derive_workflows(basis, c.derive_seed, c.threads);
    for (const auto* f : fits.present()) write(*f);
    const auto rep = verify_table_claims(fits);
    os << "\nclaims\n";
    for (const auto& l : rep.lines)
      os << "  " << (l.match ? "match    " : "MISMATCH ") << l.claim << ": expected "
         << l.expected << ", achieved " << l.achieved << "\n";
    for (const auto& n : rep.notes) os << "  note: " << n << "\n";
    return kExitOk;
  }
  for (const auto& t : targets) {
    FitOptions o;
    o.seed = c.derive_seed;
    o.threads = c.threads;
    o.samples = samples;
    write(fit_coefficients(parse_target(t), basis, o));
  }
  return kExitOk;
}

struct SweepCell {
  double sum_err = 0.0, sum_sq = 0.0, sum_se = 0.0;
  std::size_t n = 0;
};

int cmd_sweep(const Common& c, const std::string& ensemble, std::size_t pairs,
              std::size_t repeats, const std::vector<std::uint64_t>& shots,
              const std::string& measures) {
  const auto needs = needs_from(measures);
  const auto fits = obtain_fits(c, needs);
  const auto wf = to_workflow(fits);
  const auto plan = plan_configurations(wf.required_graphs());

  std::vector<std::pair<DensityMatrix, DensityMatrix>> states;
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto s1 = derive_seed(c.seed, 2 * i), s2 = derive_seed(c.seed, 2 * i + 1);
    if (ensemble == "ginibre") {
      states.emplace_back(random_state(4, Ensemble::ginibre, s1),
                          random_state(4, Ensemble::ginibre, s2));
    } else if (ensemble == "pure") {
      states.emplace_back(random_state(4, Ensemble::pure, s1), random_state(4, Ensemble::pure, s2));
    } else {
      const auto r = random_state(4, Ensemble::ginibre, s1);
      states.emplace_back(r, r);
    }
  }
  std::vector<std::string> names;
  if (needs.h) names.insert(names.end(), {"Pi2", "H"});
  if (needs.g) names.push_back("G");
  if (needs.e) names.push_back("E");
  if (needs.t) names.push_back("T");

  const std::size_t tasks = shots.size() * pairs * repeats;
  std::vector<EstimationReport> reports(tasks);
  parallel_for(tasks, c.threads, [&](std::size_t k) {
    const std::size_t ni = k / (pairs * repeats);
    const std::size_t pi = (k / repeats) % pairs;
    reports[k] = estimate_distances(plan, wf, states[pi].first, states[pi].second, shots[ni],
                                    derive_seed(c.seed ^ 0x5A5A5A5AULL, k));
  });

  Output out(c.out);
  auto& os = out.stream();
  os << "N,measure,bias,rmse,mean_stderr\n";
  for (std::size_t ni = 0; ni < shots.size(); ++ni) {
    for (const auto& name : names) {
      SweepCell cell;
      for (std::size_t pi = 0; pi < pairs; ++pi) {
        const auto& [a, b] = states[pi];
        const auto o = distance_set(a, b);
        double truth = 0.0;
        if (name == "Pi2") truth = moments_direct(a, b).pi2;
        else if (name == "H") truth = o.hilbert_schmidt;
        else if (name == "G") truth = o.superfidelity;
        else if (name == "E") truth = o.subfidelity;
        else truth = o.trace_distance;
        for (std::size_t r = 0; r < repeats; ++r) {
          const auto* m = reports[(ni * pairs + pi) * repeats + r].find(name);
          const double err = m->estimate - truth;
          cell.sum_err += err;
          cell.sum_sq += err * err;
          cell.sum_se += m->std_err;
          ++cell.n;
        }
      }
      const double n = double(cell.n);
      os << shots[ni] << ',' << name << ',' << std::setprecision(10) << cell.sum_err / n << ','
         << std::sqrt(cell.sum_sq / n) << ',' << cell.sum_se / n << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qoverlap: distances between two-qubit states from overlaps and simulated "
               "singlet-projection measurements"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  Common c;
  const auto add_common = [&c](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Root random seed")->capture_default_str();
    sub->add_option("--threads", c.threads, "Worker threads")
        ->check(CLI::Range(1U, 256U))
        ->capture_default_str();
    sub->add_option("--out", c.out, "Output path (directory for derive)");
    sub->add_option("--format", c.format, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
  };
  const auto add_tables = [&c](CLI::App* sub) {
    sub->add_option("--tables", c.tables, "Directory of coefficient tables written by derive")
        ->check(CLI::ExistingDirectory);
    sub->add_option("--derive-seed", c.derive_seed, "Seed for in-process derivation")
        ->capture_default_str();
  };

  auto* dist = app.add_subcommand("distance", "Distances between two state files");
  std::string p1, p2, measures = "H,G,E,T";
  std::uint64_t simulate = 0;
  dist->add_option("state1", p1, "First state file")->required();
  dist->add_option("state2", p2, "Second state file")->required();
  dist->add_option("--simulate", simulate, "Shots per interferometric configuration");
  dist->add_option("--measures", measures, "Measures to simulate (subset of H,G,E,T)")
      ->capture_default_str();
  add_common(dist);
  add_tables(dist);

  auto* der = app.add_subcommand("derive", "Fit coefficient tables and check stated counts");
  std::vector<std::string> targets;
  std::size_t samples = 0;
  int basis_copies = 4;
  std::vector<std::string> target_choices;
  for (const auto& [t, name] : target_names()) target_choices.push_back(name);
  der->add_option("--target", targets, "Functional to fit (repeatable); default: all workflows")
      ->check(CLI::IsMember(target_choices));
  der->add_option("--samples", samples, "Random pairs for the fit (default: twice the monomials)");
  der->add_option("--basis", basis_copies, "Copies in the graph basis")
      ->check(CLI::IsMember({2, 4}))
      ->capture_default_str();
  der->add_option("--derive-seed", c.derive_seed, "Seed for the random fit pairs")
      ->capture_default_str();
  add_common(der);

  auto* sw = app.add_subcommand("sweep", "Convergence of interferometric estimates (CSV)");
  std::string ensemble = "ginibre";
  std::size_t pairs = 20, repeats = 5;
  std::vector<std::uint64_t> shot_list{10000, 100000, 1000000};
  sw->add_option("--ensemble", ensemble, "State ensemble")
      ->check(CLI::IsMember({"ginibre", "pure", "identical"}))
      ->capture_default_str();
  sw->add_option("--pairs", pairs, "Random state pairs")->check(CLI::PositiveNumber)->capture_default_str();
  sw->add_option("--repeats", repeats, "Repetitions per pair and N")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sw->add_option("--shots", shot_list, "Shots per configuration")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sw->add_option("--measures", measures, "Measures (subset of H,G,E,T)")->capture_default_str();
  add_common(sw);
  add_tables(sw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (dist->parsed()) return cmd_distance(c, p1, p2, simulate, measures);
    if (der->parsed()) return cmd_derive(c, targets, samples, basis_copies);
    if (sw->parsed()) return cmd_sweep(c, ensemble, pairs, repeats, shot_list, measures);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DerivationError& e) {
    std::cerr << "derivation failed for " << to_string(e.target()) << ": " << e.what() << "\n";
    return kExitResidual;
  } catch (const PhysicsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitUsage;
}
