// Command-line front end: runs scenario files, sweeps, the remark7
// construction and group inspection, printing qlab.report/1 documents.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qlab/error.hpp"
#include "qlab/scenario.hpp"

namespace {

using qlab::json::Json;

constexpr int kExitInvalid = 2;

struct Options {
  std::string out;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string profile = "default";
  bool timing = false;
};

qlab::Tolerances tolerances(const Options& o) {
  return o.profile == "strict" ? qlab::Tolerances::strict() : qlab::Tolerances::standard();
}

Json read_document(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw qlab::SchemaError("$", "cannot open " + file);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw qlab::SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
}

void emit(const Json& doc, const Options& o) {
  const auto text = doc.dump(2) + "\n";
  std::cout << text;
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw qlab::SchemaError("--out", "cannot write " + o.out);
    f << text;
  }
}

int run_document(const Json& doc, const Options& o) {
  const auto scenarios = qlab::parse_scenarios(doc);
  const auto jobs = qlab::prepare(scenarios, tolerances(o));
  const auto reports = qlab::run_jobs(jobs, o.workers);
  emit(qlab::report_document(reports, o.timing), o);
  return qlab::exit_code(reports);
}

Json single_scenario(const std::string& id, const std::string& kind, Json payload) {
  Json s{{"id", id}, {"kind", kind}, {"payload", std::move(payload)}};
  return {{"schema", qlab::kScenarioSchema}, {"scenarios", Json::array({std::move(s)})}};
}

// Accepts {"even_coeffs": {...}}, a bare {"4": 1} object or "4:1,2:0.5".
Json parse_phi(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw qlab::SchemaError("--phi", std::string("malformed JSON: ") + e.what());
    }
    return j.contains("even_coeffs") ? j : Json{{"even_coeffs", j}};
  }
  Json coeffs = Json::object();
  std::stringstream ss(text);
  std::string term;
  while (std::getline(ss, term, ',')) {
    const auto colon = term.find(':');
    if (colon == std::string::npos) throw qlab::SchemaError("--phi", "expected power:coefficient");
    try {
      coeffs[term.substr(0, colon)] = std::stod(term.substr(colon + 1));
    } catch (const std::exception&) {
      throw qlab::SchemaError("--phi", "bad coefficient in " + term);
    }
  }
  return {{"even_coeffs", coeffs}};
}

Json parse_orders(const std::string& text) {
  Json orders = Json::array();
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const long long n = std::stoll(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      orders.push_back(n);
    } catch (const std::exception&) {
      throw qlab::SchemaError("--orders", "expected comma-separated integers");
    }
  }
  return orders;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlab: characterization theorems on finite groups and the circle"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--out", o.out, "Also write the report document to this file");
  app.add_option("--workers", o.workers, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--tolerance-profile", o.profile, "Tolerance profile")
      ->check(CLI::IsMember({"strict", "default"}));
  app.add_flag("--timing", o.timing, "Include runtimes in reports");

  auto* run = app.add_subcommand("run", "Run a scenario file");
  std::string file;
  run->add_option("file", file, "Scenario file")->required();

  auto* sweep = app.add_subcommand("sweep", "Seeded sweep");
  qlab::SweepRequest req;
  sweep->add_option("kind", req.kind, "remark6 | convolution | fourier | heyde-grid")
      ->required()
      ->check(CLI::IsMember({"remark6", "convolution", "fourier", "heyde-grid"}));
  sweep->add_option("--seed", req.seed, "Seed");
  sweep->add_option("--count", req.count, "Instances per group")->required();
  std::int64_t max_order = 0;
  sweep->add_option("--max-order", max_order, "Largest group order");

  auto* construct = app.add_subcommand("construct", "Run a construction");
  auto* remark7 = construct->add_subcommand("remark7", "Gate, sample and certify phi");
  construct->require_subcommand(1);
  std::string phi = "4:1";
  std::int64_t radius = 6;
  remark7->add_option("--phi", phi, "Even polynomial, e.g. 4:1 or {\"4\": 1}");
  remark7->add_option("--radius", radius, "Window radius for the witness");

  auto* inspect = app.add_subcommand("inspect", "Inspect an object");
  auto* group = inspect->add_subcommand("group", "Structure of a finite abelian group");
  inspect->require_subcommand(1);
  std::string orders;
  group->add_option("--orders", orders, "Cyclic factor orders, e.g. 4,2")->required();

  for (auto* sub : {run, sweep, construct, inspect}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run) return run_document(read_document(file), o);
    if (*sweep) {
      if (sweep->count("--max-order")) req.max_order = max_order;
      const auto r = qlab::run_sweep(req, tolerances(o), o.workers);
      emit(qlab::report_document({r}, o.timing), o);
      return qlab::exit_code({r});
    }
    if (*remark7) {
      Json payload{{"phi", parse_phi(phi)}, {"radius", radius}};
      return run_document(single_scenario("remark7", "remark7", std::move(payload)), o);
    }
    if (*group) {
      return run_document(
          single_scenario("group", "group-inspect", Json{{"orders", parse_orders(orders)}}), o);
    }
  } catch (const qlab::SchemaError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
