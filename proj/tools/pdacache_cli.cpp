#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pdacache/pdacache.hpp"

using nlohmann::json;
using namespace pdacache;

namespace {

enum Exit { kOk = 0, kValidation = 1, kUsage = 2, kBudget = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Pda load_pda(const std::string& path) {
  auto [grid, labels] = io::load_pda_grid(path);
  return std::move(validate_pda(std::move(grid), std::move(labels))).take();
}

Profile load_profile(const std::string& csv) {
  try {
    return parse_profile(csv);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--profile: ") + e.what());
  }
}

Profile load_profile_for(const std::string& csv, const Pda& pda) {
  Profile p = load_profile(csv);
  if (p.size() != pda.columns())
    throw UsageError("--profile has " + std::to_string(p.size()) + " entries, the array has " +
                     std::to_string(pda.columns()) + " columns");
  return p;
}

template <typename T>
std::vector<std::size_t> one_based(const std::vector<T>& xs) {
  std::vector<std::size_t> out;
  for (auto x : xs) out.push_back(static_cast<std::size_t>(x) + 1);
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs, const char* sep = ",") {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? sep : "") << xs[i];
  return os.str();
}

json load_json(const LoadValue& v) {
  return {{"numerator", v.numerator}, {"denominator", v.denominator}, {"fraction", v.to_fraction()},
          {"decimal", v.to_decimal(3)}};
}

std::string load_text(const LoadValue& v) { return v.to_fraction() + " = " + v.to_decimal(3); }

json profile_json(const Profile& p) {
  return {{"raw", p.raw()}, {"sorted", p.loads()}, {"relabeling", one_based(p.relabeling())}, {"users", p.total_users()}};
}

void print_profile(const Profile& p) {
  std::cout << "profile raw:        " << join(p.raw()) << "\n"
            << "profile sorted:     " << join(p.loads()) << "\n"
            << "sorted -> physical: " << join(one_based(p.relabeling())) << "\n"
            << "users:              " << p.total_users() << "\n";
}

// PDA column lambda serves physical cache lambda; sorted position j therefore
// sees column relabeling[j].
Pda arranged_for_profile(const Pda& pda, const Profile& p) { return permute_columns(pda, p.relabeling()); }

// Inverse of arranged_for_profile for an ordering: physical cache
// relabeling[j] receives source column perm[j].
Pda physical_layout(const Pda& pda, const Profile& p, const std::vector<std::size_t>& perm) {
  std::vector<std::size_t> cols(perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) cols[p.relabeling()[j]] = perm[j];
  return permute_columns(pda, cols);
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    io::write_file(path, content);
  }
}

std::string column_name(const Pda& pda, std::size_t c) {
  return pda.column_labels().empty() ? std::to_string(c + 1) : pda.column_labels()[c];
}

// ---- validate ----------------------------------------------------------

bool looks_like_gpda(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return false;
  const json j = json::parse(text);
  if (j.contains("user_to_cache")) return true;
  if (!j.contains("grid") || !j["grid"].is_array()) return false;
  for (const auto& row : j["grid"])
    if (row.is_array())
      for (const auto& e : row)
        if (e.is_array()) return true;
  return false;
}

int cmd_validate(const std::string& path, bool force_gpda, bool as_json) {
  const std::string text = io::read_file(path);
  json out;
  ValidationReport report;
  if (force_gpda || looks_like_gpda(text)) {
    auto [grid, caches] = io::gpda_grid_from_json(json::parse(text));
    auto v = validate_gpda(std::move(grid), std::move(caches));
    report = v.report;
    out["kind"] = "gpda";
    if (v.ok())
      out["parameters"] = {{"K", v->columns()},     {"F", v->rows()},          {"Z", v->z_per_column()},
                           {"S", v->symbol_count()}, {"I", v->max_replica()}, {"caches", v->cache_count()}};
  } else {
    auto [grid, labels] = io::load_pda_grid(path);
    auto v = validate_pda(std::move(grid), std::move(labels));
    report = v.report;
    out["kind"] = "pda";
    if (v.ok()) {
      out["parameters"] = {{"K", v->columns()}, {"F", v->rows()}, {"Z", v->z_per_column()}, {"S", v->symbol_count()}};
      if (auto g = symbol_stats(*v).regularity()) out["parameters"]["g"] = *g;
    }
  }
  out["valid"] = report.ok();
  json viol = json::array();
  for (const auto& x : report.violations)
    viol.push_back({{"tag", to_string(x.tag)}, {"rows", one_based(x.rows)}, {"cols", one_based(x.cols)},
                    {"detail", x.detail}});
  out["violations"] = viol;
  out["warnings"] = report.warnings;

  if (as_json) {
    std::cout << out.dump(2) << "\n";
  } else if (report.ok()) {
    std::cout << "valid " << out["kind"].get<std::string>();
    for (auto& [k, v] : out["parameters"].items()) std::cout << " " << k << "=" << v;
    std::cout << "\n";
    for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
  }
  if (!report.ok()) {
    std::cerr << report.to_string();
    return kValidation;
  }
  return kOk;
}

// ---- order -------------------------------------------------------------

int report_ordering(const Pda& pda, const Profile& profile, const ColumnOrdering& o, const std::string& strategy,
                    const std::vector<TieRecord>& ties, bool as_json, const std::string& out_path) {
  const auto tr = trace_ordering(o.result);
  const LoadValue load = load_from_pda(o.result, profile);
  std::vector<std::string> names;
  for (auto c : o.perm) names.push_back(column_name(pda, c));

  if (!out_path.empty()) io::write_file(out_path, io::to_json(physical_layout(pda, profile, o.perm)).dump(2) + "\n");

  if (as_json) {
    json t = json::array();
    for (const auto& rec : ties) {
      json cands = json::array();
      for (const auto& c : rec.candidates) cands.push_back(one_based(c));
      t.push_back({{"position", rec.position}, {"candidates", cands}});
    }
    json j = {{"strategy", strategy},
              {"profile", profile_json(profile)},
              {"ordering", one_based(o.perm)},
              {"column_labels", names},
              {"alpha", tr.alpha},
              {"intersection_numbers", tr.intersection_numbers},
              {"load", load_json(load)},
              {"F", pda.rows()},
              {"tie_log", t}};
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  print_profile(profile);
  std::cout << "strategy:   " << strategy << "\n"
            << "ordering:   " << join(one_based(o.perm)) << "\n"
            << "columns:    " << join(names, " ") << "\n"
            << "alpha:      " << tr.alpha << "\n"
            << "load:       " << load_text(load) << "\n";
  for (const auto& rec : ties) {
    std::cout << "tie at position " << rec.position << ":";
    for (const auto& c : rec.candidates) std::cout << " {" << join(one_based(c)) << "}";
    std::cout << "\n";
  }
  return kOk;
}

// ---- rate --------------------------------------------------------------

int cmd_rate(const std::string& pda_path, const std::string& csv, const std::string& gpda_path, bool as_json) {
  const Pda pda = load_pda(pda_path);
  const Profile profile = load_profile_for(csv, pda);
  const Pda arranged = arranged_for_profile(pda, profile);
  const LoadValue load = load_from_pda(arranged, profile);
  const auto tau = tau_values(arranged);

  json j = {{"profile", profile_json(profile)}, {"load", load_json(load)}, {"F", pda.rows()},
            {"tau", tau.tau}};
  std::optional<LoadValue> gload;
  if (!gpda_path.empty()) {
    auto [grid, caches] = io::load_gpda_grid(gpda_path);
    const auto g = std::move(validate_gpda(std::move(grid), std::move(caches))).take();
    gload = load_from_gpda(g);
    j["gpda_load"] = load_json(*gload);
    j["gpda_agrees"] = *gload == load;
  }
  std::optional<ConstBParams> cb = detect_const_b(pda);
  if (cb) {
    j["const_b"] = {{"q", cb->q},
                    {"m", cb->m},
                    {"ordered", load_json(load_const_b_ordered(cb->q, cb->m, profile))},
                    {"unordered", load_json(load_const_b_unordered(cb->q, cb->m, profile))}};
  }
  if (as_json) {
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  print_profile(profile);
  std::cout << "tau:                " << join(tau.tau) << "\n"
            << "load:               " << load_text(load) << "  (F=" << pda.rows() << ")\n";
  if (gload) std::cout << "gpda load:          " << load_text(*gload) << (*gload == load ? "" : "  MISMATCH") << "\n";
  if (cb) {
    std::cout << "const-b ordered:    " << load_text(load_const_b_ordered(cb->q, cb->m, profile)) << "\n"
              << "const-b unordered:  " << load_text(load_const_b_unordered(cb->q, cb->m, profile)) << "\n";
  }
  return kOk;
}

// ---- simulate ----------------------------------------------------------

std::vector<std::size_t> parse_demands(const std::string& spec, std::size_t users, std::size_t files,
                                       std::uint64_t seed) {
  if (spec == "identity") return identity_demand(users, files);
  if (spec == "random") return random_demand(users, files, seed);
  std::vector<std::size_t> d;
  std::stringstream in(spec);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      throw UsageError("--demands: malformed token '" + tok + "'");
    }
    if (pos != tok.size() || v < 1 || static_cast<std::size_t>(v) > files)
      throw UsageError("--demands: '" + tok + "' is not a file id in 1.." + std::to_string(files));
    d.push_back(static_cast<std::size_t>(v - 1));
  }
  if (d.size() != users)
    throw UsageError("--demands has " + std::to_string(d.size()) + " entries, expected " + std::to_string(users));
  return d;
}

std::string hex(const std::vector<std::uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (auto b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 15]);
  }
  return s;
}

struct SimulateArgs {
  std::string pda, profile, demands = "identity", transcript;
  std::size_t files = 0, subfile_bytes = 0;
  std::uint64_t seed = 0;
  bool payloads = false, as_json = false;
};

int cmd_simulate(const SimulateArgs& a) {
  const Pda pda = load_pda(a.pda);
  const Profile profile = load_profile_for(a.profile, pda);
  const GeneralizedPda g = build_gpda(arranged_for_profile(pda, profile), profile);
  const auto demand = parse_demands(a.demands, g.columns(), a.files, a.seed);
  const Library lib = generate_library(a.files, g.rows(), a.subfile_bytes, a.seed);
  const DeliveryRun run = simulate(g, lib, demand, SimulationOptions{true});

  if (!a.transcript.empty()) {
    json t = json::array();
    for (const auto& x : run.transmissions) {
      json users = json::array(), rows = json::array(), files = json::array();
      for (const auto& term : x.terms) {
        users.push_back(term.user + 1);
        rows.push_back(term.row + 1);
        files.push_back(term.file + 1);
      }
      json m = {{"tag", {x.tag.symbol + 1, x.tag.replica}}, {"users", users}, {"rows", rows}, {"files", files}};
      if (a.payloads) m["payload"] = hex(x.payload);
      t.push_back(std::move(m));
    }
    emit(a.transcript, t.dump(2) + "\n");
  }

  std::size_t ok = 0;
  std::vector<std::size_t> failed;
  for (std::size_t k = 0; k < run.status.size(); ++k) {
    if (run.status[k] == DecodeStatus::Success) {
      ++ok;
    } else {
      failed.push_back(k + 1);
    }
  }
  const LoadValue expected = load_from_gpda(g);
  if (a.as_json) {
    json j = {{"profile", profile_json(profile)},
              {"users", g.columns()},
              {"demand", one_based(run.demand)},
              {"transmissions", run.transmissions.size()},
              {"measured_load", load_json(run.measured_load)},
              {"gpda_load", load_json(expected)},
              {"decoded", ok},
              {"failed_users", failed}};
    std::cout << j.dump(2) << "\n";
  } else {
    print_profile(profile);
    std::cout << "subfiles:           F=" << g.rows() << ", B=" << a.subfile_bytes << " bytes, N=" << a.files << "\n"
              << "transmissions:      " << run.transmissions.size() << "\n"
              << "measured load:      " << load_text(run.measured_load) << "\n"
              << "decoded:            " << ok << "/" << g.columns() << "\n";
    if (!failed.empty()) std::cout << "failed users:       " << join(failed) << "\n";
  }
  if (!failed.empty() || !(run.measured_load == expected)) {
    std::cerr << "simulation failed: " << failed.size() << " users did not decode\n";
    return kValidation;
  }
  return kOk;
}

// ---- compare -----------------------------------------------------------

int cmd_compare(const std::string& pda_path, const std::string& csv, bool lookahead, bool as_json) {
  const Pda pda = load_pda(pda_path);
  const Profile profile = load_profile_for(csv, pda);
  CompareOptions opts;
  opts.lookahead = lookahead;
  const auto report = run_compare(pda, profile, opts);

  if (as_json) {
    json rows = json::array();
    for (const auto& r : report.rows) {
      json row = {{"strategy", r.strategy},
                  {"ordering", one_based(r.ordering)},
                  {"load", load_json(r.load)},
                  {"F", r.subpacketization},
                  {"note", r.note}};
      row["alpha"] = r.alpha ? json(*r.alpha) : json(nullptr);
      rows.push_back(std::move(row));
    }
    json j = {{"profile", profile_json(profile)}, {"rows", rows}, {"skipped", report.skipped}};
    if (report.const_b_ordered) {
      j["const_b_closed_form"] = {{"ordered", load_json(*report.const_b_ordered)},
                                  {"unordered", load_json(*report.const_b_unordered)}};
    }
    std::cout << j.dump(2) << "\n";
    return kOk;
  }
  print_profile(profile);
  std::cout << "\n"
            << std::left << std::setw(13) << "strategy" << std::setw(12) << "load" << std::setw(10) << "decimal"
            << std::setw(6) << "F" << std::setw(7) << "alpha"
            << "ordering\n";
  for (const auto& r : report.rows) {
    std::cout << std::left << std::setw(13) << r.strategy << std::setw(12) << r.load.to_fraction() << std::setw(10)
              << r.load.to_decimal(3) << std::setw(6) << r.subpacketization << std::setw(7)
              << (r.alpha ? std::to_string(*r.alpha) : "-") << (r.ordering.empty() ? "-" : join(one_based(r.ordering)));
    if (!r.note.empty()) std::cout << "  (" << r.note << ")";
    std::cout << "\n";
  }
  if (report.const_b_ordered) {
    std::cout << "\nconst-b closed form: ordered " << load_text(*report.const_b_ordered) << ", unordered "
              << load_text(*report.const_b_unordered) << "\n";
  }
  for (const auto& s : report.skipped) std::cout << "skipped " << s << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shared-cache coded caching with placement delivery arrays"};
  app.require_subcommand(1);

  // validate
  std::string validate_file;
  bool validate_gpda_flag = false, json_flag = false;
  auto* validate = app.add_subcommand("validate", "Check an array file against the PDA or GPDA conditions");
  validate->add_option("file", validate_file, "Array file (JSON or text)")->required();
  validate->add_flag("--gpda", validate_gpda_flag, "Treat the file as a generalized PDA");
  validate->add_flag("--json", json_flag, "JSON output");

  // construct
  std::size_t caches = 0, t = 0, q = 0, m = 0;
  std::string out_path;
  auto* construct = app.add_subcommand("construct", "Build a PDA family member");
  construct->require_subcommand(1);
  auto* mn = construct->add_subcommand("mn", "Maddah-Ali-Niesen PDA");
  mn->add_option("--caches", caches, "Number of caches")->required();
  mn->add_option("--t", t, "Subset size t")->required();
  mn->add_option("-o,--output", out_path, "Output file (stdout when omitted)");
  auto* cb = construct->add_subcommand("const-b", "Construction B PDA");
  cb->add_option("--q", q, "Alphabet size q >= 2")->required();
  cb->add_option("--m", m, "Tuple length m >= 1")->required();
  cb->add_option("-o,--output", out_path, "Output file (stdout when omitted)");

  // order
  std::string pda_path, profile_csv;
  bool lookahead = false;
  auto* order = app.add_subcommand("order", "Arrange the columns for a profile");
  order->require_subcommand(1);
  std::vector<CLI::App*> order_subs;
  for (const char* name : {"greedy", "exhaustive", "const-b"}) {
    auto* s = order->add_subcommand(name, std::string(name) + " ordering");
    s->add_option("--pda", pda_path, "PDA file")->required();
    s->add_option("--profile", profile_csv, "Users per cache, e.g. 5,4,3,2,2,1")->required();
    s->add_flag("--json", json_flag, "JSON output");
    s->add_option("-o,--output", out_path, "Write the reordered array, one column per physical cache");
    if (std::string(name) == "greedy") s->add_flag("--lookahead", lookahead, "One-step lookahead tie breaking");
    order_subs.push_back(s);
  }

  // gpda
  auto* gpda = app.add_subcommand("gpda", "Expand a PDA to the user-level generalized PDA");
  gpda->add_option("--pda", pda_path, "PDA file")->required();
  gpda->add_option("--profile", profile_csv, "Users per cache")->required();
  gpda->add_option("-o,--output", out_path, "Output file (stdout when omitted)");

  // rate
  std::string gpda_path;
  auto* rate = app.add_subcommand("rate", "Delivery load of a PDA under a profile");
  rate->add_option("--pda", pda_path, "PDA file")->required();
  rate->add_option("--profile", profile_csv, "Users per cache")->required();
  rate->add_option("--gpda", gpda_path, "Also evaluate this GPDA file");
  rate->add_flag("--json", json_flag, "JSON output");

  // simulate
  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Byte-level placement, delivery and decoding");
  simulate_cmd->add_option("--pda", sim.pda, "PDA file")->required();
  simulate_cmd->add_option("--profile", sim.profile, "Users per cache")->required();
  simulate_cmd->add_option("--files", sim.files, "Library size N")->required()->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--subfile-bytes", sim.subfile_bytes, "Bytes per subfile")->required()->check(
      CLI::PositiveNumber);
  simulate_cmd->add_option("--seed", sim.seed, "Content and demand seed")->required();
  simulate_cmd->add_option("--demands", sim.demands, "identity, random, or 1-based file ids as CSV");
  simulate_cmd->add_option("--transcript", sim.transcript, "Write the message list as JSON ('-' for stdout)");
  simulate_cmd->add_flag("--payloads", sim.payloads, "Include payload bytes (hex) in the transcript");
  simulate_cmd->add_flag("--json", sim.as_json, "JSON summary");

  // compare
  auto* compare = app.add_subcommand("compare", "Loads of every applicable ordering strategy");
  compare->add_option("--pda", pda_path, "PDA file")->required();
  compare->add_option("--profile", profile_csv, "Users per cache")->required();
  compare->add_flag("--lookahead", lookahead, "Greedy with lookahead tie breaking");
  compare->add_flag("--json", json_flag, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_file, validate_gpda_flag, json_flag);
    if (*mn) {
      emit(out_path, io::to_json(construct_mn(caches, t, cell_budget())).dump(2) + "\n");
      return kOk;
    }
    if (*cb) {
      emit(out_path, io::to_json(construct_b(q, m, cell_budget())).dump(2) + "\n");
      return kOk;
    }
    for (auto* s : order_subs) {
      if (!*s) continue;
      const Pda pda = load_pda(pda_path);
      const Profile profile = load_profile_for(profile_csv, pda);
      const std::string name = s->get_name();
      if (name == "greedy") {
        auto res = greedy_order(pda, profile, GreedyOptions{lookahead});
        return report_ordering(pda, profile, res.ordering, name, res.trace.tie_log, json_flag, out_path);
      }
      if (name == "exhaustive") {
        auto res = exhaustive_order(pda, profile, permutation_budget());
        return report_ordering(pda, profile, res.ordering, name, {}, json_flag, out_path);
      }
      const auto params = detect_const_b(pda);
      if (!params) throw UsageError("const-b ordering needs an array with Construction B (u,v) column labels");
      return report_ordering(pda, profile, const_b_order(pda, params->q, params->m, profile), name, {}, json_flag,
                             out_path);
    }
    if (*gpda) {
      const Pda pda = load_pda(pda_path);
      const Profile profile = load_profile_for(profile_csv, pda);
      emit(out_path, io::to_json(build_gpda(arranged_for_profile(pda, profile), profile)).dump(2) + "\n");
      return kOk;
    }
    if (*rate) return cmd_rate(pda_path, profile_csv, gpda_path, json_flag);
    if (*simulate_cmd) return cmd_simulate(sim);
    if (*compare) return cmd_compare(pda_path, profile_csv, lookahead, json_flag);
  } catch (const ValidationError& e) {
    std::cerr << e.report().to_string();
    return kValidation;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kValidation;
  } catch (const json::exception& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kValidation;
  } catch (const DecodeError& e) {
    std::cerr << "decode error: " << e.what() << "\n";
    return kValidation;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
