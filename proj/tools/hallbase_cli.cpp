// Command-line front end. Builds JSON requests from flags, hands them to the
// shared library through the C interface, and prints the response documents.
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hallbase/hallbase.h"
#include "json.hpp"

namespace {

using json = nlohmann::ordered_json;

struct CmdOpts {
  CLI::App* cmd = nullptr;
  std::string command;
  std::string family, pi, strategy, method, out, config, save_dir, file;
  unsigned long long n = 0, q = 0, p = 0, f = 0;
  unsigned long long cap = 0, seed = 0, budget = 0, kmax = 0, m = 0, goal = 0;
  unsigned jobs = 1;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    std::exit(HB_ERROR);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<uint64_t> parse_pi(const std::string& text) {
  std::vector<uint64_t> out;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',' || ch == ' ') {
      if (!cur.empty()) out.push_back(std::stoull(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

// Request = config-file object (if any) overridden by explicitly set flags.
json build_request(const CmdOpts& o) {
  json req = json::object();
  if (!o.config.empty()) {
    json base = json::parse(slurp(o.config), nullptr, false);
    if (base.is_discarded() || !base.is_object()) {
      std::cerr << "config file is not a JSON object: " << o.config << "\n";
      std::exit(HB_ERROR);
    }
    req = base;
  }
  req["command"] = o.command;
  auto given = [&](const char* flag) {
    const CLI::Option* opt = o.cmd->get_option_no_throw(flag);
    return opt && opt->count() > 0;
  };
  auto set_if = [&](const char* flag, const char* key, auto value) {
    if (given(flag)) req[key] = value;
  };
  set_if("--family", "family", o.family);
  set_if("--n", "n", o.n);
  set_if("--q", "q", o.q);
  set_if("--p", "p", o.p);
  set_if("--f", "f", o.f);
  if (given("--pi")) req["pi"] = parse_pi(o.pi);
  set_if("--cap", "cap", o.cap);
  set_if("--seed", "seed", o.seed);
  set_if("--budget", "budget", o.budget);
  set_if("--kmax", "kmax", o.kmax);
  set_if("--m", "m", o.m);
  set_if("--goal", "goal", o.goal);
  set_if("--strategy", "strategy", o.strategy);
  set_if("--method", "method", o.method);
  return req;
}

int emit(int rc, char* response, const std::string& out_path) {
  std::string text = response ? response : "";
  hb_string_free(response);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    f << text;
    json doc = json::parse(text, nullptr, false);
    std::string status = doc.is_object() ? doc.value("status", std::string("?")) : "?";
    std::cout << "status=" << status << " written=" << out_path << "\n";
  }
  return rc;
}

std::string csv_field(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n') ch = ';';
  return s;
}

std::string row_detail(const json& doc) {
  if (!doc.is_object()) return "unparseable";
  if (doc.contains("error"))
    return csv_field(doc["error"].value("code", std::string("error")));
  const json& req = doc.value("request", json::object());
  const json& res = doc.value("result", json::object());
  std::string cmd = req.value("command", std::string());
  std::ostringstream d;
  if (cmd == "group-order") {
    d << "value=" << res.value("value", json()).dump();
  } else if (cmd == "epi") {
    d << "exists=" << res.value("exists", std::string("?")) << ";clause="
      << res.value("clause", std::string());
  } else if (cmd == "hall-find") {
    d << "found=" << res.value("found", false) << ";complete="
      << res.value("complete", false) << ";order=" << res.value("order", json()).dump();
  } else if (cmd == "witness-verify") {
    const json& cert = res.value("certificate", json());
    if (cert.is_object())
      d << "verdict=" << cert.value("verdict", std::string("?")) << ";intersection="
        << cert.value("intersection_order", json()).dump();
    else
      d << "verdict=none";
  } else if (cmd == "base") {
    const json& b = res.value("base", json());
    d << "base=" << (b.is_object() ? b.value("value", json()).dump() : "null");
  } else if (cmd == "reg") {
    const json& r = res.value("reg", json());
    if (r.is_object())
      d << "value=" << r.value("value", json()).dump() << ";exact=" << r.value("exact", false);
  } else if (cmd == "theorem-check") {
    d << "hall_order=" << res.value("hall_order", json()).dump();
    const json& cert = res.value("certificate", json());
    if (cert.is_object()) d << ";verdict=" << cert.value("verdict", std::string("?"));
    const json& b = res.value("base", json());
    if (b.is_object()) d << ";base=" << b.value("value", json()).dump();
    const json& r = res.value("reg5", json());
    if (r.is_object())
      d << ";reg5=" << r.value("value", json()).dump() << (r.value("exact", false) ? "" : "+");
  }
  return csv_field(d.str());
}

int run_batch(const CmdOpts& o) {
  json manifest = json::parse(slurp(o.file), nullptr, false);
  if (manifest.is_discarded() || !manifest.is_array()) {
    std::cerr << "manifest must be a JSON array of requests\n";
    return HB_ERROR;
  }
  size_t rows = manifest.size();
  std::vector<std::string> requests(rows), docs(rows);
  std::vector<int> codes(rows, 0);
  for (size_t i = 0; i < rows; ++i) requests[i] = manifest[i].dump();

  std::atomic<size_t> next{0};
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= rows) break;
      char* resp = nullptr;
      codes[i] = hb_run_json(requests[i].c_str(), &resp);
      docs[i] = resp ? resp : "";
      hb_string_free(resp);
    }
  };
  unsigned jobs = std::max(1u, o.jobs);
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  if (!o.save_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(o.save_dir, ec);
    for (size_t i = 0; i < rows; ++i) {
      std::ostringstream name;
      name << o.save_dir << "/row-" << i << ".json";
      std::ofstream f(name.str(), std::ios::binary);
      f << docs[i];
      if (!f) {
        std::cerr << "cannot write " << name.str() << "\n";
        return 2;
      }
    }
  }

  std::ostringstream csv;
  csv << "row,command,family,n,q,pi,status,exit,detail\n";
  int rc = 0;
  for (size_t i = 0; i < rows; ++i) {
    json doc = json::parse(docs[i], nullptr, false);
    json req = doc.is_object() ? doc.value("request", json::object()) : json::object();
    if (!req.is_object()) req = json::object();
    std::string pi;
    if (req.contains("pi") && req["pi"].is_array()) {
      for (const auto& v : req["pi"]) {
        if (!pi.empty()) pi += ';';
        pi += v.dump();
      }
    }
    csv << i << ',' << csv_field(req.value("command", std::string())) << ','
        << csv_field(req.value("family", std::string())) << ','
        << (req.contains("n") ? req["n"].dump() : "") << ','
        << (req.contains("q") ? req["q"].dump() : "") << ',' << pi << ','
        << (doc.is_object() ? doc.value("status", std::string("?")) : "?") << ',' << codes[i]
        << ',' << row_detail(doc) << '\n';
    rc = std::max(rc, codes[i]);
  }
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    f << csv.str();
    std::cout << "rows=" << rows << " written=" << o.out << "\n";
  }
  return rc;
}

void add_common(CLI::App* cmd, CmdOpts& o, bool with_pi) {
  cmd->add_option("--family", o.family, "group family: GL SL GU SU GSp Sp GO+ GO- GOo SO+ SO- SOo");
  cmd->add_option("--n", o.n, "matrix dimension");
  cmd->add_option("--q", o.q, "defining field size");
  if (with_pi) cmd->add_option("--pi", o.pi, "comma-separated primes, e.g. 2,3");
  cmd->add_option("--cap", o.cap, "largest group order to enumerate");
  cmd->add_option("--seed", o.seed, "seed for randomized phases");
  cmd->add_option("--budget", o.budget, "node budget for searches");
  cmd->add_option("--out", o.out, "write the response document to this file");
  cmd->add_option("--config", o.config, "JSON file with request fields; flags override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite classical groups: Hall subgroups, conjugate-intersection "
               "witnesses, base sizes, regular orbits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hb_version()));

  std::vector<CmdOpts> all(12);

  auto instance_cmd = [&](size_t slot, const char* name, const char* desc, bool with_pi) {
    CmdOpts& o = all[slot];
    o.command = name;
    o.cmd = app.add_subcommand(name, desc);
    add_common(o.cmd, o, with_pi);
    return &o;
  };

  CmdOpts* field = instance_cmd(0, "field", "build a finite field and print its tables", false);
  field->cmd->add_option("--p", field->p, "characteristic");
  field->cmd->add_option("--f", field->f, "extension degree over the prime field");

  instance_cmd(1, "group-order", "order of the group from the formula, factored", false);
  instance_cmd(2, "epi", "evaluate the Hall-subgroup existence conditions", true);

  CmdOpts* hf = instance_cmd(3, "hall-find", "construct or rule out a Hall subgroup", true);
  hf->cmd->add_option("--strategy", hf->strategy, "automatic | structural | exhaustive");

  CmdOpts* wv = instance_cmd(4, "witness-verify",
                             "find conjugating witnesses driving the intersection central", true);
  wv->cmd->add_option("--kmax", wv->kmax, "most witnesses the greedy search may use");

  CmdOpts* bs = instance_cmd(5, "base", "base size of the coset action", true);
  bs->cmd->add_option("--kmax", bs->kmax, "largest base size to certify");

  CmdOpts* rg = instance_cmd(6, "reg", "count regular orbits on tuples of cosets", true);
  rg->cmd->add_option("--m", rg->m, "tuple length");
  rg->cmd->add_option("--method", rg->method, "auto | exact | lower-bound");
  rg->cmd->add_option("--goal", rg->goal, "lower-bound target");

  instance_cmd(7, "theorem-check", "full report: existence, Hall subgroup, witnesses, base, "
                                   "regular orbits", true);

  CmdOpts& rp = all[8];
  rp.command = "replay";
  rp.cmd = app.add_subcommand("replay", "re-run a stored response document and compare bytes");
  rp.cmd->add_option("file", rp.file, "response document")->required();
  rp.cmd->add_option("--out", rp.out, "write the replay report to this file");

  CmdOpts& bt = all[9];
  bt.command = "batch";
  bt.cmd = app.add_subcommand("batch", "run a manifest of requests and print a CSV summary");
  bt.cmd->add_option("file", bt.file, "JSON array of requests")->required();
  bt.cmd->add_option("--jobs", bt.jobs, "worker threads");
  bt.cmd->add_option("--out", bt.out, "write the CSV summary to this file");
  bt.cmd->add_option("--save-dir", bt.save_dir, "also write each response document here");

  CLI11_PARSE(app, argc, argv);

  for (CmdOpts& o : all) {
    if (!o.cmd || !o.cmd->parsed()) continue;
    if (o.command == "replay") {
      char* resp = nullptr;
      int rc = hb_replay_json(slurp(o.file).c_str(), &resp);
      return emit(rc, resp, o.out);
    }
    if (o.command == "batch") return run_batch(o);
    json req = build_request(o);
    char* resp = nullptr;
    int rc = hb_run_json(req.dump().c_str(), &resp);
    return emit(rc, resp, o.out);
  }
  return HB_ERROR;
}
