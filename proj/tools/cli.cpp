#include "cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <thread>

#include "rankfarm/broker.hpp"
#include "rankfarm/catalog.hpp"
#include "rankfarm/matcher.hpp"
#include "rankfarm/ranking.hpp"
#include "rankfarm/report.hpp"
#include "rankfarm/requirements.hpp"

// After the Eigen-based headers; see broker_http.cpp.
#include <CLI11.hpp>
#include <httplib.h>

namespace rankfarm::cli {

namespace {

std::atomic<bool> g_stop{false};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyMatch: return kEmptyMatch;
    case ErrorCode::IoError:
    case ErrorCode::UnsupportedFormat: return kIoConfig;
    case ErrorCode::NoConvergence:
    case ErrorCode::DimensionMismatch: return kInternal;
    default: return kValidation;
  }
}

struct Inputs {
  std::string hierarchy;
  std::string offerings;
  std::string requirements;
  std::string inject;
  bool strict = false;
};

struct Tuning {
  double tol = 1e-12;
  int max_iter = 1000;
  double epsilon = 1e-9;
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) return;
  if (!std::filesystem::is_regular_file(path)) throw Error(ErrorCode::IoError, std::string(what) + " '" + path + "' not found");
}

struct Pipeline {
  Catalog catalog;
  RequirementSet req;
  MatchResult match;
  RankingReport report;
};

Pipeline run_pipeline(const Inputs& in, const Tuning& tuning, std::ostream& err) {
  require_file(in.hierarchy, "hierarchy file");
  require_file(in.offerings, "offerings file");
  require_file(in.requirements, "requirements file");
  require_file(in.inject, "injection file");

  Pipeline p;
  HierarchyLoad h = load_hierarchy(in.hierarchy, {in.strict});
  for (const auto& w : h.warnings) err << "WARN: " << w << '\n';
  p.catalog = load_offerings(in.offerings, h.hierarchy);
  if (!in.requirements.empty()) p.req = load_requirements(in.requirements, h.hierarchy);

  RankOptions opts;
  opts.power.tol = tuning.tol;
  opts.power.max_iter = tuning.max_iter;
  opts.smoothing.relative = tuning.epsilon;
  if (!in.inject.empty()) opts.injected = load_injection(in.inject, h.hierarchy);

  p.match = fn_match(p.catalog, p.req.functional);
  for (const auto& r : p.match.rejected) {
    err << "NOTE: " << r.service_id << " rejected (" << to_string(r.reason) << "): " << r.detail << '\n';
  }
  p.report = ahp_rank(p.catalog, p.match.matched, p.req, opts);
  return p;
}

void add_inputs(CLI::App* cmd, Inputs& in, bool with_requirements) {
  cmd->add_option("--hierarchy", in.hierarchy, "QoS hierarchy template (JSON)")->required();
  cmd->add_option("--offerings", in.offerings, "service offerings (JSON)")->required();
  auto* r = cmd->add_option("--requirements", in.requirements, "user requirements (JSON)");
  if (with_requirements) r->required();
  cmd->add_flag("--strict", in.strict, "reject sibling weights that do not sum to 1");
}

void add_tuning(CLI::App* cmd, Inputs& in, Tuning& t) {
  cmd->add_option("--inject", in.inject, "replace computed sub-level vectors with the ones in this file");
  cmd->add_option("--tol", t.tol, "power iteration tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", t.max_iter, "power iteration limit")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", t.epsilon, "relative smoothing for close/exact tendencies")->check(CLI::PositiveNumber);
}

int serve(const std::string& addr, const std::string& snapshot, const std::string& hierarchy_path, std::ostream& out,
          std::ostream& err) {
  const auto colon = addr.rfind(':');
  int port = -1;
  if (colon != std::string::npos && colon > 0) {
    const std::string p = addr.substr(colon + 1);
    char* end = nullptr;
    const long v = std::strtol(p.c_str(), &end, 10);
    if (!p.empty() && end && *end == '\0' && v > 0 && v <= 65535) port = static_cast<int>(v);
  }
  if (port < 0) {
    err << "ERROR IoError: invalid listen address '" << addr << "' (expected host:port)\n";
    return kIoConfig;
  }
  const std::string host = addr.substr(0, colon);

  std::optional<QoSHierarchy> initial;
  if (!hierarchy_path.empty()) {
    require_file(hierarchy_path, "hierarchy file");
    HierarchyLoad h = load_hierarchy(hierarchy_path);
    for (const auto& w : h.warnings) err << "WARN: " << w << '\n';
    initial = std::move(h.hierarchy);
  }
  Broker broker(snapshot.empty() ? std::nullopt : std::optional<std::filesystem::path>(snapshot), std::move(initial));
  httplib::Server server;
  mount(broker, server);
  if (!server.bind_to_port(host, port)) {
    err << "ERROR IoError: cannot listen on " << addr << '\n';
    return kIoConfig;
  }
  out << "listening on " << addr << " (revision " << broker.revision() << ")" << std::endl;
  g_stop = false;
  std::thread listener([&server] { server.listen_after_bind(); });
  while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(50));
  server.stop();
  listener.join();
  broker.save_snapshot();
  return kOk;
}

std::string env_or(const char* name, const char* fallback) {
  const char* v = std::getenv(name);
  return v ? v : fallback;
}

}  // namespace

void stop_serving() { g_stop = true; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Renderfarm service ranking broker"};
  app.require_subcommand(1);

  Inputs in;
  Tuning tuning;
  std::string format = "text";
  std::vector<std::string> show{"all"};
  std::string out_path;
  std::string addr = env_or("RANKFARM_ADDR", "127.0.0.1:8080");
  std::string snapshot = env_or("RANKFARM_SNAPSHOT", "");

  auto* validate = app.add_subcommand("validate", "load and validate templates");
  add_inputs(validate, in, false);

  auto* rank = app.add_subcommand("rank", "match and rank services");
  add_inputs(rank, in, true);
  add_tuning(rank, in, tuning);
  rank->add_option("--format", format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
  rank->add_option("--show", show, "sections: sub, top, groups, final, all")
      ->delimiter(',')
      ->check(CLI::IsMember({"sub", "top", "groups", "final", "all"}));

  auto* kiviat = app.add_subcommand("kiviat", "export radar-chart data of top-level scores");
  add_inputs(kiviat, in, false);
  add_tuning(kiviat, in, tuning);
  kiviat->add_option("--out", out_path, "output file (stdout when omitted)");
  kiviat->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP broker");
  serve_cmd->add_option("--addr", addr, "listen address host:port (env RANKFARM_ADDR)");
  serve_cmd->add_option("--snapshot", snapshot, "registry snapshot file (env RANKFARM_SNAPSHOT)");
  serve_cmd->add_option("--hierarchy", in.hierarchy, "hierarchy active at revision 0 when the snapshot has none");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kIoConfig;
  }

  try {
    if (validate->parsed()) {
      require_file(in.hierarchy, "hierarchy file");
      require_file(in.offerings, "offerings file");
      require_file(in.requirements, "requirements file");
      HierarchyLoad h = load_hierarchy(in.hierarchy, {in.strict});
      for (const auto& w : h.warnings) err << "WARN: " << w << '\n';
      const Catalog c = load_offerings(in.offerings, h.hierarchy);
      if (!in.requirements.empty()) (void)load_requirements(in.requirements, h.hierarchy);
      out << "ok: " << c.offerings.size() << " services, " << h.hierarchy.sub_attributes().size()
          << " sub-level attributes\n";
      return kOk;
    }
    if (rank->parsed()) {
      unsigned sections = 0;
      for (const auto& s : show) sections |= *parse_section(s);
      const Pipeline p = run_pipeline(in, tuning, err);
      out << render_report(p.report, *parse_report_format(format), sections);
      return kOk;
    }
    if (kiviat->parsed()) {
      if (format == "text") format = "json";
      const Pipeline p = run_pipeline(in, tuning, err);
      const auto data = kiviat_export(p.report);
      const std::string text = format == "csv" ? kiviat_to_csv(data) : kiviat_to_json(data).dump(2) + "\n";
      if (out_path.empty()) {
        out << text;
      } else {
        write_text_file(out_path, text);
        out << "wrote " << data.size() << " kiviat records to " << out_path << '\n';
      }
      return kOk;
    }
    if (serve_cmd->parsed()) return serve(addr, snapshot, in.hierarchy, out, err);
  } catch (const Error& e) {
    err << "ERROR " << to_string(e.code()) << ": " << e.detail() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "ERROR Internal: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace rankfarm::cli
