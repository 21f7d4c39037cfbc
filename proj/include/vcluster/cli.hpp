// Copyright 2026 The vcluster Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vcluster/config/loaders.hpp"
#include "vcluster/core/usage.hpp"
#include "vcluster/hpl/command.hpp"
#include "vcluster/hpl/efficiency.hpp"
#include "vcluster/hpl/input.hpp"
#include "vcluster/hpl/output.hpp"
#include "vcluster/provider/example_profiles.hpp"
#include "vcluster/scheduler/scheduler.hpp"
#include "vcluster/sim/report.hpp"
#include "vcluster/sim/simulation.hpp"
#include "vcluster/store/store.hpp"

namespace vcluster::cli {

// Exit codes: 0 success; 1 validation error (unknown subcommand or flag,
// malformed config or input, infeasible request); 2 runtime error (file IO
// failures, instances leaked at simulation end).

namespace detail {

inline provider::CloudProfile profile_by_name_or_file(const std::string& arg) {
  if (arg == "jetstream-like") return provider::jetstream_like_profile();
  if (arg == "redcloud-like") return provider::redcloud_like_profile();
  return config::load_profile(config::parse_text_config(config::read_text_file(arg)));
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw IoError("error writing file: " + path);
}

/// --config is optional wherever VCLUSTER_CONFIG points at the config file.
inline std::optional<std::string> config_path_from(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("VCLUSTER_CONFIG")) {
    if (*env) return std::string(env);
  }
  return std::nullopt;
}

inline std::string require_config_path(const std::string& flag_value) {
  if (auto p = config_path_from(flag_value)) return *p;
  throw Error("no cluster config: pass --config or set VCLUSTER_CONFIG");
}

inline ClusterConfig load_cluster(const std::string& path) {
  return config::load_cluster_config(config::parse_text_config(config::read_text_file(path)));
}

/// Event-sourced view for `status`: the tables are rebuilt purely from the
/// log, the same way usage accounting works, so they show exactly what the
/// log proves and nothing more.
inline std::string render_status(const std::vector<Event>& events) {
  struct JobRow {
    TimeMs submit = -1, start = -1, end = -1;
    std::string state = "Pending";
  };
  struct NodeRow {
    std::string instance = "-";
    std::string state = "Provisioning";
    TimeMs requested = -1, terminated = -1;
  };
  validate_log(events);
  std::map<std::string, JobRow> jobs;
  std::map<std::string, NodeRow> nodes;
  for (const Event& e : events) {
    switch (e.kind) {
      case EventKind::JobSubmitted:
        jobs[e.payload.at("job")].submit = e.time;
        break;
      case EventKind::JobStarted: {
        JobRow& r = jobs[e.payload.at("job")];
        r.start = e.time;
        r.state = "Running";
        break;
      }
      case EventKind::JobEnded: {
        JobRow& r = jobs[e.payload.at("job")];
        r.end = e.time;
        r.state = e.payload.at("state");
        break;
      }
      case EventKind::NodeRequested: {
        NodeRow& n = nodes[e.payload.at("node")];
        n.requested = e.time;
        if (auto it = e.payload.find("instance"); it != e.payload.end()) n.instance = it->second;
        break;
      }
      case EventKind::NodeActive:
      case EventKind::NodeIdle:
        nodes[e.payload.at("node")].state = "Idle";
        break;
      case EventKind::NodeAllocated:
        nodes[e.payload.at("node")].state = "Allocated";
        break;
      case EventKind::NodeTerminated: {
        NodeRow& n = nodes[e.payload.at("node")];
        n.terminated = e.time;
        n.state = "Terminated";
        break;
      }
      case EventKind::NodeFailed:
        nodes[e.payload.at("node")].state = "Failed";
        break;
      case EventKind::ReconcileRan:
        break;
    }
  }

  auto ms = [](TimeMs t) { return t < 0 ? std::string("-") : std::to_string(t); };
  std::ostringstream out;
  out << std::left;
  out << "jobs: " << jobs.size() << "\n";
  if (!jobs.empty()) {
    out << "  " << std::setw(8) << "job" << std::setw(11) << "state" << std::setw(11)
        << "submit_ms" << std::setw(10) << "start_ms" << "end_ms\n";
    for (const auto& [id, r] : jobs) {
      out << "  " << std::setw(8) << id << std::setw(11) << r.state << std::setw(11)
          << ms(r.submit) << std::setw(10) << ms(r.start) << ms(r.end) << "\n";
    }
  }
  out << "nodes: " << nodes.size() << "\n";
  if (!nodes.empty()) {
    out << "  " << std::setw(8) << "node" << std::setw(10) << "instance" << std::setw(13)
        << "state" << std::setw(14) << "requested_ms" << "terminated_ms\n";
    for (const auto& [id, n] : nodes) {
      out << "  " << std::setw(8) << id << std::setw(10) << n.instance << std::setw(13) << n.state
          << std::setw(14) << ms(n.requested) << ms(n.terminated) << "\n";
    }
  }
  UsageReport usage = accumulate_usage(events);
  out << "node_seconds_total: " << usage.node_seconds_total << "\n";
  out << "node_seconds_busy: " << usage.node_seconds_busy << "\n";
  out << "utilization: " << usage.utilization() << "\n";
  out << "max_concurrent_nodes: " << usage.max_concurrent_nodes << "\n";
  return out.str();
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"vcluster: elastic virtual cluster toolkit"};
  app.require_subcommand(1);

  // deploy
  std::string dp_config, dp_profile, dp_node;
  auto* deploy =
      app.add_subcommand("deploy", "validate config + profile, print the resolved request");
  deploy->add_option("--config", dp_config, "cluster config file");
  deploy->add_option("--profile", dp_profile,
                     "cloud profile: jetstream-like, redcloud-like, or a file")
      ->required();
  deploy->add_option("--node", dp_node, "logical node id to resolve (default: the headnode)");

  // submit
  std::string sb_trace, sb_image, sb_mpi, sb_config;
  TimeMs sb_submit = 0;
  int sb_nodes = 0, sb_tasks = 1;
  DurationMs sb_duration = 0, sb_walltime = 0;
  auto* submit = app.add_subcommand("submit", "append a job to a workload trace");
  submit->add_option("--trace", sb_trace, "trace file to append to (created if missing)")
      ->required();
  submit->add_option("--submit-ms", sb_submit, "submission time");
  submit->add_option("--nodes", sb_nodes, "node count")->required();
  submit->add_option("--tasks-per-node", sb_tasks, "MPI ranks per node");
  submit->add_option("--duration-ms", sb_duration, "simulated run length")->required();
  submit->add_option("--walltime-ms", sb_walltime, "walltime limit")->required();
  submit->add_option("--image", sb_image, "container image reference")->required();
  submit->add_option("--mpi", sb_mpi, "container MPI runtime, e.g. openmpi:4.0.1")->required();
  submit->add_option("--config", sb_config,
                     "cluster config file; when set, width and MPI are checked");

  // status
  std::string st_log;
  auto* status = app.add_subcommand("status", "render job and node tables from an event log");
  status->add_option("--log", st_log, "event log file")->required();

  // simulate
  std::string sim_config, sim_trace, sim_provider, sim_profile = "jetstream-like";
  std::string sim_out_path;
  std::optional<std::uint64_t> sim_seed;
  bool sim_jobs = false, sim_scaling = false;
  auto* simulate = app.add_subcommand("simulate", "run a workload trace through the cluster");
  simulate->add_option("--config", sim_config, "cluster config file");
  simulate->add_option("--trace", sim_trace, "workload trace file")->required();
  simulate->add_option("--provider", sim_provider, "simulated provider config file");
  simulate->add_option("--profile", sim_profile,
                       "cloud profile: jetstream-like, redcloud-like, or a file");
  simulate->add_option("--seed", sim_seed, "override the provider seed");
  simulate->add_option("--out", sim_out_path, "write the event log to this file");
  simulate->add_flag("--jobs", sim_jobs, "print the per-job table");
  simulate->add_flag("--scaling", sim_scaling, "print the scaling timeline");

  // hpl-gen
  int hg_nodes = 0, hg_cores = 0, hg_nb = 192;
  double hg_mem_gb = 0.0, hg_fraction = 0.8;
  std::string hg_out;
  auto* hpl_gen = app.add_subcommand("hpl-gen", "generate an HPL.dat for a cluster size");
  hpl_gen->add_option("--nodes", hg_nodes, "node count")->required();
  hpl_gen->add_option("--cores", hg_cores, "MPI ranks per node")->required();
  hpl_gen->add_option("--mem-gb", hg_mem_gb, "memory per node in GB (1 GB = 1e9 bytes)")
      ->required();
  hpl_gen->add_option("--fraction", hg_fraction, "fraction of memory to fill");
  hpl_gen->add_option("--nb", hg_nb, "block size");
  hpl_gen->add_option("-o,--output", hg_out, "write to this file instead of stdout");

  // hpl-command
  int hc_nprocs = 0;
  std::string hc_image, hc_input = "HPL.dat";
  auto* hpl_cmd = app.add_subcommand("hpl-command", "print the hybrid MPI launch command");
  hpl_cmd->add_option("--nprocs", hc_nprocs, "total MPI ranks")->required();
  hpl_cmd->add_option("--image", hc_image, "container image reference")->required();
  hpl_cmd->add_option("--input", hc_input, "HPL input file name");

  // hpl-report
  std::string hr_file;
  double hr_rmax = 0.0;
  auto* hpl_report =
      app.add_subcommand("hpl-report", "parse an xhpl output and score it against peak");
  hpl_report->add_option("file", hr_file, "xhpl stdout capture")->required();
  // --rmax names the denominator: the theoretical peak the run is scored
  // against. The measured rate comes from the parsed output.
  hpl_report->add_option("--rmax", hr_rmax, "theoretical peak Gflops")->required();

  // hash
  std::string hs_file;
  auto* hash = app.add_subcommand("hash", "hash a derivation file");
  hash->add_option("file", hs_file, "derivation file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (deploy->parsed()) {
      auto cfg = detail::load_cluster(detail::require_config_path(dp_config));
      auto profile = detail::profile_by_name_or_file(dp_profile);
      auto req = provider::resolve(cfg, profile, "vc0", dp_node);
      out << "name: " << req.name << "\n";
      out << "flavor: " << req.flavor << "\n";
      out << "image: " << req.image << "\n";
      out << "network: " << req.network.name << "\n";
      out << "explicit_dhcp: " << (req.network.explicit_dhcp ? "true" : "false") << "\n";
      for (const std::string& s : req.network.dhcp_servers) out << "dhcp_server: " << s << "\n";
      for (const auto& [k, v] : req.metadata) out << "metadata: " << k << "=" << v << "\n";
      return 0;
    }

    if (submit->parsed()) {
      sim::TraceEntry e;
      e.submit_ms = sb_submit;
      e.node_count = sb_nodes;
      e.tasks_per_node = sb_tasks;
      e.duration_ms = sb_duration;
      e.walltime_ms = sb_walltime;
      e.image = store::ImageRef::parse(sb_image);
      e.mpi = store::MpiRuntime::parse(sb_mpi);
      e.validate();
      if (auto cfg_path = detail::config_path_from(sb_config)) {
        ClusterConfig cfg = detail::load_cluster(*cfg_path);
        if (e.node_count > cfg.max_nodes) {
          throw JobTooLarge("(submitted)", e.node_count, cfg.max_nodes);
        }
        auto compat = store::check_mpi_compat(cfg.host_mpi, e.mpi);
        if (!compat.compatible) throw store::IncompatibleMpi(compat.reason);
      }
      sim::WorkloadTrace trace;
      if (std::filesystem::exists(sb_trace)) {
        trace = sim::parse_trace(config::read_text_file(sb_trace));
      }
      trace.entries.push_back(e);
      // Keep the file sorted by submit time so it stays a valid trace; a
      // stable sort keeps equal-time jobs in append order.
      std::stable_sort(trace.entries.begin(), trace.entries.end(),
                       [](const sim::TraceEntry& a, const sim::TraceEntry& b) {
                         return a.submit_ms < b.submit_ms;
                       });
      detail::write_file(sb_trace, sim::render_trace(trace));
      out << e.submit_ms << ' ' << e.node_count << ' ' << e.tasks_per_node << ' '
          << e.duration_ms << ' ' << e.walltime_ms << ' ' << e.image.str() << ' ' << e.mpi.str()
          << "\n";
      return 0;
    }

    if (status->parsed()) {
      auto events = parse_event_log(config::read_text_file(st_log));
      out << detail::render_status(events);
      return 0;
    }

    if (simulate->parsed()) {
      sim::SimulationInputs in;
      in.cluster = detail::load_cluster(detail::require_config_path(sim_config));
      in.trace = sim::parse_trace(config::read_text_file(sim_trace));
      if (!sim_provider.empty()) {
        auto doc = config::parse_text_config(config::read_text_file(sim_provider));
        in.provider = config::load_sim_provider_config(doc);
        in.retry = config::load_retry_policy(doc);
      }
      if (sim_seed) in.provider.seed = *sim_seed;
      in.profile = detail::profile_by_name_or_file(sim_profile);
      sim::SimulationReport rep = sim::run_simulation(std::move(in));
      out << sim::render_report(rep);
      if (sim_jobs) out << "\n" << sim::render_jobs(rep);
      if (sim_scaling) out << "\n" << sim::render_scaling(rep);
      if (!sim_out_path.empty()) detail::write_file(sim_out_path, rep.event_log_text);
      return rep.leak_check_ok ? 0 : 2;
    }

    if (hpl_gen->parsed()) {
      auto mem_bytes = static_cast<std::int64_t>(std::llround(hg_mem_gb * 1e9));
      hpl::HplInput in = hpl::generate_hpl_input(hg_nodes, hg_cores, mem_bytes, hg_fraction, hg_nb);
      std::string dat = hpl::render_hpl_dat(in);
      if (hg_out.empty()) {
        out << dat;
      } else {
        detail::write_file(hg_out, dat);
      }
      return 0;
    }

    if (hpl_cmd->parsed()) {
      out << hpl::build_hybrid_command(hc_nprocs, store::ImageRef::parse(hc_image), hc_input)
          << "\n";
      return 0;
    }

    if (hpl_report->parsed()) {
      auto results = hpl::parse_hpl_output(config::read_text_file(hr_file));
      auto best = hpl::best_result(results);
      if (!best) {
        err << "error: no result rows found\n";
        return 1;
      }
      auto rep = hpl::compute_efficiency(best->gflops, hr_rmax);
      std::ostringstream eff;
      eff << std::fixed << std::setprecision(4) << rep.efficiency;
      out << "measured_gflops: " << rep.rmax_gflops << "\n";
      out << "peak_gflops: " << rep.rpeak_gflops << "\n";
      out << "efficiency: " << eff.str() << "\n";
      out << "in_reference_band: " << (rep.in_reference_band ? "true" : "false") << "\n";
      return 0;
    }

    if (hash->parsed()) {
      auto drv =
          config::load_derivation(config::parse_text_config(config::read_text_file(hs_file)));
      store::Digest h = store::hash_derivation(drv);
      out << h.hex() << "\n";
      out << store::store_path_for(h, drv.name) << "\n";
      return 0;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "no subcommand\n";
  return 1;
}

}  // namespace vcluster::cli
