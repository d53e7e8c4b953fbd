// Copyright 2026 The bewitness Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bewitness/bewitness.hpp"
#include "bewitness/io.hpp"

namespace bewitness::cli {

using nlohmann::json;

/// Everything that determines a command's output besides its input files.
struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  std::size_t starts = 200;
  std::size_t search_starts = 2000;
  std::map<std::string, double> tolerances{
      {"rank", kDefaultRankTol},          {"ppt", kPptTol},
      {"residual", kFeasibleResidualTol}, {"infeasible", kInfeasibleResidualTol},
      {"certificate", kCertificateThreshold}, {"seesaw", 1e-12},
      {"margin", kDetectionMargin},
  };
  std::string output_path;
  std::string format = "json";
};

/// Precondition or input failure; reported on stderr with exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("malformed JSON in " + path + ": " + e.what());
  }
}

inline std::vector<std::size_t> parse_group(const std::string& text, std::size_t n) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t value = 0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), value);
    if (r.ec != std::errc() || r.ptr != item.data() + item.size()) throw UsageError("bad index in --g: " + item);
    if (value < 1 || value > n) throw UsageError("--g index " + item + " outside 1.." + std::to_string(n));
    out.push_back(value);
  }
  if (out.empty()) throw UsageError("--g must list at least one member index");
  return out;
}

inline std::vector<std::size_t> zero_based(const std::vector<std::size_t>& one_based) {
  std::vector<std::size_t> out;
  for (std::size_t g : one_based) out.push_back(g - 1);
  return out;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"Bound entangled states from unextendible product bases"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    app.fallthrough();

    if (const char* env = std::getenv("BEWITNESS_SEED")) {
      std::uint64_t s = 0;
      const std::string text(env);
      const auto r = std::from_chars(text.data(), text.data() + text.size(), s);
      if (r.ec == std::errc() && r.ptr == text.data() + text.size()) cfg_.seed = s;
    }
    app.add_option("--seed", cfg_.seed, "Seed for every stochastic search (env BEWITNESS_SEED)");
    app.add_option("--starts", cfg_.starts, "Seesaw restarts for the overlap minimum")->check(CLI::PositiveNumber);
    app.add_option("--search-starts", cfg_.search_starts, "Seesaw restarts for product-state search")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol", tol_args_, "Override a tolerance, NAME=VALUE (rank, ppt, residual, infeasible, certificate, seesaw, margin)");
    app.add_option("-o,--out", cfg_.output_path, "Write the result here instead of stdout");
    app.add_option("--format", cfg_.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    // upb
    auto* upb = app.add_subcommand("upb", "Construct or certify unextendible product bases");
    upb->require_subcommand(1);
    upb->add_subcommand("tiles", "Tiles UPB of 3x3")->callback([this] { emit(io::to_json(tiles_upb())); });
    std::size_t dim = 0;
    auto* padded = upb->add_subcommand("padded", "Real UPB of d x d with d^2 - 4 members");
    padded->add_option("--dim", dim, "Local dimension d >= 3")->required();
    padded->callback([this, &dim] {
      if (dim < 3) throw UsageError("--dim must be at least 3");
      emit(io::to_json(padded_real_upb(dim)));
    });
    std::string in_path;
    auto* certify = upb->add_subcommand("certify", "Numerical unextendibility certificate");
    certify->add_option("--in", in_path, "UPB catalog file")->required();
    certify->callback([this, &in_path] { cmd_certify(in_path); });

    // state
    auto* state = app.add_subcommand("state", "Build density operators from a UPB");
    state->require_subcommand(1);
    std::string upb_path;
    auto* be = state->add_subcommand("rho-be", "Normalized projector onto the UPB complement");
    be->add_option("--upb", upb_path, "UPB catalog file")->required();
    be->callback([this, &upb_path] { cmd_rho_be(upb_path); });
    std::string group_text;
    double omega = 0.0;
    auto* rg = state->add_subcommand("rho-g", "Mixture of a normalized subset projector with rho-be");
    rg->add_option("--upb", upb_path, "UPB catalog file")->required();
    rg->add_option("--g", group_text, "Comma separated 1-based member indices")->required();
    rg->add_option("--omega", omega, "Mixing weight in [0, 1]")->required();
    rg->callback([this, &upb_path, &group_text, &omega] { cmd_rho_g(upb_path, group_text, omega); });

    // check
    auto* check = app.add_subcommand("check", "Analyse a state file");
    check->require_subcommand(1);
    std::string state_path;
    check->add_subcommand("ppt", "Partial transpose spectrum")
        ->callback([this, &state_path] { cmd_ppt(state_path); })
        ->add_option("--state", state_path, "State file")
        ->required();
    std::optional<double> lambda;
    std::string family = "basic";
    auto* wit = check->add_subcommand("witness", "Evaluate an entanglement witness built from the state's UPB");
    wit->add_option("--state", state_path, "State file")->required();
    wit->add_option("--lambda", lambda, "Minimum product overlap of the UPB; computed when omitted");
    wit->add_option("--family", family, "Witness family")->check(CLI::IsMember({"basic", "projector"}));
    wit->callback([this, &state_path, &lambda, &family] { cmd_witness(state_path, lambda, family); });
    check->add_subcommand("range-criterion", "Range criterion with product states found in the range")
        ->callback([this, &state_path] { cmd_range_criterion(state_path); })
        ->add_option("--state", state_path, "State file")
        ->required();
    std::string pool_path;
    auto* sep = check->add_subcommand("separable-nnls", "Convex decomposition into product states of the support");
    sep->add_option("--state", state_path, "State file")->required();
    sep->add_option("--pool", pool_path, "Findings or catalog file with the product states to use");
    sep->callback([this, &state_path, &pool_path] { cmd_separable(state_path, pool_path); });
    check->add_subcommand("products", "Product states in the range of the state")
        ->callback([this, &state_path] { cmd_products(state_path); })
        ->add_option("--state", state_path, "State file")
        ->required();

    // scan
    auto* scan = app.add_subcommand("scan", "Tabulate checks of rho-g over a grid of omega");
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
    std::string checks = "witness,ppt,nnls,rc";
    scan->add_option("--upb", upb_path, "UPB catalog file")->required();
    scan->add_option("--g", group_text, "Comma separated 1-based member indices")->required();
    scan->add_option("--omega-from", from, "First omega")->required();
    scan->add_option("--omega-to", to, "Last omega")->required();
    scan->add_option("--step", step, "Grid step")->required();
    scan->add_option("--checks", checks, "Comma separated subset of witness,ppt,nnls,rc");
    scan->add_option("--lambda", lambda, "Minimum product overlap of the UPB; computed when omitted");
    scan->callback([&] { cmd_scan(upb_path, group_text, from, to, step, checks, lambda); });

    std::vector<const char*> argv{"bewitness"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << "\n";
      return 1;
    }
    return 0;
  }

 private:
  double tol(const std::string& name) {
    if (!tolerances_applied_) {
      apply_tolerances();
      tolerances_applied_ = true;
    }
    return cfg_.tolerances.at(name);
  }

  void apply_tolerances() {
    for (const auto& item : tol_args_) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw UsageError("--tol expects NAME=VALUE, got " + item);
      const std::string name = item.substr(0, eq);
      if (!cfg_.tolerances.contains(name)) throw UsageError("unknown tolerance " + name);
      const std::string value = item.substr(eq + 1);
      double v = 0.0;
      const auto r = std::from_chars(value.data(), value.data() + value.size(), v);
      if (r.ec != std::errc() || r.ptr != value.data() + value.size() || !(v >= 0.0)) {
        throw UsageError("bad value for tolerance " + name);
      }
      cfg_.tolerances[name] = v;
    }
  }

  void require_json(const char* command) const {
    if (cfg_.format != "json") throw UsageError(std::string(command) + " only writes JSON");
  }

  void write(const std::string& text) {
    if (cfg_.output_path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(cfg_.output_path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + cfg_.output_path);
    f << text;
  }

  void emit(const json& j) {
    require_json("this command");
    write(j.dump(2) + "\n");
  }

  OverlapOptions overlap_options() {
    OverlapOptions o;
    o.starts = cfg_.starts;
    o.seed = cfg_.seed;
    o.tol = tol("seesaw");
    return o;
  }

  SearchOptions search_options() const {
    SearchOptions o;
    o.starts = cfg_.search_starts;
    o.seed = cfg_.seed;
    return o;
  }

  UpbSet load_upb(const std::string& path) const {
    try {
      return io::upb_from_json(read_json(path));
    } catch (const std::invalid_argument& e) {
      throw UsageError("invalid UPB catalog " + path + ": " + e.what());
    }
  }

  io::StateFile load_state(const std::string& path) const {
    try {
      return io::state_from_json(read_json(path));
    } catch (const std::invalid_argument& e) {
      throw UsageError("invalid state file " + path + ": " + e.what());
    }
  }

  double lambda_for(const UpbSet& s, const std::optional<double>& given) {
    if (given) {
      if (!(*given > 0.0)) throw UsageError("--lambda must be positive");
      return *given;
    }
    const auto c = unextendibility_certificate(s, overlap_options(), tol("certificate"));
    if (!c.is_upb_evidence) throw UsageError("set is extendible (lambda_hat = " + format_double(c.lambda_hat) + "); no witness exists");
    return c.lambda_hat;
  }

  void cmd_certify(const std::string& path) {
    const UpbSet s = load_upb(path);
    const auto c = unextendibility_certificate(s, overlap_options(), tol("certificate"));
    json j = io::to_json(c);
    j["starts"] = cfg_.starts;
    j["seed"] = cfg_.seed;
    emit(j);
    err_ << "lambda_hat = " << format_double(c.lambda_hat) << ", is_upb_evidence = " << std::boolalpha
         << c.is_upb_evidence << "\n";
  }

  void report_state(const DensityOperator& rho) {
    const auto sr = spectrum_and_rank(rho, tol("rank"));
    const auto ppt = ppt_report(rho, tol("ppt"));
    err_ << "rank = " << sr.rank << ", ppt = " << std::boolalpha << ppt.is_ppt << "\n";
  }

  void cmd_rho_be(const std::string& path) {
    require_json("state");
    const UpbSet s = load_upb(path);
    if (s.size() >= s.dims().total()) throw UsageError("UPB spans the whole space");
    io::StateFile f{rho_be(s), {"rho_be", s, {}, 0.0}};
    emit(io::to_json(f));
    report_state(f.rho);
  }

  void cmd_rho_g(const std::string& path, const std::string& group_text, double omega) {
    require_json("state");
    const UpbSet s = load_upb(path);
    if (!(omega >= 0.0 && omega <= 1.0)) throw UsageError("--omega must lie in [0, 1]");
    if (s.size() >= s.dims().total()) throw UsageError("UPB spans the whole space");
    const auto group = parse_group(group_text, s.size());
    io::StateFile f{rho_g(s, zero_based(group), omega), {"rho_g", s, group, omega}};
    emit(io::to_json(f));
    report_state(f.rho);
  }

  void cmd_ppt(const std::string& path) {
    const auto f = load_state(path);
    const PptReport r = ppt_report(f.rho, tol("ppt"));
    emit(json{{"check", "ppt"}, {"min_pt_eigenvalue", r.min_pt_eigenvalue}, {"is_ppt", r.is_ppt}, {"spectrum", r.spectrum}});
  }

  void cmd_witness(const std::string& path, const std::optional<double>& lambda, const std::string& family) {
    require_json("check witness");
    const auto f = load_state(path);
    if (!f.provenance.upb) throw UsageError("state file carries no UPB provenance");
    const UpbSet& s = *f.provenance.upb;
    const double lam = lambda_for(s, lambda);
    const WitnessSpec w = family == "basic" ? basic_witness(s, lam) : projector_witness(s, lam, default_witness_phi(s));
    const double value = witness_value(w, f.rho);
    emit(json{{"check", "witness"},
              {"value", value},
              {"detected", is_detected(value, tol("margin"))},
              {"margin", tol("margin")},
              {"witness", io::to_json(w, s)}});
    if (w.warning) err_ << "warning: " << *w.warning << "\n";
  }

  /// Product states spanning range(rho): the computational product basis
  /// when rho has full rank, otherwise a search inside the range.
  std::vector<ProductVector> range_candidates(const DensityOperator& rho, const SubspaceBasis& range) const {
    const BipartiteDims& dims = rho.dims();
    if (range.size() == dims.total()) {
      std::vector<ProductVector> basis;
      for (std::size_t i = 0; i < dims.dA; ++i)
        for (std::size_t j = 0; j < dims.dB; ++j) basis.push_back({basis_vector(dims.dA, i), basis_vector(dims.dB, j)});
      return basis;
    }
    return find_product_states({range.projector(), dims}, search_options()).states;
  }

  void cmd_range_criterion(const std::string& path) {
    require_json("check range-criterion");
    const auto f = load_state(path);
    const SubspaceBasis range = orthonormal_range(f.rho.matrix(), f.rho.dims(), tol("rank"));
    const auto found = range_candidates(f.rho, range);
    const auto candidates = spanning_subset(found);
    const RcVerdict v = range_criterion_check(f.rho, candidates, tol("rank"));
    json j = io::to_json(v);
    j["check"] = "range-criterion";
    j["product_states_found"] = found.size();
    json cs = json::array();
    for (const auto& c : candidates) cs.push_back(io::to_json(c));
    j["candidates"] = cs;
    emit(j);
  }

  std::vector<ProductVector> load_pool(const std::string& path) const {
    const json j = read_json(path);
    try {
      if (j.contains("clusters")) return io::findings_from_json(j).states;
      return io::upb_from_json(j).members();
    } catch (const std::invalid_argument& e) {
      throw UsageError("invalid pool file " + path + ": " + e.what());
    }
  }

  void cmd_separable(const std::string& path, const std::string& pool_path) {
    require_json("check separable-nnls");
    const auto f = load_state(path);
    std::vector<ProductVector> pool;
    if (!pool_path.empty()) {
      pool = load_pool(pool_path);
    } else {
      const SubspaceBasis range = orthonormal_range(f.rho.matrix(), f.rho.dims(), tol("rank"));
      if (range.size() == f.rho.dims().total()) throw UsageError("state has full rank; pass --pool explicitly");
      pool = find_product_states({range.projector(), f.rho.dims()}, search_options()).states;
    }
    const auto d = convex_decomposition_feasibility(f.rho, pool, tol("residual"), tol("infeasible"));
    json ps = json::array();
    for (const auto& p : pool) ps.push_back(io::to_json(p));
    emit(json{{"check", "separable-nnls"},
              {"verdict", to_string(d.verdict)},
              {"feasible", d.feasible},
              {"residual", d.residual},
              {"weight_sum", d.weight_sum},
              {"weights", d.weights},
              {"pool", ps}});
  }

  void cmd_products(const std::string& path) {
    const auto f = load_state(path);
    const SubspaceBasis range = orthonormal_range(f.rho.matrix(), f.rho.dims(), tol("rank"));
    if (range.size() == f.rho.dims().total()) throw UsageError("state has full rank; every product state lies in its range");
    emit(io::to_json(find_product_states({range.projector(), f.rho.dims()}, search_options())));
  }

  void cmd_scan(const std::string& upb_path, const std::string& group_text, double from, double to, double step,
                const std::string& checks_text, const std::optional<double>& lambda) {
    if (!(from < to)) throw UsageError("--omega-from must be smaller than --omega-to");
    if (!(step > 0.0)) throw UsageError("--step must be positive");
    if (from < 0.0 || to > 1.0) throw UsageError("omega range must lie inside [0, 1]");
    bool want_witness = false, want_ppt = false, want_nnls = false, want_rc = false;
    {
      std::stringstream ss(checks_text);
      std::string c;
      while (std::getline(ss, c, ',')) {
        if (c == "witness") want_witness = true;
        else if (c == "ppt") want_ppt = true;
        else if (c == "nnls") want_nnls = true;
        else if (c == "rc") want_rc = true;
        else if (!c.empty()) throw UsageError("unknown check " + c);
      }
    }
    const UpbSet s = load_upb(upb_path);
    if (s.size() >= s.dims().total()) throw UsageError("UPB spans the whole space");
    const auto group = parse_group(group_text, s.size());
    const auto group0 = zero_based(group);
    std::optional<WitnessSpec> w;
    if (want_witness) w = basic_witness(s, lambda_for(s, lambda));

    // The range only changes at the ends of the interval, so searches are cached per range.
    struct Cached {
      ComplexMatrix projector;
      std::vector<ProductVector> states;
    };
    std::vector<Cached> cache;
    auto candidates_for = [&](const DensityOperator& rho, const SubspaceBasis& range) -> const std::vector<ProductVector>& {
      const ComplexMatrix p = range.projector();
      for (const auto& c : cache)
        if (max_abs_diff(c.projector, p) < 1e-9) return c.states;
      cache.push_back({p, range.size() == rho.dims().total() ? range_candidates(rho, range)
                                                             : find_product_states({p, rho.dims()}, search_options()).states});
      return cache.back().states;
    };

    std::vector<json> rows;
    const std::size_t count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k) {
      const double omega = std::min(from + static_cast<double>(k) * step, to);
      const DensityOperator rho = rho_g(s, group0, omega);
      json row{{"omega", omega}, {"witness_value", nullptr}, {"min_pt_eig", nullptr},
               {"nnls_residual", nullptr}, {"nnls_feasible", nullptr}, {"rc_passed", nullptr}};
      if (w) row["witness_value"] = witness_value(*w, rho);
      if (want_ppt) row["min_pt_eig"] = ppt_report(rho, tol("ppt")).min_pt_eigenvalue;
      if (want_nnls || want_rc) {
        const SubspaceBasis range = orthonormal_range(rho.matrix(), rho.dims(), tol("rank"));
        const auto& cands = candidates_for(rho, range);
        if (want_nnls) {
          if (range.size() == rho.dims().total()) {
            row["nnls_feasible"] = nullptr;
          } else {
            const auto d = convex_decomposition_feasibility(rho, cands, tol("residual"), tol("infeasible"));
            row["nnls_residual"] = d.residual;
            row["nnls_feasible"] = d.feasible;
          }
        }
        if (want_rc) row["rc_passed"] = range_criterion_check(rho, spanning_subset(cands), tol("rank")).passed;
      }
      rows.push_back(std::move(row));
    }

    if (cfg_.format == "csv") {
      static const char* kColumns[] = {"omega", "witness_value", "min_pt_eig", "nnls_residual", "nnls_feasible", "rc_passed"};
      std::string text = "omega,witness_value,min_pt_eig,nnls_residual,nnls_feasible,rc_passed\n";
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < 6; ++c) {
          const json& v = row.at(kColumns[c]);
          if (c) text += ',';
          if (v.is_boolean()) text += v.get<bool>() ? "true" : "false";
          else if (v.is_number()) text += format_double(v.get<double>());
        }
        text += '\n';
      }
      write(text);
    } else {
      json j{{"G", group}, {"lambda_hat", w ? json(w->lambda_hat) : json(nullptr)}, {"rows", rows}};
      write(j.dump(2) + "\n");
    }
  }

  RunConfig cfg_;
  std::vector<std::string> tol_args_;
  bool tolerances_applied_ = false;
  std::ostream& out_;
  std::ostream& err_;
};

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return Runner(out, err).run(args);
}

}  // namespace bewitness::cli
