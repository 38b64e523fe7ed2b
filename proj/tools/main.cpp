#include "nilsoliton/certification.hpp"
#include "nilsoliton/constructions.hpp"
#include "nilsoliton/errors.hpp"
#include "nilsoliton/family_json.hpp"
#include "nilsoliton/flow.hpp"
#include "nilsoliton/indecomposability.hpp"
#include "nilsoliton/moduli.hpp"
#include "nilsoliton/moment.hpp"
#include "nilsoliton/report_json.hpp"
#include "nilsoliton/tensor_json.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace ns = nilsoliton;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

struct FamilyFlags {
  std::string spec_file;
  std::string family;
  std::optional<int> j, k, n, d, dim_q, dim_p;
  std::vector<double> t;
  std::optional<double> lambda, mu;
  std::vector<std::string> adjoin;
  bool j9_base = false;

  void add(CLI::App* app, bool with_family_default) {
    app->add_option("--spec", spec_file, "family spec JSON file");
    auto* f = app->add_option("--family", family,
                              "heisenberg, soliton23, b-blocks, non-einstein, j9, minimal-d, adjoined");
    if (with_family_default) f->default_str("non-einstein");
    app->add_option("--j", j, "slot count");
    app->add_option("--k", k, "J-block count");
    app->add_option("--n", n, "middle tuple count");
    app->add_option("--t", t, "t_1..t_{n-1}")->delimiter(',');
    app->add_option("--d", d, "0 or 3 (soliton block)");
    app->add_option("--dim-q", dim_q, "minimal-d: q");
    app->add_option("--dim-p", dim_p, "minimal-d: p");
    app->add_option("--lambda", lambda, "minimal-d: first-component scale");
    app->add_option("--mu", mu, "minimal-d: scale of the other components");
    app->add_option("--adjoin", adjoin, "adjoined tuple: minimal-d:Q:P[:LAMBDA:MU] or a spec file (repeatable)");
    app->add_flag("--j9-base", j9_base, "adjoined: use the (j,9) family as base");
  }

  bool given() const {
    return !spec_file.empty() || !family.empty() || j || k || n || d || !t.empty() || dim_q || dim_p || !adjoin.empty();
  }

  static ns::FamilySpec parse_adjoin(const std::string& s) {
    if (s.rfind("minimal-d:", 0) == 0) {
      std::vector<double> v;
      std::size_t pos = 10;
      while (pos <= s.size()) {
        const auto next = s.find(':', pos);
        const std::string part = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        try {
          v.push_back(std::stod(part));
        } catch (const std::exception&) {
          throw ns::ContractError("--adjoin: bad number '" + part + "' in '" + s + "'");
        }
        if (next == std::string::npos) break;
        pos = next + 1;
      }
      if (v.size() != 2 && v.size() != 4) throw ns::ContractError("--adjoin: expected minimal-d:Q:P[:LAMBDA:MU]");
      return ns::FamilySpec::minimal_d(static_cast<int>(v[0]), static_cast<int>(v[1]), v.size() == 4 ? v[2] : 1.0,
                                       v.size() == 4 ? v[3] : 1.0);
    }
    return ns::family_from_json(ns::read_json_file(s));
  }

  ns::FamilySpec spec() const {
    if (!spec_file.empty()) return ns::family_from_json(ns::read_json_file(spec_file));
    const auto kind = ns::parse_family_kind(family.empty() ? "non-einstein" : family);
    json jj;
    jj["kind"] = ns::to_string(kind);
    if (j) jj["j"] = *j;
    if (k) jj["k"] = *k;
    if (n) jj["n"] = *n;
    if (!t.empty()) jj["t"] = t;
    if (d) jj["d"] = *d;
    if (dim_q) jj["dim_q"] = *dim_q;
    if (dim_p) jj["dim_p"] = *dim_p;
    if (lambda) jj["lambda"] = *lambda;
    if (mu) jj["mu"] = *mu;
    jj["base_is_j9"] = j9_base;
    json list = json::array();
    for (const auto& a : adjoin) list.push_back(ns::family_to_json(parse_adjoin(a)));
    jj["adjoin_list"] = list;
    return ns::family_from_json(jj);
  }
};

struct Output {
  std::string path;
  bool timing = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(json payload) const {
    if (timing) {
      const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      payload["_sidecar"] = {{"elapsed_seconds", sec}};
    }
    if (path.empty() || path == "-")
      std::cout << payload.dump(2) << '\n';
    else
      ns::write_json_file(path, payload);
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ns::IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ns::IoError("error while writing '" + path + "'");
}

ns::StructureTensor load_tensor(const std::string& path) {
  ns::StructureTensor c = ns::read_tensor_file(path);
  double scale = 0.0;
  for (const auto& m : c.components()) scale = std::max(scale, m.cwiseAbs().maxCoeff());
  if (c.symmetrization_correction() > 1e-12 * std::max(1.0, scale))
    throw ns::ContractError(path + ": matrices are not skew-symmetric (largest symmetric part " +
                            std::to_string(c.symmetrization_correction()) + ")");
  return c;
}

json tensor_summary(const ns::StructureTensor& c) {
  const ns::Matrix ker = ns::common_kernel(c);
  return {{"p", c.p()},
          {"q", c.q()},
          {"so_dim", c.so_dim()},
          {"labels", c.labels()},
          {"is_type_pq", ns::is_type_pq(c)},
          {"component_rank_ratio", ns::component_rank_ratio(c)},
          {"common_kernel_dim", ker.cols()},
          {"norm", ns::norm(c)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nilsoliton: two-step nilpotent structure tensors, moment maps and certificates"};
  app.require_subcommand(1);
  Output out;
  app.add_flag("--timing", out.timing, "add elapsed time in a _sidecar field");

  // build
  auto* build = app.add_subcommand("build", "build a family tensor");
  FamilyFlags build_f;
  build_f.add(build, true);
  std::string block;
  int block_k = 1;
  bool emit_spec = false;
  build->add_option("--block", block, "standard block instead of a family (J, B1..B6, JK_pair, Soliton23, HeisenbergJ)");
  build->add_option("--block-k", block_k, "k for HeisenbergJ");
  build->add_flag("--emit-spec", emit_spec, "write the family spec instead of the tensor");
  build->add_option("-o,--output", out.path, "output file (default stdout)");

  // moment
  auto* moment = app.add_subcommand("moment", "moment map and distinguished-point report");
  std::string input;
  moment->add_option("input", input, "tensor JSON file")->required();
  moment->add_option("-o,--output", out.path, "output file");

  // flow
  auto* flow = app.add_subcommand("flow", "gradient flow of |m|^2 towards a distinguished point");
  ns::FlowOptions fopts;
  flow->add_option("input", input, "tensor JSON file")->required();
  flow->add_option("--tol", fopts.tol, "residual tolerance")->check(CLI::PositiveNumber);
  flow->add_option("--max-iter", fopts.max_iter, "iteration budget")->check(CLI::NonNegativeNumber);
  flow->add_option("--rank-tol", fopts.rank_tol, "component rank tolerance")->check(CLI::PositiveNumber);
  flow->add_option("--orbit-tol", fopts.orbit_tol, "orbit-map rank tolerance")->check(CLI::PositiveNumber);
  flow->add_flag("--trace", fopts.record_trace, "record objective and residual per step");
  flow->add_option("-o,--output", out.path, "output file");

  // certify
  auto* certify = app.add_subcommand("certify", "non-Einstein certificate for a family tensor");
  FamilyFlags cert_f;
  cert_f.add(certify, false);
  ns::CertifyOptions copts;
  bool no_spread = false;
  certify->add_option("input", input, "tensor JSON file")->required();
  certify->add_option("--seed", copts.seed, "seed for sampled checks");
  certify->add_option("--starts", copts.spread_starts, "spread minimisation starts")->check(CLI::PositiveNumber);
  certify->add_flag("--no-spread", no_spread, "skip the corroborating spread minimum");
  certify->add_option("-o,--output", out.path, "output file");

  // indecomp
  auto* indecomp = app.add_subcommand("indecomp", "indecomposability criteria and decomposition search");
  FamilyFlags ind_f;
  ind_f.add(indecomp, false);
  ns::SearchOptions sopts;
  bool search = false;
  indecomp->add_option("input", input, "tensor JSON file")->required();
  indecomp->add_flag("--search", search, "also run the decomposition search");
  indecomp->add_option("--seed", sopts.seed, "search seed");
  indecomp->add_option("--attempts", sopts.attempts, "random candidates")->check(CLI::PositiveNumber);
  indecomp->add_option("-o,--output", out.path, "output file");

  // moduli
  auto* moduli = app.add_subcommand("moduli", "moduli dimensions and the non-Einstein region");
  int mp = 0, mq = 0, table_q = 0;
  bool moduli_json = false;
  std::string csv_path;
  moduli->add_option("--p", mp, "p");
  moduli->add_option("--q", mq, "q");
  moduli->add_option("--table", table_q, "region table up to this q (CSV)");
  moduli->add_flag("--json", moduli_json, "JSON entry with the rule that applied and the region");
  moduli->add_option("--csv", csv_path, "region table CSV output file (default stdout)");

  // scan
  auto* scan = app.add_subcommand("scan", "flow a batch of random tensors");
  int sp = 2, sq = 5, trials = 50;
  std::uint64_t seed = kDefaultSeed;
  std::optional<int> threads;
  ns::FlowOptions scan_opts;
  scan->add_option("--p", sp, "p")->required();
  scan->add_option("--q", sq, "q")->required();
  scan->add_option("--trials", trials, "trial count")->check(CLI::PositiveNumber);
  scan->add_option("--seed", seed, "run seed");
  scan->add_option("--threads", threads, "worker threads (capped by NILSOLITON_THREADS)")->check(CLI::PositiveNumber);
  scan->add_option("--tol", scan_opts.tol, "residual tolerance")->check(CLI::PositiveNumber);
  scan->add_option("--max-iter", scan_opts.max_iter, "iteration budget")->check(CLI::NonNegativeNumber);
  scan->add_option("--csv", csv_path, "residual histogram CSV file");
  scan->add_option("-o,--output", out.path, "output file");

  // show
  auto* show = app.add_subcommand("show", "summarise a tensor file");
  show->add_option("input", input, "tensor JSON file")->required();
  show->add_option("-o,--output", out.path, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (build->parsed()) {
      if (!block.empty()) {
        out.emit(ns::tensor_to_json(ns::standard_blocks(ns::parse_block_name(block), block_k)));
      } else {
        const ns::FamilySpec spec = build_f.spec();
        out.emit(emit_spec ? ns::family_to_json(spec) : ns::tensor_to_json(ns::build_family(spec)));
      }
    } else if (moment->parsed()) {
      const auto c = load_tensor(input);
      out.emit({{"moment", ns::to_json(ns::moment(c))}, {"report", ns::to_json(ns::distinguished_report(c))}});
    } else if (flow->parsed()) {
      const auto c = load_tensor(input);
      out.emit(ns::to_json(ns::flow_to_distinguished(c, fopts)));
    } else if (certify->parsed()) {
      const auto c = load_tensor(input);
      copts.run_spread = !no_spread;
      ns::Certificate cert;
      if (cert_f.given()) {
        const ns::FamilySpec spec = cert_f.spec();
        const ns::StructureTensor built = ns::build_family(spec);
        cert = ns::non_einstein_certificate(spec, copts);
        const bool same_type = built.p() == c.p() && built.q() == c.q();
        const double diff = same_type ? ns::max_abs_difference(built, c) : -1.0;
        const bool match = same_type && diff <= 1e-12;
        cert.conditions.insert(cert.conditions.begin(),
                               ns::Condition{"input is the family member", diff, match,
                                             same_type ? "max entry difference" : "type differs"});
        if (!match) {
          cert.verdict = ns::Verdict::Inconclusive;
          cert.notes.push_back("the input tensor is not the family member described by the flags");
        }
      } else {
        const auto rep = ns::distinguished_report(c);
        cert.verdict = ns::is_distinguished(rep) ? ns::Verdict::Distinguished : ns::Verdict::Inconclusive;
        cert.conditions.push_back(ns::Condition{"residual below tolerance", rep.residual, ns::is_distinguished(rep),
                                                "numerical; no family given"});
      }
      out.emit(ns::to_json(cert));
    } else if (indecomp->parsed()) {
      const auto c = load_tensor(input);
      ns::IndecompOptions iopts;
      if (ind_f.given()) iopts.meta = ind_f.spec();
      iopts.certify.run_spread = false;
      json j = {{"certificate", ns::to_json(ns::structural_criteria(c, iopts))}};
      if (search) {
        const auto dec = ns::decomposition_search(c, sopts);
        j["decomposition"] = dec ? ns::to_json(*dec) : json(nullptr);
      }
      out.emit(j);
    } else if (moduli->parsed()) {
      if (table_q > 0) {
        const std::string csv = ns::region_table_csv(ns::region_table(table_q));
        if (csv_path.empty())
          std::cout << csv;
        else
          write_text(csv_path, csv);
      } else {
        if (mp == 0 || mq == 0) throw ns::ContractError("moduli: give --p and --q, or --table");
        const auto e = ns::generic_moduli_entry(mp, mq);
        if (moduli_json)
          out.emit({{"entry", ns::to_json(e)}, {"region", ns::to_json(ns::non_einstein_region(mp, mq))}});
        else
          std::cout << e.dim << '\n';
      }
    } else if (scan->parsed()) {
      const auto s = ns::scan_generic(sp, sq, trials, seed, scan_opts, threads);
      if (!csv_path.empty()) write_text(csv_path, s.histogram_csv());
      out.emit(ns::to_json(s));
    } else if (show->parsed()) {
      out.emit(tensor_summary(load_tensor(input)));
    }
  } catch (const ns::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
