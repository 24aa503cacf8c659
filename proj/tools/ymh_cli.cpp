#include <CLI11.hpp>

#include <unsupported/Eigen/MatrixFunctions>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <random>

#include "ymh/config.hpp"
#include "ymh/errors.hpp"
#include "ymh/observables.hpp"
#include "ymh/verifier.hpp"

namespace fs = std::filesystem;
using namespace ymh;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string now_string() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_manifest(const std::string& out_dir, const std::string& command, const RunConfig& cfg,
                    std::vector<std::string> outputs) {
  RunManifest m;
  m.command = command;
  m.config = cfg;
  m.version = kVersion;
  m.timestamp = now_string();
  m.outputs = std::move(outputs);
  write_text_file(out_dir + "/manifest.json", m.render_json());
}

std::string report_records(const std::vector<EquationReport>& reports) {
  std::ostringstream os;
  for (const auto& r : reports) {
    os << "{\"anchor\": \"" << r.anchor << "\", \"r\": " << r.r
       << ", \"lhs_constant\": " << r.lhs_constant;
    if (r.degenerate) {
      os << ", \"degenerate\": true, \"pass\": true}\n";
      continue;
    }
    os << ", \"lhs_re\": " << r.lhs.mean.real() << ", \"lhs_im\": " << r.lhs.mean.imag()
       << ", \"rhs_re\": " << r.rhs.mean.real() << ", \"rhs_im\": " << r.rhs.mean.imag()
       << ", \"diff_re\": " << r.diff.mean.real() << ", \"diff_im\": " << r.diff.mean.imag()
       << ", \"stderr_re\": " << r.diff.stderr_re << ", \"stderr_im\": " << r.diff.stderr_im
       << ", \"z_re\": " << r.z_re << ", \"z_im\": " << r.z_im << ", \"n\": " << r.diff.samples
       << ", \"pass\": " << (r.pass ? "true" : "false") << "}\n";
  }
  return os.str();
}

/** Scatter data for external plotting: one LHS/RHS pair per catalog entry. */
std::string report_scatter(const std::vector<EquationReport>& reports) {
  std::ostringstream os;
  os << "# lhs_re lhs_im rhs_re rhs_im anchor\n";
  for (const auto& r : reports) {
    if (r.degenerate) continue;
    os << r.lhs.mean.real() << " " << r.lhs.mean.imag() << " " << r.rhs.mean.real() << " "
       << r.rhs.mean.imag() << " " << r.anchor << "\n";
  }
  return os.str();
}

int cmd_lattice_info(const RunConfig& cfg) {
  LatticeGeometry g(cfg.d, cfg.L);
  std::cout << "d = " << g.dim() << ", L = " << g.side() << "\n";
  std::cout << "vertices:            " << g.num_vertices() << "\n";
  std::cout << "positive edges:      " << g.num_positive_edges() << "\n";
  std::cout << "positive plaquettes: " << g.num_positive_plaquettes() << "\n";
  std::cout << "plaquettes through each edge: " << 2 * (g.dim() - 1) << "\n";
  std::cout << "edges at each site:  " << 2 * g.dim() << "\n";
  return 0;
}

int cmd_magic_check(const RunConfig& cfg, int nmin, int nmax, int reps) {
  Rng rng(cfg.seed);
  std::normal_distribution<double> gauss(0, 1);
  double worst = 0.0;
  auto rand_mat = [&](int N, bool complex_entries) {
    Matrix m(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        m(i, j) = complex_entries ? Complex(gauss(rng), gauss(rng)) : Complex(gauss(rng), 0.0);
    return m;
  };
  auto note = [&](const char* label, const std::string& group, double res) {
    worst = std::max(worst, res);
    std::printf("%-22s %-8s max residual %.3e\n", label, group.c_str(), res);
  };
  for (auto fam : {GroupFamily::SO, GroupFamily::U, GroupFamily::SU}) {
    for (int N = nmin; N <= nmax; ++N) {
      GroupSpec spec(fam, N);
      const bool cx = !spec.real();
      double r_basis = 0, r_single = 0, r_double = 0, r_mart = 0, r_higgs = 0;
      // sum v_a^2 = c_g I
      Matrix s2 = contract_single_basis(spec, Matrix::Identity(N, N));
      r_basis = (s2 - spec.cg() * Matrix::Identity(N, N)).cwiseAbs().maxCoeff();
      for (int rep = 0; rep < reps; ++rep) {
        Matrix M = rand_mat(N, cx), Nm = rand_mat(N, cx);
        r_single = std::max(r_single,
                            (contract_single(spec, M) - contract_single_basis(spec, M))
                                .cwiseAbs()
                                .maxCoeff());
        r_double = std::max(r_double, std::abs(contract_double(spec, M, Nm) -
                                               contract_double_basis(spec, M, Nm)));
        Matrix Q = haar_sample(spec, rng);
        for (bool same : {true, false})
          for (bool trtr : {true, false})
            for (bool neg : {false, true})
              r_mart = std::max(
                  r_mart,
                  std::abs(martingale_contraction_closed(spec, Q, M, Nm, same, trtr) -
                           martingale_contraction_basis(spec, Q, M, Nm, same, trtr, neg)));
        for (auto tgt : {HiggsTarget::Flat, HiggsTarget::Sphere}) {
          HiggsSpec h(tgt, spec, {0.0, -1.0});
          Vector phi = sphere_sample(h, rng);
          Matrix P = rand_mat(N, cx);
          Vector R = phi;
          for (int i = 0; i < N; ++i)
            R(i) = cx ? Complex(gauss(rng), gauss(rng)) : Complex(gauss(rng), 0.0);
          r_higgs = std::max(r_higgs,
                             std::abs(higgs_contraction_scalar_closed(h, phi, P) -
                                      higgs_contraction_scalar_basis(h, phi, P)));
          r_higgs = std::max(r_higgs, (higgs_contraction_vector_closed(h, phi, R) -
                                       higgs_contraction_vector_basis(h, phi, R))
                                          .cwiseAbs()
                                          .maxCoeff());
        }
      }
      note("sum v^2 = c_g I", spec.name(), r_basis);
      note("single contraction", spec.name(), r_single);
      note("double contraction", spec.name(), r_double);
      note("martingale 1-4", spec.name(), r_mart);
      note("higgs contractions", spec.name(), r_higgs);
    }
  }
  std::printf("worst residual: %.3e (tolerance %.1e)\n", worst, cfg.magic_tol);
  return worst < cfg.magic_tol ? 0 : 1;
}

int cmd_grad_check(const RunConfig& cfg, int configs) {
  auto p = cfg.model_params();
  Rng rng(cfg.seed);
  const double h = 1e-5;
  double worst = 0.0;

  for (int rep = 0; rep < configs; ++rep) {
    ChainState st(p, cfg.seed + static_cast<std::uint64_t>(rep));
    FieldConfig& c = st.config();
    // edges
    for (std::int64_t l = 0; l < c.num_links(); ++l) {
      OrientedEdge e = p.geometry.link_edge(l);
      Matrix G = grad_edge(p, c, e);
      Matrix xi = gaussian_lie(p.group, rng);
      Matrix old = c.link(l);
      c.link(l) = (h * xi).exp() * old;
      double sp = action(p, c);
      c.link(l) = (-h * xi).exp() * old;
      double sm = action(p, c);
      c.link(l) = old;
      double numeric = (sp - sm) / (2 * h);
      double analytic = (G * (xi * old).adjoint()).trace().real();
      double scale = std::max({1.0, std::abs(numeric), std::abs(analytic)});
      worst = std::max(worst, std::abs(numeric - analytic) / scale);
    }
    // sites
    std::normal_distribution<double> gauss(0, 1);
    for (std::int32_t x = 0; x < p.geometry.num_vertices(); ++x) {
      Vector g = grad_site(p, c, x);
      Vector v(p.group.N);
      for (int i = 0; i < p.group.N; ++i)
        v(i) = p.higgs.complex_scalars ? Complex(gauss(rng), gauss(rng))
                                       : Complex(gauss(rng), 0.0);
      Vector old = c.phi(x);
      double sp, sm;
      if (p.higgs.sphere()) {
        v = sphere_project(old, v);
        c.phi(x) = sphere_retract(old, h * v);
        sp = action(p, c);
        c.phi(x) = sphere_retract(old, -h * v);
        sm = action(p, c);
      } else {
        c.phi(x) = old + h * v;
        sp = action(p, c);
        c.phi(x) = old - h * v;
        sm = action(p, c);
      }
      c.phi(x) = old;
      double numeric = (sp - sm) / (2 * h);
      double analytic = (g.adjoint() * v)(0).real();
      double scale = std::max({1.0, std::abs(numeric), std::abs(analytic)});
      worst = std::max(worst, std::abs(numeric - analytic) / scale);
    }
  }
  std::printf("grad check: worst relative error %.3e over %d configs (%s, %s, tol %.1e)\n",
              worst, configs, p.group.name().c_str(), p.higgs.name().c_str(), cfg.grad_tol);
  return worst < cfg.grad_tol ? 0 : 1;
}

int cmd_ops(const RunConfig& cfg, const std::string& strings_file, const std::string& anchor,
            const std::string& kinds_csv, bool structured) {
  LatticeGeometry g(cfg.d, cfg.L);
  auto collections = parse_collections_file(read_text_file(strings_file), g);
  if (collections.empty()) throw ParameterError("strings file defines no collections");
  const auto& s = collections.front();

  std::istringstream as(anchor);
  std::string akind, atext;
  as >> akind;
  std::getline(as, atext);

  std::vector<OpFamily> fams;
  std::map<std::string, OpFamily> names = {
      {"deform", OpFamily::Deformation},      {"break", OpFamily::Breaking},
      {"split", OpFamily::Splitting},         {"twist", OpFamily::Twisting},
      {"merge", OpFamily::Merger},            {"switch", OpFamily::Switching},
      {"expand-plaquette", OpFamily::ExpansionPlaquette},
      {"expand-edge", OpFamily::ExpansionEdgeAtEdge},
      {"extend", OpFamily::Extension},        {"expand-edge-site", OpFamily::ExpansionEdgeAtSite},
      {"expand-null", OpFamily::ExpansionNull},
      {"glue", OpFamily::Gluing},             {"rglue", OpFamily::RGluing}};
  if (kinds_csv == "all") {
    fams = akind == "edge" ? all_edge_families() : all_site_families();
  } else {
    std::istringstream ks(kinds_csv);
    std::string tok;
    while (std::getline(ks, tok, ',')) {
      auto it = names.find(tok);
      if (it == names.end()) throw UsageError("unknown operation kind '" + tok + "'");
      fams.push_back(it->second);
    }
    if (fams.empty()) throw UsageError("empty operation kind list");
  }

  std::vector<OperationEntry> entries;
  if (akind == "edge") {
    entries = enumerate_edge_ops(s, parse_edge(atext, g), g, fams);
  } else if (akind == "site") {
    int max_null = cfg.target == "flat"
                       ? std::max(0, static_cast<int>(cfg.vcoeff.size()) - 2)
                       : 0;
    entries = enumerate_site_ops(s, parse_vertex(atext, g), g, fams, max_null);
  } else {
    throw UsageError("anchor must start with 'edge' or 'site'");
  }

  for (const auto& en : entries) {
    if (structured) {
      std::cout << "{\"kind\": \"" << op_kind_name(en.kind) << "\", \"sign\": \""
                << op_sign_name(en.sign) << "\", \"result\": [";
      for (std::size_t i = 0; i < en.result.size(); ++i)
        std::cout << (i ? ", " : "") << "\"" << render_string(en.result[i], g) << "\"";
      std::cout << "]}\n";
    } else {
      std::cout << render_entry(en, g) << "\n";
    }
  }
  std::cout << (structured ? "" : "total entries: " + std::to_string(entries.size()) + "\n");
  return 0;
}

int cmd_sample(const RunConfig& cfg, const std::string& out_dir) {
  auto p = cfg.model_params();
  fs::create_directories(out_dir);
  std::string snap_path = out_dir + "/samples.bin";
  SnapshotWriter writer(snap_path, cfg);
  std::mutex m;
  auto sink = [&](int, std::int64_t, const FieldConfig& c) {
    std::lock_guard<std::mutex> lock(m);
    writer.append(c);
  };
  if (cfg.beta == 0.0 && cfg.kappa == 0.0) {
    iid_product_sample(p, cfg.seed, cfg.plan.total_samples, sink, 1);
    std::cout << "iid product sampling: " << writer.count() << " samples\n";
  } else {
    auto diag = run_chain(p, cfg.plan, cfg.seed, sink, cfg.threads);
    std::cout << "MCMC sampling: " << writer.count() << " samples, R-hat " << diag.rhat << "\n";
    for (std::size_t c = 0; c < diag.per_chain.size(); ++c)
      std::printf("chain %zu: edge acc %.2f site acc %.2f (sigma %.3f / %.3f)\n", c,
                  diag.per_chain[c].edge_rate(), diag.per_chain[c].site_rate(),
                  diag.sigma_edge_used[c], diag.sigma_site_used[c]);
  }
  writer.close();
  write_manifest(out_dir, "sample", cfg, {"samples.bin"});
  return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& strings_file,
               const std::string& catalog_file, const std::string& single_kind,
               const std::string& single_ref, const std::string& single_anchor,
               const std::string& out_dir, const std::string& snapshot, bool scatter) {
  auto p = cfg.model_params();
  auto collections = parse_collections_file(read_text_file(strings_file), p.geometry);

  std::vector<CatalogEntry> catalog;
  if (!catalog_file.empty()) {
    catalog = parse_catalog(read_text_file(catalog_file));
  } else {
    CatalogEntry e;
    e.edge_form = single_kind == "edge";
    e.collection_index = std::stoi(single_ref.substr(1)) - 1;
    e.anchor_text = single_anchor;
    catalog.push_back(e);
  }

  CoefficientTable tbl(p.group, p.higgs, cfg.beta, cfg.kappa);
  BatchOptions opt;
  opt.z_threshold = cfg.z_threshold;
  opt.threads = cfg.threads;
  opt.iid_samples = cfg.iid_samples;
  opt.seed = cfg.seed;

  std::vector<EquationReport> reports;
  if (!snapshot.empty()) {
    auto samples = load_snapshot(snapshot, cfg);
    for (const auto& ce : catalog) {
      const auto& s = collections.at(static_cast<std::size_t>(ce.collection_index));
      if (ce.edge_form)
        reports.push_back(verify_edge(p, samples, s, parse_edge(ce.anchor_text, p.geometry), tbl,
                                      cfg.z_threshold));
      else
        reports.push_back(verify_site(p, samples, s, parse_vertex(ce.anchor_text, p.geometry),
                                      tbl, cfg.z_threshold));
    }
  } else {
    reports = batch_verify(p, cfg.plan, collections, catalog, tbl, opt);
  }

  std::string table = report_table(reports);
  std::cout << table;
  if (catalog.size() > 1)
    std::cout << "note: " << catalog.size()
              << " entries checked at |z| < " << cfg.z_threshold
              << "; family-wise false-positive control (Bonferroni) may warrant a larger "
                 "threshold for large catalogs\n";

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_text_file(out_dir + "/report.txt", table);
    write_text_file(out_dir + "/report.jsonl", report_records(reports));
    std::vector<std::string> outputs = {"report.txt", "report.jsonl"};
    if (scatter) {
      write_text_file(out_dir + "/scatter.dat", report_scatter(reports));
      outputs.push_back("scatter.dat");
    }
    write_manifest(out_dir, "verify", cfg, outputs);
  }
  for (const auto& r : reports)
    if (!r.pass) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice Yang-Mills-Higgs: sampling, string operations, and master-loop-equation "
               "verification"};
  app.require_subcommand(1);

  std::string config_path, catalog_path, out_dir, strings_file, snapshot;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  int threads_override = 0;
  double z_override = 0.0;
  bool print_config = false;

  app.add_option("--config", config_path, "run configuration file (key = value)");
  app.add_option("--seed", seed_override, "override the configured seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--threads", threads_override, "override the configured thread count");
  app.add_option("--z-threshold", z_override, "override the configured z threshold");
  app.add_flag("--print-config", print_config, "print the resolved configuration and exit");

  auto* lattice = app.add_subcommand("lattice", "lattice queries");
  auto* lattice_info = lattice->add_subcommand("info", "print lattice counts");

  auto* ops = app.add_subcommand("ops", "string operation enumeration");
  auto* ops_enum = ops->add_subcommand("enumerate", "enumerate operations on a collection");
  std::string anchor, kinds = "all";
  bool structured = false;
  ops_enum->add_option("--strings", strings_file, "strings file (first collection is used)")
      ->required();
  ops_enum->add_option("--anchor", anchor, "'edge (c,..)+ax' or 'site (c,..)'")->required();
  ops_enum->add_option("--kinds", kinds, "comma list of kinds, or 'all'");
  ops_enum->add_flag("--structured", structured, "machine-readable line records");

  auto* magic = app.add_subcommand("magic", "contraction identities");
  auto* magic_check = magic->add_subcommand("check", "verify all contraction identities");
  int nmin = 2, nmax = 6, reps = 100;
  magic_check->add_option("--nmin", nmin, "smallest N");
  magic_check->add_option("--nmax", nmax, "largest N");
  magic_check->add_option("--reps", reps, "random matrices per identity");

  auto* grad = app.add_subcommand("grad", "action gradients");
  auto* grad_check = grad->add_subcommand("check", "finite-difference gradient validation");
  int grad_configs = 50;
  grad_check->add_option("--configs", grad_configs, "number of random configurations");

  auto* sample = app.add_subcommand("sample", "draw samples and persist a snapshot");
  sample->add_option("--out", out_dir, "output directory")->required();

  auto* verify = app.add_subcommand("verify", "verify master loop equations");
  auto* verify_edge_cmd = verify->add_subcommand("edge", "one edge equation");
  auto* verify_site_cmd = verify->add_subcommand("site", "one site equation");
  auto* verify_batch = verify->add_subcommand("batch", "every entry of a catalog");
  std::string ref = "s1", anchor_edge, anchor_site;
  bool scatter = false;
  for (auto* v : {verify_edge_cmd, verify_site_cmd, verify_batch}) {
    v->add_option("--strings", strings_file, "collections file")->required();
    v->add_option("--out", out_dir, "output directory for reports + manifest");
    v->add_option("--snapshot", snapshot, "verify against a stored sample snapshot");
    v->add_flag("--scatter", scatter, "write LHS-vs-RHS scatter data");
  }
  verify_edge_cmd->add_option("--collection", ref, "collection reference s<k>");
  verify_edge_cmd->add_option("--edge", anchor_edge, "anchor edge '(c,..)+ax'")->required();
  verify_site_cmd->add_option("--collection", ref, "collection reference s<k>");
  verify_site_cmd->add_option("--site", anchor_site, "anchor vertex '(c,..)'")->required();
  verify_batch->add_option("--catalog", catalog_path, "catalog file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config_file(config_path);
    if (seed_set) cfg.seed = seed_override;
    if (threads_override > 0) cfg.threads = threads_override;
    if (z_override > 0) cfg.z_threshold = z_override;
    if (print_config) {
      std::cout << cfg.render();
      return 0;
    }

    if (lattice_info->parsed()) return cmd_lattice_info(cfg);
    if (ops_enum->parsed()) return cmd_ops(cfg, strings_file, anchor, kinds, structured);
    if (magic_check->parsed()) return cmd_magic_check(cfg, nmin, nmax, reps);
    if (grad_check->parsed()) return cmd_grad_check(cfg, grad_configs);
    if (sample->parsed()) return cmd_sample(cfg, out_dir);
    if (verify_edge_cmd->parsed())
      return cmd_verify(cfg, strings_file, "", "edge", ref, anchor_edge, out_dir, snapshot,
                        scatter);
    if (verify_site_cmd->parsed())
      return cmd_verify(cfg, strings_file, "", "site", ref, anchor_site, out_dir, snapshot,
                        scatter);
    if (verify_batch->parsed())
      return cmd_verify(cfg, strings_file, catalog_path, "", "", "", out_dir, snapshot, scatter);

    std::cerr << "no subcommand action\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
