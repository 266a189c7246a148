// nbwalk: spectra, Green functions and determinant identities of
// non-backtracking walks on finite graphs.
//
// Exit codes: 0 all requested verdicts pass, 1 verification failure,
// 2 input error, 3 fixed-point non-convergence.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nbwalk/determinants.hpp"
#include "nbwalk/errors.hpp"
#include "nbwalk/graph.hpp"
#include "nbwalk/green.hpp"
#include "nbwalk/operators.hpp"
#include "nbwalk/spectral.hpp"

using nlohmann::json;

namespace {

struct Options {
  std::string graph_path;
  std::string generate_spec;
  std::string weights_path;
  std::string z_list = "0.5+0.5i,1+i,2i,-1.3+0.7i";
  std::string norms = "1,2,4,8,12";
  int samples = 0;
  double tol = 1e-8;
  double zeta_tol = 1e-12;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out_path;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw nbw::Error(nbw::ErrorKind::BadInput, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

nbw::Graph load_graph(const Options& opt) {
  if (!opt.graph_path.empty() && !opt.generate_spec.empty())
    throw nbw::Error(nbw::ErrorKind::BadInput,
                     "use either --graph or --generate, not both");
  if (!opt.graph_path.empty())
    return nbw::Graph::from_edge_list_text(read_file(opt.graph_path));
  if (!opt.generate_spec.empty())
    return nbw::generate_from_spec(opt.generate_spec, opt.seed);
  throw nbw::Error(nbw::ErrorKind::BadInput,
                   "one of --graph or --generate is required");
}

std::optional<nbw::Weights> load_weights(const Options& opt,
                                         const nbw::Graph& g) {
  if (opt.weights_path.empty()) return std::nullopt;
  return nbw::weights_from_json_text(g, read_file(opt.weights_path));
}

std::vector<nbw::Complex> parse_z_list(const std::string& list) {
  std::vector<nbw::Complex> out;
  std::string item;
  std::istringstream in(list);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(nbw::parse_complex(item));
  }
  if (out.empty())
    throw nbw::Error(nbw::ErrorKind::BadInput, "empty --z list");
  for (nbw::Complex z : out)
    if (!(z.imag() > 0.0))
      throw nbw::Error(nbw::ErrorKind::BadInput,
                       "every z must have Im z > 0");
  return out;
}

std::vector<int> parse_int_list(const std::string& list) {
  std::vector<int> out;
  std::string item;
  std::istringstream in(list);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

std::string format_complex(nbw::Complex v) {
  std::ostringstream s;
  s << v.real() << (v.imag() < 0 ? "" : "+") << v.imag() << "i";
  return s.str();
}

json complex_to_json(nbw::Complex v) {
  return json{{"re", v.real()}, {"im", v.imag()}};
}

json graph_summary(const nbw::Graph& g) {
  nbw::ValidationReport v = nbw::validate(g);
  return json{{"vertices", g.vertex_count()},
              {"edges", g.edge_count()},
              {"directed_edges", g.directed_count()},
              {"rank", g.rank()},
              {"max_degree", g.max_degree()},
              {"min_degree", g.min_degree()},
              {"connected", v.is_connected},
              {"bipartite", v.is_bipartite},
              {"meets_gap_hypotheses", v.meets_gap_hypotheses}};
}

json det_report_to_json(const nbw::DetReport& report) {
  json samples = json::array();
  for (const auto& s : report.samples)
    samples.push_back(json{{"param", format_complex(s.param)},
                           {"lhs", complex_to_json(s.lhs)},
                           {"rhs", complex_to_json(s.rhs)},
                           {"rel_error", s.rel_error}});
  return json{{"identity", nbw::identity_name(report.tag)},
              {"samples", samples},
              {"max_rel_error", report.max_rel_error},
              {"tol", report.tol},
              {"pass", report.within_tol}};
}

void det_report_to_csv(std::ostream& out, const nbw::DetReport& report) {
  for (const auto& s : report.samples)
    out << nbw::identity_name(report.tag) << ',' << s.param.real() << ','
        << s.param.imag() << ',' << s.lhs.real() << ',' << s.lhs.imag() << ','
        << s.rhs.real() << ',' << s.rhs.imag() << ',' << s.rel_error << ','
        << (s.rel_error < report.tol ? "pass" : "fail") << '\n';
}

json eigenvalues_json(const nbw::Matrix& m, bool symmetric) {
  json out = json::array();
  if (symmetric) {
    Eigen::SelfAdjointEigenSolver<nbw::Matrix> solver(m,
                                                      Eigen::EigenvaluesOnly);
    for (int i = 0; i < solver.eigenvalues().size(); ++i)
      out.push_back(solver.eigenvalues()(i));
  } else {
    Eigen::EigenSolver<nbw::Matrix> solver(m, false);
    for (int i = 0; i < solver.eigenvalues().size(); ++i)
      out.push_back(complex_to_json(solver.eigenvalues()(i)));
  }
  return out;
}

struct RunResult {
  json document;
  std::string csv;
  bool pass = true;
  bool analysis_only = false;
};

RunResult run_analyze(const nbw::Graph& g) {
  RunResult result;
  result.analysis_only = true;
  nbw::Matrix a = nbw::adjacency_matrix(g);
  nbw::Matrix nsym = a;
  for (int i = 0; i < g.vertex_count(); ++i)
    for (int j = 0; j < g.vertex_count(); ++j)
      nsym(i, j) /= std::sqrt(static_cast<double>(g.degree(i)) *
                              static_cast<double>(g.degree(j)));
  json spectra;
  spectra["adjacency"] = eigenvalues_json(a, true);
  spectra["transition"] = eigenvalues_json(nsym, true);
  spectra["transfer"] = eigenvalues_json(nbw::nb_transfer_matrix(g), false);
  spectra["hashimoto"] = eigenvalues_json(nbw::hashimoto_matrix(g), false);
  nbw::ValidationReport v = nbw::validate(g);
  result.document["results"] =
      json{{"spectra", spectra},
           {"validation",
            json{{"is_simple", v.is_simple},
                 {"is_connected", v.is_connected},
                 {"is_bipartite", v.is_bipartite},
                 {"min_degree", v.min_degree},
                 {"meets_gap_hypotheses", v.meets_gap_hypotheses}}}};
  std::ostringstream csv;
  csv << "quantity,value\n";
  csv << "connected," << v.is_connected << "\n";
  csv << "bipartite," << v.is_bipartite << "\n";
  csv << "min_degree," << v.min_degree << "\n";
  result.csv = csv.str();
  return result;
}

RunResult run_certify(const nbw::Graph& g, const Options& opt) {
  RunResult result;
  nbw::SpectralCertificate cert = nbw::certify(g, parse_int_list(opt.norms));
  json norms = json::array();
  std::ostringstream csv;
  csv << "identity,n,value,bound,pass\n";
  csv << "gap_bound,," << cert.nb_gap << ',' << cert.c_bound << ','
      << (cert.gap_bound_holds ? "pass" : "fail") << '\n';
  bool all_norms = true;
  for (const auto& entry : cert.power_norm_bounds) {
    norms.push_back(json{{"n", entry.n},
                         {"norm", entry.norm},
                         {"bound", entry.bound},
                         {"pass", entry.ok}});
    csv << "power_norm," << entry.n << ',' << entry.norm << ',' << entry.bound
        << ',' << (entry.ok ? "pass" : "fail") << '\n';
    all_norms = all_norms && entry.ok;
  }
  csv << "converse_bound,," << cert.beta << ','
      << cert.nb_gap / (cert.max_degree * cert.max_degree) << ','
      << (cert.converse_bound_holds ? "pass" : "fail") << '\n';
  result.document["results"] =
      json{{"beta", cert.beta},
           {"nb_gap", cert.nb_gap},
           {"c_bound", cert.c_bound},
           {"max_degree", cert.max_degree},
           {"max_branching", cert.max_branching},
           {"gap_bound_holds", cert.gap_bound_holds},
           {"power_norm_bounds", norms},
           {"converse_bound_holds", cert.converse_bound_holds}};
  result.csv = csv.str();
  result.pass = cert.gap_bound_holds && cert.converse_bound_holds && all_norms;
  return result;
}

RunResult run_det_check(const nbw::Graph& g,
                        const std::optional<nbw::Weights>& weights,
                        const Options& opt) {
  RunResult result;
  json reports = json::array();
  std::ostringstream csv;
  csv << "identity,param_re,param_im,lhs_re,lhs_im,rhs_re,rhs_im,rel_error,"
         "verdict\n";
  for (nbw::Complex z : parse_z_list(opt.z_list)) {
    std::vector<nbw::DetReport> batch;
    batch.push_back(nbw::green_det_check(g, nullptr, z, opt.tol));
    if (weights) batch.push_back(nbw::green_det_check(g, &*weights, z, opt.tol));
    batch.push_back(nbw::detK_check(g, z, opt.tol));
    double residual = nbw::intertwining_residual(g, z);
    nbw::DetReport inter;
    inter.tag = nbw::IdentityTag::Intertwining;
    inter.samples.push_back(
        {z, nbw::Complex(residual, 0.0), nbw::Complex(0.0, 0.0), residual});
    inter.max_rel_error = residual;
    inter.tol = opt.tol;
    inter.within_tol = residual < opt.tol;
    batch.push_back(inter);
    for (const auto& report : batch) {
      reports.push_back(det_report_to_json(report));
      det_report_to_csv(csv, report);
      result.pass = result.pass && report.within_tol;
    }
  }
  result.document["results"] = json{{"reports", reports}};
  result.csv = csv.str();
  return result;
}

RunResult run_ihara(const nbw::Graph& g, const Options& opt) {
  RunResult result;
  json reports = json::array();
  std::ostringstream csv;
  csv << "identity,param_re,param_im,lhs_re,lhs_im,rhs_re,rhs_im,rel_error,"
         "verdict\n";
  for (const auto& report : nbw::ihara_check(g, opt.samples, opt.tol)) {
    reports.push_back(det_report_to_json(report));
    det_report_to_csv(csv, report);
    result.pass = result.pass && report.within_tol;
  }
  result.document["results"] = json{{"reports", reports}};
  result.csv = csv.str();
  return result;
}

RunResult run_zeta(const nbw::Graph& g,
                   const std::optional<nbw::Weights>& weights,
                   const Options& opt) {
  RunResult result;
  json fields = json::array();
  std::ostringstream csv;
  csv << "z,kind,index,re,im\n";
  for (nbw::Complex z : parse_z_list(opt.z_list)) {
    nbw::ZetaField field = nbw::solve_zeta(
        g, weights ? &*weights : nullptr, z, opt.zeta_tol);
    json zeta = json::array(), m = json::array(), gv = json::array(),
         ge = json::array();
    for (int e = 0; e < g.directed_count(); ++e) {
      zeta.push_back(complex_to_json(field.zeta(e)));
      csv << format_complex(z) << ",zeta," << e << ',' << field.zeta(e).real()
          << ',' << field.zeta(e).imag() << '\n';
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
      m.push_back(complex_to_json(field.m(v)));
      gv.push_back(complex_to_json(field.vertex_green(v)));
      csv << format_complex(z) << ",green_vertex," << v << ','
          << field.vertex_green(v).real() << ','
          << field.vertex_green(v).imag() << '\n';
    }
    for (int k = 0; k < g.edge_count(); ++k) {
      ge.push_back(complex_to_json(field.edge_green(k)));
      csv << format_complex(z) << ",green_edge," << k << ','
          << field.edge_green(k).real() << ',' << field.edge_green(k).imag()
          << '\n';
    }
    fields.push_back(json{{"z", format_complex(z)},
                          {"zeta", zeta},
                          {"m", m},
                          {"green_vertex", gv},
                          {"green_edge", ge},
                          {"iterations", field.iterations},
                          {"final_update", field.final_update},
                          {"residual", field.residual}});
    result.pass = result.pass && field.residual < opt.tol;
  }
  result.document["results"] = json{{"fields", fields}};
  result.csv = csv.str();
  return result;
}

RunResult run_decompose(const nbw::Graph& g, const Options& opt) {
  RunResult result;
  nbw::DecompositionReport rep = nbw::decomposition_report(g);
  const int expected = 2 * g.edge_count() - 2 * g.vertex_count() + 1;
  result.pass = rep.dim_complement == expected &&
                rep.max_orthogonality_residual < opt.tol;
  result.document["results"] =
      json{{"dim_origin", rep.dim_origin},
           {"dim_terminus", rep.dim_terminus},
           {"dim_complement", rep.dim_complement},
           {"expected_dim_complement", expected},
           {"rank_minus_one", rep.rank_minus_one},
           {"max_orthogonality_residual", rep.max_orthogonality_residual}};
  std::ostringstream csv;
  csv << "quantity,value\n"
      << "dim_origin," << rep.dim_origin << '\n'
      << "dim_terminus," << rep.dim_terminus << '\n'
      << "dim_complement," << rep.dim_complement << '\n'
      << "rank_minus_one," << rep.rank_minus_one << '\n'
      << "max_orthogonality_residual," << rep.max_orthogonality_residual
      << '\n';
  result.csv = csv.str();
  return result;
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out_path, std::ios::binary);
  if (!out)
    throw nbw::Error(nbw::ErrorKind::BadInput,
                     "cannot write '" + opt.out_path + "'");
  out << text;
}

int dispatch(const std::string& command, Options& opt) {
  if (command == "generate") {
    if (opt.generate_spec.empty())
      throw nbw::Error(nbw::ErrorKind::BadInput,
                       "generate needs --generate SPEC");
    nbw::Graph g = nbw::generate_from_spec(opt.generate_spec, opt.seed);
    emit(opt, g.to_edge_list_text());
    return 0;
  }

  nbw::Graph g = load_graph(opt);
  std::optional<nbw::Weights> weights = load_weights(opt, g);

  RunResult result;
  if (command == "analyze") result = run_analyze(g);
  else if (command == "certify") result = run_certify(g, opt);
  else if (command == "det-check") result = run_det_check(g, weights, opt);
  else if (command == "ihara-check") result = run_ihara(g, opt);
  else if (command == "zeta") result = run_zeta(g, weights, opt);
  else if (command == "decompose") result = run_decompose(g, opt);
  else
    throw nbw::Error(nbw::ErrorKind::BadInput,
                     "unknown command '" + command + "'");

  if (opt.format == "csv") {
    emit(opt, result.csv);
  } else {
    result.document["command"] = command;
    result.document["graph_summary"] = graph_summary(g);
    result.document["verdict"] = result.pass ? "pass" : "fail";
    emit(opt, result.document.dump(2) + "\n");
  }
  return result.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectra, Green functions and determinant identities of "
      "non-backtracking walks on finite graphs"};
  std::string command;
  Options opt;
  app.add_option("command", command,
                 "analyze | certify | det-check | ihara-check | zeta | "
                 "generate | decompose")
      ->required();
  app.add_option("--graph", opt.graph_path, "edge-list file (u v per line)");
  app.add_option("--generate", opt.generate_spec,
                 "family spec, e.g. cycle:5, complete:4, "
                 "random_regular:10:3, random_min_degree:12:3:5");
  app.add_option("--weights", opt.weights_path,
                 "JSON weights file {\"p\": [[u,v,value],...], \"W\": [...]}");
  app.add_option("--z", opt.z_list, "comma-separated a+bi values, Im z > 0");
  app.add_option("--norms", opt.norms, "powers n for the norm-decay checks");
  app.add_option("--samples", opt.samples,
                 "Ihara sample count (default 2|B|+1)");
  app.add_option("--tol", opt.tol, "identity tolerance");
  app.add_option("--zeta-tol", opt.zeta_tol, "fixed-point stopping tolerance");
  app.add_option("--seed", opt.seed, "generator seed");
  app.add_option("--format", opt.format, "json | csv");
  app.add_option("--out", opt.out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    return dispatch(command, opt);
  } catch (const nbw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == nbw::ErrorKind::NonConvergence ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
