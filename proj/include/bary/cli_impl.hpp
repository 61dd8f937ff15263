#pragma once

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bary/barycenter.hpp"
#include "bary/cli.hpp"
#include "bary/demo.hpp"
#include "bary/errors.hpp"
#include "bary/io.hpp"
#include "bary/measure.hpp"
#include "bary/oracle.hpp"
#include "bary/scalar.hpp"
#include "bary/sparsity.hpp"
#include "bary/svg.hpp"
#include "bary/verify.hpp"

namespace bary::cli {

namespace detail {

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ParseError("failed writing '" + path + "'");
}

struct SolveArgs {
  std::string input;
  std::string output;
  bool sparse = false;
  bool exact = false;
  double tol = 1e-9;
  std::string svg_path;
  std::string dump_lp_path;
};

// Shared by the float and exact instantiations of `solve`.
template <class T>
int run_solve_typed(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  MeasureSet<T> ms = measure_set_from_json<T>(load_json_file(a.input), &err);
  SolveConfig cfg;
  cfg.lp.feas_tol = a.tol;
  cfg.lp.opt_tol = a.tol;

  if (!a.dump_lp_path.empty()) {
    CentroidSet<T> cs = build_centroids(ms, cfg.max_tuples);
    PrimalLp<T> built = build_primal(ms, cs, cfg.max_lp_cols);
    std::ostringstream text;
    lp::dump(built.problem, text);
    write_text_file(a.dump_lp_path, text.str());
  }

  BarycenterResult<T> r = solve_barycenter(ms, cfg);
  if (a.sparse) {
    SparsifyResult<T> sp = sparsify(ms, r, cfg.lp);
    r.weights = sp.weights;
    r.support = sp.support;
    r.barycenter = sp.barycenter;
    r.transports = sp.transports;
    r.iterations += sp.iterations;
  }
  Json doc = result_to_json(r);
  std::ostringstream body;
  body << doc.dump(2) << "\n";
  write_text_file(a.output, body.str());
  if (!a.svg_path.empty()) write_text_file(a.svg_path, render_svg(r, ms));
  out << "optimal total_cost=" << to_double(r.total_cost)
      << " support=" << r.support.size() << " iterations=" << r.iterations << "\n";
  return kExitOk;
}

}  // namespace detail

// Returns the process exit code; all output goes through the given streams.
inline int run_streams(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"exact Wasserstein barycenters of discrete measures", "barycenter"};
  app.require_subcommand(1);

  detail::SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "solve one measure-set file");
  solve->add_option("input", sa.input, "measure-set JSON")->required();
  solve->add_option("-o,--output", sa.output, "result JSON path")->required();
  solve->add_flag("--sparse", sa.sparse, "re-extract a provably sparse optimum");
  solve->add_flag("--exact", sa.exact, "rational arithmetic end to end");
  solve->add_option("--tol", sa.tol, "solver feasibility/optimality tolerance");
  solve->add_option("--svg", sa.svg_path, "also render the result to this SVG");
  solve->add_option("--dump-lp", sa.dump_lp_path, "write the raw program text here");

  std::string v_result, v_measures;
  CLI::App* verify = app.add_subcommand("verify", "check a result document");
  verify->add_option("result", v_result, "result JSON")->required();
  verify->add_option("measures", v_measures, "measure-set JSON")->required();

  std::string c_measures;
  CLI::App* centroids = app.add_subcommand("centroids", "list candidate locations");
  centroids->add_option("measures", c_measures, "measure-set JSON")->required();

  std::string d_name, d_output;
  CLI::App* demo = app.add_subcommand("demo", "write a bundled demo measure set");
  demo->add_option("name", d_name, "demo name (california)")->required();
  demo->add_option("-o,--output", d_output, "measure-set JSON path")->required();

  long long o_seed = 1;
  int o_count = 100, o_max_n = 3, o_max_support = 3;
  long long o_denominator = 4;
  CLI::App* oracle = app.add_subcommand("oracle", "randomized three-way cross-check");
  oracle->add_option("--seed", o_seed, "RNG seed");
  oracle->add_option("--count", o_count, "number of random instances");
  oracle->add_option("--max-n", o_max_n, "maximum number of measures");
  oracle->add_option("--max-support", o_max_support, "maximum support size");
  oracle->add_option("--denominator", o_denominator, "mass denominator");

  std::string p_result, p_measures, p_output;
  int p_transport_to = -1;
  CLI::App* plot = app.add_subcommand("plot", "render a result document to SVG");
  plot->add_option("result", p_result, "result JSON")->required();
  plot->add_option("measures", p_measures, "measure-set JSON")->required();
  plot->add_option("-o,--output", p_output, "SVG path")->required();
  plot->add_option("--transport-to", p_transport_to,
                   "overlay transport lines into this measure");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    int code = app.exit(e, msg, msg);
    out << msg.str();
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (solve->parsed()) {
      return sa.exact ? detail::run_solve_typed<Rational>(sa, out, err)
                      : detail::run_solve_typed<double>(sa, out, err);
    }
    if (verify->parsed()) {
      MeasureSet<double> ms = measure_set_from_json<double>(load_json_file(v_measures), &err);
      BarycenterResult<double> r = result_from_json<double>(load_json_file(v_result));
      VerifyReport rep = verify_result(ms, r);
      out << report_to_json(rep).dump(2) << "\n";
      return rep.pass() ? kExitOk : 1;
    }
    if (centroids->parsed()) {
      MeasureSet<double> ms = measure_set_from_json<double>(load_json_file(c_measures), &err);
      CentroidSet<double> cs = build_centroids(ms);
      Json j;
      j["count"] = cs.size();
      j["dim"] = cs.dim;
      Json pts = Json::array();
      for (const auto& p : cs.points) {
        Json q = Json::array();
        for (double c : p) q.push_back(c);
        pts.push_back(std::move(q));
      }
      j["points"] = std::move(pts);
      out << j.dump(2) << "\n";
      return kExitOk;
    }
    if (demo->parsed()) {
      if (d_name != "california")
        throw ValidationError("unknown demo '" + d_name + "' (try: california)");
      MeasureSet<double> ms = generate_demo(california_demo());
      detail::write_text_file(d_output, measure_set_to_json(ms).dump(2) + "\n");
      out << "wrote " << ms.measures.size() << " measures to " << d_output << "\n";
      return kExitOk;
    }
    if (oracle->parsed()) {
      std::mt19937_64 rng(static_cast<unsigned long long>(o_seed));
      Json failures = Json::array();
      int passes = 0;
      for (int t = 0; t < o_count; ++t) {
        RationalInstance inst = random_instance(rng, o_max_n, o_max_support, o_denominator);
        CompareReport rep = compare(inst);
        if (rep.pass) {
          ++passes;
        } else {
          Json f;
          f["instance"] = t;
          f["lp_cost"] = format_fraction(rep.lp_cost);
          f["mm_cost"] = format_fraction(rep.mm_cost);
          f["oracle_cost"] = format_fraction(rep.oracle_cost);
          failures.push_back(std::move(f));
        }
      }
      Json j;
      j["count"] = o_count;
      j["passes"] = passes;
      j["failures"] = std::move(failures);
      j["pass"] = passes == o_count;
      out << j.dump(2) << "\n";
      return passes == o_count ? kExitOk : 1;
    }
    if (plot->parsed()) {
      MeasureSet<double> ms = measure_set_from_json<double>(load_json_file(p_measures), &err);
      BarycenterResult<double> r = result_from_json<double>(load_json_file(p_result));
      SvgOptions opt;
      opt.transport_to = p_transport_to;
      detail::write_text_file(p_output, render_svg(r, ms, opt));
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSize;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitInput;
}

inline int run(const std::vector<std::string>& args) {
  return run_streams(args, std::cout, std::cerr);
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int t = 1; t < argc; ++t) args.emplace_back(argv[t]);
  return run(args);
}

}  // namespace bary::cli
