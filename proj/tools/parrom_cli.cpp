// parrom: generate benchmark models, reduce them, evaluate ROMs.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "parrom/bench.hpp"
#include "parrom/errors.hpp"
#include "parrom/gramians.hpp"
#include "parrom/init.hpp"
#include "parrom/io.hpp"
#include "parrom/optim.hpp"
#include "parrom/stability.hpp"

namespace fs = std::filesystem;
using namespace parrom;

namespace {

enum Exit { ok = 0, usage = 2, infeasible = 3, numeric = 4 };

struct ModelArgs {
  std::string name;
  Index n = 100;
  Index tail = 1000;
  Index chain = 500;
  std::uint64_t seed = 1;
  double lower = std::nan("");
  double upper = std::nan("");

  Json to_json() const {
    Json j = {{"name", name}, {"n", n}, {"tail", tail}, {"chain_length", chain}, {"seed", seed}};
    if (!std::isnan(lower)) j["lower"] = lower;
    if (!std::isnan(upper)) j["upper"] = upper;
    return j;
  }
  static ModelArgs from_json(const Json& j) {
    ModelArgs a;
    a.name = j.at("name").get<std::string>();
    a.n = j.value("n", a.n);
    a.tail = j.value("tail", a.tail);
    a.chain = j.value("chain_length", a.chain);
    a.seed = j.value("seed", a.seed);
    a.lower = j.value("lower", a.lower);
    a.upper = j.value("upper", a.upper);
    return a;
  }
};

ParamBox box_or(const ModelArgs& a, double lo, double hi) {
  return ParamBox::interval(std::isnan(a.lower) ? lo : a.lower, std::isnan(a.upper) ? hi : a.upper);
}

ParametricSystem build_model(const ModelArgs& a) {
  if (a.name == "synthetic") return gen_synthetic(a.n, box_or(a, 0.02, 1.0));
  if (a.name == "penzl") return gen_penzl_param(a.tail, box_or(a, 10.0, 100.0));
  if (a.name == "triple-chain") return gen_triple_chain(a.chain, box_or(a, 2e-3, 2e-2)).system;
  if (a.name == "baur") return gen_baur_oracle(a.n, a.seed).system;
  throw ConfigError("unknown model: " + a.name + " (synthetic, penzl, triple-chain, baur)");
}

Json quad_to_json(const QuadSpec& q) {
  const char* mode = q.mode == QuadSpec::Mode::adaptive ? "adaptive"
                     : q.mode == QuadSpec::Mode::tensor ? "tensor"
                                                         : "discrete";
  Json j = {{"mode", mode}, {"abs_tol", q.abs_tol}, {"rel_tol", q.rel_tol},
            {"max_panels", q.max_panels}, {"nodes", q.nodes}};
  Json pts = Json::array();
  for (const Point& p : q.points) pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  j["points"] = pts;
  return j;
}

QuadSpec quad_from_json(const Json& j) {
  QuadSpec q;
  const std::string mode = j.value("mode", std::string("adaptive"));
  if (mode == "adaptive") q.mode = QuadSpec::Mode::adaptive;
  else if (mode == "tensor") q.mode = QuadSpec::Mode::tensor;
  else if (mode == "discrete") q.mode = QuadSpec::Mode::discrete;
  else throw ConfigError("unknown quadrature mode: " + mode);
  q.abs_tol = j.value("abs_tol", q.abs_tol);
  q.rel_tol = j.value("rel_tol", q.rel_tol);
  q.max_panels = j.value("max_panels", q.max_panels);
  q.nodes = j.value("nodes", q.nodes);
  if (j.contains("points")) {
    for (const auto& p : j["points"]) {
      const auto v = p.get<std::vector<double>>();
      q.points.push_back(Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size())));
    }
  }
  return q;
}

struct RunConfig {
  std::string fom_path;
  ModelArgs model;
  std::string structure = "fom";
  std::string init = "pirka";
  Index r = 10;
  int ps = 4;
  Index rs = 4;
  std::uint64_t seed = 1;
  bool skip_optimize = false;
  bool metrics = true;
  QuadSpec quad;
  OptimConfig optim;
  std::string out = "run";

  Json to_json() const {
    Json j = {{"structure", structure}, {"init", init}, {"r", r}, {"ps", ps}, {"rs", rs},
              {"seed", seed}, {"skip_optimize", skip_optimize}, {"metrics", metrics},
              {"quad", quad_to_json(quad)}, {"out", out},
              {"optim", {{"max_iter", optim.max_iter}, {"stop_tol", optim.stop_tol},
                         {"c1", optim.c1}, {"c2", optim.c2}, {"initial_step", optim.initial_step},
                         {"max_halvings", optim.max_halvings},
                         {"frozen", {optim.frozen[0], optim.frozen[1], optim.frozen[2], optim.frozen[3]}}}}};
    if (!fom_path.empty()) j["fom"] = fom_path;
    else j["model"] = model.to_json();
    return j;
  }

  void merge_json(const Json& j) {
    if (j.contains("fom")) fom_path = j["fom"].get<std::string>();
    if (j.contains("model")) model = ModelArgs::from_json(j["model"]);
    structure = j.value("structure", structure);
    init = j.value("init", init);
    r = j.value("r", r);
    ps = j.value("ps", ps);
    rs = j.value("rs", rs);
    seed = j.value("seed", seed);
    skip_optimize = j.value("skip_optimize", skip_optimize);
    metrics = j.value("metrics", metrics);
    out = j.value("out", out);
    if (j.contains("quad")) quad = quad_from_json(j["quad"]);
    if (j.contains("optim")) {
      const Json& o = j["optim"];
      optim.max_iter = o.value("max_iter", optim.max_iter);
      optim.stop_tol = o.value("stop_tol", optim.stop_tol);
      optim.c1 = o.value("c1", optim.c1);
      optim.c2 = o.value("c2", optim.c2);
      optim.initial_step = o.value("initial_step", optim.initial_step);
      optim.max_halvings = o.value("max_halvings", optim.max_halvings);
      if (o.contains("frozen")) {
        for (std::size_t i = 0; i < 4; ++i) optim.frozen[i] = o["frozen"].at(i).get<bool>();
      }
    }
  }
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

void print_stability(const StabilityReport& s) {
  std::cout << "max α = " << fmt(s.max_alpha) << " at p = [";
  for (Index k = 0; k < s.argmax_p.size(); ++k) std::cout << (k ? ", " : "") << fmt(s.argmax_p[k]);
  std::cout << "]" << (s.converged ? "" : " (sampled)") << "\n";
}

Json stability_json(const StabilityReport& s) {
  return {{"max_alpha", s.max_alpha},
          {"argmax_p", std::vector<double>(s.argmax_p.data(), s.argmax_p.data() + s.argmax_p.size())},
          {"interpolant_degree", s.interpolant_degree},
          {"converged", s.converged}};
}

Json fonc_json(const std::vector<std::pair<std::string, double>>& res) {
  Json j = Json::object();
  for (const auto& [label, value] : res) j[label] = value;
  return j;
}

int cmd_generate(const ModelArgs& args, std::string out) {
  const ParametricSystem sys = build_model(args);
  if (out.empty()) out = args.name + ".json";
  save_system(sys, out);
  const StabilityReport s = max_abscissa_over_box(sys);
  std::cout << "wrote " << out << " (n = " << sys.order() << ", m = " << sys.inputs()
            << ", p = " << sys.outputs() << ", d = " << sys.domain().dim() << ")\n";
  print_stability(s);
  return s.max_alpha < 0.0 ? ok : infeasible;
}

int cmd_reduce(RunConfig cfg) {
  const auto start = std::chrono::steady_clock::now();
  const ParametricSystem fom = cfg.fom_path.empty() ? build_model(cfg.model) : load_system(cfg.fom_path);
  cfg.quad.validate(fom.domain());
  cfg.optim.validate();
  fs::create_directories(cfg.out);

  const RomStructure structure =
      cfg.structure == "fom" ? RomStructure::of(fom) : RomStructure::preset(cfg.structure, fom.domain().dim());
  ParametricSystem rom0 = [&]() {
    if (cfg.init == "pirka") {
      PirkaOptions po;
      po.ps = cfg.ps;
      po.rs = cfg.rs;
      po.r = cfg.r;
      return map_to_structure(pirka(fom, po).rom, structure);
    }
    if (cfg.init == "trivial") {
      return trivial_init(structure, cfg.r, fom.inputs(), fom.outputs(), fom.domain(), cfg.seed);
    }
    throw ConfigError("unknown init: " + cfg.init + " (pirka, trivial)");
  }();
  save_system(rom0, (fs::path(cfg.out) / "rom_init.json").string());
  const StabilityReport s0 = max_abscissa_over_box(rom0);
  std::cout << "initial ROM: ";
  print_stability(s0);
  if (!(s0.max_alpha < 0.0)) {
    std::cerr << "error: initial ROM is not stable over the parameter box\n";
    return infeasible;
  }

  Json report = {{"config", cfg.to_json()}, {"init_stability", stability_json(s0)}};
  double fom_norm_sq = -1.0;
  if (cfg.metrics) {
    fom_norm_sq = fom_h2l2_norm_sq(fom, cfg.quad);
    const double eps0 = std::sqrt(h2l2_error_sq(fom, rom0, cfg.quad) / fom_norm_sq);
    report["fom_norm"] = std::sqrt(fom_norm_sq);
    report["eps_init"] = eps0;
    std::cout << "initial ε = " << fmt(eps0) << "\n";
  }
  if (!cfg.skip_optimize) {
    const OptimRun run = minimize(fom, rom0, cfg.optim, cfg.quad);
    save_system(run.rom, (fs::path(cfg.out) / "rom_opt.json").string());
    run.write_csv((fs::path(cfg.out) / "convergence.csv").string());
    report["optim"] = run.to_json();
    std::cout << "optimizer: " << status_name(run.status) << " after " << run.history.size() - 1
              << " iterations (" << run.variables << " variables, " << fmt(run.seconds) << " s)\n";
    if (cfg.metrics) {
      const double eps = std::sqrt(h2l2_error_sq(fom, run.rom, cfg.quad) / fom_norm_sq);
      report["eps_opt"] = eps;
      std::cout << "optimized ε = " << fmt(eps) << "\n";
    }
  }
  report["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json_file(report, (fs::path(cfg.out) / "run.json").string());
  return ok;
}

int cmd_evaluate(const std::string& fom_path, const std::string& rom_path, const std::string& out,
                 const QuadSpec& quad) {
  const ParametricSystem fom = load_system(fom_path);
  const ParametricSystem rom = load_system(rom_path);
  quad.validate(fom.domain());
  const StabilityReport sf = max_abscissa_over_box(fom);
  const StabilityReport sr = max_abscissa_over_box(rom);
  if (!(sf.max_alpha < 0.0) || !(sr.max_alpha < 0.0)) {
    std::cerr << "error: unstable system\n";
    std::cout << "FOM ";
    print_stability(sf);
    std::cout << "ROM ";
    print_stability(sr);
    return infeasible;
  }
  fs::create_directories(out);
  const ErrorMetrics m = error_metrics(fom, rom, quad);
  write_eps_p_csv(m, (fs::path(out) / "eps_p.csv").string());
  write_eps_omega_p_csv(m, (fs::path(out) / "eps_omega_p.csv").string());
  Json summary = {{"eps", m.eps},
                  {"fom_norm", m.fom_norm},
                  {"fonc", fonc_json(fonc_residuals(fom, rom, quad))},
                  {"rom_stability", stability_json(sr)},
                  {"fom_stability", stability_json(sf)}};
  write_json_file(summary, (fs::path(out) / "summary.json").string());
  std::cout << "ε = " << fmt(m.eps) << "\n";
  print_stability(sr);
  return ok;
}

void add_quad_options(CLI::App* cmd, QuadSpec& quad, std::string& mode) {
  cmd->add_option("--quad", mode, "Quadrature mode: adaptive or tensor");
  cmd->add_option("--nodes", quad.nodes, "Gauss-Legendre nodes per axis (tensor mode)");
  cmd->add_option("--abs-tol", quad.abs_tol, "Adaptive absolute tolerance");
  cmd->add_option("--rel-tol", quad.rel_tol, "Adaptive relative tolerance");
  cmd->add_option("--max-panels", quad.max_panels, "Adaptive panel cap");
}

void apply_quad_mode(QuadSpec& quad, const std::string& mode) {
  if (mode.empty()) return;
  if (mode == "adaptive") quad.mode = QuadSpec::Mode::adaptive;
  else if (mode == "tensor") quad.mode = QuadSpec::Mode::tensor;
  else throw ConfigError("unknown quadrature mode: " + mode);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric H2xL2-optimal model reduction"};
  app.require_subcommand(1);

  ModelArgs gen_args;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate-model", "Write a benchmark model as JSON");
  gen->add_option("model", gen_args.name, "synthetic, penzl, triple-chain or baur")->required();
  gen->add_option("--n", gen_args.n, "Order (synthetic, baur)");
  gen->add_option("--tail", gen_args.tail, "Diagonal tail length (penzl)");
  gen->add_option("--chain-length", gen_args.chain, "Masses per chain (triple-chain)");
  gen->add_option("--seed", gen_args.seed, "Random seed (baur)");
  gen->add_option("--lower", gen_args.lower, "Parameter lower bound");
  gen->add_option("--upper", gen_args.upper, "Parameter upper bound");
  gen->add_option("-o,--out", gen_out, "Output file");

  RunConfig cfg;
  std::string config_path, red_mode;
  auto* red = app.add_subcommand("reduce", "Initialize and optimize a ROM");
  red->add_option("--config", config_path, "run.json from an earlier run");
  red->add_option("--fom", cfg.fom_path, "FOM JSON file");
  red->add_option("--model", cfg.model.name, "Generate the FOM instead: synthetic, penzl, triple-chain, baur");
  red->add_option("--n", cfg.model.n, "Model order (synthetic, baur)");
  red->add_option("--tail", cfg.model.tail, "Diagonal tail length (penzl)");
  red->add_option("--chain-length", cfg.model.chain, "Masses per chain (triple-chain)");
  red->add_option("--structure", cfg.structure, "fom, const, SP, IO or All");
  red->add_option("--init", cfg.init, "pirka or trivial");
  red->add_option("--r", cfg.r, "Reduced order");
  red->add_option("--ps", cfg.ps, "pIRKA sample points");
  red->add_option("--rs", cfg.rs, "Local IRKA order");
  red->add_option("--seed", cfg.seed, "Seed for trivial initialization");
  red->add_option("--maxit", cfg.optim.max_iter, "Maximum optimizer iterations");
  red->add_option("--stop-tol", cfg.optim.stop_tol, "Relative ROM change tolerance");
  red->add_flag("--skip-optimize", cfg.skip_optimize, "Only write the initial ROM");
  red->add_flag("!--no-metrics", cfg.metrics, "Skip the H2xL2 error computation");
  red->add_option("-o,--out", cfg.out, "Output directory");
  add_quad_options(red, cfg.quad, red_mode);

  std::string fom_path, rom_path, eval_out = "eval", eval_mode;
  QuadSpec eval_quad;
  auto* ev = app.add_subcommand("evaluate", "Error metrics of a ROM");
  ev->add_option("--fom", fom_path, "FOM JSON file")->required();
  ev->add_option("--rom", rom_path, "ROM JSON file")->required();
  ev->add_option("-o,--out", eval_out, "Output directory");
  add_quad_options(ev, eval_quad, eval_mode);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*gen) return cmd_generate(gen_args, gen_out);
    if (*red) {
      if (!config_path.empty()) {
        RunConfig from_file;
        from_file.merge_json(read_json_file(config_path).at("config"));
        // Explicit flags override the file.
        RunConfig merged = from_file;
        auto given = [&](const char* name) { return red->get_option(name)->count() > 0; };
        if (given("--fom")) merged.fom_path = cfg.fom_path;
        if (given("--model")) merged.model = cfg.model, merged.fom_path.clear();
        if (given("--structure")) merged.structure = cfg.structure;
        if (given("--init")) merged.init = cfg.init;
        if (given("--r")) merged.r = cfg.r;
        if (given("--ps")) merged.ps = cfg.ps;
        if (given("--rs")) merged.rs = cfg.rs;
        if (given("--seed")) merged.seed = cfg.seed;
        if (given("--maxit")) merged.optim.max_iter = cfg.optim.max_iter;
        if (given("--stop-tol")) merged.optim.stop_tol = cfg.optim.stop_tol;
        if (given("--skip-optimize")) merged.skip_optimize = cfg.skip_optimize;
        if (given("--no-metrics")) merged.metrics = cfg.metrics;
        if (given("--out")) merged.out = cfg.out;
        cfg = merged;
      }
      apply_quad_mode(cfg.quad, red_mode);
      if (cfg.fom_path.empty() && cfg.model.name.empty()) throw ConfigError("reduce needs --fom or --model");
      return cmd_reduce(cfg);
    }
    if (*ev) {
      apply_quad_mode(eval_quad, eval_mode);
      return cmd_evaluate(fom_path, rom_path, eval_out, eval_quad);
    }
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const InitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return infeasible;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return numeric;
  }
  return usage;
}
