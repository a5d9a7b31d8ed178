// formc: batch front end for tabulation, optimization, code generation,
// verification, and benchmarking. All commands print JSON on stdout;
// --pretty switches to indented output. Exit status: 0 success, 1 check
// failure, 2 usage error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "formc/assembly.hpp"
#include "formc/compiled_kernels.hpp"
#include "formc/hand_kernels.hpp"
#include "formc/kernel_ir.hpp"
#include "formc/random_elements.hpp"
#include "formc/trilinear.hpp"

using nlohmann::json;
using namespace formc;

namespace {

struct Config {
  std::string form = "laplacian";
  int degree = 1;
  int dim = 2;
  std::string backend = "native";
  std::string output;
  std::uint64_t seed = kDefaultSeed;
  bool pretty = false;
  bool fold_scale = true;
  int n = 32;
  std::vector<std::string> kernels = {"quadrature", "naive", "zeroskip",
                                      "generated"};
};

void emit(const json& j, const Config& cfg) {
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output);
    out << j.dump(2) << "\n";
  }
  std::cout << (cfg.pretty ? j.dump(2) : j.dump()) << "\n";
}

ReferenceTensor tabulate_tensor(const Config& cfg) {
  if (cfg.form == "laplacian")
    return reference_stiffness_tensor(cfg.degree, cfg.dim);
  if (cfg.form == "advection")
    return reference_advection_tensor(cfg.degree, cfg.dim);
  throw ParameterError("unknown form: " + cfg.form);
}

DependencyGraph optimize_graph(const Config& cfg, const ReferenceTensor& t) {
  PassOptions opt;
  if (cfg.form == "laplacian") {
    opt.default_charge = DefaultCharge::VectorLength;
    return run_passes(blocks_of(t), opt);
  }
  opt.enable_transpose = false;
  opt.scaled_edit = true;
  opt.default_charge = DefaultCharge::NonzeroCount;
  opt.helpers = advection_helpers(cfg.dim, t.nbasis);
  return run_passes(advection_blocks(t), opt);
}

json histogram_json(const ClassHistogram& h) {
  return {{"zero", h.zero},     {"equal", h.eq},   {"transpose", h.eq_t},
          {"one_entry", h.one_entry}, {"colinear", h.col}, {"ed1", h.ed1},
          {"ed2", h.ed2},       {"lincomb", h.lc}, {"default", h.dflt}};
}

int cmd_tabulate(const Config& cfg) {
  const ReferenceTensor t = tabulate_tensor(cfg);
  json j;
  j["kind"] = cfg.form;
  j["degree"] = t.degree;
  j["dim"] = t.dim;
  j["nbasis"] = t.nbasis;
  j["ordering"] = node_ordering_description();
  json entries = json::array();
  for (const auto& v : t.entries) {
    auto [num, den] = to_int64_pair(v);
    entries.push_back({num, den});
  }
  j["entries"] = std::move(entries);
  emit(j, cfg);
  return 0;
}

int cmd_optimize(const Config& cfg) {
  const ReferenceTensor t = tabulate_tensor(cfg);
  const DependencyGraph g = optimize_graph(cfg, t);
  const CostReport r = map_count(g, cfg.degree, cfg.dim);
  json j;
  j["form"] = cfg.form;
  j["degree"] = cfg.degree;
  j["dim"] = cfg.dim;
  j["entries"] = r.entries;
  j["base_maps"] = r.base_maps;
  j["ferari_maps"] = r.ferari_maps;
  j["histogram"] = histogram_json(r.histogram);
  emit(j, cfg);
  return 0;
}

int cmd_codegen(const Config& cfg) {
  const ReferenceTensor t = tabulate_tensor(cfg);
  const DependencyGraph g = optimize_graph(cfg, t);
  const KernelIR ir = lower(g, cfg.form, cfg.degree, cfg.dim, t.nbasis);
  Backend backend;
  if (cfg.backend == "native")
    backend = Backend::Native;
  else if (cfg.backend == "curly")
    backend = Backend::PortableCurly;
  else if (cfg.backend == "ir-json")
    backend = Backend::IrJson;
  else
    throw CLI::ValidationError("--backend", "unknown backend " + cfg.backend);
  const KernelSource src = emit_source(ir, backend);
  json j;
  j["symbol"] = src.symbol;
  j["backend"] = cfg.backend;
  j["maps"] = src.maps;
  j["instructions"] = ir.instructions.size();
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output);
    out << src.text;
    j["output"] = cfg.output;
  } else {
    j["text"] = src.text;
  }
  std::cout << (cfg.pretty ? j.dump(2) : j.dump()) << "\n";
  return 0;
}

int cmd_verify(const Config& cfg) {
  const ReferenceTensor t = tabulate_tensor(cfg);
  const DependencyGraph g = optimize_graph(cfg, t);
  const KernelIR ir = lower(g, cfg.form, cfg.degree, cfg.dim, t.nbasis);
  const CompiledKernelFn native = compiled_kernel(cfg.form, cfg.degree, cfg.dim);
  const int n = t.nbasis, d = cfg.dim;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  double max_rel = 0.0;
  json worst;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const auto verts = random_simplex(d, rng);
    const AffineMap map = affine_map_from_vertices(verts, d);

    std::vector<double> inputs, reference(static_cast<std::size_t>(n) * n, 0.0);
    if (cfg.form == "laplacian") {
      const GeometryTensor G = geometry_tensor(map);
      for (int m = 0; m < d; ++m)
        for (int mp = 0; mp < d; ++mp) inputs.push_back(G.g[m][mp]);
      for (int la = 0; la < n; ++la)
        for (int mu = 0; mu < n; ++mu) {
          double acc = 0.0;
          for (int m = 0; m < d; ++m)
            for (int mp = 0; mp < d; ++mp)
              acc += G.g[m][mp] * to_double(t.k(la, mu, m, mp));
          reference[la * n + mu] = acc;
        }
    } else {
      const GeometryTensor Gt = tilde_geometry_tensor(map);
      CoefficientField u(d, std::vector<double>(n));
      for (auto& row : u)
        for (auto& v : row) v = coeff(rng);
      const GammaMatrix gm = gamma(Gt, u);
      for (int m = 0; m < d; ++m)
        for (int la = 0; la < n; ++la) inputs.push_back(gm[m][la]);
      reference = naive_keu(t, gm);
    }

    auto interp = interpret(ir, inputs);
    std::vector<double> compiled(interp.size(), 0.0);
    if (native) native(inputs.data(), compiled.data());
    if (ir.upper_only) {
      for (int la = 0; la < n; ++la)
        for (int mu = 0; mu < la; ++mu) {
          interp[la * n + mu] = interp[mu * n + la];
          compiled[la * n + mu] = compiled[mu * n + la];
        }
    }
    double scale = 0.0;
    for (double v : reference) scale = std::max(scale, std::abs(v));
    for (int la = 0; la < n; ++la)
      for (int mu = 0; mu < n; ++mu) {
        const std::size_t idx = static_cast<std::size_t>(la) * n + mu;
        double dev = std::abs(interp[idx] - reference[idx]);
        if (native) dev = std::max(dev, std::abs(compiled[idx] - reference[idx]));
        const double rel = dev / scale;
        if (rel > max_rel) {
          max_rel = rel;
          worst = {{"lambda", la}, {"mu", mu}, {"inputs", inputs}};
        }
      }
  }

  const bool ok = max_rel <= 1e-12;
  json j;
  j["form"] = cfg.form;
  j["degree"] = cfg.degree;
  j["dim"] = cfg.dim;
  j["seed"] = cfg.seed;
  j["trials"] = trials;
  j["compiled_kernel"] = native != nullptr;
  j["max_relative_deviation"] = max_rel;
  j["status"] = ok ? "pass" : "fail";
  if (!ok) j["worst"] = worst;
  emit(j, cfg);
  return ok ? 0 : 1;
}

int cmd_bench(const Config& cfg) {
  const StructuredMesh mesh =
      cfg.dim == 2 ? unit_square_mesh(cfg.n) : unit_cube_mesh(cfg.n);
  std::vector<std::pair<std::string, ElementKernel>> kernels;
  for (const auto& name : cfg.kernels) {
    if (name == "generated") {
      const CompiledKernelFn fn = compiled_kernel("laplacian", cfg.degree, cfg.dim);
      if (!fn) throw ParameterError("no compiled kernel for this config");
      kernels.emplace_back(name, wrap_upper_kernel(fn, basis_size(cfg.degree, cfg.dim), cfg.dim));
    } else {
      kernels.emplace_back(name, named_kernel(name, cfg.degree, cfg.dim));
    }
  }
  const auto rows = bench(mesh, cfg.degree, kernels);
  for (const auto& r : rows) {
    json j = {{"kernel", r.kernel},
              {"cells", r.cells},
              {"local_time", r.local_time},
              {"insert_time", r.insert_time},
              {"checksum", r.checksum}};
    std::cout << j.dump() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"formc: exact form tabulation, optimization and code generation"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool needs_form = true) {
    if (needs_form)
      sub->add_option("--form", cfg.form, "laplacian | advection");
    sub->add_option("--degree", cfg.degree, "polynomial degree 1..6");
    sub->add_option("--dim", cfg.dim, "spatial dimension 2 or 3");
    sub->add_option("--output", cfg.output, "also write the report to a file");
    sub->add_flag("--pretty", cfg.pretty, "indent JSON output");
  };

  auto* tab = app.add_subcommand("tabulate", "dump an exact reference tensor");
  add_common(tab);
  auto* opt = app.add_subcommand("optimize", "dependency-graph cost report");
  add_common(opt);
  auto* gen = app.add_subcommand("codegen", "emit kernel source or IR");
  add_common(gen);
  gen->add_option("--backend", cfg.backend, "native | curly | ir-json");
  auto* ver = app.add_subcommand("verify", "randomized kernel verification");
  add_common(ver);
  ver->add_option("--seed", cfg.seed,
                  "RNG seed (default 424242, documented constant)");
  auto* ben = app.add_subcommand("bench", "kernel timing report (JSON lines)");
  add_common(ben);
  ben->add_option("--n", cfg.n, "mesh subdivisions per side");
  ben->add_option("--kernels", cfg.kernels,
                  "subset of quadrature,naive,zeroskip,generated")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (tab->parsed()) return cmd_tabulate(cfg);
    if (opt->parsed()) return cmd_optimize(cfg);
    if (gen->parsed()) return cmd_codegen(cfg);
    if (ver->parsed()) return cmd_verify(cfg);
    if (ben->parsed()) return cmd_bench(cfg);
  } catch (const ParameterError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
