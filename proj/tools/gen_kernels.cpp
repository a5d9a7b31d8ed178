// Build-time generator: runs the dependency-optimizer pipeline for every
// in-scope (form, degree, dim) and writes the lowered kernels as native C++
// plus a lookup registry.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "formc/kernel_ir.hpp"
#include "formc/trilinear.hpp"

namespace {

struct Job {
  std::string form;
  int degree;
  int dim;
};

formc::KernelIR build_ir(const Job& job) {
  using namespace formc;
  if (job.form == "laplacian") {
    const ReferenceTensor K = reference_stiffness_tensor(job.degree, job.dim);
    PassOptions opt;
    opt.default_charge = DefaultCharge::VectorLength;
    DependencyGraph g = run_passes(blocks_of(K), opt);
    return lower(g, job.form, job.degree, job.dim, K.nbasis);
  }
  const ReferenceTensor N = reference_advection_tensor(job.degree, job.dim);
  PassOptions opt;
  opt.enable_transpose = false;
  opt.scaled_edit = true;
  opt.default_charge = DefaultCharge::NonzeroCount;
  opt.helpers = advection_helpers(job.dim, N.nbasis);
  DependencyGraph g = run_passes(advection_blocks(N), opt);
  return lower(g, job.form, job.degree, job.dim, N.nbasis);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_kernels <output-dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  std::vector<Job> jobs;
  for (int p = 1; p <= formc::kMaxDegree; ++p) jobs.push_back({"laplacian", p, 2});
  jobs.push_back({"laplacian", 1, 3});
  jobs.push_back({"advection", 1, 2});
  jobs.push_back({"advection", 1, 3});

  std::ofstream src(dir / "kernels.cpp");
  std::ofstream reg(dir / "kernel_registry.cpp");
  src << "// Generated element kernels. Do not edit.\n\n";
  reg << "// Generated kernel registry. Do not edit.\n"
      << "#include \"formc/compiled_kernels.hpp\"\n\n";

  std::string decls, table;
  for (const auto& job : jobs) {
    const formc::KernelIR ir = build_ir(job);
    const formc::KernelSource ks =
        formc::emit_source(ir, formc::Backend::Native);
    src << ks.text << "\n";
    decls += "extern \"C\" void " + ks.symbol +
             "(const double*, double*);\n";
    table += "    {\"" + job.form + "\", " + std::to_string(job.degree) +
             ", " + std::to_string(job.dim) + ", &" + ks.symbol + "},\n";
    std::cerr << "generated " << ks.symbol << " (" << ir.maps << " maps)\n";
  }

  reg << decls << "\nnamespace formc {\n\n"
      << "const std::vector<CompiledKernelInfo>& compiled_kernel_table() {\n"
      << "  static const std::vector<CompiledKernelInfo> table = {\n"
      << table << "  };\n  return table;\n}\n\n"
      << "CompiledKernelFn compiled_kernel(const std::string& form, int degree,\n"
      << "                                 int dim) {\n"
      << "  for (const auto& k : compiled_kernel_table())\n"
      << "    if (k.form == form && k.degree == degree && k.dim == dim) return k.fn;\n"
      << "  return nullptr;\n}\n\n}  // namespace formc\n";
  return 0;
}
