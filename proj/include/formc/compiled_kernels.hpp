#pragma once

#include <string>
#include <vector>

namespace formc {

/// Signature of generated native kernels: inputs are the flattened geometry
/// tensor (Laplacian, d*d, upper-triangle outputs) or the flattened gamma
/// matrix (advection, d*|L|, full outputs); K is the row-major local matrix.
using CompiledKernelFn = void (*)(const double*, double*);

struct CompiledKernelInfo {
  std::string form;
  int degree = 0;
  int dim = 0;
  CompiledKernelFn fn = nullptr;
};

/// Returns nullptr when no kernel was generated for the triple.
/// Implemented by the build-time generated registry.
CompiledKernelFn compiled_kernel(const std::string& form, int degree, int dim);

const std::vector<CompiledKernelInfo>& compiled_kernel_table();

}  // namespace formc
