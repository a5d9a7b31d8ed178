#pragma once

#include <functional>
#include <string>
#include <vector>

#include "formc/mesh.hpp"
#include "formc/quadrature.hpp"

namespace formc {

class SparseMatrix {
 public:
  SparseMatrix() = default;
  /// Builds the CSR pattern from the cell->dof map before any accumulation.
  SparseMatrix(int n, const std::vector<std::vector<int>>& cell_dofs);

  int rows() const { return n_; }
  void add(int i, int j, double v);
  double get(int i, int j) const;
  void matvec(const std::vector<double>& x, std::vector<double>& y) const;
  double frobenius_norm() const;
  double max_abs_row_sum_violation() const;  // max |A * ones| entry
  double max_asymmetry() const;              // max |A_ij - A_ji|
  double checksum() const;                   // deterministic value digest
  std::string to_matrix_market() const;

  const std::vector<int>& row_offsets() const { return offsets_; }
  const std::vector<int>& col_ids() const { return cols_; }
  const std::vector<double>& values() const { return vals_; }
  std::vector<double>& values() { return vals_; }

 private:
  int n_ = 0;
  std::vector<int> offsets_;
  std::vector<int> cols_;
  std::vector<double> vals_;
};

/// Element kernel: fills the full nloc x nloc row-major local matrix from
/// the element's geometry tensor.
using ElementKernel = std::function<void(const GeometryTensor&, double*)>;

/// Laplacian kernel variants of the assembly baseline comparison.
ElementKernel make_quadrature_kernel(int degree, int dim);
ElementKernel make_naive_kernel(int degree, int dim);
ElementKernel make_zeroskip_kernel(int degree, int dim);
/// Wraps an upper-triangle kernel function (generated code) into a
/// full-matrix element kernel.
ElementKernel wrap_upper_kernel(void (*fn)(const double*, double*), int nloc,
                                int dim);

SparseMatrix assemble(const StructuredMesh& mesh, const LocalToGlobal& l2g,
                      const ElementKernel& kernel);

/// Jacobi-preconditioned conjugate gradients; returns iterations used.
int cg_solve(const SparseMatrix& A, const std::vector<double>& b,
             std::vector<double>& x, double tol = 1e-12, int max_iter = 10000);

/// Degree-1 Poisson on the unit square with manufactured solution
/// u = x(1-x)y(1-y); returns the L2 error of the Galerkin solution.
double poisson_l2_error(int n);

struct BenchRow {
  std::string kernel;
  long cells = 0;
  double local_time = 0.0;   // seconds per million elements
  double insert_time = 0.0;  // seconds per million elements
  double checksum = 0.0;
};

std::vector<BenchRow> bench(
    const StructuredMesh& mesh, int degree,
    const std::vector<std::pair<std::string, ElementKernel>>& kernels);

/// Baseline kernel lookup: "quadrature", "naive", or "zeroskip". Compiled
/// ("generated") kernels live in the generated-code library and are passed
/// to bench/assemble as plain ElementKernels.
ElementKernel named_kernel(const std::string& name, int degree, int dim);

}  // namespace formc
