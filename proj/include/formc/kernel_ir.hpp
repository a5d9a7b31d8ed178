#pragma once

#include <span>
#include <string>
#include <vector>

#include "formc/optimizer.hpp"

namespace formc {

/// Straight-line scalar instruction. Every non-store instruction defines a
/// new single-assignment value whose id is its position in the list.
struct Instr {
  enum class Op { Load, Neg, Scale, Add, Fma };
  Op op = Op::Load;
  int a = -1;       // Load: input index; otherwise first source value id
  int b = -1;       // Add: second source; Fma: accumulator value id
  Rational c;       // Scale/Fma constant, exact
};

struct Output {
  int row = 0;
  int col = 0;
  int src = -1;  // value id, or -1 for a constant zero
};

struct KernelIR {
  std::string form;  // "laplacian" | "advection"
  int degree = 0;
  int dim = 0;
  int n_inputs = 0;   // d^2 geometry entries, or d*|L| gamma entries
  int n_rows = 0;     // output matrix is n_rows x n_rows
  bool upper_only = true;
  std::vector<Instr> instructions;
  std::vector<Output> outputs;

  long maps = 0;  // from the dependency graph
  int negs = 0, mults = 0, adds = 0;
};

struct KernelSource {
  std::string text;
  std::string symbol;
  long maps = 0;
  int negs = 0, adds = 0;
};

enum class Backend { Native, PortableCurly, IrJson };

/// Lowers an ordered dependency graph to straight-line code computing every
/// output value from the flat input vector.
KernelIR lower(const DependencyGraph& graph, const std::string& form,
               int degree, int dim, int n_rows);

/// Evaluates the IR in instruction order; returns the n_rows x n_rows output
/// matrix row-major with only the stored entries set.
std::vector<double> interpret(const KernelIR& ir, std::span<const double> inputs);
std::vector<Rational> interpret_exact(const KernelIR& ir,
                                      std::span<const Rational> inputs);

std::string kernel_symbol(const std::string& form, int degree, int dim);
KernelSource emit_source(const KernelIR& ir, Backend backend);
KernelIR parse_ir_json(const std::string& text);

}  // namespace formc
