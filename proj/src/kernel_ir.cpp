#include "formc/kernel_ir.hpp"

#include <cstdio>
#include <json.hpp>
#include <stdexcept>

namespace formc {

namespace {

using nlohmann::json;

class Lowerer {
 public:
  Lowerer(const DependencyGraph& graph, KernelIR& ir)
      : graph_(graph), ir_(ir), load_cache_(graph.vec_len, -1),
        node_value_(graph.nodes.size(), -1) {}

  void run() {
    for (int idx : graph_.order) {
      const auto& node = graph_.nodes[idx];
      node_value_[idx] = lower_node(node);
      if (!node.helper)
        ir_.outputs.push_back({node.owner.first, node.owner.second,
                               node_value_[idx]});
    }
  }

 private:
  int push(Instr ins) {
    ir_.instructions.push_back(std::move(ins));
    return static_cast<int>(ir_.instructions.size()) - 1;
  }

  int load(int input) {
    if (load_cache_[input] < 0)
      load_cache_[input] = push({Instr::Op::Load, input, -1, 0});
    return load_cache_[input];
  }

  int scaled(const Rational& c, int src) {
    if (c == 1) return src;
    if (c == -1) return push({Instr::Op::Neg, src, -1, 0});
    return push({Instr::Op::Scale, src, -1, c});
  }

  // acc + c * x
  int axpy(const Rational& c, int x, int acc) {
    if (c == 0) return acc;
    if (c == 1) return push({Instr::Op::Add, x, acc, 0});
    if (c == -1) {
      int nx = push({Instr::Op::Neg, x, -1, 0});
      return push({Instr::Op::Add, nx, acc, 0});
    }
    return push({Instr::Op::Fma, x, acc, c});
  }

  int ref_value(int node) const {
    int v = node_value_[node];
    if (v < 0) throw std::logic_error("unresolved reference in lowering");
    return v;
  }

  int lower_node(const DependencyNode& node) {
    switch (node.cls) {
      case DepClass::Zero:
        return -1;
      case DepClass::Equal:
      case DepClass::Transpose:
        return ref_value(node.ref1);
      case DepClass::OneEntry:
        return scaled(node.one_entry_coeff, load(node.one_entry_pos));
      case DepClass::Colinear:
        return scaled(node.c1, ref_value(node.ref1));
      case DepClass::EditDist1:
      case DepClass::EditDist2: {
        int acc = scaled(node.c1, ref_value(node.ref1));
        for (const auto& e : node.edits) acc = axpy(e.delta, load(e.pos), acc);
        return acc;
      }
      case DepClass::LinComb: {
        int acc = scaled(node.c1, ref_value(node.ref1));
        if (node.c2 != 0) acc = axpy(node.c2, ref_value(node.ref2), acc);
        return acc;
      }
      case DepClass::Default: {
        int acc = -1;
        for (std::size_t k = 0; k < node.values.size(); ++k) {
          const Rational& c = node.values[k];
          if (c == 0) continue;
          acc = acc < 0 ? scaled(c, load(static_cast<int>(k)))
                        : axpy(c, load(static_cast<int>(k)), acc);
        }
        return acc;
      }
    }
    throw std::logic_error("unreachable");
  }

  const DependencyGraph& graph_;
  KernelIR& ir_;
  std::vector<int> load_cache_;
  std::vector<int> node_value_;
};

template <typename T>
std::vector<T> interpret_impl(const KernelIR& ir, std::span<const T> inputs) {
  if (static_cast<int>(inputs.size()) != ir.n_inputs)
    throw ParameterError("input vector size mismatch");
  std::vector<T> vals(ir.instructions.size());
  for (std::size_t i = 0; i < ir.instructions.size(); ++i) {
    const auto& ins = ir.instructions[i];
    switch (ins.op) {
      case Instr::Op::Load: vals[i] = inputs[ins.a]; break;
      case Instr::Op::Neg: vals[i] = -vals[ins.a]; break;
      case Instr::Op::Scale:
        if constexpr (std::is_same_v<T, double>)
          vals[i] = to_double(ins.c) * vals[ins.a];
        else
          vals[i] = ins.c * vals[ins.a];
        break;
      case Instr::Op::Add: vals[i] = vals[ins.a] + vals[ins.b]; break;
      case Instr::Op::Fma:
        if constexpr (std::is_same_v<T, double>)
          vals[i] = to_double(ins.c) * vals[ins.a] + vals[ins.b];
        else
          vals[i] = ins.c * vals[ins.a] + vals[ins.b];
        break;
    }
  }
  std::vector<T> out(static_cast<std::size_t>(ir.n_rows) * ir.n_rows, T(0));
  for (const auto& o : ir.outputs)
    out[o.row * ir.n_rows + o.col] = o.src < 0 ? T(0) : vals[o.src];
  return out;
}

std::string render_double(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", to_double(r));
  return buf;
}

const char* op_name(Instr::Op op) {
  switch (op) {
    case Instr::Op::Load: return "load";
    case Instr::Op::Neg: return "neg";
    case Instr::Op::Scale: return "scale";
    case Instr::Op::Add: return "add";
    case Instr::Op::Fma: return "fma";
  }
  return "?";
}

Instr::Op op_from_name(const std::string& s) {
  if (s == "load") return Instr::Op::Load;
  if (s == "neg") return Instr::Op::Neg;
  if (s == "scale") return Instr::Op::Scale;
  if (s == "add") return Instr::Op::Add;
  if (s == "fma") return Instr::Op::Fma;
  throw ParameterError("unknown IR op: " + s);
}

std::string emit_curly(const KernelIR& ir, bool extern_c) {
  std::string s;
  const std::string sym = kernel_symbol(ir.form, ir.degree, ir.dim);
  s += "/* " + sym + ": form " + ir.form + ", degree " +
       std::to_string(ir.degree) + ", dim " + std::to_string(ir.dim) +
       ", maps " + std::to_string(ir.maps) + ", negs " +
       std::to_string(ir.negs) + ", adds " + std::to_string(ir.adds) + "\n";
  s += " * inputs: flat vector of " + std::to_string(ir.n_inputs) +
       " values; outputs: " +
       std::string(ir.upper_only ? "upper triangle of " : "") + "a " +
       std::to_string(ir.n_rows) + "x" + std::to_string(ir.n_rows) +
       " row-major matrix */\n";
  if (extern_c) s += "extern \"C\" ";
  s += "void " + sym + "(const double* G, double* K) {\n";
  for (std::size_t i = 0; i < ir.instructions.size(); ++i) {
    const auto& ins = ir.instructions[i];
    s += "  const double t" + std::to_string(i) + " = ";
    switch (ins.op) {
      case Instr::Op::Load: s += "G[" + std::to_string(ins.a) + "]"; break;
      case Instr::Op::Neg: s += "-t" + std::to_string(ins.a); break;
      case Instr::Op::Scale:
        s += render_double(ins.c) + " * t" + std::to_string(ins.a);
        break;
      case Instr::Op::Add:
        s += "t" + std::to_string(ins.a) + " + t" + std::to_string(ins.b);
        break;
      case Instr::Op::Fma:
        s += render_double(ins.c) + " * t" + std::to_string(ins.a) + " + t" +
             std::to_string(ins.b);
        break;
    }
    s += ";\n";
  }
  for (const auto& o : ir.outputs) {
    s += "  K[" + std::to_string(o.row * ir.n_rows + o.col) + "] = ";
    s += o.src < 0 ? "0.0" : "t" + std::to_string(o.src);
    s += ";\n";
  }
  s += "}\n";
  return s;
}

std::string emit_json(const KernelIR& ir) {
  json j;
  j["format"] = "formc-ir";
  j["version"] = 1;
  j["form"] = ir.form;
  j["degree"] = ir.degree;
  j["dim"] = ir.dim;
  j["inputs"] = ir.n_inputs;
  j["rows"] = ir.n_rows;
  j["upper_only"] = ir.upper_only;
  j["temps"] = ir.instructions.size();
  j["maps"] = ir.maps;
  json instrs = json::array();
  for (const auto& ins : ir.instructions) {
    json ji;
    ji["op"] = op_name(ins.op);
    ji["args"] = json::array();
    if (ins.a >= 0) ji["args"].push_back(ins.a);
    if (ins.b >= 0) ji["args"].push_back(ins.b);
    if (ins.op == Instr::Op::Scale || ins.op == Instr::Op::Fma) {
      auto [num, den] = to_int64_pair(ins.c);
      ji["const"] = {num, den};
    }
    instrs.push_back(std::move(ji));
  }
  j["instructions"] = std::move(instrs);
  json outs = json::array();
  for (const auto& o : ir.outputs)
    outs.push_back({{"row", o.row}, {"col", o.col}, {"src", o.src}});
  j["outputs"] = std::move(outs);
  return j.dump(2);
}

}  // namespace

KernelIR lower(const DependencyGraph& graph, const std::string& form,
               int degree, int dim, int n_rows) {
  KernelIR ir;
  ir.form = form;
  ir.degree = degree;
  ir.dim = dim;
  ir.n_inputs = graph.vec_len;
  ir.n_rows = n_rows;
  ir.upper_only = form == "laplacian";
  ir.maps = graph.total_maps;
  Lowerer(graph, ir).run();
  for (const auto& ins : ir.instructions) {
    switch (ins.op) {
      case Instr::Op::Load: break;
      case Instr::Op::Neg: ++ir.negs; break;
      case Instr::Op::Scale: ++ir.mults; break;
      case Instr::Op::Add: ++ir.adds; break;
      case Instr::Op::Fma: ++ir.mults; ++ir.adds; break;
    }
  }
  return ir;
}

std::vector<double> interpret(const KernelIR& ir,
                              std::span<const double> inputs) {
  return interpret_impl<double>(ir, inputs);
}

std::vector<Rational> interpret_exact(const KernelIR& ir,
                                      std::span<const Rational> inputs) {
  return interpret_impl<Rational>(ir, inputs);
}

std::string kernel_symbol(const std::string& form, int degree, int dim) {
  return "k_" + form + "_p" + std::to_string(degree) + "_" +
         std::to_string(dim) + "d";
}

KernelSource emit_source(const KernelIR& ir, Backend backend) {
  KernelSource src;
  src.symbol = kernel_symbol(ir.form, ir.degree, ir.dim);
  src.maps = ir.maps;
  src.negs = ir.negs;
  src.adds = ir.adds;
  switch (backend) {
    case Backend::Native: src.text = emit_curly(ir, true); break;
    case Backend::PortableCurly: src.text = emit_curly(ir, false); break;
    case Backend::IrJson: src.text = emit_json(ir); break;
  }
  return src;
}

KernelIR parse_ir_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("format") != "formc-ir")
    throw ParameterError("not a formc-ir document");
  KernelIR ir;
  ir.form = j.at("form");
  ir.degree = j.at("degree");
  ir.dim = j.at("dim");
  ir.n_inputs = j.at("inputs");
  ir.n_rows = j.at("rows");
  ir.upper_only = j.at("upper_only");
  ir.maps = j.at("maps");
  for (const auto& ji : j.at("instructions")) {
    Instr ins;
    ins.op = op_from_name(ji.at("op"));
    const auto& args = ji.at("args");
    if (!args.empty()) ins.a = args[0];
    if (args.size() > 1) ins.b = args[1];
    if (ji.contains("const")) {
      ins.c = Rational(Int(ji["const"][0].get<std::int64_t>()),
                       Int(ji["const"][1].get<std::int64_t>()));
    }
    ir.instructions.push_back(ins);
  }
  for (const auto& jo : j.at("outputs"))
    ir.outputs.push_back({jo.at("row"), jo.at("col"), jo.at("src")});
  for (const auto& ins : ir.instructions) {
    switch (ins.op) {
      case Instr::Op::Load: break;
      case Instr::Op::Neg: ++ir.negs; break;
      case Instr::Op::Scale: ++ir.mults; break;
      case Instr::Op::Add: ++ir.adds; break;
      case Instr::Op::Fma: ++ir.mults; ++ir.adds; break;
    }
  }
  return ir;
}

}  // namespace formc
