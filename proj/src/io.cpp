#include "gsh/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gsh::io {

namespace {

std::vector<cplx> complex_array(const json& j, std::size_t expected, const char* what) {
  if (!j.is_array() || j.size() != expected)
    throw std::invalid_argument(std::string(what) + ": data length does not match box");
  std::vector<cplx> out;
  out.reserve(expected);
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument(std::string(what) + ": entries must be [re, im] pairs");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

json complex_array_to_json(const std::vector<cplx>& v) {
  json j = json::array();
  for (const cplx& z : v) j.push_back(json::array({z.real(), z.imag()}));
  return j;
}

Box box_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty() || j.size() > kMaxDim)
    throw std::invalid_argument(std::string(what) + ": box must list 1..3 orders");
  std::vector<int> orders;
  for (const auto& e : j) orders.push_back(e.get<int>());
  return Box(std::span<const int>(orders.data(), orders.size()));
}

json box_to_json(const Box& b) {
  json j = json::array();
  for (int k = 0; k < b.dim(); ++k) j.push_back(b.order(k));
  return j;
}

}  // namespace

weights::WeightSequence sequence_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  const json params = j.value("params", json::object());
  if (family == "custom") {
    std::vector<double> lv;
    for (const auto& e : params.at("log_values")) lv.push_back(e.get<double>());
    return weights::WeightSequence::custom(std::move(lv));
  }
  const long p_max = j.at("p_max").get<long>();
  if (family == "gevrey")
    return weights::WeightSequence::gevrey(params.at("alpha").get<double>(), p_max);
  if (family == "power_log")
    return weights::WeightSequence::power_log(params.at("s").get<double>(),
                                              params.at("t").get<double>(), p_max);
  if (family == "exp_power")
    return weights::WeightSequence::exp_power(params.at("r").get<double>(), p_max);
  if (family == "from_weight_table") {
    std::vector<std::pair<double, double>> grid;
    for (const auto& e : params.at("grid")) {
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("sequence: grid entries must be [rho, omega] pairs");
      grid.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return weights::WeightSequence::from_weight_table(std::move(grid), p_max);
  }
  throw std::invalid_argument("sequence: unknown family '" + family + "'");
}

json sequence_to_json(const weights::WeightSequence& seq) {
  json j;
  switch (seq.family()) {
    case weights::Family::gevrey: j["family"] = "gevrey"; break;
    case weights::Family::power_log: j["family"] = "power_log"; break;
    case weights::Family::exp_power: j["family"] = "exp_power"; break;
    case weights::Family::from_weight_fn: j["family"] = "from_weight_fn"; break;
    case weights::Family::from_weight_table: j["family"] = "from_weight_table"; break;
    case weights::Family::custom: j["family"] = "custom"; break;
  }
  json params = json::object();
  for (const auto& [k, v] : seq.params()) params[k] = v;
  if (seq.family() == weights::Family::custom) params["log_values"] = seq.table();
  j["params"] = params;
  j["p_max"] = seq.p_max();
  return j;
}

CoefficientField field_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  const Box box = box_from_json(j.at("box"), "field");
  if (box.dim() != dim) throw std::invalid_argument("field: dim does not match box");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "test" && kind != "dual")
    throw std::invalid_argument("field: kind must be 'test' or 'dual'");
  CoefficientField a(box, kind == "test" ? FieldKind::test : FieldKind::dual);
  a.data = complex_array(j.at("data"), box.size(), "field");
  a.require_finite();
  return a;
}

json field_to_json(const CoefficientField& a) {
  json j;
  j["dim"] = a.box.dim();
  j["box"] = box_to_json(a.box);
  j["kind"] = a.kind == FieldKind::test ? "test" : "dual";
  j["data"] = complex_array_to_json(a.data);
  return j;
}

SampledFunction samples_from_json(const json& j) {
  SampledFunction s;
  s.dim = j.at("dim").get<int>();
  const json& grids = j.at("grid");
  if (!grids.is_array() || static_cast<int>(grids.size()) != s.dim)
    throw std::invalid_argument("samples: grid must list one axis per dimension");
  for (int k = 0; k < s.dim; ++k)
    for (const auto& e : grids[k]) s.grid[k].push_back(e.get<double>());
  s.values = complex_array(j.at("values"), s.grid_size(), "samples");
  s.validate();
  return s;
}

json samples_to_json(const SampledFunction& s) {
  json j;
  j["dim"] = s.dim;
  json grids = json::array();
  for (int k = 0; k < s.dim; ++k) grids.push_back(s.grid[k]);
  j["grid"] = grids;
  j["values"] = complex_array_to_json(s.values);
  return j;
}

kernel::KernelCoefficients kernel_from_json(const json& j) {
  const int l = j.at("l").get<int>();
  const int s = j.at("s").get<int>();
  const Box out_box = box_from_json(j.at("out_box"), "kernel");
  const Box in_box = box_from_json(j.at("in_box"), "kernel");
  if (out_box.dim() != l || in_box.dim() != s)
    throw std::invalid_argument("kernel: (l, s) do not match the boxes");
  kernel::KernelCoefficients t(out_box, in_box);
  t.data = complex_array(j.at("data"), out_box.size() * in_box.size(), "kernel");
  return t;
}

json kernel_to_json(const kernel::KernelCoefficients& t) {
  json j;
  j["l"] = t.l();
  j["s"] = t.s();
  j["out_box"] = box_to_json(t.out_box);
  j["in_box"] = box_to_json(t.in_box);
  j["data"] = complex_array_to_json(t.data);
  return j;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  json j;
  in >> j;
  return j;
}

void save_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace gsh::io
