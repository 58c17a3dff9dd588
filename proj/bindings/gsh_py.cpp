#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gsh/hermite.hpp"
#include "gsh/kernel.hpp"
#include "gsh/spaces.hpp"
#include "gsh/structural.hpp"
#include "gsh/weights.hpp"

namespace py = pybind11;
using namespace gsh;

namespace {

Box box_from_list(const std::vector<int>& orders) {
  return Box(std::span<const int>(orders.data(), orders.size()));
}

std::vector<int> box_to_list(const Box& b) {
  std::vector<int> v(b.dim());
  for (int k = 0; k < b.dim(); ++k) v[k] = b.order(k);
  return v;
}

CoefficientField field_from_numpy(const std::vector<int>& orders,
                                  py::array_t<cplx, py::array::c_style | py::array::forcecast> arr,
                                  const std::string& kind) {
  const Box box = box_from_list(orders);
  if (static_cast<std::size_t>(arr.size()) != box.size())
    throw std::invalid_argument("data length does not match box");
  CoefficientField f(box, kind == "dual" ? FieldKind::dual : FieldKind::test);
  const auto* p = arr.data();
  std::copy(p, p + arr.size(), f.data.begin());
  return f;
}

py::array_t<cplx> field_to_numpy(const CoefficientField& f) {
  py::array_t<cplx> arr(std::vector<py::ssize_t>{static_cast<py::ssize_t>(f.data.size())});
  std::copy(f.data.begin(), f.data.end(), arr.mutable_data());
  return arr;
}

py::dict report_to_dict(const weights::ConditionReport& rep) {
  py::dict d;
  d["condition"] = weights::to_string(rep.condition);
  d["verdict"] = weights::to_string(rep.verdict);
  d["checked_up_to"] = rep.checked_up_to;
  py::dict w;
  for (const auto& [k, v] : rep.witnesses) w[py::str(k)] = v;
  d["witnesses"] = w;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hermite-spectral toolkit: weight sequences, Fourier-Hermite analysis, "
            "membership diagnostics, structural regularization, kernel operators";

  // ------------------------------------------------------------- weights
  py::class_<weights::WeightSequence>(m, "WeightSequence")
      .def_static("gevrey", &weights::WeightSequence::gevrey, py::arg("alpha"), py::arg("p_max"))
      .def_static("power_log", &weights::WeightSequence::power_log, py::arg("s"), py::arg("t"),
                  py::arg("p_max"))
      .def_static("exp_power", &weights::WeightSequence::exp_power, py::arg("r"), py::arg("p_max"))
      .def_static(
          "from_weight_fn",
          [](const std::function<double(double)>& omega, long p_max) {
            return weights::WeightSequence::from_weight_fn(omega, p_max);
          },
          py::arg("omega"), py::arg("p_max"))
      .def_static("from_weight_table", &weights::WeightSequence::from_weight_table,
                  py::arg("table"), py::arg("p_max"))
      .def_static("custom", &weights::WeightSequence::custom, py::arg("log_values"))
      .def("log_m", &weights::WeightSequence::log_m, py::arg("p"))
      .def_property_readonly("p_max", &weights::WeightSequence::p_max);

  m.def("check_m1", [](const weights::WeightSequence& s) { return report_to_dict(weights::check_m1(s)); });
  m.def("check_m2", [](const weights::WeightSequence& s) { return report_to_dict(weights::check_m2(s)); });
  m.def("check_m3_quasi",
        [](const weights::WeightSequence& s) { return report_to_dict(weights::check_m3_quasi(s)); });
  m.def(
      "check_m3_nontrivial",
      [](const weights::WeightSequence& s, const std::string& mode) {
        return report_to_dict(weights::check_m3_nontrivial(
            s, mode == "beurling" ? weights::NontrivialityMode::beurling
                                  : weights::NontrivialityMode::roumieu));
      },
      py::arg("seq"), py::arg("mode") = "roumieu");

  m.def(
      "associated_fn",
      [](const weights::WeightSequence& s, double rho, long p_cap, const std::string& mode) {
        weights::AssocOptions opt;
        opt.p_cap = p_cap;
        opt.mode = mode == "full"      ? weights::ScanMode::full
                   : mode == "bracket" ? weights::ScanMode::bracket
                                       : weights::ScanMode::unimodal;
        const auto r = weights::associated_fn(s, rho, opt);
        return py::make_tuple(r.value, r.p_star, r.saturated);
      },
      py::arg("seq"), py::arg("rho"), py::arg("p_cap") = 10000, py::arg("mode") = "scan",
      "Returns (value, p_star, saturated).");

  // ------------------------------------------------------------- fields
  py::class_<CoefficientField>(m, "CoefficientField")
      .def(py::init(&field_from_numpy), py::arg("box"), py::arg("data"), py::arg("kind") = "test")
      .def_property_readonly("box", [](const CoefficientField& f) { return box_to_list(f.box); })
      .def_property_readonly("kind",
                             [](const CoefficientField& f) {
                               return f.kind == FieldKind::dual ? "dual" : "test";
                             })
      .def_property_readonly("data", &field_to_numpy)
      .def_static(
          "unit",
          [](const std::vector<int>& box, const std::vector<int>& n, const std::string& kind) {
            return CoefficientField::unit(box_from_list(box),
                                          MultiIndex(std::span<const int>(n.data(), n.size())),
                                          kind == "dual" ? FieldKind::dual : FieldKind::test);
          },
          py::arg("box"), py::arg("n"), py::arg("kind") = "test");

  // ------------------------------------------------------------- hermite
  m.def("hermite_eval", &hermite::hermite_eval, py::arg("n"), py::arg("x"),
        py::arg("order_cap") = hermite::kDefaultOrderCap);
  m.def("hermite_eval_multi", [](const std::vector<int>& n, const std::vector<double>& x) {
    return hermite::hermite_eval_multi(MultiIndex(std::span<const int>(n.data(), n.size())), x);
  });
  m.def(
      "gauss_hermite_rule",
      [](int order) {
        const auto r = hermite::gauss_hermite_rule(order);
        return py::make_tuple(py::array_t<double>(py::cast(r.nodes)),
                              py::array_t<double>(py::cast(r.weights)),
                              py::array_t<double>(py::cast(r.log_weights)));
      },
      py::arg("order"), "Returns (nodes, weights, log_weights).");
  m.def(
      "analyze",
      [](const std::function<cplx(std::vector<double>)>& f, const std::vector<int>& box,
         int quad_order) {
        const auto wrapped = [&f](std::span<const double> x) {
          return f(std::vector<double>(x.begin(), x.end()));
        };
        // python callables are not safe to call concurrently
        return hermite::analyze(wrapped, box_from_list(box), quad_order);
      },
      py::arg("f"), py::arg("box"), py::arg("quad_order") = 0);
  m.def(
      "synthesize_at",
      [](const CoefficientField& a, const std::vector<double>& x) {
        return hermite::synthesize_at(a, x);
      },
      py::arg("coeffs"), py::arg("x"));
  m.def(
      "synthesize",
      [](const CoefficientField& a, const std::vector<std::vector<double>>& grids) {
        const auto s = hermite::synthesize(a, grids);
        py::array_t<cplx> vals(std::vector<py::ssize_t>{static_cast<py::ssize_t>(s.values.size())});
        std::copy(s.values.begin(), s.values.end(), vals.mutable_data());
        return py::make_tuple(py::cast(grids), vals);
      },
      py::arg("coeffs"), py::arg("grids"));
  m.def(
      "ladder_apply",
      [](const CoefficientField& a, const std::string& op, int axis) {
        hermite::LadderOp o = op == "position"     ? hermite::LadderOp::position
                              : op == "derivative" ? hermite::LadderOp::derivative
                                                   : hermite::LadderOp::number;
        if (op != "position" && op != "derivative" && op != "number")
          throw std::invalid_argument("op must be position, derivative or number");
        return hermite::ladder_apply(a, o, axis);
      },
      py::arg("coeffs"), py::arg("op"), py::arg("axis") = 0);
  m.def("number_power", &hermite::number_power, py::arg("coeffs"), py::arg("beta"));
  m.def("sup_norm_estimate", &hermite::sup_norm_estimate, py::arg("n"));

  // ------------------------------------------------------------- spaces
  m.def(
      "weighted_norm",
      [](const CoefficientField& a, const weights::WeightSequence& seq,
         const std::vector<double>& theta, long p_cap) {
        weights::AssociatedFunctionTable table(seq, {p_cap, weights::ScanMode::unimodal});
        const auto r = spaces::weighted_norm(a, table, theta);
        return py::make_tuple(r.log_norm, r.saturated);
      },
      py::arg("coeffs"), py::arg("seq"), py::arg("theta"), py::arg("p_cap") = 10000,
      "Returns (log_norm, saturated).");
  m.def(
      "growth_check",
      [](const CoefficientField& b, const weights::WeightSequence& seq,
         const std::vector<double>& theta, long p_cap) {
        weights::AssociatedFunctionTable table(seq, {p_cap, weights::ScanMode::unimodal});
        const auto r = spaces::growth_check(b, table, theta);
        return py::make_tuple(r.passes, r.constant);
      },
      py::arg("coeffs"), py::arg("seq"), py::arg("theta"), py::arg("p_cap") = 10000);
  m.def(
      "classify",
      [](const CoefficientField& a, const weights::WeightSequence& seq, const std::string& kind,
         const std::vector<std::vector<double>>& theta_grid, long p_cap) {
        weights::AssociatedFunctionTable table(seq, {p_cap, weights::ScanMode::unimodal});
        spaces::MembershipKind mk = kind == "dual"            ? spaces::MembershipKind::dual_roumieu
                                    : kind == "dual-beurling" ? spaces::MembershipKind::dual_beurling
                                    : kind == "test-beurling" ? spaces::MembershipKind::test_beurling
                                                              : spaces::MembershipKind::test_roumieu;
        const auto rep = spaces::classify(a, table, mk, theta_grid);
        py::dict d;
        d["theta_grid"] = rep.theta_grid;
        d["log_norms"] = rep.log_norms;
        d["constants"] = rep.constants;
        d["stable"] = rep.stable;
        d["theta_star"] = rep.theta_star;
        d["at_boundary"] = rep.at_boundary;
        return d;
      },
      py::arg("coeffs"), py::arg("seq"), py::arg("kind"), py::arg("theta_grid"),
      py::arg("p_cap") = 10000);
  m.def("parseval_pair", &spaces::parseval_pair, py::arg("dual"), py::arg("test"));
  m.def(
      "seminorm_estimate",
      [](const CoefficientField& a, double mm, const weights::WeightSequence& seq, int alpha_max,
         int beta_max, const std::vector<double>& grid) {
        const auto r = spaces::seminorm_estimate(a, mm, seq, alpha_max, beta_max, grid);
        return py::make_tuple(r.value, r.alpha_star, r.beta_star);
      },
      py::arg("coeffs"), py::arg("m"), py::arg("seq"), py::arg("alpha_max"), py::arg("beta_max"),
      py::arg("grid"));

  // ---------------------------------------------------------- structural
  m.def(
      "divisor",
      [](const weights::WeightSequence& seq, double mu, long nu) {
        const auto d = structural::divisor_total(seq, mu, nu);
        return py::make_tuple(d.value(), d.terms_used, d.tail_flag);
      },
      py::arg("seq"), py::arg("mu"), py::arg("nu"), "Returns (value, terms_used, tail_flag).");
  m.def("regularize", &structural::regularize, py::arg("dual"), py::arg("seq"), py::arg("mu"));
  m.def(
      "verify_bound",
      [](const CoefficientField& a, int up_to) {
        const auto t = structural::verify_bound(a, up_to);
        return py::make_tuple(t.sup_value, py::array_t<double>(py::cast(t.s)));
      },
      py::arg("coeffs"), py::arg("up_to"));
  m.def(
      "oscillator_series_pair",
      [](const CoefficientField& a, const weights::WeightSequence& seq, double mu,
         const CoefficientField& phi, long beta_max) {
        const auto r = structural::oscillator_series_pair(a, seq, mu, phi, beta_max);
        return py::make_tuple(r.value, r.tail_estimate, r.beta_used);
      },
      py::arg("f"), py::arg("seq"), py::arg("mu"), py::arg("test"), py::arg("beta_max") = 300,
      "Returns (value, tail_estimate, beta_used).");

  // -------------------------------------------------------------- kernel
  py::class_<kernel::KernelCoefficients>(m, "KernelCoefficients")
      .def(py::init([](const std::vector<int>& out_box, const std::vector<int>& in_box,
                       py::array_t<cplx, py::array::c_style | py::array::forcecast> data) {
             kernel::KernelCoefficients t(box_from_list(out_box), box_from_list(in_box));
             if (static_cast<std::size_t>(data.size()) != t.data.size())
               throw std::invalid_argument("data length does not match boxes");
             std::copy(data.data(), data.data() + data.size(), t.data.begin());
             return t;
           }),
           py::arg("out_box"), py::arg("in_box"), py::arg("data"))
      .def_property_readonly("out_box",
                             [](const kernel::KernelCoefficients& t) { return box_to_list(t.out_box); })
      .def_property_readonly("in_box",
                             [](const kernel::KernelCoefficients& t) { return box_to_list(t.in_box); })
      .def_property_readonly("data", [](const kernel::KernelCoefficients& t) {
        py::array_t<cplx> arr({t.out_box.size(), t.in_box.size()});
        std::copy(t.data.begin(), t.data.end(), arr.mutable_data());
        return arr;
      });

  m.def(
      "kernel_from_bilinear",
      [](const std::function<cplx(const CoefficientField&, const CoefficientField&)>& B,
         const std::vector<int>& out_box, const std::vector<int>& in_box) {
        // python evaluators hold the GIL: run rows serially
        return kernel::kernel_from_bilinear(B, box_from_list(out_box), box_from_list(in_box),
                                            /*parallel_safe=*/false);
      },
      py::arg("B"), py::arg("out_box"), py::arg("in_box"));
  m.def("apply_operator", &kernel::apply_operator, py::arg("kernel"), py::arg("coeffs"));
  m.def("tensor", &kernel::tensor, py::arg("a"), py::arg("b"));
  m.def("pair_kernel", &kernel::pair_kernel, py::arg("kernel"), py::arg("coeffs"));
  m.def("verify_kernel_identity", &kernel::verify_kernel_identity, py::arg("kernel"),
        py::arg("phi"), py::arg("psi"));
  m.def(
      "kernel_growth_check",
      [](const kernel::KernelCoefficients& t, const weights::WeightSequence& seq,
         const std::vector<double>& theta, const std::vector<double>& nu, long p_cap) {
        weights::AssociatedFunctionTable table(seq, {p_cap, weights::ScanMode::unimodal});
        const auto r = kernel::kernel_growth_check(t, table, theta, nu);
        return py::make_tuple(r.passes, r.constant);
      },
      py::arg("kernel"), py::arg("seq"), py::arg("theta"), py::arg("nu"), py::arg("p_cap") = 10000);
  m.def("kernel_uniqueness_probe", &kernel::kernel_uniqueness_probe, py::arg("kernel"));
  m.def("identity_kernel",
        [](const std::vector<int>& box) { return kernel::identity_kernel(box_from_list(box)); });
  m.def("fourier_kernel",
        [](const std::vector<int>& box) { return kernel::fourier_kernel(box_from_list(box)); });
  m.def(
      "heat_kernel",
      [](const std::vector<int>& box, double tau) {
        return kernel::heat_kernel(box_from_list(box), tau);
      },
      py::arg("box"), py::arg("tau"));
  m.def("rank_one_kernel", &kernel::rank_one_kernel, py::arg("a"), py::arg("b"));
}
