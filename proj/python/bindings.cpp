#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shiftdim/info.hpp"
#include "shiftdim/io.hpp"
#include "shiftdim/metrics.hpp"
#include "shiftdim/rate_distortion.hpp"
#include "shiftdim/verify.hpp"

namespace py = pybind11;
using namespace shiftdim;

namespace {

using Rect = std::tuple<int, int, int, int>;

py::int_ to_py(const BigInt& value) { return py::int_(py::str(to_decimal(value))); }

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Norm norm_of(const std::string& text) {
  if (text == "linf") return Norm::Linf;
  if (text == "l2") return Norm::L2;
  throw InvalidArgument("norm must be 'linf' or 'l2'");
}

ActionSpec action_of(std::pair<int, int> a) { return {a.first, a.second}; }

LatticeSet support_of(const std::optional<Rect>& rect, const std::optional<std::vector<std::pair<int, int>>>& points) {
  if (rect.has_value() == points.has_value()) throw InvalidArgument("give exactly one of rect or points");
  if (rect) {
    const auto [a, b, c, d] = *rect;
    return LatticeSet::from_rect(IntRect(a, b, c, d));
  }
  std::vector<Point> pts;
  for (const auto& [m, n] : *points) pts.push_back({m, n});
  return LatticeSet(pts);
}

std::vector<int> schedule_or_default(const SftSpec& sft, std::optional<std::vector<int>> ms) {
  if (ms) return *ms;
  std::vector<int> out;
  for (int m = sft.dimension() == 1 ? 4 : 2; m <= (sft.dimension() == 1 ? 20 : 6); ++m) out.push_back(m);
  return out;
}

RdProblem problem_of(const std::vector<double>& source, const Eigen::MatrixXd& distortion) {
  if (static_cast<std::size_t>(distortion.rows()) != source.size())
    throw InvalidArgument("distortion needs one row per source symbol");
  RdProblem p{FiniteDistribution(source), static_cast<std::size_t>(distortion.cols()), {}};
  for (Eigen::Index i = 0; i < distortion.rows(); ++i)
    for (Eigen::Index j = 0; j < distortion.cols(); ++j) p.distortion.push_back(distortion(i, j));
  return p;
}

py::dict rd_point_dict(const RdPoint& p) {
  py::dict d;
  d["rate"] = p.rate;
  d["distortion"] = p.distortion;
  d["slope"] = p.slope;
  d["iterations"] = p.iterations;
  d["gap"] = p.gap;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Entropy, dimension and rate-distortion estimators for Z and Z^2 subshifts.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  py::class_<SftSpec>(m, "SftSpec")
      .def_property_readonly("dimension", &SftSpec::dimension)
      .def_property_readonly("alphabet",
                             [](const SftSpec& s) {
                               auto t = s.alphabet().tokens();
                               return std::vector<std::string>(t.begin(), t.end());
                             })
      .def_property_readonly("forbidden_count", [](const SftSpec& s) { return s.forbidden().size(); })
      .def_property_readonly("certificate", [](const SftSpec& s) { return to_string(s.certificate()); })
      .def("__eq__", [](const SftSpec& a, const SftSpec& b) { return a == b; })
      .def("__repr__", [](const SftSpec& s) { return "<SftSpec\n" + write_sft(s) + ">"; });

  py::class_<MeasureSpec>(m, "MeasureSpec")
      .def_property_readonly("kind",
                             [](const MeasureSpec& mu) {
                               return mu.kind() == MeasureSpec::Kind::Bernoulli ? "bernoulli" : "markov-row";
                             })
      .def_property_readonly("marginal", &MeasureSpec::marginal)
      .def_property_readonly("transition", &MeasureSpec::transition)
      .def("__repr__", [](const MeasureSpec& mu) { return "<MeasureSpec\n" + write_measure(mu) + ">"; });

  m.def("full_shift", &full_shift, py::arg("dimension"), py::arg("alphabet_size"));
  m.def("golden_mean_1d", &golden_mean_1d);
  m.def("three_dot", &three_dot);
  m.def("row_lift", &row_lift, py::arg("base"));
  m.def("parse_sft", [](const std::string& text) { return parse_sft(text); }, py::arg("text"));
  m.def("read_sft", [](const std::string& path) { return read_sft_file(path); }, py::arg("path"));
  m.def("write_sft", &write_sft, py::arg("sft"));

  m.def("bernoulli", &MeasureSpec::bernoulli, py::arg("weights"));
  m.def("markov_row", [](const Eigen::MatrixXd& p) { return MeasureSpec::markov_row(p); }, py::arg("transition"));
  m.def("parry_measure", &parry_measure, py::arg("sft"));
  m.def("parse_measure", [](const std::string& text) { return parse_measure(text); }, py::arg("text"));
  m.def("read_measure", [](const std::string& path) { return read_measure_file(path); }, py::arg("path"));
  m.def("write_measure", &write_measure, py::arg("measure"));

  m.def(
      "count",
      [](const SftSpec& sft, std::optional<Rect> rect, std::optional<std::vector<std::pair<int, int>>> points) {
        const LatticeSet support = support_of(rect, points);
        py::gil_scoped_release release;
        const BigInt c = count_locally_admissible(sft, support);
        py::gil_scoped_acquire acquire;
        return to_py(c);
      },
      py::arg("sft"), py::kw_only(), py::arg("rect") = py::none(), py::arg("points") = py::none(),
      "Number of locally admissible patterns on a rectangle (a, b, c, d) or a list of (m, n) points.");
  m.def("transfer_entropy", [](const SftSpec& sft) { return transfer_matrix_entropy_1d(sft); }, py::arg("sft"));
  m.def(
      "box_entropy",
      [](const SftSpec& sft, int nmax) {
        py::list out;
        for (const BoxEntropyPoint& p : box_entropy_estimate(sft, nmax)) out.append(py::make_tuple(p.N, to_py(p.count), p.value));
        return out;
      },
      py::arg("sft"), py::arg("nmax"));

  m.def("resolution_index", [](double alpha, double eps) { return resolution_index(MetricSpec{alpha, Norm::Linf}, eps).M; },
        py::arg("alpha"), py::arg("eps"));
  m.def(
      "covering_number",
      [](const SftSpec& sft, double eps, int n, double alpha, std::pair<int, int> action, const std::string& norm) {
        return to_py(covering_number(sft, {alpha, norm_of(norm)}, action_of(action), n, eps));
      },
      py::arg("sft"), py::arg("eps"), py::arg("N") = 1, py::arg("alpha") = 2.0, py::arg("action") = std::pair{1, 0},
      py::arg("norm") = "linf");
  m.def(
      "mmdim",
      [](const SftSpec& sft, double alpha, std::optional<std::vector<int>> ms, int n_factor, std::pair<int, int> action) {
        return to_py(to_json(mmdim_estimate(sft, {alpha, Norm::Linf}, action_of(action), schedule_or_default(sft, ms), n_factor)));
      },
      py::arg("sft"), py::arg("alpha") = 2.0, py::arg("m_schedule") = py::none(), py::arg("n_factor") = 16,
      py::arg("action") = std::pair{1, 0});
  m.def(
      "mhdim",
      [](const SftSpec& sft, const MeasureSpec* measure, double alpha, std::optional<std::vector<int>> ms, int n_factor) {
        const auto b = mhdim_bounds(sft, measure, {alpha, Norm::Linf}, {}, schedule_or_default(sft, ms), n_factor);
        py::dict d;
        d["upper"] = to_py(to_json(b.upper));
        d["lower"] = b.lower ? to_py(to_json(*b.lower)) : py::none();
        return d;
      },
      py::arg("sft"), py::arg("measure") = nullptr, py::arg("alpha") = 2.0, py::arg("m_schedule") = py::none(),
      py::arg("n_factor") = 16);
  m.def(
      "rdim",
      [](const MeasureSpec& measure, double alpha) {
        const auto b = rdim_bounds(measure, alpha, default_rdim_schedule(alpha));
        py::dict d;
        d["lower"] = to_py(to_json(b.lower));
        d["upper"] = to_py(to_json(b.upper));
        return d;
      },
      py::arg("measure"), py::arg("alpha") = 2.0);
  m.def(
      "tame_growth",
      [](const SftSpec& sft, double delta, int mmax, double alpha) {
        const TameGrowthResult r = tame_growth_check(sft, {alpha, Norm::Linf}, delta, mmax);
        py::dict d;
        d["values"] = r.values;
        d["nonincreasing_from"] = r.nonincreasing_from;
        d["consistent"] = r.consistent;
        return d;
      },
      py::arg("sft"), py::arg("delta"), py::arg("mmax") = 64, py::arg("alpha") = 2.0);

  m.def("lambda_cardinality", &lambda_cardinality, py::arg("a"), py::arg("b"), py::arg("M"), py::arg("N"));
  m.def("lambda_density", &lambda_density, py::arg("a"), py::arg("b"), py::arg("M"), py::arg("N"));
  m.def(
      "greedy_disjoint_subcover",
      [](const std::vector<Rect>& rects) {
        std::vector<IntRect> rs;
        for (const auto& [a, b, c, d] : rects) rs.emplace_back(a, b, c, d);
        return greedy_disjoint_subcover(rs);
      },
      py::arg("rects"));

  m.def("shannon_entropy", [](const std::vector<double>& p) { return shannon_entropy(FiniteDistribution(p)); }, py::arg("p"));
  m.def("binary_entropy", &binary_entropy, py::arg("delta"));
  m.def(
      "mutual_information",
      [](const Eigen::MatrixXd& joint) {
        std::vector<double> mass;
        for (Eigen::Index i = 0; i < joint.rows(); ++i)
          for (Eigen::Index j = 0; j < joint.cols(); ++j) mass.push_back(joint(i, j));
        return mutual_information(JointDistribution(static_cast<std::size_t>(joint.rows()), static_cast<std::size_t>(joint.cols()), mass));
      },
      py::arg("joint"));
  m.def("ks_entropy", &ks_entropy, py::arg("measure"));
  m.def("mi_lower_bound_lemma", &mi_lower_bound_lemma, py::arg("hx"), py::arg("N"), py::arg("delta"), py::arg("b_size"));

  m.def(
      "blahut_arimoto",
      [](const std::vector<double>& source, const Eigen::MatrixXd& distortion, double slope, double tol) {
        return rd_point_dict(blahut_arimoto(problem_of(source, distortion), slope, tol));
      },
      py::arg("source"), py::arg("distortion"), py::arg("slope"), py::arg("tol") = 1e-10);
  m.def(
      "rd_point_at_distortion",
      [](const std::vector<double>& source, const Eigen::MatrixXd& distortion, double target) {
        return rd_point_dict(rd_point_at_distortion(problem_of(source, distortion), target));
      },
      py::arg("source"), py::arg("distortion"), py::arg("target"));
  m.def("rd_upper_bound", &rd_upper_bound, py::arg("measure"), py::arg("alpha"), py::arg("M"), py::arg("N"));
  m.def(
      "rd_lower_bound",
      [](const MeasureSpec& mu, double alpha, double eps, double delta) { return rd_lower_bound(mu, alpha, eps, delta); },
      py::arg("measure"), py::arg("alpha"), py::arg("eps"), py::arg("delta"));

  m.def(
      "verify_theorem",
      [](const SftSpec& sft, const MeasureSpec* measure, double alpha, double tolerance, std::optional<std::vector<int>> ms,
         int n_factor, bool strict) {
        VerifyOptions o;
        o.alpha = alpha;
        o.tolerance = tolerance;
        o.n_factor = n_factor;
        o.strict = strict;
        if (ms) o.m_schedule = *ms;
        return to_py(verify_theorem(sft, measure, o).report);
      },
      py::arg("sft"), py::arg("measure") = nullptr, py::arg("alpha") = 2.0, py::arg("tolerance") = 0.05,
      py::arg("m_schedule") = py::none(), py::arg("n_factor") = 16, py::arg("strict") = false,
      "Full verification report as a dict; report['verdict'] is PASS, FAIL or BOUNDS-ONLY.");
}
