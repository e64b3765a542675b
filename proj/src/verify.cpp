#include "shiftdim/verify.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "shiftdim/info.hpp"
#include "shiftdim/rate_distortion.hpp"

namespace shiftdim {

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::BoundsOnly: return "BOUNDS-ONLY";
  }
  return "BOUNDS-ONLY";
}

Json to_json(const DimensionEstimate& estimate) {
  Json schedule = Json::array();
  for (const SchedulePoint& p : estimate.schedule) {
    Json row{{"M", p.M}};
    if (p.N > 0) row["N"] = p.N;
    row["value"] = p.value;
    schedule.push_back(std::move(row));
  }
  return Json{{"value", estimate.value},
              {"kind", to_string(estimate.kind)},
              {"extrapolation",
               {{"model", estimate.extrapolation.model},
                {"limit", estimate.extrapolation.limit},
                {"coefficient", estimate.extrapolation.coefficient}}},
              {"schedule", std::move(schedule)}};
}

namespace {

struct Check {
  std::string name;
  double value;
  double target;
  std::string relation;  // "within" or "at-most"
  bool ok;
};

Check within(std::string name, double value, double target, double tol) {
  return {std::move(name), value, target, "within", std::abs(value - target) <= tol};
}

Check at_most(std::string name, double value, double target, double tol) {
  return {std::move(name), value, target, "at-most", value <= target + tol};
}

Json table_json(std::span<const ResolutionRow> table) {
  Json rows = Json::array();
  for (const ResolutionRow& r : table)
    rows.push_back({{"M", r.M},
                    {"N1", r.N1},
                    {"N2", r.N2},
                    {"log2_count_N1", r.log2_count_n1},
                    {"log2_count_N2", r.log2_count_n2},
                    {"rate", r.rate}});
  return rows;
}

DimensionEstimate trivial_lower(std::span<const int> ms) {
  DimensionEstimate est;
  est.kind = BoundKind::Lower;
  for (int M : ms) est.schedule.push_back({M, 0, 0.0});
  est.extrapolation = {"trivial", 0.0, 0.0};
  return est;
}

}  // namespace

VerifyResult verify_theorem(const SftSpec& sft, const MeasureSpec* measure, const VerifyOptions& options) {
  if (!(options.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (!(options.alpha > 1.0)) throw InvalidArgument("alpha must be > 1");
  const bool one_d = sft.dimension() == 1;
  std::vector<int> ms = options.m_schedule;
  if (ms.empty()) {
    ms.resize(one_d ? 17 : 5);
    std::iota(ms.begin(), ms.end(), one_d ? 4 : 2);
  }
  if (ms.size() < 3 || ms.front() < 2) throw InvalidArgument("the M schedule needs at least three values, all >= 2");
  if (measure) check_measure_supported(*measure, sft);
  const MetricSpec metric{options.alpha, Norm::Linf};
  const ActionSpec action{};
  const double log_alpha = std::log2(options.alpha);

  Json report;
  report["schema"] = kReportSchema;
  report["command"] = "verify-theorem";
  report["inputs"] = {{"dimension", sft.dimension()},
                      {"alphabet_size", sft.alphabet().size()},
                      {"forbidden_patterns", sft.forbidden().size()},
                      {"certificate", to_string(sft.certificate())},
                      {"alpha", options.alpha},
                      {"M_schedule", ms},
                      {"N_factor", options.n_factor},
                      {"tolerance", options.tolerance},
                      {"measure", measure ? (measure->kind() == MeasureSpec::Kind::Bernoulli ? "bernoulli" : "markov-row")
                                          : "none"}};

  // Entropy side.
  bool certified = true;
  double h_top = 0.0;
  std::string h_method;
  if (one_d) {
    h_top = transfer_matrix_entropy_1d(sft);
    h_method = "transfer-matrix";
  } else {
    switch (sft.certificate()) {
      case FixtureFamily::Full:
        h_top = std::log2(static_cast<double>(sft.alphabet().size()));
        h_method = "closed-form";
        break;
      case FixtureFamily::RowLift:
        h_top = transfer_matrix_entropy_1d(row_base(sft));
        h_method = "transfer-matrix of the row constraint";
        break;
      case FixtureFamily::ThreeDot:
        h_top = 0.0;
        h_method = "closed-form (box counts 2^(2N-1))";
        break;
      case FixtureFamily::None: {
        if (options.strict)
          throw InvalidArgument("strict mode: the system carries no exactness certificate, refusing a verdict");
        certified = false;
        const auto boxes = box_entropy_estimate(sft, 3, options.limits);
        h_top = boxes.back().value;
        for (const auto& b : boxes) h_top = std::min(h_top, b.value);
        h_method = "box-count upper bound";
        break;
      }
    }
  }
  const double rhs = (one_d ? 1.0 : 2.0) * h_top / log_alpha;
  report["entropy"] = {{"h_top", h_top}, {"method", h_method}, {"exact", certified}};

  // Dimension side.
  const auto table = resolution_table(sft, metric, action, ms, options.n_factor, options.limits);
  DimensionEstimate mm = mmdim_from_table(metric, table);
  if (certified && (one_d || sft.certificate() != FixtureFamily::None)) mm.kind = BoundKind::Exact;
  const DimensionEstimate mh_upper = mhdim_upper_from_table(metric, table);

  std::optional<MeasureSpec> auto_measure;
  std::string lower_measure = "given";
  const MeasureSpec* lower_with = measure;
  std::optional<DimensionEstimate> mh_lower;
  if (!lower_with) {
    try {
      if (sft.certificate() == FixtureFamily::Full) {
        auto_measure = MeasureSpec::bernoulli(
            std::vector<double>(sft.alphabet().size(), 1.0 / static_cast<double>(sft.alphabet().size())));
        lower_measure = "uniform Bernoulli";
      } else if (one_d || sft.certificate() == FixtureFamily::RowLift) {
        auto_measure = parry_measure(sft);
        lower_measure = "Parry";
      }
    } catch (const InvalidArgument&) {
      auto_measure.reset();
    }
    if (auto_measure) lower_with = &*auto_measure;
  }
  if (lower_with) {
    mh_lower = mhdim_lower_from_measure(sft, *lower_with, metric, action, ms, options.n_factor);
  } else if (!one_d && sft.certificate() == FixtureFamily::ThreeDot) {
    mh_lower = trivial_lower(ms);
    lower_measure = "none (dimension is nonnegative)";
  }

  report["table"] = table_json(table);
  report["mmdim"] = to_json(mm);
  report["mhdim"] = {{"upper", to_json(mh_upper)},
                     {"lower", mh_lower ? to_json(*mh_lower) : Json()},
                     {"lower_measure", mh_lower ? lower_measure : "none"}};
  if (one_d) {
    report["mhdim"]["upper_at_depth"] = {{"M", mh_upper.schedule.back().M}, {"value", mh_upper.schedule.back().value}};
    if (mh_lower)
      report["mhdim"]["lower_at_depth"] = {{"M", mh_lower->schedule.back().M},
                                           {"value", mh_lower->schedule.back().value}};
  }

  std::vector<Check> checks;
  checks.push_back(within("mmdim", mm.value, rhs, options.tolerance));
  checks.push_back(within("mhdim_upper", mh_upper.value, rhs, options.tolerance));
  if (mh_lower) {
    const double h_lower_measure = lower_with ? ks_entropy(*lower_with) : 0.0;
    const bool max_entropy = !lower_with || std::abs(h_lower_measure - h_top) <= 1e-9;
    checks.push_back(max_entropy ? within("mhdim_lower", mh_lower->value, rhs, options.tolerance)
                                 : at_most("mhdim_lower", mh_lower->value, rhs, options.tolerance));
  }

  Json rdim = nullptr;
  if (measure && !one_d) {
    const double h_mu = ks_entropy(*measure);
    const double target = 2.0 * h_mu / log_alpha;
    const auto schedule = default_rdim_schedule(options.alpha);
    const RdimBounds rb = rdim_bounds(*measure, options.alpha, schedule);
    rdim = {{"h_mu", h_mu}, {"target", target}, {"lower", to_json(rb.lower)}, {"upper", to_json(rb.upper)}};
    checks.push_back(within("rdim_lower", rb.lower.value, target, options.tolerance));
    checks.push_back(within("rdim_upper", rb.upper.value, target, options.tolerance));
  }
  report["rdim"] = std::move(rdim);

  Json check_json = Json::array();
  bool all_ok = true;
  for (const Check& c : checks) {
    all_ok = all_ok && c.ok;
    check_json.push_back({{"name", c.name}, {"value", c.value}, {"target", c.target},
                          {"relation", c.relation}, {"ok", c.ok}});
  }
  report["theorem"] = {{"rhs", rhs},
                       {"rhs_formula", one_d ? "h_top / log2(alpha)" : "2 h_top / log2(alpha)"},
                       {"checks", std::move(check_json)}};

  VerifyResult result;
  result.verdict = !certified ? Verdict::BoundsOnly : (all_ok ? Verdict::Pass : Verdict::Fail);
  report["verdict"] = to_string(result.verdict);
  result.report = std::move(report);
  return result;
}

}  // namespace shiftdim
