#include "shiftdim/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "shiftdim/errors.hpp"
#include "shiftdim/info.hpp"
#include "shiftdim/io.hpp"
#include "shiftdim/lattice.hpp"
#include "shiftdim/measure.hpp"
#include "shiftdim/metrics.hpp"
#include "shiftdim/rate_distortion.hpp"
#include "shiftdim/subshift.hpp"
#include "shiftdim/verify.hpp"

namespace shiftdim::cli {

namespace {

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
  auto bad = [&] { return InvalidArgument(flag + " expects integers like '2,3,4' or '2..6', got '" + text + "'"); };
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used != s.size()) throw bad();
      return v;
    } catch (const std::logic_error&) {
      throw bad();
    }
  };
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = to_int(text.substr(0, dots)), hi = to_int(text.substr(dots + 2));
    if (lo > hi) throw bad();
    for (int m = lo; m <= hi; ++m) out.push_back(m);
    return out;
  }
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(to_int(item));
  if (out.empty()) throw bad();
  return out;
}

ActionSpec parse_action(const std::string& text) {
  const auto v = parse_int_list(text, "--action");
  if (v.size() != 2) throw InvalidArgument("--action expects 'a,b'");
  return {v[0], v[1]};
}

Norm parse_norm(const std::string& text) {
  if (text == "linf") return Norm::Linf;
  if (text == "l2") return Norm::L2;
  throw InvalidArgument("--norm must be 'linf' or 'l2'");
}

Json big_json(const BigInt& count) {
  Json j{{"decimal", to_decimal(count)}};
  j["log2"] = count > 0 ? Json(log2_big(count)) : Json(nullptr);
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << content;
  if (!f) throw Error("failed writing '" + path + "'");
}

std::string csv_dimension(const std::string& series, const DimensionEstimate& est) {
  std::ostringstream out;
  out.precision(17);
  for (const SchedulePoint& p : est.schedule) out << series << ',' << p.M << ',' << p.N << ',' << p.value << '\n';
  return out.str();
}

// Flags shared by the subcommands; each subcommand registers what it uses.
struct Options {
  std::string sft_path, measure_path, rects_path, out_path, csv_path;
  std::string action = "1,0", m_schedule, rect, norm = "linf", mode = "transfer";
  double alpha = 2.0, tolerance = 0.05;
  std::optional<double> eps, delta;
  int n_factor = 16, a = 1, b = 0, M = 1, N = 1, length = 0, nmax = 4, mmax = 64, mcap = 0;
  bool strict = false;
};

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropy, dimension and rate-distortion estimators for Z and Z^2 subshifts", "shiftdim"};
  app.require_subcommand(1);
  Options o;

  auto add_sft = [&](CLI::App* s) { s->add_option("--sft", o.sft_path, "SFT file")->required()->check(CLI::ExistingFile); };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", o.out_path, "also write the JSON report here"); };
  auto add_csv = [&](CLI::App* s) { s->add_option("--csv", o.csv_path, "write the per-scale table as CSV"); };
  auto add_metric = [&](CLI::App* s) {
    s->add_option("--alpha", o.alpha, "metric base alpha > 1")->capture_default_str();
    s->add_option("--action", o.action, "acting generator a,b")->capture_default_str();
    s->add_option("--norm", o.norm, "linf | l2")->capture_default_str();
  };
  auto add_schedule = [&](CLI::App* s) {
    s->add_option("--M-schedule", o.m_schedule, "resolution indices, '2,3,4' or '2..6'");
    s->add_option("--N-factor", o.n_factor, "N2 = factor * M, N1 = N2 / 2")->capture_default_str();
  };

  auto* count = app.add_subcommand("count", "count locally admissible patterns on a support");
  add_sft(count);
  count->add_option("--rect", o.rect, "support [a,b]x[c,d] as a,b,c,d");
  count->add_option("--length", o.length, "1D support [0, length-1]");
  add_out(count);

  auto* entropy = app.add_subcommand("entropy", "topological entropy");
  add_sft(entropy);
  entropy->add_option("--mode", o.mode, "transfer | box")->capture_default_str();
  entropy->add_option("--Nmax", o.nmax, "largest box side for --mode box")->capture_default_str();
  add_out(entropy);

  auto* covering = app.add_subcommand("covering", "covering number #(X, d_N, eps)");
  add_sft(covering);
  add_metric(covering);
  covering->add_option("--eps", o.eps, "scale eps")->required();
  covering->add_option("--N", o.N, "number of iterates")->capture_default_str();
  add_out(covering);

  auto* mmdim = app.add_subcommand("mmdim", "metric mean dimension estimate");
  add_sft(mmdim);
  add_metric(mmdim);
  add_schedule(mmdim);
  add_out(mmdim);
  add_csv(mmdim);

  auto* mhdim = app.add_subcommand("mhdim", "mean Hausdorff dimension bounds");
  add_sft(mhdim);
  mhdim->add_option("--measure", o.measure_path, "measure file for the lower bound")->check(CLI::ExistingFile);
  add_metric(mhdim);
  add_schedule(mhdim);
  add_out(mhdim);
  add_csv(mhdim);

  auto* rdim = app.add_subcommand("rdim", "rate-distortion dimension bounds");
  rdim->add_option("--measure", o.measure_path, "measure file")->required()->check(CLI::ExistingFile);
  rdim->add_option("--alpha", o.alpha, "metric base alpha > 1")->capture_default_str();
  rdim->add_option("--eps", o.eps, "also report the bounds at this scale");
  rdim->add_option("--delta", o.delta, "distortion slack for --eps (default 1/log2(1/eps), at most 1/4)");
  add_out(rdim);
  add_csv(rdim);

  auto* lambda = app.add_subcommand("lambda-density", "|Lambda_{a,b}(M,N)| / (M N)");
  lambda->add_option("--a", o.a)->required();
  lambda->add_option("--b", o.b)->required();
  lambda->add_option("--M", o.M)->required();
  lambda->add_option("--N", o.N)->required();
  add_out(lambda);

  auto* cover = app.add_subcommand("cover-demo", "greedy disjoint subfamily of a rectangle family");
  cover->add_option("--rects", o.rects_path, "file with one a,b,c,d per line")->required()->check(CLI::ExistingFile);
  add_out(cover);

  auto* tame = app.add_subcommand("tame-check", "eps^delta log #(X, d, eps) along eps_M = alpha^-(M-1)");
  add_sft(tame);
  tame->add_option("--alpha", o.alpha)->capture_default_str();
  tame->add_option("--delta", o.delta, "exponent delta > 0")->required();
  tame->add_option("--Mmax", o.mmax)->capture_default_str();
  add_out(tame);
  add_csv(tame);

  auto* verify = app.add_subcommand("verify-theorem", "compare dimension and entropy sides");
  add_sft(verify);
  verify->add_option("--measure", o.measure_path, "invariant measure for the rdim side")->check(CLI::ExistingFile);
  verify->add_option("--alpha", o.alpha)->capture_default_str();
  add_schedule(verify);
  verify->add_option("--tolerance", o.tolerance)->capture_default_str();
  verify->add_flag("--strict", o.strict, "refuse a verdict for uncertified systems");
  add_out(verify);
  add_csv(verify);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << " (run with --help for usage)\n";
    return kExitError;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    Json report;
    report["schema"] = kReportSchema;
    std::string csv;
    int code = kExitOk;
    const MetricSpec metric{o.alpha, parse_norm(o.norm)};
    auto schedule = [&](bool one_d) {
      if (!o.m_schedule.empty()) {
        auto ms = parse_int_list(o.m_schedule, "--M-schedule");
        if (ms.size() < 3) throw InvalidArgument("--M-schedule needs at least three values");
        return ms;
      }
      std::vector<int> ms;
      for (int m = one_d ? 4 : 2; m <= (one_d ? 20 : 6); ++m) ms.push_back(m);
      return ms;
    };

    if (count->parsed()) {
      const SftSpec sft = read_sft_file(o.sft_path);
      if (o.rect.empty() == (o.length == 0)) throw InvalidArgument("give exactly one of --rect or --length");
      LatticeSet support;
      if (!o.rect.empty()) {
        const auto r = parse_int_list(o.rect, "--rect");
        if (r.size() != 4) throw InvalidArgument("--rect expects a,b,c,d");
        support = LatticeSet::from_rect(IntRect(r[0], r[1], r[2], r[3]));
      } else {
        support = LatticeSet::from_rect(IntRect(0, o.length - 1, 0, 0));
      }
      report["command"] = "count";
      report["cells"] = support.size();
      report["count"] = big_json(count_locally_admissible(sft, support));
    } else if (entropy->parsed()) {
      const SftSpec sft = read_sft_file(o.sft_path);
      report["command"] = "entropy";
      report["mode"] = o.mode;
      if (o.mode == "transfer") {
        const SftSpec base = sft.dimension() == 1 ? sft : row_base(sft);
        report["applied_to"] = sft.dimension() == 1 ? "shift" : "row constraint";
        report["h_top"] = transfer_matrix_entropy_1d(base);
      } else if (o.mode == "box") {
        Json rows = Json::array();
        double best = INFINITY;
        for (const auto& p : box_entropy_estimate(sft, o.nmax)) {
          rows.push_back({{"N", p.N}, {"count", big_json(p.count)}, {"value", p.value}});
          best = std::min(best, p.value);
        }
        report["boxes"] = std::move(rows);
        report["h_top_upper"] = best;
      } else {
        throw InvalidArgument("--mode must be 'transfer' or 'box'");
      }
    } else if (covering->parsed()) {
      const SftSpec sft = read_sft_file(o.sft_path);
      const ActionSpec action = parse_action(o.action);
      const LatticeSet w = determining_window(sft, metric, action, o.N, Scale::from_epsilon(*o.eps));
      report["command"] = "covering";
      report["inputs"] = {{"alpha", o.alpha}, {"norm", o.norm}, {"action", {action.a, action.b}}, {"N", o.N}, {"eps", *o.eps}};
      report["M"] = *o.eps > 1.0 ? Json(nullptr) : Json(resolution_index(metric, *o.eps).M);
      report["window_cells"] = w.size();
      report["covering_number"] = big_json(covering_number(sft, metric, action, o.N, *o.eps));
    } else if (mmdim->parsed() || mhdim->parsed()) {
      const SftSpec sft = read_sft_file(o.sft_path);
      const ActionSpec action = parse_action(o.action);
      const auto ms = schedule(sft.dimension() == 1);
      const auto table = resolution_table(sft, metric, action, ms, o.n_factor);
      report["command"] = mmdim->parsed() ? "mmdim" : "mhdim";
      report["inputs"] = {{"alpha", o.alpha}, {"norm", o.norm}, {"action", {action.a, action.b}},
                          {"M_schedule", ms}, {"N_factor", o.n_factor}};
      Json rows = Json::array();
      std::ostringstream c;
      c.precision(17);
      c << "M,N1,N2,log2_count_N1,log2_count_N2,rate\n";
      for (const ResolutionRow& r : table) {
        rows.push_back({{"M", r.M}, {"N1", r.N1}, {"N2", r.N2}, {"log2_count_N1", r.log2_count_n1},
                        {"log2_count_N2", r.log2_count_n2}, {"rate", r.rate}});
        c << r.M << ',' << r.N1 << ',' << r.N2 << ',' << r.log2_count_n1 << ',' << r.log2_count_n2 << ',' << r.rate << '\n';
      }
      report["table"] = std::move(rows);
      std::ostringstream series;
      series.precision(17);
      series << "series,M,N,value\n";
      if (mmdim->parsed()) {
        DimensionEstimate est = mmdim_from_table(metric, table);
        if (sft.certificate() != FixtureFamily::None) est.kind = BoundKind::Exact;
        report["mmdim"] = to_json(est);
        series << csv_dimension("mmdim", est);
      } else {
        const DimensionEstimate up = mhdim_upper_from_table(metric, table);
        report["upper"] = to_json(up);
        series << csv_dimension("mhdim_upper", up);
        if (!o.measure_path.empty()) {
          const MeasureSpec measure = read_measure_file(o.measure_path);
          const DimensionEstimate lo = mhdim_lower_from_measure(sft, measure, metric, action, ms, o.n_factor);
          report["lower"] = to_json(lo);
          series << csv_dimension("mhdim_lower", lo);
        } else {
          report["lower"] = nullptr;
        }
      }
      csv = c.str() + "\n" + series.str();
    } else if (rdim->parsed()) {
      const MeasureSpec measure = read_measure_file(o.measure_path);
      const auto sched = default_rdim_schedule(o.alpha);
      const RdimBounds rb = rdim_bounds(measure, o.alpha, sched);
      report["command"] = "rdim";
      report["inputs"] = {{"alpha", o.alpha}};
      report["h_mu"] = ks_entropy(measure);
      report["target"] = 2.0 * ks_entropy(measure) / std::log2(o.alpha);
      Json rows = Json::array();
      std::ostringstream c;
      c.precision(17);
      c << "log2_inv_eps,delta,M_lower,lower,M_upper,upper\n";
      for (std::size_t i = 0; i < sched.size(); ++i) {
        rows.push_back({{"log2_inv_eps", sched[i].epsilon.log2_inverse()}, {"delta", sched[i].delta},
                        {"lower", rb.lower.schedule[i].value}, {"upper", rb.upper.schedule[i].value}});
        c << sched[i].epsilon.log2_inverse() << ',' << sched[i].delta << ',' << rb.lower.schedule[i].M << ','
          << rb.lower.schedule[i].value << ',' << rb.upper.schedule[i].M << ',' << rb.upper.schedule[i].value << '\n';
      }
      report["table"] = std::move(rows);
      report["lower"] = to_json(rb.lower);
      report["upper"] = to_json(rb.upper);
      if (o.eps) {
        const Scale eps = Scale::from_epsilon(*o.eps);
        const double delta = o.delta ? *o.delta : std::min(0.25, 1.0 / eps.log2_inverse());
        const RdLowerBound lb = rd_lower_bound(measure, o.alpha, eps, delta);
        const int m_up = resolution_index(o.alpha, eps).M;
        report["at_eps"] = {{"eps", *o.eps}, {"delta", delta}, {"lower_M", lb.M}, {"lower_raw", lb.raw},
                            {"lower", lb.value}, {"upper_M", m_up}, {"upper", rd_upper_rate(measure, m_up)}};
      }
      csv = c.str();
    } else if (lambda->parsed()) {
      report["command"] = "lambda-density";
      report["inputs"] = {{"a", o.a}, {"b", o.b}, {"M", o.M}, {"N", o.N}};
      const double density = lambda_density(o.a, o.b, o.M, o.N);
      const double target = 2.0 * (std::abs(o.a) + std::abs(o.b));
      report["cardinality"] = lambda_cardinality(o.a, o.b, o.M, o.N);
      report["density"] = density;
      report["limit"] = target;
      report["relative_error"] = std::abs(density - target) / target;
    } else if (cover->parsed()) {
      const auto rects = read_rects_file(o.rects_path);
      const auto chosen = greedy_disjoint_subcover(rects);
      std::vector<Point> all, sel;
      for (const IntRect& r : rects)
        for (const Point& p : LatticeSet::from_rect(r)) all.push_back(p);
      bool covered = true;
      for (const IntRect& r : rects)
        covered = covered && std::any_of(chosen.begin(), chosen.end(),
                                         [&](std::size_t i) { return rect_triple(rects[i]).contains(r); });
      for (std::size_t i : chosen)
        for (const Point& p : LatticeSet::from_rect(rects[i])) sel.push_back(p);
      const std::size_t union_all = LatticeSet(all).size(), union_sel = LatticeSet(sel).size();
      report["command"] = "cover-demo";
      report["rectangles"] = rects.size();
      Json picked = Json::array();
      for (std::size_t i : chosen)
        picked.push_back({{"index", i}, {"rect", {rects[i].a(), rects[i].b(), rects[i].c(), rects[i].d()}}});
      report["selected"] = std::move(picked);
      report["union_cells"] = union_all;
      report["selected_cells"] = union_sel;
      report["triple_cover"] = covered;
      report["mass_ratio"] = union_all ? static_cast<double>(union_sel) / static_cast<double>(union_all) : 1.0;
    } else if (tame->parsed()) {
      const SftSpec sft = read_sft_file(o.sft_path);
      const TameGrowthResult r = tame_growth_check(sft, MetricSpec{o.alpha, Norm::Linf}, *o.delta, o.mmax);
      report["command"] = "tame-check";
      report["inputs"] = {{"alpha", o.alpha}, {"delta", *o.delta}, {"Mmax", o.mmax}};
      Json rows = Json::array();
      std::ostringstream c;
      c.precision(17);
      c << "M,value\n";
      for (const auto& [M, v] : r.values) {
        rows.push_back({{"M", M}, {"value", v}});
        c << M << ',' << v << '\n';
      }
      report["values"] = std::move(rows);
      report["nonincreasing_from"] = r.nonincreasing_from;
      report["verdict"] = r.consistent ? "consistent" : "inconclusive";
      csv = c.str();
    } else if (verify->parsed()) {
      const SftSpec sft = read_sft_file(o.sft_path);
      std::optional<MeasureSpec> measure;
      if (!o.measure_path.empty()) measure = read_measure_file(o.measure_path);
      VerifyOptions vo;
      vo.alpha = o.alpha;
      if (!o.m_schedule.empty()) vo.m_schedule = parse_int_list(o.m_schedule, "--M-schedule");
      vo.n_factor = o.n_factor;
      vo.tolerance = o.tolerance;
      vo.strict = o.strict;
      VerifyResult result = verify_theorem(sft, measure ? &*measure : nullptr, vo);
      report = std::move(result.report);
      if (result.verdict == Verdict::Fail) code = kExitVerificationFailed;
      std::ostringstream c;
      c.precision(17);
      c << "M,N1,N2,log2_count_N1,log2_count_N2,rate\n";
      for (const auto& r : report["table"])
        c << r["M"].get<int>() << ',' << r["N1"].get<int>() << ',' << r["N2"].get<int>() << ','
          << r["log2_count_N1"].get<double>() << ',' << r["log2_count_N2"].get<double>() << ','
          << r["rate"].get<double>() << '\n';
      csv = c.str();
    }

    report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string text = report.dump(2) + "\n";
    out << text;
    if (!o.out_path.empty()) write_file(o.out_path, text);
    if (!o.csv_path.empty()) write_file(o.csv_path, csv);
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::span<const std::string>(args), out, err);
}

}  // namespace shiftdim::cli
