// em: Euclidean minima of number fields.

#include "emin/emin.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <string>

using namespace emin;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;

json interval_json(const Interval& v) { return json::array({v.lo_d(), v.hi_d()}); }

json field_summary(const NumberField& K) {
  return {{"label", K.label()},
          {"degree", K.degree()},
          {"signature", json::array({K.r1(), K.r2()})},
          {"discriminant", K.discriminant().get_str()}};
}

struct Report {
  std::string command;
  json inputs = json::object();
  json result = json::object();
  std::string label;

  void print(double seconds) const {
    json out = {{"command", command}, {"field", label}, {"inputs", inputs}, {"result", result},
                {"version", kVersion}, {"timing", {{"seconds", seconds}}}};
    std::cout << out.dump(2) << "\n";
  }
};

FieldElement parse_f_element(const NumberField& F, const std::string& text) { return parse_point(F, text); }

json units_report(const NumberField& K) {
  UnitLattice L(K);
  json r = field_summary(K);
  json units = json::array(), logs = json::array();
  for (std::size_t j = 0; j < L.units().size(); ++j) {
    units.push_back(to_json(L.units()[j]));
    json v = json::array();
    for (const auto& w : L.log_vectors()[j]) v.push_back(w.mid());
    logs.push_back(v);
  }
  r["units"] = units;
  r["log_vectors"] = logs;
  r["rank"] = L.rank();
  r["regulator"] = L.regulator().mid();
  r["regulator_interval"] = interval_json(L.regulator());
  r["F_UK"] = L.f_uk().mid();
  r["F_UK_interval"] = interval_json(L.f_uk());
  r["rank_zero"] = L.rank_zero();
  json minima = json::array();
  for (const auto& m : L.successive_minima()) minima.push_back(m.mid());
  r["successive_minima"] = minima;
  r["torsion"] = L.torsion() ? *L.torsion() : torsion_order(K);
  return r;
}

json mk_report(const NumberField& K, const std::string& point) {
  UnitLattice L(K);
  FieldElement x = parse_point(K, point);
  MinimumResult m = m_rational(x, L);
  return {{"value", to_string(m.value)},
          {"witness", to_json(m.witness)},
          {"scanned", m.scanned},
          {"orbit_size", m.orbit_size},
          {"box_radius", m.box_radius}};
}

json search_report(const NumberField& K, const SearchOptions& opt, double C, bool& converged) {
  UnitLattice L(K);
  SearchResult s = branch_and_bound_M(L, opt);
  converged = s.converged;
  json w = json::array();
  for (const auto& x : s.witnesses) w.push_back(to_json(x));
  json per_q = json::object();
  for (const auto& [q, v] : s.sweep.per_denominator) per_q[std::to_string(q)] = to_string(v);
  return {{"lower", to_string(s.lo)},
          {"upper", s.hi},
          {"witnesses", w},
          {"converged", s.converged},
          {"Q_log3", complexity_q(L, C).e3},
          {"bayer_bound", to_string(bayer_bound(K))},
          {"sweep", {{"value", to_string(s.sweep.value)}, {"per_denominator", per_q}}},
          {"counts",
           {{"boxes_processed", s.boxes_processed},
            {"boxes_discarded", s.boxes_discarded},
            {"boxes_frozen", s.boxes_frozen},
            {"depth_reached", s.depth_reached},
            {"sweep_classes", s.sweep.classes},
            {"sweep_orbits", s.sweep.orbits}}}};
}

json bounds_report(const NumberField& K, double C, int qmax) {
  UnitLattice L(K);
  TowerBound t = complexity_q(L, C);
  json counts = json::object();
  for (int q = 1; q <= qmax; ++q) counts[std::to_string(q)] = enumeration_count_bound(L, q);
  return {{"bayer_bound", to_string(bayer_bound(K))},
          {"Q_log3", t.e3},
          {"log_Q_log3", t.log_e3},
          {"F_UK", L.f_uk().mid()},
          {"F_UK_interval", interval_json(L.f_uk())},
          {"rank_zero", L.rank_zero()},
          {"enumeration_count_bound", counts}};
}

CMData cm_from_args(const NumberField& K, const std::string& F_path, const std::string& eta) {
  Subfield sub = F_path.empty() ? rational_subfield(K) : load_subfield(F_path, K);
  if (F_path.empty() && K.degree() != 2) throw InputError("--F is required when [K:Q] > 2");
  return build_cm(K, sub, parse_point(K, eta));
}

SlopeLine line_from_args(const CMData& cm, const std::string& slope, const std::string& beta) {
  FieldElement b = parse_f_element(cm.F, beta);
  if (slope == "inf" || slope == "infinity") return SlopeLine::infinite(b);
  return {parse_f_element(cm.F, slope), b};
}

json cm_report(const CMData& cm, const SlopeLine& line) {
  SlopeMinimum m = slope_minimum(line, cm);
  json re = json::array(), im = json::array();
  for (std::size_t i = 0; i < cm.s(); ++i) {
    re.push_back(cm.re_eta[i].mid());
    im.push_back(cm.im_eta[i].mid());
  }
  return {{"t", to_json(cm.t)}, {"n", to_json(cm.n)}, {"re_eta", re}, {"im_eta", im},
          {"xi", to_json(m.xi)}, {"min", to_string(m.value)}, {"factors", m.factors}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euclidean minima of number fields"};
  app.require_subcommand(1);
  long seed = 0;
  int threads = 1;
  app.add_option("--seed", seed, "seed for randomised checks (reserved)");
  app.add_option("--threads", threads, "maximum worker threads")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", kVersion);

  std::string field_path;
  auto* units = app.add_subcommand("units", "log vectors, regulator and F_UK");
  units->add_option("field", field_path, "field file")->required();

  std::string point;
  auto* mk = app.add_subcommand("mk", "exact m_K(x) at a rational point");
  mk->add_option("field", field_path, "field file")->required();
  mk->add_option("--point", point, "integral-basis coordinates \"a0/q,a1/q,...\"")->required();

  SearchOptions sopt;
  double C = 1.0;
  std::size_t max_boxes = sopt.max_boxes;
  auto* search = app.add_subcommand("search", "certified enclosure of M(K)");
  search->add_option("field", field_path, "field file")->required();
  search->add_option("--tol", sopt.tol, "target width hi - lo")->capture_default_str();
  search->add_option("--qmax", sopt.qmax, "largest denominator in the sweep")->capture_default_str();
  search->add_option("--depth", sopt.max_depth, "maximum subdivision depth")->capture_default_str();
  search->add_option("--C", C, "constant in the tower bound Q")->capture_default_str();
  search->add_option("--max-boxes", max_boxes, "budget of processed boxes")->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "effective bounds");
  int bounds_q = 4;
  bounds->add_option("field", field_path, "field file")->required();
  bounds->add_option("--C", C, "constant in the tower bound Q")->capture_default_str();
  bounds->add_option("--q", bounds_q, "denominators for the counting bound")->capture_default_str();

  std::string F_path, eta, slope, beta;
  auto* cm = app.add_subcommand("cm", "closed-form minimum of N_* on a slope line");
  cm->add_option("field", field_path, "CM field file")->required();
  cm->add_option("--F", F_path, "totally real subfield file (default Q for quadratic K)");
  cm->add_option("--eta", eta, "eta in integral-basis coordinates of K")->required();
  cm->add_option("--slope", slope, "phi in coordinates of F, or inf")->required();
  cm->add_option("--beta", beta, "beta in coordinates of F")->required();

  auto* oracle = app.add_subcommand("oracle", "brute-force references");
  oracle->require_subcommand(1);
  int radius = 20;
  auto* omk = oracle->add_subcommand("mk", "min |N| over a coefficient box");
  omk->add_option("field", field_path, "field file")->required();
  omk->add_option("--point", point, "integral-basis coordinates")->required();
  omk->add_option("--radius", radius, "coefficient radius")->capture_default_str();
  double window = 2.0, resolution = 1e-3;
  auto* ocm = oracle->add_subcommand("cm", "grid scan of N_* on a slope line");
  ocm->add_option("field", field_path, "CM field file")->required();
  ocm->add_option("--F", F_path, "totally real subfield file");
  ocm->add_option("--eta", eta, "eta in integral-basis coordinates of K")->required();
  ocm->add_option("--slope", slope, "phi in coordinates of F, or inf")->required();
  ocm->add_option("--beta", beta, "beta in coordinates of F")->required();
  ocm->add_option("--window", window, "grid half-width")->capture_default_str();
  ocm->add_option("--resolution", resolution, "grid step")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  int code = 0;
  try {
    NumberField K = load_field(field_path);
    rep.label = K.label();
    rep.inputs["field_file"] = field_path;
    if (units->parsed()) {
      rep.command = "units";
      rep.result = units_report(K);
    } else if (mk->parsed()) {
      rep.command = "mk";
      rep.inputs["point"] = point;
      rep.result = mk_report(K, point);
    } else if (search->parsed()) {
      rep.command = "search";
      sopt.max_boxes = max_boxes;
      sopt.threads = threads;
      rep.inputs.update({{"tol", sopt.tol}, {"qmax", sopt.qmax}, {"depth", sopt.max_depth}, {"C", C}});
      bool converged = false;
      rep.result = search_report(K, sopt, C, converged);
      if (!converged) code = kExitNoConvergence;
    } else if (bounds->parsed()) {
      rep.command = "bounds";
      rep.inputs.update({{"C", C}, {"q", bounds_q}});
      rep.result = bounds_report(K, C, bounds_q);
    } else if (cm->parsed()) {
      rep.command = "cm";
      rep.inputs.update({{"F", F_path}, {"eta", eta}, {"slope", slope}, {"beta", beta}});
      CMData data = cm_from_args(K, F_path, eta);
      rep.result = cm_report(data, line_from_args(data, slope, beta));
    } else if (omk->parsed()) {
      rep.command = "oracle mk";
      rep.inputs.update({{"point", point}, {"radius", radius}});
      rep.result = {{"value", to_string(brute_force_m(parse_point(K, point), radius))}};
    } else if (ocm->parsed()) {
      rep.command = "oracle cm";
      rep.inputs.update({{"F", F_path}, {"eta", eta}, {"slope", slope}, {"beta", beta},
                         {"window", window}, {"resolution", resolution}});
      CMData data = cm_from_args(K, F_path, eta);
      GridMinimum g = grid_min_nstar(line_from_args(data, slope, beta), data, window, resolution);
      rep.result = {{"min", g.value}, {"argmin", g.argmin}};
    }
  } catch (const InputError& e) {
    std::cerr << "em: input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "em: input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "em: input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const PrecisionError& e) {
    std::cerr << "em: precision failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "em: " << e.what() << "\n";
    return 1;
  }
  rep.print(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  return code;
}
