#include "thinsieve/cli.hpp"

#include "thinsieve/census.hpp"
#include "thinsieve/exp_sums.hpp"
#include "thinsieve/modular.hpp"
#include "thinsieve/sieve_constants.hpp"
#include "thinsieve/thin_groups.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <iomanip>
#include <optional>
#include <sstream>

namespace thinsieve {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v, int precision = 10) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

std::string fmt(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

struct Table {
  std::string name;
  std::string provenance;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return fmt(v.get<double>());
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// Collects config, tables and a verdict, then renders them in one format.
class Report {
 public:
  explicit Report(std::string format) : format_(std::move(format)) {}

  void config(const std::string& key, const json& value) { config_.emplace_back(key, value); }
  Table& table(std::string name, std::string provenance, std::vector<std::string> columns) {
    tables_.push_back({std::move(name), std::move(provenance), std::move(columns), {}});
    return tables_.back();
  }
  void summary(const std::string& key, const json& value, std::string provenance = {}) {
    summary_.push_back({key, value, std::move(provenance)});
  }
  const std::string& format() const { return format_; }

  void write_header(std::ostream& out) const {
    if (format_ == "json") return;
    for (const auto& [k, v] : config_) out << "# " << k << " = " << cell_text(v) << '\n';
  }

  void render(std::ostream& out, bool header_written = false) const {
    if (format_ == "json") {
      json doc;
      json cfg = json::object();
      for (const auto& [k, v] : config_) cfg[k] = v;
      doc["config"] = cfg;
      json tables = json::array();
      for (const auto& t : tables_) {
        json rows = json::array();
        for (const auto& r : t.rows) {
          json row = json::object();
          for (std::size_t i = 0; i < t.columns.size(); ++i) row[t.columns[i]] = r[i];
          rows.push_back(row);
        }
        tables.push_back({{"name", t.name}, {"provenance", t.provenance}, {"rows", rows}});
      }
      doc["tables"] = tables;
      json summary = json::object();
      for (const auto& s : summary_) {
        summary[s.key] = s.provenance.empty() ? s.value : json{{"value", s.value}, {"provenance", s.provenance}};
      }
      doc["summary"] = summary;
      out << doc.dump(2) << '\n';
      return;
    }
    if (!header_written) write_header(out);
    for (const auto& t : tables_) {
      if (format_ == "csv") {
        out << "# table: " << t.name << '\n';
        for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_escape(t.columns[i]);
        out << '\n';
        for (const auto& r : t.rows) {
          for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(r[i]));
          out << '\n';
        }
      } else {
        std::vector<std::size_t> width(t.columns.size());
        for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
        for (const auto& r : t.rows)
          for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], cell_text(r[i]).size());
        out << '\n' << t.name << '\n';
        const auto line = [&](const auto& cells, auto text) {
          for (std::size_t i = 0; i < cells.size(); ++i) {
            const std::string s = text(cells[i]);
            out << (i ? "  " : "") << s << std::string(width[i] - s.size(), ' ');
          }
          out << '\n';
        };
        line(t.columns, [](const std::string& s) { return s; });
        for (const auto& r : t.rows) line(r, cell_text);
      }
    }
    if (!summary_.empty()) {
      if (format_ == "text") out << '\n';
      for (const auto& s : summary_) {
        out << (format_ == "csv" ? "# " : "") << s.key << (format_ == "csv" ? " = " : ": ") << cell_text(s.value)
            << '\n';
      }
    }
  }

 private:
  struct SummaryEntry {
    std::string key;
    json value;
    std::string provenance;
  };
  std::string format_;
  std::vector<std::pair<std::string, json>> config_;
  std::vector<Table> tables_;
  std::vector<SummaryEntry> summary_;
};

struct Options {
  std::string group = "modular";
  std::string gens_path;
  std::string format = "text";
  u64 seed = 1;
  unsigned threads = 1;
  std::optional<double> T, X, Y, alpha, t0, t1;
  std::vector<u64> q;
  std::vector<double> scales;
  std::optional<u64> pmax;
  std::optional<int> kappa, R, omegas, points, certify;
  std::string form = "z";
  std::size_t cap = 10'000'000;
  std::string walk = "breadth";
  bool list = false;
  bool mutant = false;
};

EnumerationOptions enumeration(const Options& o) {
  EnumerationOptions e;
  e.element_cap = o.cap;
  e.walk = o.walk == "descent" ? Walk::Descent : Walk::Breadth;
  return e;
}

GeneratorSet resolve_group(const Options& o) {
  return o.gens_path.empty() ? bundled_group(o.group) : load_generator_file(o.gens_path);
}

Form resolve_form(const Options& o) {
  const auto f = parse_form(o.form);
  if (!f) throw std::invalid_argument("unknown form '" + o.form + "'");
  return *f;
}

void common_config(Report& r, const std::string& command, const Options& o) {
  r.config("command", command);
  r.config("format", o.format);
  r.config("seed", o.seed);
}

void group_config(Report& r, const Options& o, const GeneratorSet& g) {
  r.config("group", g.label());
  if (!o.gens_path.empty()) r.config("gens", o.gens_path);
  std::ostringstream gens;
  for (std::size_t i = 0; i < g.generators().size(); ++i) {
    const auto& m = g.generators()[i];
    gens << (i ? "; " : "") << m.a() << ' ' << m.b() << ' ' << m.c() << ' ' << m.d();
  }
  r.config("generators", gens.str());
}

// ---------------------------------------------------------------- verify

struct SuiteTally {
  std::string name;
  std::string range;
  u64 checks = 0;
  u64 failures = 0;
};

int cmd_verify(const Options& o, std::ostream& out) {
  const u64 pmax = o.pmax.value_or(97);
  const int n_omegas = o.omegas.value_or(20);
  const RhoModel& model = o.mutant ? mutant_rho() : standard_rho();
  Report r(o.format);
  common_config(r, "verify", o);
  r.config("pmax", pmax);
  r.config("omegas_per_prime", n_omegas);
  r.config("rho", model.name);

  std::vector<u64> odd;
  for (u64 p : primes_up_to(pmax))
    if (p != 2) odd.push_back(p);
  const auto omegas_for = [&](u64 p, int count) { return sample_omegas(o.seed * 1000003ULL + p, count); };

  SuiteTally cosets{"cosets", "odd p <= " + std::to_string(pmax)};
  for (u64 p : odd) {
    const CosetTable table = coset_table(p);
    std::vector<u64> sizes(p + 1, 0);
    for (u64 c = 0; c < p; ++c)
      for (u64 d = 0; d < p; ++d)
        if (c || d) ++sizes[coset_label(c, d, p)];
    ++cosets.checks;
    bool ok = table.index == p + 1 && table.representatives.size() == p + 1;
    for (u64 label = 0; label <= p && ok; ++label) {
      const auto& [c, d] = table.representatives[label];
      ok = sizes[label] == p - 1 && coset_label(c, d, p) == label;
    }
    if (!ok) ++cosets.failures;
  }

  SuiteTally densities{"local densities", cosets.range};
  for (u64 p : odd) {
    for (Form f : {Form::X, Form::Y, Form::Z}) {
      ++densities.checks;
      if (!local_density(f, p).match) ++densities.failures;
    }
  }

  SuiteTally vanishing{"S1 vanishing", cosets.range + ", z at p = 1 mod 4"};
  for (u64 p : odd) {
    for (const auto& w : omegas_for(p, n_omegas)) {
      for (Form f : {Form::X, Form::Y, Form::Z}) {
        if (f == Form::Z && p % 4 != 1) continue;
        ++vanishing.checks;
        if (s1(p, f, w, model).value != 0 || s1_direct(p, f, w, model) != 0) ++vanishing.failures;
      }
    }
  }

  const u64 p4 = std::min<u64>(pmax, 31);
  SuiteTally closed{"S4 closed form", "odd p <= " + std::to_string(p4) + ", f in {x, y}"};
  SuiteTally bound{"S4 hypotenuse bound", "odd p <= " + std::to_string(p4)};
  for (u64 p : odd) {
    if (p > p4) break;
    for (const auto& w : omegas_for(p, 5)) {
      for (u64 k = 0; k < p; ++k) {
        for (u64 l = 0; l < p; ++l) {
          if (k == 0 && l == 0) continue;
          const i64 ki = static_cast<i64>(k), li = static_cast<i64>(l);
          for (Form f : {Form::X, Form::Y}) {
            ++closed.checks;
            const Rational expected = s4_closed_form(p, f, ki, li, w);
            if (s4_direct(p, f, ki, li, w, model) != expected || s4(p, f, ki, li, w, model).value != expected) {
              ++closed.failures;
            }
          }
          ++bound.checks;
          if (abs(s4_direct(p, Form::Z, ki, li, w, model)) > s4_bound(p, Form::Z, ki, li, w)) ++bound.failures;
        }
      }
    }
  }

  SuiteTally disjoint{"disjointness", cosets.range};
  for (u64 p : odd) {
    ++disjoint.checks;
    if (!disjointness_check(p)) ++disjoint.failures;
  }

  SuiteTally locus{"zero locus 2p - 1", cosets.range};
  for (u64 p : odd) {
    auto ws = omegas_for(p, 3);
    ws.push_back(UnimodularMatrix::identity());
    for (const auto& w : ws) {
      for (Form f : {Form::X, Form::Y, Form::Z}) {
        if (f == Form::Z && p % 4 != 1) continue;
        ++locus.checks;
        if (count_zero_locus(f, p, w) != 2 * p - 1) ++locus.failures;
      }
    }
  }

  Table& t = r.table("lemma suite", "verify", {"suite", "range", "checks", "failures", "status"});
  bool all = true;
  for (const auto* s : {&cosets, &densities, &vanishing, &closed, &bound, &disjoint, &locus}) {
    t.rows.push_back({s->name, s->range, s->checks, s->failures, s->failures == 0 ? "pass" : "FAIL"});
    all = all && s->failures == 0;
  }
  r.summary("verdict", all ? "pass" : "FAIL");
  r.render(out);
  return all ? kExitPass : kExitFalsified;
}

// ---------------------------------------------------------------- constants

int cmd_constants(const Options& o, std::ostream& out) {
  Report r(o.format);
  common_config(r, "constants", o);
  r.config("theta", fmt(kDefaultTheta));
  r.config("greaves_constant", fmt(kGreavesConstant));
  r.config("beta_4", fmt(dhr_beta(4)));
  r.config("beta_5", fmt(dhr_beta(5)));

  Table& t = r.table("almost-prime thresholds", "theorem4_table",
                     {"form", "R", "kappa", "D", "alpha", "delta0", "delta0_rounded"});
  for (const auto& row : theorem4_table()) {
    t.rows.push_back({std::string(to_string(row.form)), row.R, row.kappa, row.D, row.alpha, row.delta0,
                      fmt(row.delta0, row.form == Form::Z ? 3 : 4)});
  }

  Table& m = r.table("sieve dimension optimization", "optimize_m", {"alpha", "kappa", "zeta", "m", "R"});
  std::vector<std::pair<double, int>> cases{{5.0 / 32, 4}, {5.0 / 48, 5}, {7.0 / 48, 4}, {7.0 / 72, 5}};
  if (o.alpha && o.kappa) cases.assign(1, {*o.alpha, *o.kappa});
  for (const auto& [alpha, kappa] : cases) {
    const DhrOptimum opt = optimize_m(alpha, kappa);
    m.rows.push_back({alpha, kappa, opt.zeta, opt.m, opt.R});
  }
  if (o.kappa && o.R) {
    Table& a = r.table("minimal level", "alpha_min_for_R", {"kappa", "R", "alpha_min"});
    a.rows.push_back({*o.kappa, *o.R, alpha_min_for_R(*o.kappa, *o.R)});
  }

  Table& e = r.table("exponent system", "exponent_system_check",
                     {"D", "alpha", "feasible", "delta", "x", "y", "alpha0"});
  std::vector<std::pair<int, double>> systems{{2, greaves_threshold()}, {2, 5.0 / 16 - 1e-4}, {2, 5.0 / 16 + 1e-4}};
  for (const auto& row : theorem4_table()) {
    if (row.form != Form::Z) systems.emplace_back(row.D, row.alpha);
  }
  for (const auto& [D, alpha] : systems) {
    const auto point = find_feasible_point(D, alpha);
    if (point) {
      e.rows.push_back({D, alpha, true, point->delta, point->x, point->y, point->alpha0});
    } else {
      e.rows.push_back({D, alpha, false, "", "", "", ""});
    }
  }
  r.render(out);
  return kExitPass;
}

// ---------------------------------------------------------------- orbit

int cmd_orbit(const Options& o, std::ostream& out) {
  const GeneratorSet gens = resolve_group(o);
  const double T = o.T.value_or(100.0);
  Report r(o.format);
  common_config(r, "orbit", o);
  group_config(r, o, gens);
  r.config("T", T);
  r.config("cap", o.cap);
  r.config("walk", o.walk);
  if (o.certify) r.config("certify_length", *o.certify);

  const OrbitBall ball = enumerate_ball(gens, T, enumeration(o));
  int max_len = 0;
  for (const auto& e : ball.elements) max_len = std::max(max_len, e.word_length);
  r.summary("size", ball.size(), "enumerate_ball");
  r.summary("explored", ball.explored, "enumerate_ball");
  r.summary("max_word_length", max_len, "enumerate_ball");
  r.summary("poincare_partial_s1", fmt(poincare_partial(ball, 1.0, T)), "poincare_partial");
  r.summary("smoothed_sum_at_T_over_1.1", fmt(smoothed_sum_exact(ball, T / 1.1)), "smoothed_sum_exact");
  if (o.certify) {
    const auto cert = certify_no_parabolic(gens, *o.certify);
    r.summary("parabolic_free", cert.passed, "certify_no_parabolic");
    r.summary("words_checked", cert.words_checked, "certify_no_parabolic");
  }
  if (o.list) {
    Table& t = r.table("ball", "enumerate_ball", {"a", "b", "c", "d", "sq_norm", "word_length"});
    for (const auto& e : ball.elements) t.rows.push_back({e.a, e.b, e.c, e.d, e.sq_norm, e.word_length});
  }
  r.render(out);
  return kExitPass;
}

// ---------------------------------------------------------------- census

int cmd_census(const Options& o, std::ostream& out) {
  const GeneratorSet gens = resolve_group(o);
  const double T = o.T.value_or(200.0);
  const Form f = resolve_form(o);
  const int R = o.R.value_or(4);
  const u64 pmax = o.pmax.value_or(97);
  Report r(o.format);
  common_config(r, "census", o);
  group_config(r, o, gens);
  r.config("T", T);
  r.config("f", std::string(to_string(f)));
  r.config("R", R);
  r.config("pmax", pmax);

  const OrbitBall ball = enumerate_ball(gens, T, {o.cap, 0.0});
  const Census c = census(ball, f, R, o.threads);
  if (o.format == "csv") {
    r.write_header(out);
    write_census_csv_header(out);
    for (const auto& row : c.rows) write_census_csv_row(out, row, R);
  }

  Table& s = r.table("almost primes", "census", {"r", "at_most_r"});
  for (int k = 1; k <= R; ++k) s.rows.push_back({k, c.summary.at_most[static_cast<std::size_t>(k - 1)]});
  r.summary("rows", c.summary.rows, "census");
  r.summary("zeros", c.summary.zeros, "census");
  r.summary("units", c.summary.units, "census");
  r.summary("incomplete", c.summary.incomplete, "census");
  r.summary("imprimitive", c.summary.imprimitive, "census");

  bool agree = true;
  Table& tp = r.table("two-path divisibility", "two_path_check", {"p", "direct", "constituents", "match"});
  for (const auto& rep : two_path_check(ball, f, pmax)) {
    tp.rows.push_back({rep.p, rep.direct, rep.constituent, rep.match()});
    agree = agree && rep.match();
  }
  std::ostringstream failures;
  for (u64 p : primitivity_failures(ball, f, pmax)) failures << (failures.tellp() > 0 ? " " : "") << p;
  r.summary("primitivity_failures", failures.str(), "primitivity_failures");
  r.summary("two_path", agree ? "pass" : "FAIL", "two_path_check");
  r.render(out, o.format == "csv");
  return agree ? kExitPass : kExitFalsified;
}

// ---------------------------------------------------------------- density

int cmd_density(const Options& o, std::ostream& out) {
  const Form f = resolve_form(o);
  const u64 pmax = o.pmax.value_or(97);
  Report r(o.format);
  common_config(r, "density", o);
  r.config("f", std::string(to_string(f)));
  r.config("pmax", pmax);
  Table& t = r.table("local densities", "local_density", {"p", "zero_reps", "measured", "predicted", "match"});
  bool all = true;
  for (u64 p : primes_up_to(pmax)) {
    if (p == 2 || form_info(f).normalizer % static_cast<int>(p) == 0) continue;
    const DensityReport d = local_density(f, p);
    t.rows.push_back({p, d.zero_reps, fmt(d.measured), fmt(d.predicted), d.match});
    all = all && d.match;
  }
  r.summary("verdict", all ? "pass" : "FAIL");
  r.render(out);
  return all ? kExitPass : kExitFalsified;
}

// ---------------------------------------------------------------- delta

int cmd_delta(const Options& o, std::ostream& out) {
  const GeneratorSet gens = resolve_group(o);
  const double t0 = o.t0.value_or(30.0), t1 = o.t1.value_or(1000.0);
  const int n = o.points.value_or(8);
  Report r(o.format);
  common_config(r, "delta", o);
  group_config(r, o, gens);
  r.config("t0", t0);
  r.config("t1", t1);
  r.config("points", n);
  r.config("walk", o.walk);
  const GrowthEstimate est = estimate_delta(gens, geometric_grid(t0, t1, n), enumeration(o));
  Table& t = r.table("growth samples", "estimate_delta", {"T", "count"});
  for (const auto& [T, count] : est.samples) t.rows.push_back({T, count});
  r.summary("delta", est.delta, "estimate_delta");
  r.summary("std_error", est.std_error, "estimate_delta");
  r.render(out);
  return kExitPass;
}

// ---------------------------------------------------------------- adq

int cmd_adq(const Options& o, std::ostream& out) {
  const GeneratorSet gens = resolve_group(o);
  const Form f = resolve_form(o);
  const double X = o.X.value_or(20.0), Y = o.Y.value_or(20.0);
  const double alpha = o.alpha.value_or(0.25);
  Report r(o.format);
  common_config(r, "adq", o);
  group_config(r, o, gens);
  r.config("f", std::string(to_string(f)));
  r.config("alpha", alpha);
  bool ok = true;

  if (!o.scales.empty()) {
    r.config("scales", [&] {
      std::ostringstream s;
      for (std::size_t i = 0; i < o.scales.size(); ++i) s << (i ? " " : "") << o.scales[i];
      return s.str();
    }());
    Table& t = r.table("distribution probe", "distribution_probe", {"X", "Y", "N", "moduli", "chi", "ratio"});
    std::optional<double> prev;
    bool monotone = true;
    for (double s : o.scales) {
      const SieveSequence seq = build_sequence(gens, s, s, f, {o.cap, 0.0});
      ok = ok && seq.total_mass() == seq.chi;
      const DistributionProbe probe = distribution_probe(seq, alpha);
      t.rows.push_back({s, s, probe.N.str(), probe.moduli.size(), fmt(to_double(seq.chi)), probe.ratio});
      if (prev && probe.ratio > *prev) monotone = false;
      prev = probe.ratio;
    }
    r.summary("non_increasing", monotone, "distribution_probe");
    r.summary("accounting", ok ? "pass" : "FAIL", "build_sequence");
    r.render(out);
    return ok ? kExitPass : kExitFalsified;
  }

  r.config("X", X);
  r.config("Y", Y);
  const SieveSequence seq = build_sequence(gens, X, Y, f, {o.cap, 0.0});
  std::vector<u64> moduli = o.q;
  if (moduli.empty()) {
    const auto excluded = excluded_primes(f, seq.bad_primes);
    for (u64 q : squarefree_up_to(31)) {
      if (std::none_of(excluded.begin(), excluded.end(), [q](u64 p) { return q % p == 0; })) moduli.push_back(q);
    }
  }
  r.config("q", [&] {
    std::ostringstream s;
    for (std::size_t i = 0; i < moduli.size(); ++i) s << (i ? " " : "") << moduli[i];
    return s.str();
  }());

  Table& t = r.table("congruence sums", "a_q", {"q", "A_q", "main", "r", "r_over_chi"});
  for (u64 q : moduli) {
    const CongruenceSum s = a_q(seq, q);
    t.rows.push_back({q, fmt(to_double(s.count)), fmt(to_double(s.main)), fmt(to_double(s.remainder)),
                      seq.chi == 0 ? 0.0 : to_double(s.remainder / seq.chi)});
    if (q == 1) ok = ok && s.count == seq.chi;
    if (constituents(f).size() > 1 && is_prime(q)) ok = ok && constituent_mass_check(gens, seq, q, {o.cap, 0.0});
  }
  const bool accounting = seq.total_mass() == seq.chi;
  ok = ok && accounting;
  const DistributionProbe probe = distribution_probe(seq, alpha);
  r.summary("chi", fmt(seq.chi), "build_sequence");
  r.summary("gamma_count", seq.gamma_count, "build_sequence");
  r.summary("omega_count", seq.omega_count, "build_sequence");
  r.summary("N", seq.max_abs_value.str(), "build_sequence");
  std::ostringstream bad;
  for (u64 p : seq.bad_primes) bad << (bad.tellp() > 0 ? " " : "") << p;
  r.summary("bad_primes", bad.str(), "bad_modulus_probe");
  r.summary("probe_moduli", probe.moduli.size(), "distribution_probe");
  r.summary("probe_ratio", probe.ratio, "distribution_probe");
  r.summary("accounting", ok ? "pass" : "FAIL", "a_q");
  r.render(out);
  return ok ? kExitPass : kExitFalsified;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orbit sieve experiments for thin subgroups of SL(2, Z)", "thinsieve"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value file; flags override it");
  Options o;
  app.add_option("--group", o.group, "Bundled group: modular or schottky")->capture_default_str();
  app.add_option("--gens", o.gens_path, "Generator file (overrides --group)");
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for sampled omegas")->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  app.add_option("--T", o.T, "Ball radius");
  app.add_option("--X", o.X, "Smoothed ball parameter");
  app.add_option("--Y", o.Y, "Hard ball parameter");
  app.add_option("--q", o.q, "Moduli")->delimiter(',');
  app.add_option("--scales", o.scales, "Ball sizes for the distribution probe (X = Y)")->delimiter(',');
  app.add_option("--pmax", o.pmax, "Largest prime");
  app.add_option("--alpha", o.alpha, "Level of distribution");
  app.add_option("--kappa", o.kappa, "Sieve dimension");
  app.add_option("--R", o.R, "Almost-prime order");
  app.add_option("--f", o.form, "Form: x, y, z, area, product")->capture_default_str();
  app.add_option("--omegas", o.omegas, "Sampled omegas per prime");
  app.add_option("--t0", o.t0, "Smallest radius of the growth grid");
  app.add_option("--t1", o.t1, "Largest radius of the growth grid");
  app.add_option("--points", o.points, "Points of the growth grid");
  app.add_option("--certify", o.certify, "Certify no parabolic words up to this length");
  app.add_option("--cap", o.cap, "Element budget for enumerations")->capture_default_str();
  app.add_option("--walk", o.walk, "Enumeration strategy: breadth or descent")
      ->check(CLI::IsMember({"breadth", "descent"}))
      ->capture_default_str();
  app.add_flag("--list", o.list, "List ball elements");
  app.add_flag("--mutant-rho", o.mutant)->group("");

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const Options&, std::ostream&);
  };
  const Command commands[] = {
      {"verify", "Run the exact lemma suite", cmd_verify},
      {"constants", "Sieve thresholds and almost-prime orders", cmd_constants},
      {"orbit", "Enumerate a norm ball", cmd_orbit},
      {"census", "Almost-prime census of form values over a ball", cmd_census},
      {"density", "Local densities of a form", cmd_density},
      {"delta", "Estimate the critical exponent", cmd_delta},
      {"adq", "Congruence sums of the weighted sequence", cmd_adq},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadInput;
  }

  try {
    for (const auto& c : commands) {
      if (app.got_subcommand(c.name)) {
        return c.run(o, out);
      }
    }
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    err << "bad input: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::domain_error& e) {
    err << "bad input: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitBadInput;
}

}  // namespace thinsieve
