#include "compop/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "compop/capacity.hpp"
#include "compop/criteria.hpp"
#include "compop/errors.hpp"
#include "compop/io.hpp"
#include "compop/levelset.hpp"
#include "compop/operator.hpp"

namespace compop {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigError, "field '" + field + "': " + what);
}

// Typed access to the params block with field paths in every error.
class Params {
 public:
  explicit Params(const json& j) : j_(j) {
    if (!j_.is_object()) bad("params", "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  double number(const char* key, std::optional<double> def = std::nullopt) const {
    if (!j_.contains(key)) {
      if (def) return *def;
      bad(path(key), "missing");
    }
    if (!j_.at(key).is_number()) bad(path(key), "expected a number");
    return j_.at(key).get<double>();
  }

  int integer(const char* key, std::optional<int> def = std::nullopt) const {
    if (!j_.contains(key)) {
      if (def) return *def;
      bad(path(key), "missing");
    }
    if (!j_.at(key).is_number_integer()) bad(path(key), "expected an integer");
    return j_.at(key).get<int>();
  }

  std::vector<double> numbers(const char* key, std::optional<std::vector<double>> def = std::nullopt) const {
    if (!j_.contains(key)) {
      if (def) return *def;
      bad(path(key), "missing");
    }
    const json& v = j_.at(key);
    if (!v.is_array()) bad(path(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) bad(path(key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<int> integers(const char* key, std::vector<int> def) const {
    if (!j_.contains(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_array()) bad(path(key), "expected an array of integers");
    std::vector<int> out;
    for (const auto& x : v) {
      if (!x.is_number_integer()) bad(path(key), "expected an array of integers");
      out.push_back(x.get<int>());
    }
    return out;
  }

  std::string choice(const char* key, const std::vector<std::string>& allowed) const {
    if (!j_.contains(key)) return allowed.front();
    const json& v = j_.at(key);
    if (!v.is_string()) bad(path(key), "expected a string");
    const std::string s = v.get<std::string>();
    if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      bad(path(key), "unknown value '" + s + "' (expected one of " + list + ")");
    }
    return s;
  }

  const json& raw(const char* key) const {
    if (!j_.contains(key)) bad(path(key), "missing");
    return j_.at(key);
  }

  static std::string path(const char* key) { return std::string("params.") + key; }

 private:
  const json& j_;
};

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return {line, col};
}

std::string verdict_name(Verdict v) { return to_string(v); }

// Output sink: one directory per experiment, every file written atomically.
class Sink {
 public:
  Sink(const std::filesystem::path& out_dir, const std::string& experiment) : dir_(out_dir / experiment) {}

  void write(const std::string& name, const std::string& content) {
    atomic_write(dir_ / name, content);
    files_.push_back(dir_ / name);
  }

  void record(const std::string& criterion, json params, Verdict v) {
    verdicts_.push_back({{"criterion", criterion}, {"params", std::move(params)}, {"verdict", verdict_name(v)}});
    ++count_[static_cast<int>(v)];
  }

  RunResult finish(const std::string& command, const std::string& experiment, json extra = json::object()) {
    json doc = {{"command", command}, {"experiment", experiment}, {"verdicts", verdicts_}};
    for (auto& [k, v] : extra.items()) doc[k] = v;
    write("verdicts.json", doc.dump(2) + "\n");
    RunResult r;
    r.files = files_;
    r.exit_code = count_[static_cast<int>(Verdict::Inconclusive)] > 0 ? 2 : 0;
    std::ostringstream os;
    os << command << " " << experiment << ": " << verdicts_.size() << " verdicts (finite "
       << count_[static_cast<int>(Verdict::Finite)] << ", divergent " << count_[static_cast<int>(Verdict::Divergent)]
       << ", inconclusive " << count_[static_cast<int>(Verdict::Inconclusive)] << ")";
    r.summary = os.str();
    return r;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> files_;
  json verdicts_ = json::array();
  int count_[3] = {0, 0, 0};
};

Symbol need_symbol(const ExperimentConfig& c) {
  if (!c.symbol) bad("symbol", "missing");
  return symbol_from_json(*c.symbol);
}

MCOptions mc_options(const ExperimentConfig& c, const Params& p) {
  if (!c.seed) bad("seed", "required for Monte Carlo experiments");
  MCOptions mc;
  mc.seed = *c.seed;
  mc.samples = static_cast<std::size_t>(p.integer("samples", 1000000));
  mc.strata = p.integer("strata", mc.strata);
  return mc;
}

std::string num_suffix(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

void write_luecking(Sink& sink, const std::vector<LueckingReport>& reps) {
  std::string csv = "p,n,L,stderr\n";
  for (const auto& r : reps) {
    for (std::size_t n = 0; n < r.L.size(); ++n)
      csv += num(r.p) + "," + std::to_string(n) + "," + num(r.L[n]) + "," + num(r.L_stderr[n]) + "\n";
    sink.record("luecking_sum", {{"p", r.p}, {"alpha", r.alpha}, {"rho", r.diagnostic.rho}, {"note", r.diagnostic.note}},
                r.diagnostic.verdict);
    if (!r.hardy.empty())
      sink.record("luecking_hardy", {{"p", r.p}, {"rho", r.hardy_diagnostic.rho}, {"note", r.hardy_diagnostic.note}},
                  r.hardy_diagnostic.verdict);
  }
  sink.write("luecking.csv", csv);
}

void write_sweep(Sink& sink, const TruncationSweep& sw) {
  std::string csv = "p,N,sum,ratio\n";
  for (std::size_t i = 0; i < sw.p.size(); ++i) {
    for (std::size_t k = 0; k < sw.N.size(); ++k) {
      const double ratio = k >= 2 && k - 2 < sw.ratios[i].size() ? sw.ratios[i][k - 2] : std::nan("");
      csv += num(sw.p[i]) + "," + std::to_string(sw.N[k]) + "," + num(sw.sums[i][k]) + "," + num(ratio) + "\n";
    }
    sink.record("truncation_sweep", {{"p", sw.p[i]}, {"N_max", sw.N.back()}}, sw.verdict[i]);
  }
  sink.write("sweep.csv", csv);
}

RunResult run_symbol(const ExperimentConfig& c, Sink& sink) {
  const Params p(c.params);
  const Symbol phi = need_symbol(c);
  std::vector<cplx> pts;
  if (p.has("points")) {
    const json& a = p.raw("points");
    if (!a.is_array()) bad("params.points", "expected an array of [re, im] pairs");
    for (const auto& z : a) pts.push_back(complex_from_json(z, "params.points"));
  } else {
    for (double r : {0.0, 0.5, 0.9, 0.99})
      for (int k = 0; k < 8; ++k) pts.push_back(std::polar(r, kTwoPi * k / 8));
  }
  std::string csv = "re,im,phi_re,phi_im,dphi_re,dphi_im\n";
  for (cplx z : pts) {
    const EvalResult e = eval(phi, z);
    csv += num(z.real()) + "," + num(z.imag()) + "," + num(e.value.real()) + "," + num(e.value.imag()) + "," +
           num(e.derivative.real()) + "," + num(e.derivative.imag()) + "\n";
  }
  sink.write("eval.csv", csv);
  if (p.has("taylor_N")) {
    const auto coeffs = taylor_coefficients(phi, p.integer("taylor_N"));
    std::string t = "n,re,im\n";
    for (std::size_t n = 0; n < coeffs.size(); ++n)
      t += std::to_string(n) + "," + num(coeffs[n].real()) + "," + num(coeffs[n].imag()) + "\n";
    sink.write("taylor.csv", t);
  }
  sink.write("symbol.json", json{{"symbol", to_json(phi)}, {"describe", phi.describe()}}.dump(2) + "\n");
  return sink.finish("symbol", c.experiment);
}

RunResult run_levelset(const ExperimentConfig& c, Sink& sink) {
  const Params p(c.params);
  const Symbol phi = need_symbol(c);
  const auto grid = dyadic_s_grid(p.integer("s_levels", 20));
  const std::string route = p.choice("route", {"exact", "sampled"});
  const LevelSetProfile prof = route == "exact" ? level_set_profile(phi, grid) : level_set_profile_sampled(phi, grid);
  sink.write("profile.csv", profile_csv(prof));
  for (double q : p.numbers("p_list", std::vector<double>{})) {
    for (auto mode : {CriterionMode::Sufficient, CriterionMode::Necessary}) {
      const auto r = levelset_integral(prof, q, mode);
      const std::string m = mode == CriterionMode::Sufficient ? "sufficient" : "necessary";
      sink.write("levelset_p" + num_suffix(q) + "_" + m + ".csv", criterion_csv(r));
      sink.record("levelset_integral", {{"p", q}, {"mode", m}}, r.verdict);
    }
  }
  if (p.has("luecking_p_list")) {
    LueckingOptions lo;
    lo.mc = mc_options(c, p);
    const double alpha = p.number("alpha", 1.0);
    lo.hardy = alpha == 1.0;
    write_luecking(sink, luecking_sum(phi, alpha, p.numbers("luecking_p_list"), p.integer("n_max", 6), lo));
  }
  return sink.finish("levelset", c.experiment);
}

RunResult run_spectrum(const ExperimentConfig& c, Sink& sink) {
  const Params p(c.params);
  const std::string op = p.choice("operator", {"composition", "toeplitz"});
  const int N = p.integer("N", 64);
  const auto p_list = p.numbers("p_list", std::vector<double>{1.0, 2.0, 4.0});
  json extra = json::object();
  if (op == "toeplitz") {
    AtomicMeasure mu;
    const json& atoms = p.raw("atoms");
    if (!atoms.is_array()) bad("params.atoms", "expected an array of [[re, im], mass]");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string w = "params.atoms[" + std::to_string(i) + "]";
      if (!atoms[i].is_array() || atoms[i].size() != 2 || !atoms[i][1].is_number()) bad(w, "expected [[re, im], mass]");
      mu.atoms.push_back({complex_from_json(atoms[i][0], w.c_str()), atoms[i][1].get<double>()});
    }
    json leading = json::array();
    for (double a : p.numbers("bergman_alpha", std::vector<double>{0.0})) {
      const SpectralReport r = singular_values(toeplitz_matrix(mu, a, N));
      sink.write("spectrum_a" + num_suffix(a) + ".csv", spectrum_csv(r));
      double rest = 0.0;
      for (std::size_t n = 1; n < r.s.size(); ++n) rest = std::max(rest, r.s[n]);
      leading.push_back({{"bergman_alpha", a}, {"s0", r.s.front()}, {"max_rest", rest}});
    }
    extra["toeplitz"] = leading;
    return sink.finish("spectrum", c.experiment, extra);
  }

  const Symbol phi = need_symbol(c);
  const std::string route = p.choice("route", {"taylor", "gram"});
  SpectralReport r;
  if (route == "taylor") {
    const auto M = composition_matrix(phi, p.number("alpha", 1.0), N);
    r = singular_values(M.matrix);
    extra["tail_mass"] = M.tail_mass;
    extra["under_resolved"] = M.under_resolved;
  } else {
    const Eigen::MatrixXcd G = hardy_gram_matrix(phi, N);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
    std::vector<double> s;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[i])));
    r = spectral_report(std::move(s));
  }
  sink.write("spectrum.csv", spectrum_csv(r));
  const std::vector<int> Ns{N / 4, N / 2, N};
  json sums = json::array();
  for (double q : p_list) {
    const SchattenPartial sp = schatten_partial(r, q, Ns);
    sums.push_back({{"p", q}, {"N", sp.N}, {"sums", sp.sums}});
    sink.record("schatten_partial", {{"p", q}, {"N", N}, {"route", route}}, sp.verdict);
  }
  extra["partial_sums"] = sums;
  extra["slope"] = r.slope;
  if (p.has("sweep_N_max")) {
    write_sweep(sink, truncation_sweep(phi, p_list, p.integer("sweep_N_max")));
  }
  return sink.finish("spectrum", c.experiment, extra);
}

RunResult run_criteria(const ExperimentConfig& c, Sink& sink) {
  const Params p(c.params);
  const std::string which = p.choice("criterion", {"onepoint", "hK", "levelset", "xlog", "hilbert_schmidt"});
  const json& sj = c.symbol ? *c.symbol : json();
  auto weight = [&] {
    if (!sj.is_object() || !sj.contains("weight")) bad("symbol.weight", "missing");
    return weight_from_json(sj.at("weight"));
  };
  auto set = [&] {
    if (!sj.is_object() || !sj.contains("set")) bad("symbol.set", "missing");
    return set_from_json(sj.at("set"));
  };
  const auto p_list = p.numbers("p_list", std::vector<double>{2.0, 4.0, 6.0});
  const std::string mode_s = p.choice("mode", {"sufficient", "necessary"});
  const CriterionMode mode = mode_s == "sufficient" ? CriterionMode::Sufficient : CriterionMode::Necessary;

  if (which == "onepoint") {
    const WeightFunction h = weight();
    bool compact_done = false;
    for (double q : p_list) {
      const OnePointResult r = onepoint_integrals(h, q);
      if (!compact_done) {
        sink.write("compactness.csv", criterion_csv(r.compactness));
        sink.record("compactness_integral", json::object(), r.compactness.verdict);
        compact_done = true;
      }
      sink.write("schatten_p" + num_suffix(q) + ".csv", criterion_csv(r.schatten));
      sink.record("schatten_integral", {{"p", q}}, r.schatten.verdict);
    }
    if (p.has("luecking_p_list")) {
      LueckingOptions lo;
      lo.mc = mc_options(c, p);
      const double alpha = p.number("alpha", 1.0);
      lo.hardy = alpha == 1.0;
      write_luecking(sink, luecking_sum(need_symbol(c), alpha, p.numbers("luecking_p_list"), p.integer("n_max", 6), lo));
    }
    if (p.has("sweep_N_max")) write_sweep(sink, truncation_sweep(need_symbol(c), p.numbers("sweep_p_list"), p.integer("sweep_N_max")));
  } else if (which == "hK") {
    const WeightFunction h = weight();
    const BoundarySet K = set();
    for (double q : p_list) {
      const auto r = hK_integral(h, K, q, mode, p.integer("n_shells", 200));
      sink.write("hK_p" + num_suffix(q) + ".csv", criterion_csv(r));
      sink.record("hK_integral", {{"p", q}, {"mode", mode_s}}, r.verdict);
    }
  } else if (which == "levelset") {
    const Symbol phi = need_symbol(c);
    const auto prof = level_set_profile(phi, dyadic_s_grid(p.integer("s_levels", 20)));
    sink.write("profile.csv", profile_csv(prof));
    for (double q : p_list) {
      const auto r = levelset_integral(prof, q, mode);
      sink.write("levelset_p" + num_suffix(q) + ".csv", criterion_csv(r));
      sink.record("levelset_integral", {{"p", q}, {"mode", mode_s}}, r.verdict);
    }
  } else if (which == "xlog") {
    const double alpha = p.number("alpha");
    const auto r = xlog_integral(need_symbol(c), alpha, mc_options(c, p));
    sink.write("xlog.csv", criterion_csv(r));
    sink.record("xlog_integral", {{"alpha", alpha}}, r.verdict);
  } else {
    const auto r = hilbert_schmidt_norm(need_symbol(c));
    sink.record("hilbert_schmidt", {{"value", r.value}, {"series_value", r.series_value}}, r.verdict);
  }
  return sink.finish("criteria", c.experiment);
}

RunResult run_capacity(const ExperimentConfig& c, Sink& sink) {
  const Params p(c.params);
  const std::string task = p.choice("task", {"estimate", "weak_type", "kernel_checks"});
  EquilibriumOptions eo;
  eo.nodes = p.integer("nodes", eo.nodes);
  eo.lattice = p.integer("lattice", eo.lattice);
  eo.n_max = p.integer("n_max", eo.n_max);
  json extra = json::object();

  if (task == "estimate") {
    BoundarySet K;
    if (p.has("set")) {
      K = set_from_json(p.raw("set"));
    } else if (c.symbol && c.symbol->contains("set")) {
      K = set_from_json(c.symbol->at("set"));
    } else {
      bad("params.set", "missing (and no outer symbol to take it from)");
    }
    const double alpha = p.number("alpha");
    const auto n_list = p.integers("n_list", {256, 512, 1024});
    const auto rep = capacity_estimate(K, alpha, n_list, eo);
    sink.write("capacity.json", capacity_json(rep));
    sink.write("measure.csv", measure_csv(rep.measure));
    std::string csv = "n_max,energy,capacity,capacity_plus,iterations,support_spread\n";
    for (const auto& r : rep.rows)
      csv += std::to_string(r.n_max) + "," + num(r.energy) + "," + num(r.capacity) + "," + num(r.capacity_plus) + "," +
             std::to_string(r.iterations) + "," + num(r.support_spread) + "\n";
    sink.write("capacity.csv", csv);
    extra["monotone"] = rep.monotone;
  } else if (task == "weak_type") {
    const double alpha = p.number("alpha");
    const auto t_list = p.numbers("t_list");
    const json& polys = p.raw("polynomials");
    if (!polys.is_array()) bad("params.polynomials", "expected an array of coefficient lists");
    std::string csv = "polynomial,t,measure,capacity_plus,ratio\n";
    double A = 0.0;
    json rows = json::array();
    for (std::size_t i = 0; i < polys.size(); ++i) {
      const std::string w = "params.polynomials[" + std::to_string(i) + "]";
      if (!polys[i].is_array()) bad(w, "expected an array of coefficients");
      std::vector<cplx> coeffs;
      for (const auto& x : polys[i]) coeffs.push_back(complex_from_json(x, w.c_str()));
      const auto rep = weak_type_check(Symbol::polynomial(coeffs), alpha, t_list, eo);
      for (const auto& r : rep.rows)
        csv += std::to_string(i) + "," + num(r.t) + "," + num(r.measure) + "," + num(r.capacity_plus) + "," +
               num(r.ratio) + "\n";
      rows.push_back({{"polynomial", i}, {"norm2", rep.norm2}, {"constant", rep.constant}});
      A = std::max(A, rep.constant);
    }
    sink.write("weak_type.csv", csv);
    extra["weak_type"] = rows;
    extra["constant"] = A;
  } else {
    const auto rep = series_kernel_checks();
    std::string csv = "check,d,c,sigma,x,lhs,rhs,ratio\n";
    for (const auto& r : rep.rows)
      csv += r.check + "," + num(r.d) + "," + num(r.c) + "," + num(r.sigma) + "," + num(r.x) + "," + num(r.lhs) + "," +
             num(r.rhs) + "," + num(r.ratio) + "\n";
    sink.write("kernel_checks.csv", csv);
    extra["min_ratio"] = rep.min_ratio;
    extra["max_ratio"] = rep.max_ratio;
  }
  return sink.finish("capacity", c.experiment, extra);
}

ExperimentConfig make(std::string id, std::optional<json> symbol, json params, bool seeded = false) {
  ExperimentConfig c;
  c.experiment = std::move(id);
  c.symbol = std::move(symbol);
  c.params = std::move(params);
  if (seeded) c.seed = 20240601;
  return c;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(ErrorCode::ConfigError,
                source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object()) bad("<root>", "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const char* known[] = {"schema_version", "experiment", "symbol", "params", "seed", "output"};
    if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }))
      bad(it.key(), "unknown field");
  }
  ExperimentConfig c;
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer()) bad("schema_version", "missing or not an integer");
  c.schema_version = j["schema_version"].get<int>();
  if (c.schema_version != kSchemaVersion)
    bad("schema_version", "unsupported version " + std::to_string(c.schema_version));
  if (j.contains("experiment")) {
    if (!j["experiment"].is_string() || j["experiment"].get<std::string>().empty())
      bad("experiment", "expected a nonempty string");
    c.experiment = j["experiment"].get<std::string>();
    if (c.experiment.find('/') != std::string::npos || c.experiment == "." || c.experiment == "..")
      bad("experiment", "must be a plain name");
  }
  if (j.contains("symbol")) {
    symbol_from_json(j["symbol"]);  // validate early
    c.symbol = j["symbol"];
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) bad("params", "expected an object");
    c.params = j["params"];
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("seed", "expected a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) bad("output", "expected a string");
    c.output = j["output"].get<std::string>();
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), path.string());
}

json to_json(const ExperimentConfig& c) {
  json j = {{"schema_version", c.schema_version}, {"experiment", c.experiment}, {"params", c.params}, {"output", c.output}};
  if (c.symbol) j["symbol"] = *c.symbol;
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> v{"symbol", "levelset", "spectrum", "criteria", "capacity", "preset"};
  return v;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> v{"scaled-rotation-exact", "rank-one-toeplitz", "one-point-linear-h",
                                          "one-point-quadratic-h", "cantor-logpower",  "arc-capacity",
                                          "weak-type-suite"};
  return v;
}

Preset preset(const std::string& name) {
  auto one_point = [](double gamma) {
    return json{{"variant", "outer"},
                {"weight", {{"family", "power"}, {"c", 1.0}, {"gamma", gamma}}},
                {"set", {{"arcs", {{0.0, 0.0}}}}}};
  };
  const json onepoint_params = {{"criterion", "onepoint"},
                                {"p_list", {2.0, 3.0, 3.9, 4.1, 5.0, 6.0}},
                                {"luecking_p_list", {2.0, 3.0, 5.0, 6.0}},
                                {"alpha", 1.0},
                                {"n_max", 6},
                                {"sweep_p_list", {2.0, 6.0}},
                                {"sweep_N_max", 512}};
  if (name == "scaled-rotation-exact")
    return {"spectrum", make(name, json{{"variant", "scaled_rotation"}, {"s", 0.5}, {"angle", 0.0}},
                             {{"operator", "composition"}, {"N", 64}, {"alpha", 1.0}, {"p_list", {1.0, 2.0, 4.0}}})};
  if (name == "rank-one-toeplitz")
    return {"spectrum", make(name, std::nullopt,
                             {{"operator", "toeplitz"},
                              {"N", 256},
                              {"atoms", json::array({json::array({json::array({0.5, 0.0}), 1.0})})},
                              {"bergman_alpha", {0.0, 1.0}}})};
  if (name == "one-point-linear-h") return {"criteria", make(name, one_point(1.0), onepoint_params, true)};
  if (name == "one-point-quadratic-h") return {"criteria", make(name, one_point(2.0), onepoint_params, true)};
  if (name == "cantor-logpower")
    return {"criteria", make(name,
                             json{{"variant", "outer"},
                                  {"weight", {{"family", "log_power"}, {"beta", 2.0}}},
                                  {"set", {{"cantor", {{"logpower_levels", 64}}}}}},
                             {{"criterion", "hK"}, {"p_list", {3.0, 4.0, 6.0}}, {"mode", "sufficient"}})};
  if (name == "arc-capacity")
    return {"capacity", make(name, std::nullopt,
                             {{"task", "estimate"},
                              {"set", {{"arcs", {{0.0, 3.141592653589793}}}}},
                              {"alpha", 0.5},
                              {"n_list", {256, 512, 1024}}})};
  if (name == "weak-type-suite")
    return {"capacity", make(name, std::nullopt,
                             {{"task", "weak_type"},
                              {"alpha", 0.5},
                              {"t_list", {0.2, 0.4, 0.6, 0.8, 0.9, 0.95}},
                              {"polynomials", {{0.5, 0.5}, {0.3, 0.4, 0.3}, {0.0, 0.5, 0.5}, {0.2, 0.0, 0.0, 0.6}}}})};
  std::string list;
  for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
  throw Error(ErrorCode::ConfigError, "unknown preset '" + name + "' (expected one of " + list + ")");
}

RunResult run_experiment(const std::string& command, const ExperimentConfig& config,
                         const std::filesystem::path& out_dir) {
  Sink sink(out_dir, config.experiment);
  sink.write("config.json", to_json(config).dump(2) + "\n");
  if (command == "symbol") return run_symbol(config, sink);
  if (command == "levelset") return run_levelset(config, sink);
  if (command == "spectrum") return run_spectrum(config, sink);
  if (command == "criteria") return run_criteria(config, sink);
  if (command == "capacity") return run_capacity(config, sink);
  throw Error(ErrorCode::ConfigError, "unknown subcommand '" + command + "'");
}

}  // namespace compop
