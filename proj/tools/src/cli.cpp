#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crpsbin/baseline.hpp"
#include "crpsbin/conformal.hpp"
#include "crpsbin/cost_matrix.hpp"
#include "crpsbin/dataset.hpp"
#include "crpsbin/error.hpp"
#include "crpsbin/experiments.hpp"
#include "crpsbin/model_io.hpp"
#include "crpsbin/model_select.hpp"
#include "crpsbin/parallel.hpp"

#ifndef CRPSBIN_DATA_DIR
#define CRPSBIN_DATA_DIR "data"
#endif

namespace crpsbin::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kFormatVersion = 1;
constexpr int kExitError = 2;

struct Global {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string mem_cap = "2G";
};

struct DataSpec {
  std::string path;
  std::string x_col = "x";
  std::string y_col = "y";
  std::string simulate;
  std::size_t n = 1000;
};

struct SearchFlags {
  std::size_t grid_points = 4096;
  double range_multiplier = 1.0;

  SearchConfig config() const {
    SearchConfig s;
    s.grid_points = grid_points;
    s.range_multiplier = range_multiplier;
    return s;
  }
};

std::size_t parse_mem_cap(const std::string& text) {
  if (text.empty()) throw Error(Errc::invalid_argument, "empty --mem-cap");
  std::size_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr == first) {
    throw Error(Errc::invalid_argument, "bad --mem-cap '" + text + "'");
  }
  std::size_t shift = 0;
  if (ptr != last) {
    const std::string suffix(ptr, last);
    if (suffix == "K" || suffix == "k") shift = 10;
    else if (suffix == "M" || suffix == "m") shift = 20;
    else if (suffix == "G" || suffix == "g") shift = 30;
    else throw Error(Errc::invalid_argument, "bad --mem-cap suffix '" + suffix + "'");
  }
  return value << shift;
}

void add_global(CLI::App& app, Global& g) {
  app.add_option("--seed", g.seed, "Base RNG seed")->capture_default_str();
  app.add_option("--threads", g.threads,
                 "Worker threads; 0 uses CRPSBIN_THREADS or the hardware count")
      ->capture_default_str();
  app.add_option("--mem-cap", g.mem_cap,
                 "Cost-table memory cap, bytes with optional K/M/G suffix; larger n is "
                 "refused with the largest n that fits")
      ->capture_default_str();
}

void add_data(CLI::App& cmd, DataSpec& d) {
  cmd.add_option("--data", d.path, "CSV file with a header row");
  cmd.add_option("--x", d.x_col, "Covariate column")->capture_default_str();
  cmd.add_option("--y", d.y_col, "Response column")->capture_default_str();
  cmd.add_option("--simulate", d.simulate, "Generator instead of a file")
      ->check(CLI::IsMember({"hetero"}));
  cmd.add_option("--n", d.n, "Sample size for --simulate")->capture_default_str();
}

void add_search(CLI::App& cmd, SearchFlags& s) {
  cmd.add_option("--grid-points", s.grid_points, "Candidate grid size")->capture_default_str();
  cmd.add_option("--range-mult", s.range_multiplier,
                 "Grid padding as a multiple of the atom range")
      ->capture_default_str();
}

SortedDataset load_data(const DataSpec& d, std::uint64_t seed) {
  if (!d.simulate.empty()) return gen_heteroscedastic(d.n, RngSeed{seed});
  if (d.path.empty()) throw Error(Errc::invalid_argument, "one of --data or --simulate is required");
  return load_csv(d.path, d.x_col, d.y_col);
}

json data_json(const DataSpec& d) {
  if (!d.simulate.empty()) return {{"simulate", d.simulate}, {"n", d.n}};
  return {{"path", d.path}, {"x", d.x_col}, {"y", d.y_col}};
}

json base_config(const std::string& command, const Global& g, int threads, std::size_t cap) {
  return {{"command", command},
          {"seed", g.seed},
          {"threads", threads},
          {"mem_cap_bytes", cap},
          {"build", std::string(build_version())},
          {"rng", std::string(Rng::kName)}};
}

json search_json(const SearchFlags& s) {
  return {{"grid_points", s.grid_points}, {"range_multiplier", s.range_multiplier}, {"rel_tol", 1e-9}};
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error(Errc::io_error, "cannot write " + path.string());
  f << std::setprecision(std::numeric_limits<double>::max_digits10);
  return f;
}

// CSV outputs start with two comment lines carrying the format version and
// the effective config.
void write_csv_preamble(std::ostream& f, const json& config) {
  f << "# format_version: " << kFormatVersion << "\n# config: " << config.dump() << '\n';
}

void validate_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw Error(Errc::invalid_epsilon, "epsilon must lie in (0, 1), got " + std::to_string(eps));
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

std::string fixed(double v, int digits) {
  if (std::isnan(v)) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::vector<double> read_column(const fs::path& path, const std::string& column) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::missing_file, "cannot open " + path.string());
  std::string line;
  if (!std::getline(f, line)) throw Error(Errc::empty_input, path.string() + " is empty");
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(s);
    while (std::getline(in, cell, ',')) {
      cell.erase(std::remove(cell.begin(), cell.end(), '"'), cell.end());
      cell.erase(std::remove(cell.begin(), cell.end(), '\r'), cell.end());
      cells.push_back(cell);
    }
    return cells;
  };
  const auto header = split(line);
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) {
    throw Error(Errc::missing_column, "column '" + column + "' not in " + path.string());
  }
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    double v = 0.0;
    const std::string& cell = col < cells.size() ? cells[col] : std::string();
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
      throw Error(Errc::unparseable_cell, path.string() + " row " + std::to_string(row) +
                                              ": cannot parse '" + cell + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw Error(Errc::empty_input, path.string() + " has no rows");
  return values;
}

// ---------------------------------------------------------------------------

int cmd_select_k(const Global& g, const DataSpec& d, std::optional<std::size_t> k_max,
                 std::size_t m_min, const std::string& out_path, std::ostream& out) {
  const int threads = resolve_threads(g.threads);
  const std::size_t cap = parse_mem_cap(g.mem_cap);
  const SortedDataset ds = load_data(d, g.seed);

  SelectOptions opts;
  opts.K_max_override = k_max;
  opts.m_min = m_min;
  opts.memory_cap_bytes = cap;
  opts.threads = threads;
  const KSelection sel = select_k(ds, opts);

  json config = base_config("select-k", g, threads, cap);
  config["data"] = data_json(d);
  config["m_min"] = m_min;
  config["K_max"] = sel.kcurve.K_max;
  auto f = open_out(out_path);
  write_csv_preamble(f, config);
  write_curve_csv(f, sel);

  out << "K* = " << sel.kcurve.K_star << '\n';
  return 0;
}

int cmd_fit(const Global& g, const DataSpec& d, std::optional<std::size_t> K, bool auto_k,
            std::size_t m_min, bool exact, const std::string& out_path, std::ostream& out) {
  const int threads = resolve_threads(g.threads);
  const std::size_t cap = parse_mem_cap(g.mem_cap);
  if (K.has_value() == auto_k) throw Error(Errc::invalid_argument, "give exactly one of --K or --auto-k");
  const SortedDataset ds = load_data(d, g.seed);

  std::size_t k = K.value_or(0);
  if (auto_k) {
    SelectOptions sel;
    sel.m_min = m_min;
    sel.with_loo_curve = false;
    sel.memory_cap_bytes = cap;
    sel.threads = threads;
    k = select_k(ds, sel).kcurve.K_star;
  }
  FitOptions opts;
  opts.m_min = m_min;
  opts.exact_mode = exact;
  opts.memory_cap_bytes = cap;
  opts.threads = threads;
  const FittedModel model = fit(ds, k, opts);

  json config = base_config("fit", g, threads, cap);
  config["data"] = data_json(d);
  config["K"] = k;
  config["auto_k"] = auto_k;
  config["m_min"] = m_min;
  config["exact_mode"] = exact;
  save_model(out_path, model, config.dump());

  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "K = " << model.K() << '\n';
  out << "boundaries:";
  for (double b : model.x_boundaries) out << ' ' << b;
  out << "\nbin sizes:";
  for (const auto& bin : model.bins) out << ' ' << bin.m();
  out << "\ntotal cost = " << model.total_cost << '\n';
  return 0;
}

struct PredictFlags {
  std::string model;
  std::vector<double> xs;
  std::string x_file;
  std::string x_col = "x";
  std::string y_col;
  double epsilon = 0.1;
  std::string score = "crps";
  std::size_t k = 1;
  std::string out = "-";
  std::vector<std::string> pcurve;
  SearchFlags search;
};

int cmd_predict(const Global& g, const PredictFlags& p, std::ostream& out) {
  validate_epsilon(p.epsilon);
  const Score score = p.score == "knn" ? Score::knn(p.k) : Score::crps();
  const FittedModel model = load_model(p.model);
  const SearchConfig search = p.search.config();

  std::vector<double> xs = p.xs;
  std::vector<std::optional<double>> ys(xs.size());
  if (!p.x_file.empty()) {
    const auto file_x = read_column(p.x_file, p.x_col);
    xs.insert(xs.end(), file_x.begin(), file_x.end());
    if (!p.y_col.empty()) {
      const auto file_y = read_column(p.x_file, p.y_col);
      ys.insert(ys.end(), file_y.begin(), file_y.end());
    } else {
      ys.resize(xs.size());
    }
  }
  if (xs.empty() && p.pcurve.empty()) throw Error(Errc::invalid_argument, "no x* given");

  json config = base_config("predict", g, 1, 0);
  config.erase("mem_cap_bytes");
  config["model"] = p.model;
  config["epsilon"] = p.epsilon;
  config["score"] = score.name();
  config["search"] = search_json(p.search);

  std::ofstream file;
  std::ostream* sink = &out;
  if (p.out != "-") {
    file = open_out(p.out);
    sink = &file;
  }
  std::ostream& o = *sink;
  const auto old_precision = o.precision(std::numeric_limits<double>::max_digits10);
  if (!xs.empty()) {
    // Sets depend only on the bin, so each is computed once.
    std::vector<std::optional<PredictionSet>> cache(model.K());
    std::vector<std::size_t> bins(xs.size());
    std::size_t width = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      bins[i] = locate_bin(model, xs[i]);
      auto& set = cache[bins[i]];
      if (!set) set = prediction_set(model.bins[bins[i]], p.epsilon, score, search);
      width = std::max(width, set->intervals.size());
    }
    const bool observed = !p.y_col.empty();
    write_csv_preamble(o, config);
    o << "x_star,bin,whole_line";
    for (std::size_t j = 1; j <= width; ++j) o << ",lo_" << j << ",hi_" << j;
    if (observed) o << ",p_of_observed";
    o << '\n';
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const PredictionSet& set = *cache[bins[i]];
      o << xs[i] << ',' << bins[i] + 1 << ',' << (set.whole_line ? 1 : 0);
      for (std::size_t j = 0; j < width; ++j) {
        if (j < set.intervals.size()) {
          o << ',' << set.intervals[j].lo << ',' << set.intervals[j].hi;
        } else {
          o << ",,";
        }
      }
      if (observed) o << ',' << (ys[i] ? fmt(p_value(model.bins[bins[i]], *ys[i], score)) : "");
      o << '\n';
    }
  }
  o.precision(old_precision);

  if (!p.pcurve.empty()) {
    double x_star = 0.0;
    const std::string& xs_text = p.pcurve[0];
    auto [ptr, ec] = std::from_chars(xs_text.data(), xs_text.data() + xs_text.size(), x_star);
    if (ec != std::errc() || ptr != xs_text.data() + xs_text.size()) {
      throw Error(Errc::invalid_argument, "bad --pcurve x* '" + xs_text + "'");
    }
    const Bin& bin = model.bins[locate_bin(model, x_star)];
    double span = bin.max() - bin.min();
    if (span == 0.0) span = std::max(std::abs(bin.min()), 1.0);
    const double lo = bin.min() - search.range_multiplier * span;
    const double hi = bin.max() + search.range_multiplier * span;
    auto f = open_out(p.pcurve[1]);
    json pc = config;
    pc["pcurve_x_star"] = x_star;
    write_csv_preamble(f, pc);
    f << "y,p_value\n";
    const std::size_t pts = std::max<std::size_t>(search.grid_points, 2);
    for (std::size_t i = 0; i < pts; ++i) {
      const double y = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(pts - 1);
      f << y << ',' << p_value(bin, y, score) << '\n';
    }
  }
  return 0;
}

struct ReproduceFlags {
  std::string study;
  std::optional<std::size_t> R;
  std::vector<double> epsilons;
  std::size_t m = 50;
  std::size_t m_test = 500;
  std::size_t seeds = 20;
  std::size_t n_train = 1000;
  std::size_t n_test = 2000;
  std::optional<std::size_t> k_max;
  std::string data;
  std::string out_dir = ".";
  SearchFlags search;
};

void print_rows(std::ostream& out, const StudyResult& r) {
  out << std::left << std::setw(22) << "method" << std::setw(8) << "eps" << std::setw(18)
      << "coverage %" << "mean measure\n";
  for (const auto& row : r.rows) {
    out << std::setw(22) << row.method << std::setw(8) << fixed(row.epsilon, 2);
    if (row.status != "ok") {
      out << row.status << '\n';
      continue;
    }
    out << std::setw(18)
        << (fixed(100.0 * row.coverage, 1) + " +/- " + fixed(100.0 * row.se_coverage, 1))
        << fixed(row.mean_measure, 3) << " +/- " << fixed(row.se_measure, 3);
    if (row.n_wholeline > 0) out << "  (whole line: " << row.n_wholeline << ')';
    out << '\n';
  }
  out << std::right;
}

int cmd_reproduce(const Global& g, const ReproduceFlags& f, std::ostream& out) {
  static const std::vector<std::string> studies{"bimodal", "hetero-coverage", "faithful", "mcycle"};
  if (std::find(studies.begin(), studies.end(), f.study) == studies.end()) {
    throw Error(Errc::unknown_study, "unknown study '" + f.study +
                                         "'; expected bimodal, hetero-coverage, faithful or mcycle");
  }
  const int threads = resolve_threads(g.threads);
  const std::size_t cap = parse_mem_cap(g.mem_cap);
  for (double e : f.epsilons) validate_epsilon(e);

  StudyOptions opts;
  opts.search = f.search.config();
  opts.threads = threads;
  const RngSeed seed{g.seed};

  json config = base_config("reproduce", g, threads, cap);
  config["study"] = f.study;
  config["search"] = search_json(f.search);

  const fs::path dir(f.out_dir);
  StudyResult result;
  std::optional<HeteroResult> hetero;
  if (f.study == "bimodal") {
    const std::size_t R = f.R.value_or(500);
    const double eps = f.epsilons.empty() ? 0.10 : f.epsilons.front();
    config.update({{"R", R}, {"m", f.m}, {"m_test", f.m_test}, {"epsilon", eps}});
    result = bimodal_study(R, f.m, f.m_test, eps, seed, opts);
  } else if (f.study == "hetero-coverage") {
    HeteroOptions h;
    h.n_train = f.n_train;
    h.n_test = f.n_test;
    h.seeds = f.seeds;
    h.K_max_override = f.k_max;
    if (!f.epsilons.empty()) h.epsilons = f.epsilons;
    config.update({{"n_train", h.n_train}, {"n_test", h.n_test}, {"seeds", h.seeds},
                   {"epsilons", h.epsilons}});
    if (h.K_max_override) config["K_max"] = *h.K_max_override;
    hetero = hetero_coverage_study(h, seed, opts);
    result = hetero->summary;
  } else {
    const bool faithful = f.study == "faithful";
    const fs::path path = !f.data.empty() ? fs::path(f.data)
                                          : fs::path(CRPSBIN_DATA_DIR) /
                                                (faithful ? "faithful.csv" : "mcycle.csv");
    const SortedDataset ds = faithful ? load_csv(path, "waiting", "eruptions")
                                      : load_csv(path, "times", "accel");
    const std::size_t R = f.R.value_or(200);
    const double eps = f.epsilons.empty() ? 0.10 : f.epsilons.front();
    config.update({{"R", R}, {"epsilon", eps}, {"data", path.string()}});
    result = realdata_run(f.study, ds, R, eps, seed, opts);
  }

  const fs::path csv_path = dir / (f.study + "_results.csv");
  {
    auto csv = open_out(csv_path);
    write_csv_preamble(csv, config);
    write_results_csv(csv, result);
  }
  if (hetero) {
    auto csv = open_out(dir / (f.study + "_per_seed.csv"));
    write_csv_preamble(csv, config);
    csv << "seed_index,K_star,epsilon,coverage,mean_measure,n_wholeline\n";
    for (std::size_t s = 0; s < hetero->per_seed.size(); ++s) {
      for (const auto& row : hetero->per_seed[s]) {
        csv << s << ',' << result.k_star[s] << ',' << row.epsilon << ',' << row.coverage << ','
            << row.mean_measure << ',' << row.n_wholeline << '\n';
      }
    }
  }
  {
    auto js = open_out(dir / (f.study + "_summary.json"));
    js << summary_json(result, config.dump()) << '\n';
  }

  out << f.study << " (seed " << g.seed << ", replications " << result.replications << ")\n";
  if (!result.k_star.empty()) {
    std::size_t lo = *std::min_element(result.k_star.begin(), result.k_star.end());
    std::size_t hi = *std::max_element(result.k_star.begin(), result.k_star.end());
    out << "K* range over replications: " << lo << ".." << hi << '\n';
  }
  for (const auto& [k, v] : result.extras) out << k << " = " << fmt(v) << '\n';
  print_rows(out, result);
  out << "wrote " << csv_path.string() << '\n';
  return 0;
}

struct DiagnoseFlags {
  std::size_t exhaustive_limit = 60;
  std::size_t samples = 200000;
  std::size_t max_reports = 10;
  bool exhaustive = false;
  std::optional<std::size_t> k_max;
  std::string out = "diagnose_curve.csv";
};

int cmd_diagnose(const Global& g, const DataSpec& d, const DiagnoseFlags& f, std::ostream& out) {
  const int threads = resolve_threads(g.threads);
  const std::size_t cap = parse_mem_cap(g.mem_cap);
  const SortedDataset ds = load_data(d, g.seed);
  if (f.exhaustive && ds.size() > f.exhaustive_limit) {
    throw Error(Errc::capacity_exceeded,
                "exhaustive quadrangle probe is capped at n = " + std::to_string(f.exhaustive_limit) +
                    ", got n = " + std::to_string(ds.size()));
  }

  PrecomputeOptions pre;
  pre.memory_cap_bytes = cap;
  pre.threads = threads;
  const CostMatrix cm = precompute(ds, pre);
  QuadrangleOptions qo;
  qo.exhaustive_limit = f.exhaustive_limit;
  qo.samples = f.samples;
  qo.seed = RngSeed{g.seed};
  const QuadrangleReport rep = check_quadrangle(cm, f.max_reports, qo);

  out << "quadrangle violations: " << rep.violations << " of " << rep.quadruples_checked << ' '
      << (rep.exhaustive ? "exhaustive" : "sampled") << " quadruples (tolerance "
      << fmt(rep.tolerance) << ")\n";
  for (const auto& v : rep.reported) {
    out << "  a=" << v.a << " b=" << v.b << " c=" << v.c << " d=" << v.d << " gap=" << fmt(v.gap)
        << '\n';
  }

  if (ds.size() < 20) {
    out << "curve skipped: K selection needs n >= 20\n";
    return 0;
  }
  SelectOptions sel;
  sel.K_max_override = f.k_max;
  sel.memory_cap_bytes = cap;
  sel.threads = threads;
  const KSelection ks = select_k(ds, sel);
  bool monotone = true;
  for (std::size_t i = 1; i < ks.loo.entries.size(); ++i) {
    const double a = ks.loo.entries[i - 1].dp_total;
    const double b = ks.loo.entries[i].dp_total;
    if (std::isfinite(a) && std::isfinite(b) && b > a) monotone = false;
  }

  json config = base_config("diagnose", g, threads, cap);
  config["data"] = data_json(d);
  config["quadrangle"] = {{"exhaustive_limit", f.exhaustive_limit}, {"samples", f.samples},
                          {"exhaustive", rep.exhaustive}, {"violations", rep.violations},
                          {"checked", rep.quadruples_checked}};
  config["K_max"] = ks.kcurve.K_max;
  auto csv = open_out(f.out);
  write_csv_preamble(csv, config);
  write_curve_csv(csv, ks);

  out << "K* = " << ks.kcurve.K_star << '\n';
  out << "loo curve monotone: " << (monotone ? "yes" : "no") << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CRPS-optimal binning with conformal prediction sets", "crpsbin"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(build_version()));

  Global g;
  add_global(app, g);

  DataSpec sel_data;
  std::optional<std::size_t> sel_kmax;
  std::size_t sel_mmin = 2;
  std::string sel_out = "kcurve.csv";
  auto* sel = app.add_subcommand("select-k", "Choose K by held-out CRPS on an alternating split");
  add_data(*sel, sel_data);
  sel->add_option("--K-max", sel_kmax, "Largest K tried");
  sel->add_option("--m-min", sel_mmin, "Smallest bin size")->capture_default_str();
  sel->add_option("--out", sel_out, "Curve CSV")->capture_default_str();

  DataSpec fit_data;
  std::optional<std::size_t> fit_k;
  bool fit_auto = false;
  bool fit_exact = false;
  std::size_t fit_mmin = 2;
  std::string fit_out = "model.json";
  auto* fitc = app.add_subcommand("fit", "Fit the optimal K-bin model and save it");
  add_data(*fitc, fit_data);
  fitc->add_option("--K", fit_k, "Number of bins");
  fitc->add_flag("--auto-k", fit_auto, "Select K first");
  fitc->add_flag("--exact", fit_exact, "Fixed-point dispersion sums");
  fitc->add_option("--m-min", fit_mmin, "Smallest bin size")->capture_default_str();
  fitc->add_option("--out", fit_out, "Model JSON")->capture_default_str();

  PredictFlags pf;
  auto* pred = app.add_subcommand("predict", "Conformal prediction sets from a saved model");
  pred->add_option("--model", pf.model, "Model JSON")->required();
  pred->add_option("--x-star", pf.xs, "Covariate values");
  pred->add_option("--x-file", pf.x_file, "CSV with covariate values");
  pred->add_option("--x-col", pf.x_col, "Covariate column of --x-file")->capture_default_str();
  pred->add_option("--y-col", pf.y_col, "Observed responses in --x-file, for p-values");
  pred->add_option("--eps", pf.epsilon, "Miscoverage level")->capture_default_str();
  pred->add_option("--score", pf.score, "Nonconformity score")
      ->check(CLI::IsMember({"crps", "knn"}))
      ->capture_default_str();
  pred->add_option("--k", pf.k, "Neighbour rank for --score knn")->capture_default_str();
  pred->add_option("--out", pf.out, "Output CSV, - for stdout")->capture_default_str();
  pred->add_option("--pcurve", pf.pcurve, "Dump the p-value curve: x_star out.csv")
      ->expected(2);
  add_search(*pred, pf.search);

  ReproduceFlags rf;
  auto* rep = app.add_subcommand("reproduce", "Run one of the studies");
  rep->add_option("study", rf.study, "bimodal, hetero-coverage, faithful or mcycle")->required();
  rep->add_option("--R", rf.R, "Replications");
  rep->add_option("--eps", rf.epsilons, "Miscoverage level(s)");
  rep->add_option("--m", rf.m, "Bimodal training size")->capture_default_str();
  rep->add_option("--m-test", rf.m_test, "Bimodal test size")->capture_default_str();
  rep->add_option("--seeds", rf.seeds, "Heteroscedastic seeds")->capture_default_str();
  rep->add_option("--n-train", rf.n_train, "Heteroscedastic training size")->capture_default_str();
  rep->add_option("--n-test", rf.n_test, "Heteroscedastic test size")->capture_default_str();
  rep->add_option("--K-max", rf.k_max, "Largest K tried");
  rep->add_option("--data", rf.data, "Override the bundled data file");
  rep->add_option("--out-dir", rf.out_dir, "Output directory")->capture_default_str();
  add_search(*rep, rf.search);

  DataSpec diag_data;
  DiagnoseFlags df;
  auto* diag = app.add_subcommand("diagnose", "Quadrangle probe and LOO/test curves");
  add_data(*diag, diag_data);
  diag->add_option("--exhaustive-limit", df.exhaustive_limit, "Largest n probed exhaustively")
      ->capture_default_str();
  diag->add_option("--samples", df.samples, "Sampled quadruples above the limit")
      ->capture_default_str();
  diag->add_option("--max-reports", df.max_reports, "Violations listed")->capture_default_str();
  diag->add_flag("--exhaustive", df.exhaustive, "Refuse to sample");
  diag->add_option("--K-max", df.k_max, "Largest K tried");
  diag->add_option("--out", df.out, "Curve CSV")->capture_default_str();

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("crpsbin");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitError;
  }

  try {
    if (sel->parsed()) return cmd_select_k(g, sel_data, sel_kmax, sel_mmin, sel_out, out);
    if (fitc->parsed()) {
      return cmd_fit(g, fit_data, fit_k, fit_auto, fit_mmin, fit_exact, fit_out, out);
    }
    if (pred->parsed()) return cmd_predict(g, pf, out);
    if (rep->parsed()) return cmd_reproduce(g, rf, out);
    if (diag->parsed()) return cmd_diagnose(g, diag_data, df, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace crpsbin::cli
