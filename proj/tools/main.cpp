#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sparsegf2/core.hpp"
#include "sparsegf2/errors.hpp"
#include "sparsegf2/exact.hpp"
#include "sparsegf2/experiments.hpp"
#include "sparsegf2/gf2.hpp"
#include "sparsegf2/json_io.hpp"
#include "sparsegf2/sampler.hpp"
#include "sparsegf2/thresholds.hpp"
#include "sparsegf2/verify.hpp"

using namespace sparsegf2;
using nlohmann::json;

namespace {

enum Exit { ok = 0, failure = 1, parse_error = 2, verify_failed = 3, precision_failed = 4 };

// Output sink: stdout unless --out was given.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidParam("cannot open '" + path + "' for writing");
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::string fmt(double v, const char* spec = "%.17g") {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Header line for CSV and matrix text: one '#' comment carrying the JSON header.
void comment_header(std::ostream& os, const std::string& cmd, const json& cfg) {
  os << "# " << output_header(cmd, cfg).dump() << "\n";
}

long rows_for(long n, std::optional<long> m, std::optional<double> alpha) {
  if (m && alpha) throw InvalidParam("give either --m or --alpha, not both");
  if (m) return *m;
  if (alpha) return static_cast<long>(std::floor(*alpha * static_cast<double>(n)));
  throw InvalidParam("one of --m or --alpha is required");
}

GF2Matrix load_matrix(const std::string& path) {
  std::ifstream file;
  std::istream* is = &std::cin;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) throw InvalidParam("cannot open '" + path + "'");
    is = &file;
  }
  std::stringstream buf;
  buf << is->rdbuf();
  const std::string text = buf.str();
  const auto fmt = text.rfind("# gf2 sparse", 0) == 0 ? MatrixFormat::sparse : MatrixFormat::dense;
  std::istringstream in(text);
  return read_matrix(in, fmt);
}

struct Common {
  std::string rho = "r=3";
  std::string model = "exact";
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
  int threads = 0;
  unsigned bits = kDefaultPrecisionBits;
};

void print_verify_text(std::ostream& os, const VerifyReport& rep) {
  for (const auto& c : rep.checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name << ": expected " << c.expected << ", got " << c.got;
    if (c.tol > 0) os << " (|diff| " << fmt(c.abs_err, "%.2g") << ", tol " << fmt(c.tol, "%.2g") << ")";
    os << "\n";
  }
  os << rep.suite << ": " << rep.checks.size() - rep.failures() << "/" << rep.checks.size() << " checks passed in "
     << fmt(rep.seconds, "%.2f") << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse random GF(2) matrices: thresholds, exact formulas and simulations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  // thresholds
  Common th;
  bool table1 = false;
  std::optional<double> witness_alpha;
  auto* c_th = app.add_subcommand("thresholds", "Threshold report for a row-weight law");
  c_th->add_option("--rho", th.rho, "Weight law: r=K or p:k,p:k,...")->capture_default_str();
  c_th->add_flag("--table1", table1, "Fixed-weight thresholds for r = 1..8");
  c_th->add_option("--witness-alpha", witness_alpha, "Alpha at which gamma0 and beta0 are reported (default alpha*)");
  c_th->add_option("--format", th.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  c_th->add_option("--bits", th.bits, "Precision for --table1 values")->capture_default_str();
  c_th->add_option("--out", th.out, "Output file (default stdout)");

  // curves
  Common cv;
  std::string what = "h,psi,gstar,psi_of_gstar";
  int points = 1000;
  double x_min = 0, x_max = 1, a_min = 0, a_max = 1;
  auto* c_cv = app.add_subcommand("curves", "CSV of h, psi, g* and psi(g*)");
  c_cv->add_option("--rho", cv.rho, "Weight law")->capture_default_str();
  c_cv->add_option("--what", what, "Comma list from h, psi, gstar, psi_of_gstar")->capture_default_str();
  c_cv->add_option("--points", points, "Grid points per curve family")->check(CLI::Range(2, 10000000))->capture_default_str();
  c_cv->add_option("--x-min", x_min, "x range start (exclusive when 0)")->capture_default_str();
  c_cv->add_option("--x-max", x_max, "x range end (exclusive when 1)")->capture_default_str();
  c_cv->add_option("--alpha-min", a_min, "alpha range start")->capture_default_str();
  c_cv->add_option("--alpha-max", a_max, "alpha range end")->capture_default_str();
  c_cv->add_option("--out", cv.out, "Output file (default stdout)");

  // sample
  Common sm;
  long n = 0;
  std::optional<long> m;
  std::optional<double> alpha;
  std::string mformat = "sparse";
  auto* c_sm = app.add_subcommand("sample", "Draw one random matrix");
  c_sm->add_option("--rho", sm.rho, "Weight law")->capture_default_str();
  c_sm->add_option("--n", n, "Columns")->required()->check(CLI::PositiveNumber);
  c_sm->add_option("--m", m, "Rows");
  c_sm->add_option("--alpha", alpha, "Rows as floor(alpha n)");
  c_sm->add_option("--model", sm.model, "exact or binomial")->capture_default_str();
  c_sm->add_option("--seed", sm.seed, "RNG seed")->capture_default_str();
  c_sm->add_option("--format", mformat, "sparse or dense")->check(CLI::IsMember({"sparse", "dense"}))->capture_default_str();
  c_sm->add_option("--out", sm.out, "Output file (default stdout)");

  // rank
  std::string in_path;
  bool with_null = false;
  Common rk;
  auto* c_rk = app.add_subcommand("rank", "Rank and corank of a matrix file");
  c_rk->add_option("--in", in_path, "Matrix file, '-' for stdin")->capture_default_str();
  c_rk->add_flag("--null", with_null, "Also enumerate null vectors (at most 24 rows)");
  c_rk->add_option("--out", rk.out, "Output file (default stdout)");

  // core
  Common co;
  std::string order = "fifo";
  bool with_edges = false, with_trace = false;
  long core_n = 0;
  std::optional<long> core_m;
  std::optional<double> core_alpha;
  std::string core_in;
  auto* c_co = app.add_subcommand("core", "2-core of a matrix, with the limiting prediction when rho is known");
  c_co->add_option("--in", core_in, "Matrix file; otherwise a matrix is sampled");
  c_co->add_option("--rho", co.rho, "Weight law (for sampling and theory)")->capture_default_str();
  c_co->add_option("--n", core_n, "Columns when sampling");
  c_co->add_option("--m", core_m, "Rows when sampling");
  c_co->add_option("--alpha", core_alpha, "Rows as floor(alpha n) when sampling");
  c_co->add_option("--model", co.model, "exact or binomial")->capture_default_str();
  c_co->add_option("--seed", co.seed, "RNG seed (sampling and random order)")->capture_default_str();
  c_co->add_option("--order", order, "fifo, lifo or random")->check(CLI::IsMember({"fifo", "lifo", "random"}))->capture_default_str();
  c_co->add_flag("--edges", with_edges, "List the rows that survive");
  c_co->add_flag("--trace", with_trace, "Record (rows, occupied columns) after every deletion");
  c_co->add_option("--out", co.out, "Output file (default stdout)");

  // tn
  Common tn;
  long tn_n = 0, tn_trials = 100;
  auto* c_tn = app.add_subcommand("tn", "First dependency time, one CSV row per trial");
  c_tn->add_option("--rho", tn.rho, "Weight law")->capture_default_str();
  c_tn->add_option("--n", tn_n, "Columns")->required()->check(CLI::PositiveNumber);
  c_tn->add_option("--trials", tn_trials, "Trials")->check(CLI::PositiveNumber)->capture_default_str();
  c_tn->add_option("--model", tn.model, "exact or binomial")->capture_default_str();
  c_tn->add_option("--seed", tn.seed, "Base seed; trial t uses seed xor t")->capture_default_str();
  c_tn->add_option("--threads", tn.threads, "Worker threads (0 = all cores)")->capture_default_str();
  c_tn->add_option("--out", tn.out, "Output file (default stdout)");

  // exact
  Common ex;
  std::string ex_what;
  long ex_n = 0, ex_m = 0;
  double mu = 1.0;
  std::optional<long> trunc;
  long q = 2, r = 1, k = 1;
  std::optional<long> gfq_n;
  std::vector<int> targets;
  std::vector<std::string> probs;
  bool force_rational = false, profile = false;
  double rel_tol = 1e-15;
  unsigned max_bits = 1u << 16;
  auto* c_ex = app.add_subcommand("exact", "Exact formulas");
  c_ex->add_option("--what", ex_what, "pi, pa, en, poisson, parity or gfq")
      ->required()
      ->check(CLI::IsMember({"pi", "pa", "en", "poisson", "parity", "gfq"}));
  c_ex->add_option("--rho", ex.rho, "Weight law")->capture_default_str();
  c_ex->add_option("--n", ex_n, "Columns (parity: trials)");
  c_ex->add_option("--m", ex_m, "Rows");
  c_ex->add_option("--model", ex.model, "exact or binomial (pa, en)")->capture_default_str();
  c_ex->add_option("--bits", ex.bits, "Starting precision in bits")->capture_default_str();
  c_ex->add_option("--max-bits", max_bits, "Largest precision tried")->capture_default_str();
  c_ex->add_option("--rel-tol", rel_tol, "Relative accuracy required")->capture_default_str();
  c_ex->add_flag("--rational", force_rational, "Exact rational arithmetic (small instances)");
  c_ex->add_flag("--profile", profile, "en: include the per-size profile");
  c_ex->add_option("--mu", mu, "poisson: Poisson mean")->capture_default_str();
  c_ex->add_option("--trunc", trunc, "poisson: truncation point");
  c_ex->add_option("--q", q, "gfq: field size")->capture_default_str();
  c_ex->add_option("--r", r, "gfq: rank deficit; parity: modulus")->capture_default_str();
  c_ex->add_option("--k", k, "parity: number of events")->capture_default_str();
  c_ex->add_option("--targets", targets, "parity: target residues")->delimiter(',');
  c_ex->add_option("--probs", probs, "parity: 2^k cell probabilities (decimal or p/q)")->delimiter(',');
  c_ex->add_option("--gfq-n", gfq_n, "gfq: finite n instead of the limit");
  c_ex->add_option("--out", ex.out, "Output file (default stdout)");

  // simulate
  Common si;
  std::string exp_id;
  std::vector<long> n_list;
  std::vector<double> alpha_list;
  long si_trials = 100;
  double eps = 0.02, core_eps = 0.05, z = 1.0;
  bool dense = false;
  std::string csv_out;
  long rank_max = 2000;
  auto* c_si = app.add_subcommand("simulate", "Monte Carlo experiments");
  c_si->add_option("--exp", exp_id, "tn, core, null-growth, classical or profile")
      ->required()
      ->check(CLI::IsMember({"tn", "core", "null-growth", "classical", "profile"}));
  c_si->add_option("--rho", si.rho, "Weight law")->capture_default_str();
  c_si->add_option("--n", n_list, "Column counts")->delimiter(',');
  c_si->add_option("--alpha", alpha_list, "Row densities")->delimiter(',');
  c_si->add_option("--trials", si_trials, "Trials per cell")->capture_default_str();
  c_si->add_option("--model", si.model, "exact or binomial")->capture_default_str();
  c_si->add_option("--seed", si.seed, "Base seed")->capture_default_str();
  c_si->add_option("--threads", si.threads, "Worker threads (0 = all cores)")->capture_default_str();
  c_si->add_option("--eps", eps, "tn: window margin")->capture_default_str();
  c_si->add_option("--core-eps", core_eps, "core: epsilon of the large-core event")->capture_default_str();
  c_si->add_option("--z", z, "classical: scale")->capture_default_str();
  c_si->add_flag("--dense", dense, "classical: dense GF(2) survival instead");
  c_si->add_option("--rank-check-max-n", rank_max, "core: rank cross-check up to this n")->capture_default_str();
  c_si->add_option("--format", si.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  c_si->add_option("--csv", csv_out, "Also write per-trial CSV records to this file");
  c_si->add_option("--out", si.out, "Output file (default stdout)");

  // verify
  std::string suite = "all";
  Common ve;
  ve.format = "text";
  auto* c_ve = app.add_subcommand("verify", "Check reference threshold values and oracle identities");
  c_ve->add_option("suite", suite, "table1, fig1, fig2, fig8, oracles, ehrenfest, asymptotics or all")
      ->check(CLI::IsMember(verify_suites()))
      ->capture_default_str();
  c_ve->add_option("--format", ve.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  c_ve->add_option("--out", ve.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return parse_error;
  }

  try {
    if (c_th->parsed()) {
      Sink sink(th.out);
      if (table1) {
        const json rows = table1_json(th.bits);
        if (th.format == "json") {
          json j = output_header("thresholds", {{"table1", true}, {"bits", th.bits}});
          j["table1"] = rows;
          sink.os() << j.dump(2) << "\n";
        } else {
          sink.os() << "r  alpha_sharp  alpha_star    alpha_bar\n";
          for (const auto& row : rows) {
            char line[160];
            std::snprintf(line, sizeof line, "%d  %.7f    %.10f  %s\n", row["r"].get<int>(),
                          row["alpha_sharp"]["value"].get<double>(), row["alpha_star"]["value"].get<double>(),
                          row["alpha_bar"].is_null() ? "—" : fmt(row["alpha_bar"]["value"].get<double>(), "%.7f").c_str());
            sink.os() << line;
          }
        }
        return ok;
      }
      const auto dist = parse_rho(th.rho);
      const auto rep = threshold_report(dist, witness_alpha);
      if (th.format == "json") {
        json cfg = {{"rho", th.rho}};
        if (witness_alpha) cfg["witness_alpha"] = *witness_alpha;
        json j = output_header("thresholds", cfg);
        j["report"] = to_json(rep);
        sink.os() << j.dump(2) << "\n";
      } else {
        auto& os = sink.os();
        os << "rho          " << dist.to_spec() << "\n";
        os << "alpha_sharp  " << fmt(rep.alpha_sharp) << (rep.sharp_at_zero ? " (approached as x -> 0)" : "") << "\n";
        os << "alpha_star   " << fmt(rep.alpha_star.value) << "\n";
        os << "alpha_bar    " << (rep.alpha_bar ? fmt(rep.alpha_bar->value) : std::string("—")) << "\n";
        if (rep.alpha_bar) os << "x_star       " << fmt(rep.alpha_bar->x_star) << "\n";
        for (const auto& d : rep.discontinuities)
          os << "g* jump at   " << fmt(d.alpha) << ": " << fmt(d.g_left) << " -> " << fmt(d.g_right) << "\n";
        for (double x : rep.psi_roots) os << "psi root     " << fmt(x) << "\n";
        if (!rep.sign_pattern.empty()) os << "psi(g*) sign " << rep.sign_pattern << "\n";
      }
      return ok;
    }

    if (c_cv->parsed()) {
      Sink sink(cv.out);
      const auto dist = parse_rho(cv.rho);
      std::vector<std::string> cols;
      {
        std::stringstream ss(what);
        std::string item;
        while (std::getline(ss, item, ',')) {
          if (item != "h" && item != "psi" && item != "gstar" && item != "psi_of_gstar")
            throw ParseError("unknown curve '" + item + "'");
          cols.push_back(item);
        }
      }
      auto wants = [&](const char* c) { return std::find(cols.begin(), cols.end(), c) != cols.end(); };
      const bool x_curves = wants("h") || wants("psi");
      const bool a_curves = wants("gstar") || wants("psi_of_gstar");
      if (!(0 <= x_min && x_min < x_max && x_max <= 1)) throw InvalidParam("need 0 <= x-min < x-max <= 1");
      if (!(a_min < a_max)) throw InvalidParam("need alpha-min < alpha-max");
      auto& os = sink.os();
      comment_header(os, "curves",
                     {{"rho", cv.rho}, {"what", what}, {"points", points}, {"x_range", {x_min, x_max}},
                      {"alpha_range", {a_min, a_max}}});
      os << "grid,arg,side";
      for (const char* c : {"h", "psi", "gstar", "psi_of_gstar"})
        if (wants(c)) os << "," << c;
      os << "\n";
      if (x_curves) {
        // endpoints 0 and 1 are excluded; the grid is shifted half a step inward there
        for (int i = 0; i < points; ++i) {
          double x = x_min + (x_max - x_min) * i / (points - 1);
          if (x <= 0) x = (x_max - x_min) / (2.0 * (points - 1));
          if (x >= 1) x = 1 - (x_max - x_min) / (2.0 * (points - 1));
          const auto v = h_psi(dist, x);
          os << "x," << fmt(x) << ",";
          if (wants("h")) os << "," << fmt(v.h);
          if (wants("psi")) os << "," << fmt(v.psi);
          if (wants("gstar")) os << ",";
          if (wants("psi_of_gstar")) os << ",";
          os << "\n";
        }
      }
      if (a_curves) {
        CurveAnalysis curves(dist);
        auto row = [&](double a, double g, const char* side) {
          os << "alpha," << fmt(a) << "," << side;
          if (wants("h")) os << ",";
          if (wants("psi")) os << ",";
          if (wants("gstar")) os << "," << fmt(g);
          if (wants("psi_of_gstar")) os << "," << (g > 0 && g < 1 ? fmt(h_psi(dist, g).psi) : std::string("nan"));
          os << "\n";
        };
        const auto& jumps = curves.discontinuities();
        std::size_t next = 0;
        for (int i = 0; i < points; ++i) {
          const double a = a_min + (a_max - a_min) * i / (points - 1);
          while (next < jumps.size() && jumps[next].alpha <= a) {
            const auto& d = jumps[next++];
            if (d.alpha < a_min) continue;
            row(d.alpha, d.g_left, "left");
            row(d.alpha, d.g_right, "right");
          }
          row(a, curves.g_star(a), "");
        }
      }
      return ok;
    }

    if (c_sm->parsed()) {
      Sink sink(sm.out);
      SampleConfig cfg;
      cfg.n = static_cast<int>(n);
      cfg.m = rows_for(n, m, alpha);
      cfg.dist = parse_rho(sm.rho);
      cfg.model = parse_model(sm.model);
      cfg.seed = sm.seed;
      const auto mat = sample_matrix(cfg);
      std::ostringstream body;
      write_matrix(body, mat, mformat == "sparse" ? MatrixFormat::sparse : MatrixFormat::dense);
      const json hdr = {{"rho", sm.rho}, {"n", n}, {"m", cfg.m}, {"model", sm.model}, {"seed", sm.seed}, {"format", mformat}};
      const std::string text = body.str();
      // the sparse header has to stay on the first line
      const auto eol = text.find('\n');
      if (mformat == "sparse" && eol != std::string::npos) {
        sink.os() << text.substr(0, eol + 1);
        comment_header(sink.os(), "sample", hdr);
        sink.os() << text.substr(eol + 1);
      } else {
        comment_header(sink.os(), "sample", hdr);
        sink.os() << text;
      }
      return ok;
    }

    if (c_rk->parsed()) {
      Sink sink(rk.out);
      const auto mat = load_matrix(in_path);
      RankState st(mat.n_cols());
      for (std::size_t i = 0; i < mat.n_rows(); ++i) st.absorb(mat.row(i));
      json j = output_header("rank", {{"in", in_path}, {"null", with_null}});
      j["n"] = mat.n_cols();
      j["m"] = mat.n_rows();
      j["rank"] = st.rank();
      j["corank"] = st.corank();
      if (with_null) {
        const auto ns = enumerate_null_vectors(mat);
        j["null_vectors"] = ns.vectors;
        j["weight_profile"] = ns.weight_profile;
      }
      sink.os() << j.dump(2) << "\n";
      return ok;
    }

    if (c_co->parsed()) {
      Sink sink(co.out);
      GF2Matrix mat(1);
      json cfg = {{"order", order}, {"seed", co.seed}};
      std::optional<WeightDist> dist;
      if (!core_in.empty()) {
        mat = load_matrix(core_in);
        cfg["in"] = core_in;
        if (c_co->count("--rho")) {
          dist = parse_rho(co.rho);
          cfg["rho"] = co.rho;
        }
      } else {
        if (core_n <= 0) throw InvalidParam("--n is required when sampling");
        SampleConfig sc;
        sc.n = static_cast<int>(core_n);
        sc.m = rows_for(core_n, core_m, core_alpha);
        dist = parse_rho(co.rho);
        sc.dist = *dist;
        sc.model = parse_model(co.model);
        sc.seed = co.seed;
        mat = sample_matrix(sc);
        cfg.update({{"rho", co.rho}, {"n", core_n}, {"m", sc.m}, {"model", co.model}});
      }
      const auto po = order == "fifo" ? PeelOrder::fifo : order == "lifo" ? PeelOrder::lifo : PeelOrder::random;
      const auto stats = peel_2core(Hypergraph::from_matrix(mat), po, co.seed, with_trace);
      json j = output_header("core", cfg);
      j["n"] = mat.n_cols();
      j["m"] = mat.n_rows();
      j["core"] = to_json(stats, with_edges);
      j["rows_exceed_cols"] = stats.core_rows > stats.occupied_cols;
      if (dist && mat.n_cols() > 0) {
        const double a = static_cast<double>(mat.n_rows()) / static_cast<double>(mat.n_cols());
        const auto th_core = core_theory(*dist, a);
        j["theory"] = to_json(th_core);
        const double nn = static_cast<double>(mat.n_cols());
        j["observed_fractions"] = {{"core_row_frac", stats.core_rows / nn},
                                   {"occupied_col_frac", stats.occupied_cols / nn},
                                   {"incidence_frac", stats.incidences / nn}};
      } else {
        j["theory"] = nullptr;
      }
      sink.os() << j.dump(2) << "\n";
      return ok;
    }

    if (c_tn->parsed()) {
      Sink sink(tn.out);
      SampleConfig base;
      base.n = static_cast<int>(tn_n);
      base.dist = parse_rho(tn.rho);
      base.model = parse_model(tn.model);
      std::vector<long> T(static_cast<std::size_t>(tn_trials));
      parallel_trials(tn_trials, tn.threads, [&](long t) {
        SampleConfig c = base;
        c.seed = trial_seed(tn.seed, static_cast<std::uint64_t>(t));
        T[static_cast<std::size_t>(t)] = run_Tn(c);
      });
      auto& os = sink.os();
      comment_header(os, "tn",
                     {{"rho", tn.rho}, {"n", tn_n}, {"trials", tn_trials}, {"model", tn.model}, {"seed", tn.seed},
                      {"rng", Xoshiro256::kName}});
      os << "trial,seed,T_n,n,T_n/n\n";
      for (long t = 0; t < tn_trials; ++t)
        os << t << "," << trial_seed(tn.seed, static_cast<std::uint64_t>(t)) << "," << T[static_cast<std::size_t>(t)]
           << "," << tn_n << "," << fmt(static_cast<double>(T[static_cast<std::size_t>(t)]) / tn_n) << "\n";
      return ok;
    }

    if (c_ex->parsed()) {
      Sink sink(ex.out);
      PrecisionPolicy pol;
      pol.bits = ex.bits;
      pol.max_bits = max_bits;
      pol.rel_tol = rel_tol;
      json cfg = {{"what", ex_what}, {"bits", ex.bits}, {"max_bits", max_bits}, {"rel_tol", rel_tol}};
      json res;
      if (ex_what == "pi" || ex_what == "pa" || ex_what == "en") {
        if (ex_n <= 0 || ex_m < 0) throw InvalidParam("--n > 0 and --m >= 0 are required");
        const auto dist = parse_rho(ex.rho);
        const auto model = parse_model(ex.model);
        cfg.update({{"rho", ex.rho}, {"n", ex_n}, {"m", ex_m}, {"rational", force_rational}});
        if (ex_what == "pi") {
          res = force_rational ? num(pi_multinomial_exact(ex_n, ex_m, dist)) : to_json(pi_multinomial(ex_n, ex_m, dist, pol));
        } else if (ex_what == "pa") {
          cfg["model"] = ex.model;
          const auto law = model_law(dist, ex_n, model);
          res = force_rational ? num(prob_A_exact(ex_n, ex_m, law)) : to_json(prob_A_general(ex_n, ex_m, law, pol));
        } else {
          cfg["model"] = ex.model;
          cfg["profile"] = profile;
          if (force_rational) {
            const auto e = expected_null_count_exact(ex_n, ex_m, dist, model);
            res = num(e.total);
            if (profile) {
              res["profile"] = json::array();
              for (const auto& p : e.profile) res["profile"].push_back(num(p));
            }
          } else {
            const auto e = expected_null_count(ex_n, ex_m, dist, model, profile, pol);
            PrecisionScope scope(e.bits_used);
            res = num(e.total);
            res["bits_used"] = e.bits_used;
            res["log_rate"] = num(BigReal(log(e.total) / ex_n));
            if (profile) {
              res["profile"] = json::array();
              for (const auto& p : e.profile) res["profile"].push_back(num(p));
            }
          }
        }
      } else if (ex_what == "poisson") {
        cfg.update({{"n", ex_n}, {"m", ex_m}, {"mu", mu}});
        if (trunc) cfg["trunc"] = *trunc;
        const auto pc = poissonization_check(ex_n, ex_m, mu, trunc, ex.bits);
        PrecisionScope scope(ex.bits);
        res = {{"lhs", num(pc.lhs)}, {"rhs", num(pc.rhs)}, {"diff", num(BigReal(pc.lhs - pc.rhs))},
               {"truncation", pc.truncation}};
      } else if (ex_what == "parity") {
        ParitySpec spec;
        spec.k = static_cast<int>(k);
        spec.r = static_cast<int>(r);
        spec.targets = targets;
        for (const auto& p : probs) {
          spec.cell_probs_exact.push_back(parse_decimal_rational(p));
          spec.cell_probs.push_back(to_double(spec.cell_probs_exact.back()));
        }
        cfg.update({{"n", ex_n}, {"k", k}, {"r", r}, {"targets", targets}, {"probs", probs}, {"rational", force_rational}});
        if (force_rational)
          res = num(multinomial_parity_exact(spec, ex_n));
        else
          res = num(multinomial_parity(spec, ex_n));
      } else {
        cfg.update({{"q", q}, {"r", r}});
        if (gfq_n) cfg["n"] = *gfq_n;
        const auto g = gfq_dense_survival(q, r, gfq_n);
        res = num(g.value);
        if (g.lower_bound) res["lower_bound"] = num(*g.lower_bound);
      }
      json j = output_header("exact", cfg);
      j["result"] = res;
      sink.os() << j.dump(2) << "\n";
      return ok;
    }

    if (c_si->parsed()) {
      Sink sink(si.out);
      ExperimentConfig cfg;
      cfg.id = exp_id == "classical" && dense ? "dense" : exp_id;
      cfg.dist = parse_rho(si.rho);
      cfg.model = parse_model(si.model);
      cfg.n_list = n_list;
      cfg.alpha_list = alpha_list;
      cfg.trials = si_trials;
      cfg.seed = si.seed;
      cfg.threads = si.threads;
      cfg.eps = eps;
      cfg.core_eps = core_eps;
      cfg.z = z;
      cfg.rank_check_max_n = rank_max;
      const json hcfg = {{"exp", exp_id},     {"rho", si.rho},   {"model", si.model}, {"n", n_list},
                         {"alpha", alpha_list}, {"trials", si_trials}, {"seed", si.seed},  {"threads", si.threads},
                         {"eps", eps},        {"core_eps", core_eps}, {"z", z},         {"dense", dense},
                         {"rng", Xoshiro256::kName}};
      auto emit = [&](const auto& summary) {
        if (!csv_out.empty()) {
          Sink csv(csv_out);
          comment_header(csv.os(), "simulate", hcfg);
          write_csv(csv.os(), summary);
        }
        if (si.format == "csv") {
          comment_header(sink.os(), "simulate", hcfg);
          write_csv(sink.os(), summary);
        } else {
          json j = output_header("simulate", hcfg);
          j["summary"] = to_json(summary);
          sink.os() << j.dump(2) << "\n";
        }
      };
      if (exp_id == "tn")
        emit(exp_Tn_window(cfg));
      else if (exp_id == "core")
        emit(exp_core_vs_theory(cfg));
      else if (exp_id == "null-growth")
        emit(exp_null_growth(cfg));
      else if (exp_id == "classical")
        emit(exp_classical_limits(cfg));
      else
        emit(exp_weight_profile(cfg));
      return ok;
    }

    if (c_ve->parsed()) {
      Sink sink(ve.out);
      const auto rep = run_verify(suite);
      if (ve.format == "json") {
        json j = output_header("verify", {{"suite", suite}});
        j["report"] = to_json(rep);
        sink.os() << j.dump(2) << "\n";
      } else {
        print_verify_text(sink.os(), rep);
      }
      return rep.passed() ? ok : verify_failed;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n(run with --help for usage)\n";
    return parse_error;
  } catch (const InvalidDistribution& e) {
    std::cerr << "parse error: " << e.what() << "\n(run with --help for usage)\n";
    return parse_error;
  } catch (const VerificationFailed& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return verify_failed;
  } catch (const PrecisionLoss& e) {
    std::cerr << "precision failure: " << e.what() << "\n";
    return precision_failed;
  } catch (const NumericalResidue& e) {
    std::cerr << "precision failure: " << e.what() << "\n";
    return precision_failed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return failure;
  }
  return ok;
}
