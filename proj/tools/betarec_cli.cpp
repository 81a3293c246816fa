#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "betarec/serialize.hpp"
#include "betarec/expansion.hpp"

using namespace betarec;
using json_io::json;

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Output {
  json doc;
  std::optional<Table> table;
};

std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

void emit(const Output& out, const std::string& format) {
  if (format == "json") {
    std::cout << out.doc.dump(2) << "\n";
    return;
  }
  const char sep = format == "csv" ? ',' : '\t';
  auto quote = [&](const std::string& s) {
    if (sep != ',' || s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q.push_back('"');
      q.push_back(c);
    }
    return q + "\"";
  };
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) std::cout << sep;
      std::cout << quote(cells[i]);
    }
    std::cout << "\n";
  };
  if (out.table) {
    line(out.table->header);
    for (const auto& r : out.table->rows) line(r);
    return;
  }
  line({"key", "value"});
  for (const auto& [k, v] : out.doc.items()) line({k, cell(v)});
}

mpfr_prec_t default_precision() {
  if (const char* env = std::getenv("BETAREC_PRECISION")) {
    try {
      return static_cast<mpfr_prec_t>(std::stol(env));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "BETAREC_PRECISION is not an integer");
    }
  }
  return 128;
}

Word read_stdin_digits() {
  std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
  std::string cleaned;
  for (char c : text) {
    if (c != '\n' && c != '\r' && c != ' ' && c != '\t') cleaned.push_back(c);
  }
  return Word::parse(cleaned);
}

std::string str(std::size_t v) { return std::to_string(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beta-expansions, recurrence exponents and the Cantor construction"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string beta_text = "2";
  long precision = -1;
  std::uint64_t seed = 0;
  std::string format = "json";
  app.add_option("--beta", beta_text, "Base: decimal, fraction, integer, golden or tribonacci");
  app.add_option("--precision", precision, "Working precision in bits (>= 64); env BETAREC_PRECISION");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--output", format, "Output format")->check(CLI::IsMember({"json", "tsv", "csv"}));

  std::function<Output()> action;
  auto context = [&]() {
    const mpfr_prec_t prec = precision >= 0 ? static_cast<mpfr_prec_t>(precision) : default_precision();
    if (prec < 64) throw Error(ErrorKind::InvalidArgument, "precision must be at least 64 bits");
    ContextConfig cfg;
    cfg.min_precision = prec;
    cfg.max_precision = std::max<mpfr_prec_t>(cfg.max_precision, prec);
    return BetaContext::parse(beta_text, cfg);
  };
  auto header = [&](const std::string& command, const BetaContext& ctx) {
    return json{{"command", command}, {"beta", json_io::beta_json(ctx)}};
  };

  // expand
  std::string x_text;
  std::size_t n = 0;
  auto* expand = app.add_subcommand("expand", "First n digits of x");
  expand->add_option("--x", x_text, "Point in [0, 1), exact decimal or fraction")->required();
  expand->add_option("--n", n, "Number of digits")->required();
  expand->callback([&] {
    action = [&] {
      auto ctx = context();
      json doc = header("expand", ctx);
      doc["x"] = x_text;
      doc["n"] = n;
      doc["digits"] = json_io::to_json(expand_rational(parse_rational(x_text), ctx, n));
      return Output{doc, std::nullopt};
    };
  });

  // eps-star
  auto* eps = app.add_subcommand("eps-star", "Digits of the infinite expansion of 1");
  eps->add_option("--n", n, "Number of digits")->required();
  eps->callback([&] {
    action = [&] {
      auto ctx = context();
      json doc = header("eps-star", ctx);
      doc["n"] = n;
      doc["digits"] = json_io::to_json(ctx.eps_star(n));
      return Output{doc, std::nullopt};
    };
  });

  // approx-beta
  std::size_t big_n = 0;
  auto* approx = app.add_subcommand("approx-beta", "The truncated base beta_N");
  approx->add_option("--N", big_n, "Truncation length")->required();
  approx->callback([&] {
    action = [&] {
      auto ctx = context();
      json doc = header("approx-beta", ctx);
      BetaContext bn = approximate_beta(ctx, big_n);
      doc["N"] = big_n;
      doc["prefix"] = json_io::to_json(ctx.eps_star(big_n));
      doc["beta_N"] = json_io::to_json(bn.value(ctx.config().min_precision));
      return Output{doc, std::nullopt};
    };
  });

  // admissible
  std::string word_text;
  auto* adm = app.add_subcommand("admissible", "Whether a word is admissible");
  adm->add_option("word", word_text, "Digits, comma-separated")->required();
  adm->callback([&] {
    action = [&] {
      auto ctx = context();
      json doc = header("admissible", ctx);
      const Word w = Word::parse(word_text);
      doc["word"] = json_io::to_json(w);
      doc["admissible"] = is_admissible(w, ctx);
      return Output{doc, std::nullopt};
    };
  });

  // count
  auto* count = app.add_subcommand("count", "Number of admissible words of length n");
  count->add_option("--n", n, "Word length")->required();
  count->callback([&] {
    action = [&] {
      auto ctx = context();
      json doc = header("count", ctx);
      doc["n"] = n;
      doc["count"] = json_io::decimal(count_admissible(ctx, n));
      return Output{doc, std::nullopt};
    };
  });

  // enumerate
  std::size_t limit = 100000;
  auto* en = app.add_subcommand("enumerate", "Admissible words of length n in lexicographic order");
  en->add_option("--n", n, "Word length")->required();
  en->add_option("--limit", limit, "Refuse to list more words than this");
  en->callback([&] {
    action = [&] {
      auto ctx = context();
      const mpz_class total = count_admissible(ctx, n);
      if (total > limit) throw Error(ErrorKind::Budget, "more than " + str(limit) + " words");
      json doc = header("enumerate", ctx);
      doc["n"] = n;
      doc["count"] = json_io::decimal(total);
      json words = json::array();
      Table t{{"index", "word"}, {}};
      AdmissibleEnumerator e(ctx, n);
      Word w;
      while (e.next(w)) {
        t.rows.push_back({str(words.size()), w.to_string()});
        words.push_back(w.to_string());
      }
      doc["words"] = words;
      return Output{doc, t};
    };
  });

  // full-scan
  auto* scan = app.add_subcommand("full-scan", "Full cylinders in every window of n+1 consecutive cylinders");
  scan->add_option("--n", n, "Cylinder order")->required();
  scan->callback([&] {
    action = [&] {
      auto ctx = context();
      json doc = header("full-scan", ctx);
      doc["n"] = n;
      doc["report"] = json_io::to_json(full_window_check(ctx, n));
      return Output{doc, std::nullopt};
    };
  });

  // exponents
  bool stdin_digits = false;
  double window = 0.5;
  auto* expo = app.add_subcommand("exponents", "Recurrence exponent estimates with the raw series");
  auto* ex_x = expo->add_option("--x", x_text, "Point in [0, 1), exact decimal or fraction");
  auto* ex_s = expo->add_flag("--stdin-digits", stdin_digits, "Read comma-separated digits from stdin");
  ex_x->excludes(ex_s);
  expo->add_option("--N", big_n, "N_max (>= 10)")->required()->check(CLI::Range(10, 1 << 26));
  expo->add_option("--window", window, "Tail window fraction")->check(CLI::Range(0.0, 1.0));
  expo->callback([&] {
    action = [&] {
      auto ctx = context();
      if (x_text.empty() && !stdin_digits) throw Error(ErrorKind::InvalidArgument, "need --x or --stdin-digits");
      OrbitView x = stdin_digits ? OrbitView::from_digits(ctx, read_stdin_digits())
                                 : OrbitView::from_rational(ctx, parse_rational(x_text));
      EstimateOptions o;
      o.window_fraction = window;
      const ExponentEstimate e = estimate_exponents(x, big_n, o);
      json doc = header("exponents", ctx);
      doc["estimate"] = json_io::to_json(e);
      Table t{{"n", "v"}, {}};
      for (std::size_t i = 0; i < e.series.v.size(); ++i) {
        t.rows.push_back({str(i + 1), cell(doc["estimate"]["series"]["v"][i])});
      }
      return Output{doc, t};
    };
  });

  // returns
  std::size_t K = 5;
  bool monotone = false;
  std::size_t budget = 0;
  auto* ret = app.add_subcommand("returns", "Return profile with prefix forms");
  ret->add_option("--x", x_text, "Point in [0, 1), exact decimal or fraction")->required();
  ret->add_option("--K", K, "Number of returns");
  ret->add_flag("--monotone", monotone, "Keep strict records of m_k - n_k");
  ret->add_option("--budget", budget, "Digit budget (0: automatic)");
  ret->callback([&] {
    action = [&] {
      auto ctx = context();
      OrbitView x = OrbitView::from_rational(ctx, parse_rational(x_text));
      const ReturnProfile p = extract_returns(x, K, monotone, budget);
      json doc = header("returns", ctx);
      doc["x"] = x_text;
      doc["profile"] = json_io::to_json(p, x);
      Table t{{"k", "n", "m", "t", "form"}, {}};
      for (const auto& e : doc["profile"]["entries"]) {
        t.rows.push_back({cell(e["k"]), cell(e["n"]), cell(e["m"]), cell(e["t"]),
                          e["form"].is_null() ? "violation" : cell(e["form"])});
      }
      return Output{doc, t};
    };
  });

  // cantor
  std::string rhat_text, r_text, delta_text = "1/10", prefix_text;
  std::size_t levels = 0, depth = 0, max_m = 400;
  std::optional<std::size_t> forced_N, forced_M;
  K = 6;
  auto* cantor = app.add_subcommand("cantor", "The Cantor construction");
  cantor->require_subcommand(1);
  auto plan_options = [&](CLI::App* c) {
    c->add_option("--rhat", rhat_text, "Target lower exponent")->required();
    c->add_option("--r", r_text, "Target upper exponent")->required();
    c->add_option("--delta", delta_text, "delta in (0, 1)");
    c->add_option("--k", K, "Number of levels K (>= 3)");
    c->add_option("--N", forced_N, "Force N");
    c->add_option("--M", forced_M, "Force M");
    c->add_option("--max-M", max_m, "Search bound for M");
  };
  auto make = [&](const BetaContext& ctx) {
    PlanOptions o;
    o.max_M = max_m;
    o.N = forced_N;
    o.M = forced_M;
    if (o.N.has_value() != o.M.has_value()) throw Error(ErrorKind::InvalidArgument, "--N and --M go together");
    return make_plan(ctx, parse_rational(rhat_text), parse_rational(r_text), parse_rational(delta_text), K, o);
  };
  auto* c_plan = cantor->add_subcommand("plan", "Sequences, (N, M) and derived indices");
  plan_options(c_plan);
  c_plan->callback([&] {
    action = [&] {
      auto ctx = context();
      json doc = header("cantor plan", ctx);
      doc["plan"] = json_io::to_json(make(ctx));
      return Output{doc, std::nullopt};
    };
  });
  auto* c_sample = cantor->add_subcommand("sample", "Digits of a point of E_N");
  plan_options(c_sample);
  c_sample->add_option("--depth", depth, "Digits to emit (default m_K)");
  c_sample->callback([&] {
    action = [&] {
      auto ctx = context();
      CantorPlan plan = make(ctx);
      const std::size_t d = depth ? depth : static_cast<std::size_t>(plan.m.back());
      json doc = header("cantor sample", ctx);
      doc["seed"] = seed;
      doc["depth"] = d;
      doc["digits"] = json_io::to_json(sample_point(plan, seed, d).prefix(d));
      return Output{doc, std::nullopt};
    };
  });
  auto* c_counts = cantor->add_subcommand("counts", "Exact level cardinalities");
  plan_options(c_counts);
  c_counts->add_option("--levels", levels, "Levels to count (default K)");
  c_counts->callback([&] {
    action = [&] {
      auto ctx = context();
      CantorPlan plan = make(ctx);
      const LevelCounts c = level_counts(plan, levels ? levels : plan.K());
      json doc = header("cantor counts", ctx);
      doc["counts"] = json_io::to_json(c);
      Table t{{"k", "D", "G"}, {}};
      for (std::size_t k = 0; k < c.D.size(); ++k) {
        t.rows.push_back({str(k + 1), json_io::decimal(c.D[k]), json_io::decimal(c.G[k])});
      }
      return Output{doc, t};
    };
  });
  auto* c_measure = cantor->add_subcommand("measure", "Exact measure of a cylinder");
  plan_options(c_measure);
  c_measure->add_option("--prefix", prefix_text, "Digits, comma-separated")->required();
  c_measure->callback([&] {
    action = [&] {
      auto ctx = context();
      CantorPlan plan = make(ctx);
      const Word w = Word::parse(prefix_text);
      const mpq_class mu = measure(plan, w);
      json doc = header("cantor measure", ctx);
      doc["prefix"] = json_io::to_json(w);
      doc["measure"] = json_io::decimal(mu);
      doc["measure_value"] = mu.get_d();
      return Output{doc, std::nullopt};
    };
  });

  // dim
  std::string source = "construction";
  std::size_t n_lo = 0, n_hi = 0, points = 1000, bootstrap = 200;
  auto* dim = app.add_subcommand("dim", "Dimension formulas, series and box counts");
  dim->require_subcommand(1);
  auto* d_formula = dim->add_subcommand("formula", "Closed-form dimensions");
  d_formula->add_option("--rhat", rhat_text, "Lower exponent")->required();
  d_formula->add_option("--r", r_text, "Upper exponent, or inf");
  d_formula->callback([&] {
    action = [&] {
      const mpq_class rq = parse_rational(rhat_text);
      const double rh = rq.get_d();
      json doc{{"command", "dim formula"}, {"r_hat", rhat_text}};
      if (!r_text.empty()) {
        const bool inf = r_text == "inf";
        const DimValue v = inf ? dim_R(rh, Exponent::inf()) : dim_R(rh, parse_rational(r_text).get_d());
        doc["r"] = r_text;
        // Exact rational arithmetic when r is finite and the value is positive.
        doc["dim_R"] = inf || v.countable ? v.value : dim_R_exact(rq, parse_rational(r_text)).get_d();
        doc["countable"] = v.countable;
      }
      const DimValue u = dim_uniform(rh);
      doc["dim_uniform"] = u.countable ? u.value : dim_uniform_exact(rq).get_d();
      doc["uniform_countable"] = u.countable;
      if (rq > 1) {
        doc["maximizer"] = nullptr;
      } else if (rq == 1) {
        doc["maximizer"] = json_io::to_json(Exponent::inf());
      } else {
        const mpq_class q = 2 * rq / (1 - rq);
        doc["maximizer"] = json_io::to_json(Exponent{false, q.get_d()});
      }
      return Output{doc, std::nullopt};
    };
  });
  auto* d_series = dim->add_subcommand("series", "Exact series and measure log-ratios");
  plan_options(d_series);
  d_series->callback([&] {
    action = [&] {
      auto ctx = context();
      CantorPlan plan = make(ctx);
      const DimReport r = local_dimension_series(plan, plan.K());
      json doc = header("dim series", ctx);
      doc["report"] = json_io::to_json(r);
      Table t{{"k", "series", "mu_lower", "mu_upper"}, {}};
      for (std::size_t k = 0; k < r.series.size(); ++k) {
        t.rows.push_back({str(k + 1), cell(json(r.series_values[k])), cell(json(r.mu_log_ratios[k].lower)),
                          cell(json(r.mu_log_ratios[k].upper))});
      }
      return Output{doc, t};
    };
  });
  auto* d_box = dim->add_subcommand("boxcount", "Box-counting slope");
  d_box->add_option("--source", source, "construction, sampled or uniform")
      ->check(CLI::IsMember({"construction", "sampled", "uniform"}));
  d_box->add_option("--rhat", rhat_text, "Target lower exponent");
  d_box->add_option("--r", r_text, "Target upper exponent");
  d_box->add_option("--delta", delta_text, "delta in (0, 1)");
  d_box->add_option("--k", K, "Number of levels K");
  d_box->add_option("--N", forced_N, "Force N");
  d_box->add_option("--M", forced_M, "Force M");
  d_box->add_option("--points", points, "Sampled points");
  d_box->add_option("--bootstrap", bootstrap, "Bootstrap resamples");
  d_box->add_option("--n-lo", n_lo, "Smallest order");
  d_box->add_option("--n-hi", n_hi, "Largest order");
  d_box->callback([&] {
    action = [&] {
      auto ctx = context();
      json doc = header("dim boxcount", ctx);
      doc["source"] = source;
      BoxCount b;
      if (source == "uniform") {
        std::mt19937_64 rng(seed);
        const auto top = static_cast<std::size_t>(
            std::max(2.0, std::floor(std::log(static_cast<double>(points)) / std::log(ctx.approx())) - 3));
        const std::size_t hi = n_hi ? n_hi : top;
        std::vector<OrbitView> pts;
        for (std::size_t i = 0; i < points; ++i) {
          pts.push_back(OrbitView::from_rational(ctx, uniform_rational(rng, bits_for_digits(ctx, hi))));
        }
        b = boxcount(pts, ctx, n_lo ? n_lo : 1, hi, {bootstrap, 0.95, seed});
      } else {
        if (rhat_text.empty() || r_text.empty()) throw Error(ErrorKind::InvalidArgument, "need --rhat and --r");
        CantorPlan plan = make(ctx);
        const auto lo = n_lo ? n_lo : static_cast<std::size_t>(plan.m[0]);
        if (source == "construction") {
          const auto hi = n_hi ? n_hi : static_cast<std::size_t>(plan.m[plan.K() - 2]);
          b = construction_boxcount(plan, lo, hi);
        } else {
          if (!n_hi) throw Error(ErrorKind::InvalidArgument, "sampled box counts need --n-hi");
          std::vector<OrbitView> pts;
          for (std::size_t i = 0; i < points; ++i) pts.push_back(sample_point(plan, seed + i, n_hi));
          b = boxcount(pts, ctx, lo, n_hi, {bootstrap, 0.95, seed});
        }
      }
      doc["boxcount"] = json_io::to_json(b);
      Table t{{"n", "log_count"}, {}};
      for (std::size_t i = 0; i < b.n.size(); ++i) t.rows.push_back({str(b.n[i]), cell(json(b.log_count[i]))});
      return Output{doc, t};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  try {
    emit(action(), format);
  } catch (const Error& e) {
    std::cout << json_io::to_json(e).dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << json_io::to_json(Error(ErrorKind::InvalidArgument, e.what())).dump(2) << "\n";
    return 1;
  }
  return 0;
}
