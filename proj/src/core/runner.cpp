#include "core/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <thread>

#include "core/gamma2.hpp"
#include "core/toml_lite.hpp"

namespace g2k {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

std::string fmt_int(long long v) { return std::to_string(v); }

struct Row {
  std::vector<std::string> cells;
  bool failed = false;
  std::string error;
  nlohmann::json sidecar;  // optional JSONL payload
};

// deterministic per-row stream independent of scheduling
std::mt19937_64 row_rng(long long seed, long long index) {
  std::uint64_t s = std::uint64_t(seed) * 0x9e3779b97f4a7c15ULL +
                    std::uint64_t(index + 1) * 0xbf58476d1ce4e5b9ULL;
  s ^= s >> 31;
  return std::mt19937_64(s);
}

void run_pool(std::vector<std::function<void()>>& tasks, int threads) {
  if (threads <= 0)
    threads = int(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, int(tasks.size()));
  if (threads <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) return;
        tasks[i]();
      }
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<std::string> pick(const std::vector<std::string>& sel,
                              std::vector<std::string> all) {
  return sel.empty() ? all : sel;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Row>& rows) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::IoError, "cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : rows) {
    if (r.failed) {
      out << "ERROR," << '"' << r.error << '"' << '\n';
      continue;
    }
    for (std::size_t i = 0; i < r.cells.size(); ++i)
      out << (i ? "," : "") << r.cells[i];
    out << '\n';
  }
}

struct Experiment {
  std::vector<std::string> header;
  std::vector<Row> rows;
  std::vector<std::function<void()>> tasks;
  bool jsonl = false;

  template <class F>
  void add_task(F&& body) {
    rows.emplace_back();
    Row* slot = &rows.back();
    tasks.emplace_back([slot, body = std::forward<F>(body)]() {
      try {
        body(*slot);
      } catch (const std::exception& e) {
        slot->failed = true;
        slot->error = e.what();
      }
    });
  }
};

SampleGrid config_grid(const ExperimentConfig& cfg, int n) {
  return make_grid(cfg.grid_kind, n, cfg.grid_lo, cfg.grid_hi);
}

Experiment build_gamma2_table(const ExperimentConfig& cfg, const Catalog& cat) {
  Experiment ex;
  ex.header = {"symbol", "size",       "value", "dualValue", "gap",
               "rank",   "iterations", "converged", "witnessBound", "tol"};
  for (const auto& id : pick(cfg.symbols, cat.symbol_ids())) {
    for (int n : cfg.sizes) {
      ex.add_task([&cfg, &cat, id, n](Row& row) {
        const Symbol& sym = cat.symbol(id);
        const SampleGrid g = config_grid(cfg, n);
        const KernelMatrix k = sample_hankel(sym, g, g);
        const auto cert = gamma2_norm(k.entries, cfg.gamma2_tol);
        row.cells = {id,
                     fmt_int(n),
                     fmt(cert.value),
                     fmt(cert.dual_value),
                     fmt(cert.gap),
                     fmt_int(cert.rank()),
                     fmt_int(cert.iterations),
                     cert.converged ? "1" : "0",
                     sym.witness() ? fmt(sym.witness()->nu2_bound) : "",
                     fmt(cfg.gamma2_tol)};
      });
    }
  }
  return ex;
}

Experiment build_symbol_growth(const ExperimentConfig& cfg, const Catalog& cat) {
  Experiment ex;
  ex.header = {"k", "gridSize", "lo", "hi", "value", "dualValue", "gap", "tol"};
  const std::string id = cfg.symbols.empty() ? "power-i" : cfg.symbols.front();
  for (int k : cfg.growth_k) {
    ex.add_task([&cfg, &cat, id, k](Row& row) {
      const Symbol& sym = cat.symbol(id);
      const double lo = std::pow(10.0, -double(k));
      const double hi = std::pow(10.0, double(k));
      const int n = 16 * k;
      const SampleGrid g = make_grid(GridKind::Geometric, n, lo, hi);
      const KernelMatrix mat = sample_hankel(sym, g, g);
      const auto cert = gamma2_norm(mat.entries, cfg.gamma2_tol);
      row.cells = {fmt_int(k),          fmt_int(n), fmt(lo),
                   fmt(hi),             fmt(cert.value), fmt(cert.dual_value),
                   fmt(cert.gap),       fmt(cfg.gamma2_tol)};
    });
  }
  return ex;
}

Experiment build_bound_verify(const ExperimentConfig& cfg, const Catalog& cat) {
  Experiment ex;
  ex.jsonl = true;
  ex.header = {"model",  "tensor", "lhs",    "cA",    "gridN0", "gamma2Dual0",
               "rhs0",   "gridN1", "gamma2Dual1", "rhs1", "slack", "pass",
               "tol"};
  for (const auto& mid : pick(cfg.models, cat.model_ids())) {
    for (const auto& tid : pick(cfg.tensors, cat.tensor_ids())) {
      ex.add_task([&cfg, &cat, mid, tid](Row& row) {
        const SampleGrid gs = config_grid(cfg, cfg.grid_n);
        BoundReport rep = verify_calculus_bound(cat.model(mid), cat.tensor(tid),
                                                gs, gs, cfg.bound_tol);
        rep.tensor_id = tid;
        row.cells = {mid,
                     tid,
                     fmt(rep.lhs),
                     fmt(rep.c_a),
                     fmt_int(rep.grid_sizes.at(0)),
                     fmt(rep.gamma2_dual.at(0)),
                     fmt(rep.rhs.at(0)),
                     fmt_int(rep.grid_sizes.at(1)),
                     fmt(rep.gamma2_dual.at(1)),
                     fmt(rep.rhs.at(1)),
                     fmt(rep.slack),
                     rep.pass ? "1" : "0",
                     fmt(cfg.bound_tol)};
        row.sidecar = rep.to_json();
      });
    }
  }
  return ex;
}

Experiment build_kernel_factor(const ExperimentConfig& cfg, const Catalog& cat) {
  Experiment ex;
  ex.header = {"model", "pair", "gamma2", "gap", "cA", "bound", "pass", "tol"};
  long long index = 0;
  for (const auto& mid : pick(cfg.models, cat.model_ids())) {
    for (int p = 0; p < cfg.kernel_pairs; ++p) {
      const long long row_index = index++;
      ex.add_task([&cfg, &cat, mid, p, row_index](Row& row) {
        const SemigroupModel& model = cat.model(mid);
        auto rng = row_rng(cfg.seed, row_index);
        std::normal_distribution<double> gauss(0.0, 1.0);
        CVec x(model.dim()), y(model.dim());
        for (int i = 0; i < model.dim(); ++i) {
          x(i) = Complex(gauss(rng), gauss(rng));
          y(i) = Complex(gauss(rng), gauss(rng));
        }
        x /= x.norm();
        y /= y.norm();
        const SampleGrid g = config_grid(cfg, 12);
        const KernelMatrix k = sample_semigroup_kernel(model, x, y, g, g);
        const auto cert = gamma2_norm(k.entries, cfg.gamma2_tol);
        const double ca = model.growth_bound();
        const double bound = ca * ca;
        row.cells = {mid,
                     fmt_int(p),
                     fmt(cert.value),
                     fmt(cert.gap),
                     fmt(ca),
                     fmt(bound),
                     cert.value <= bound + 1e-4 ? "1" : "0",
                     fmt(cfg.gamma2_tol)};
      });
    }
  }
  return ex;
}

Experiment build_factor_demo(const ExperimentConfig& cfg, const Catalog& cat) {
  Experiment ex;
  ex.header = {"poly",     "residual", "h1Norm2",  "h2Norm2", "hNorm1",
               "normDev",  "lineResidual", "isoDev1", "isoDev2", "fftSize"};
  for (const auto& pid : pick(cfg.polys, cat.poly_ids())) {
    ex.add_task([&cat, pid](Row& row) {
      const CirclePoly& h = cat.poly(pid);
      const auto fac = riesz_factorize_circle(h, 4096);
      const auto n1 = circle_norm(fac.h1, 2.0);
      const auto n2 = circle_norm(fac.h2, 2.0);
      const auto nh = circle_norm(h, 1.0);
      const auto line = sarason_factorize_line(LineHardyFunction{h, 1}, 4096);
      const auto iso1 = line_norm(line.h1);
      const auto iso2 = line_norm(line.h2);
      row.cells = {pid,
                   fmt(fac.residual),
                   fmt(n1.value),
                   fmt(n2.value),
                   fmt(nh.value),
                   fmt(std::abs(n1.value * n2.value - nh.value)),
                   fmt(line.residual),
                   fmt(std::abs(iso1.value - n1.value)),
                   fmt(std::abs(iso2.value - n2.value)),
                   fmt_int(fac.fft_size)};
    });
  }
  return ex;
}

Experiment build_fejer_demo(const ExperimentConfig& cfg, const Catalog& cat) {
  Experiment ex;
  ex.header = {"n",        "bandGapMax", "l1PhiN",  "l1BoundTwicePhi",
               "l1Ok",     "approxWeight", "approxError", "approxQuadError"};
  const std::string wid = cfg.weights.empty() ? "exp1" : cfg.weights.front();
  for (int n : cfg.fejer_n) {
    ex.add_task([&cat, wid, n](Row& row) {
      const FejerApproximant fn(n);
      double gap = 0.0;
      for (int i = -64; i <= 64; ++i)
        gap = std::max(gap, std::abs(fn.hat(double(i) / (64.0 * n))));
      const double l1 = fn.l1_norm();
      const double bound = 2.0 * FejerApproximant::bump_l1();
      const auto err = l1_approx_error(fn, cat.weight(wid));
      row.cells = {fmt_int(n),       fmt(gap),      fmt(l1),
                   fmt(bound),       l1 <= bound + 1e-6 ? "1" : "0",
                   wid,              fmt(err.value), fmt(err.quad_error)};
    });
  }
  return ex;
}

Experiment build_consistency_suite(const ExperimentConfig& cfg,
                                   const Catalog& cat) {
  Experiment ex;
  ex.header = {"check", "subject", "value", "reference", "deviation", "tol",
               "pass"};
  const auto wids = pick(cfg.weights, cat.weight_ids());
  const auto mids = pick(cfg.models, cat.model_ids());

  auto simple_row = [](Row& row, const std::string& check,
                       const std::string& subject, double value,
                       double reference, double tol) {
    const double dev = std::abs(value - reference);
    row.cells = {check, subject,  fmt(value), fmt(reference),
                 fmt(dev), fmt(tol), dev <= tol ? "1" : "0"};
  };

  for (const auto& wid : wids) {
    ex.add_task([&cat, wid, &cfg, simple_row](Row& row) {
      const Weight& w = cat.weight(wid);
      const Complex z(1.3, 0.4);
      const auto p = poisson_tilde(w, z, cfg.quad_tol);
      simple_row(row, "poisson-vs-laplace", wid,
                 std::abs(p.value - w.laplace(z)), 0.0, cfg.quad_tol);
    });
    ex.add_task([&cat, wid, simple_row](Row& row) {
      const auto r = plancherel_ratio(cat.weight(wid));
      simple_row(row, "plancherel-ratio", wid, r.ratio, 1.0, 1e-8);
    });
  }
  for (std::size_t i = 0; i + 1 < wids.size(); i += 2) {
    const std::string a = wids[i], b = wids[i + 1];
    ex.add_task([&cat, a, b, simple_row](Row& row) {
      const Weight& c = cat.weight(a);
      const Weight& d = cat.weight(b);
      const Weight conv = convolve(c, d);
      double dev = 0.0;
      for (double zr : {0.5, 1.0, 2.0}) {
        const Complex z(zr, 0.3);
        dev = std::max(dev, std::abs(conv.laplace(z) - c.laplace(z) * d.laplace(z)));
      }
      simple_row(row, "laplace-multiplicative", a + "*" + b, dev, 0.0, 1e-12);
    });
  }
  for (const auto& mid : mids) {
    ex.add_task([&cat, mid, simple_row](Row& row) {
      const SemigroupModel& model = cat.model(mid);
      const Weight& c = cat.weight("exp1");
      const Weight& d = cat.weight("exp2");
      const CMat gc = hille_phillips(model, c, 1e-10).op;
      const CMat gd = hille_phillips(model, d, 1e-10).op;
      const CMat gcd = hille_phillips(model, convolve(c, d), 1e-10).op;
      Eigen::BDCSVD<CMat> svd(CMat(gcd - gc * gd));
      simple_row(row, "homomorphism", mid, svd.singularValues()(0), 0.0, 1e-8);
    });
    ex.add_task([&cat, mid, simple_row](Row& row) {
      const SemigroupModel& model = cat.model(mid);
      const Weight& b = cat.weight("texp");
      const auto res = hille_phillips(model, b, 1e-10);
      const double crude = model.growth_bound() * b.l1_norm();
      const double excess = std::max(0.0, res.operator_norm - crude);
      simple_row(row, "crude-bound-excess", mid, excess, 0.0, 1e-8);
    });
    ex.add_task([&cat, mid, simple_row](Row& row) {
      const double disc =
          shift_consistency(cat.model(mid), cat.weight("exp1"), 0.7, 1e-9);
      simple_row(row, "shift-consistency", mid, disc, 0.0, 2e-9);
    });
  }
  return ex;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.raw = j;
  const nlohmann::json run = j.value("run", nlohmann::json::object());
  cfg.experiment = run.value("experiment", j.value("experiment", ""));
  static const std::vector<std::string> known = {
      "gamma2-table", "symbol-growth", "bound-verify",     "kernel-factor",
      "factor-demo",  "fejer-demo",    "consistency-suite"};
  require(std::find(known.begin(), known.end(), cfg.experiment) != known.end(),
          ErrorCode::ParseError, "unknown experiment: '" + cfg.experiment + "'");
  cfg.seed = run.value("seed", 1LL);
  cfg.out_dir = run.value("out", std::string("out"));
  cfg.threads = run.value("threads", 0);

  const auto tols = j.value("tolerances", nlohmann::json::object());
  cfg.gamma2_tol = tols.value("gamma2", 1e-6);
  cfg.quad_tol = tols.value("quadrature", 1e-8);
  cfg.bound_tol = tols.value("bound", 1e-4);
  require(cfg.gamma2_tol > 0 && cfg.quad_tol > 0 && cfg.bound_tol > 0,
          ErrorCode::ParseError, "tolerances must be strictly positive");

  const auto grids = j.value("grids", nlohmann::json::object());
  cfg.grid_kind = grid_kind_from_string(grids.value("kind", std::string("geometric")));
  cfg.grid_lo = grids.value("lo", 1e-3);
  cfg.grid_hi = grids.value("hi", 30.0);
  cfg.grid_n = grids.value("n", 24);
  require(cfg.grid_lo > 0 && cfg.grid_hi > cfg.grid_lo && cfg.grid_n >= 2,
          ErrorCode::ParseError, "invalid grid specification");

  const auto sel = j.value("selection", nlohmann::json::object());
  auto strings = [&](const char* key) {
    std::vector<std::string> out;
    for (const auto& v : sel.value(key, nlohmann::json::array()))
      out.push_back(v.get<std::string>());
    return out;
  };
  cfg.models = strings("models");
  cfg.tensors = strings("tensors");
  cfg.symbols = strings("symbols");
  cfg.weights = strings("weights");
  cfg.polys = strings("polys");
  if (sel.contains("sizes")) {
    cfg.sizes.clear();
    for (const auto& v : sel.at("sizes")) cfg.sizes.push_back(v.get<int>());
  }
  if (sel.contains("growth_k")) {
    cfg.growth_k.clear();
    for (const auto& v : sel.at("growth_k")) cfg.growth_k.push_back(v.get<int>());
  }
  if (sel.contains("fejer_n")) {
    cfg.fejer_n.clear();
    for (const auto& v : sel.at("fejer_n")) cfg.fejer_n.push_back(v.get<int>());
  }
  cfg.kernel_pairs = sel.value("kernel_pairs", 10);
  return cfg;
}

RunOutcome run_experiment(const ExperimentConfig& cfg, const Catalog& catalog) {
  Experiment ex;
  if (cfg.experiment == "gamma2-table")
    ex = build_gamma2_table(cfg, catalog);
  else if (cfg.experiment == "symbol-growth")
    ex = build_symbol_growth(cfg, catalog);
  else if (cfg.experiment == "bound-verify")
    ex = build_bound_verify(cfg, catalog);
  else if (cfg.experiment == "kernel-factor")
    ex = build_kernel_factor(cfg, catalog);
  else if (cfg.experiment == "factor-demo")
    ex = build_factor_demo(cfg, catalog);
  else if (cfg.experiment == "fejer-demo")
    ex = build_fejer_demo(cfg, catalog);
  else if (cfg.experiment == "consistency-suite")
    ex = build_consistency_suite(cfg, catalog);
  else
    fail(ErrorCode::ParseError, "unknown experiment: " + cfg.experiment);

  run_pool(ex.tasks, cfg.threads);

  std::filesystem::create_directories(cfg.out_dir);
  RunOutcome out;
  const std::string csv_path = cfg.out_dir + "/" + cfg.experiment + ".csv";
  write_csv(csv_path, ex.header, ex.rows);
  out.files.push_back(csv_path);

  if (ex.jsonl) {
    const std::string jl_path = cfg.out_dir + "/" + cfg.experiment + ".jsonl";
    std::ofstream jl(jl_path);
    require(jl.good(), ErrorCode::IoError, "cannot write " + jl_path);
    for (const auto& r : ex.rows)
      if (!r.failed && !r.sidecar.is_null()) jl << r.sidecar.dump() << '\n';
    out.files.push_back(jl_path);
  }

  // sidecar metadata; timestamps are confined to this file
  {
    const std::string meta_path = cfg.out_dir + "/meta.json";
    nlohmann::json meta;
    meta["config"] = cfg.raw;
    meta["experiment"] = cfg.experiment;
    meta["seed"] = cfg.seed;
    meta["files"] = out.files;
    meta["unixTime"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    std::ofstream ms(meta_path);
    ms << meta.dump(2) << '\n';
    out.files.push_back(meta_path);
  }

  out.rows = int(ex.rows.size());
  for (const auto& r : ex.rows) out.failed_rows += r.failed ? 1 : 0;
  out.exit_code = out.failed_rows ? 3 : 0;
  return out;
}

RunOutcome run_from_file(const std::string& config_path,
                         const std::string& out_override,
                         int threads_override, long long seed_override) {
  std::ifstream in(config_path);
  require(in.good(), ErrorCode::ParseError, "cannot read config: " + config_path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  const nlohmann::json doc = parse_config_text(text);
  ExperimentConfig cfg = ExperimentConfig::from_json(doc);
  if (!out_override.empty()) cfg.out_dir = out_override;
  if (threads_override >= 0) cfg.threads = threads_override;
  if (seed_override >= 0) cfg.seed = seed_override;

  Catalog cat = Catalog::builtin();
  try {
    if (doc.contains("catalog")) cat.add_from_config(doc.at("catalog"));
    // referenced ids must exist before any row runs
    for (const auto& id : cfg.models) cat.model(id);
    for (const auto& id : cfg.tensors) cat.tensor(id);
    for (const auto& id : cfg.symbols) cat.symbol(id);
    for (const auto& id : cfg.weights) cat.weight(id);
    for (const auto& id : cfg.polys) cat.poly(id);
  } catch (const Error& e) {
    fail(ErrorCode::ParseError, std::string("config: ") + e.what());
  }

  return run_experiment(cfg, cat);
}

}  // namespace g2k
