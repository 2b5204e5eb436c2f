#include "graphsurf/cli.hpp"

#include <chrono>
#include <optional>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphsurf/calculus.hpp"
#include "graphsurf/errors.hpp"
#include "graphsurf/family.hpp"
#include "graphsurf/geometry_ops.hpp"
#include "graphsurf/parallel.hpp"
#include "graphsurf/random_fields.hpp"

namespace graphsurf::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json load_config(const Options& opts) {
  std::ifstream in(opts.config_path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file " + opts.config_path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("config parse failure: ") + e.what());
  }
  return cfg;
}

BasePtr base_from_config(const json& cfg) {
  if (!cfg.contains("base")) throw Error(ErrorKind::ConfigError, "missing section 'base'");
  const json& b = cfg["base"];
  const std::string kind = b.value("kind", "flat_torus");
  const std::vector<int> shape = b.value("grid_shape", std::vector<int>{48, 48});
  if (kind == "flat_torus") {
    std::vector<double> periods =
        b.value("periods", std::vector<double>(shape.size(), 2.0 * M_PI));
    return BaseManifold::flat_torus(periods, shape);
  }
  if (kind == "sphere") {
    if (shape.size() != 2)
      throw Error(ErrorKind::ConfigError, "base.grid_shape must have 2 axes for a sphere");
    return BaseManifold::sphere(b.value("radius", 1.0), shape[0], shape[1]);
  }
  throw Error(ErrorKind::ConfigError, "base.kind must be flat_torus or sphere");
}

HeightField height_from_config(const json& cfg, const BasePtr& base) {
  if (!cfg.contains("height_field")) return HeightField::zero(base);
  const json& h = cfg["height_field"];
  const std::string type = h.value("type", "zero");
  if (type == "zero") return HeightField::zero(base);
  if (type == "modes") {
    if (base->kind != BaseKind::FlatTorus)
      throw Error(ErrorKind::ConfigError, "height_field.type=modes requires a torus base");
    int band = 0;
    for (const json& m : h.at("modes")) {
      const std::vector<int> k = m.at("k").get<std::vector<int>>();
      for (int ka : k) band = std::max(band, std::abs(ka));
    }
    SpectralBasis basis(*base, band);
    std::vector<double> coeffs(basis.size(), 0.0);
    for (const json& m : h.at("modes")) {
      std::vector<int> k = m.at("k").get<std::vector<int>>();
      double cc = m.value("cos", 0.0), cs = m.value("sin", 0.0);
      bool flip = false;
      for (int ka : k) {
        if (ka != 0) {
          flip = ka < 0;
          break;
        }
      }
      if (flip) {
        for (int& ka : k) ka = -ka;
        cs = -cs;
      }
      const int ec = basis.torus_element(k, 0), es = basis.torus_element(k, 1);
      if (ec < 0) throw Error(ErrorKind::ConfigError, "height_field.modes entry out of band");
      coeffs[ec] += cc;
      if (es >= 0)
        coeffs[es] += cs;
      else if (cs != 0.0)
        throw Error(ErrorKind::ConfigError, "height_field.modes: sin coefficient on k = 0");
    }
    return HeightField::from_coeffs(base, coeffs, band);
  }
  if (type == "random") {
    const int band = h.value("band_limit", 8);
    const std::uint64_t seed = h.value("seed", 1u);
    SpectralBasis basis(*base, band);
    std::mt19937_64 eng = make_engine(seed, {0xf1e1du});
    HeightField draw =
        HeightField::from_coeffs(base, random_band_limited_coeffs(basis, eng), band);
    const double target = h.value("c1_target", 0.09);
    const double c1 = draw.c1_norm();
    if (!(c1 > 0.0)) throw Error(ErrorKind::ConfigError, "height_field random draw is zero");
    return draw.scaled(target / c1);
  }
  throw Error(ErrorKind::ConfigError, "height_field.type must be zero, modes or random");
}

EstimatorRequest request_from_json(const json& e) {
  EstimatorRequest req;
  const std::string name = e.value("inequality", "");
  const std::optional<Inequality> kind = inequality_from_string(name);
  if (!kind)
    throw Error(ErrorKind::ConfigError, "estimators[].inequality '" + name + "' unknown");
  req.kind = *kind;
  req.p = e.value("p", 2.0);
  req.q = e.value("q", 2.0);
  req.r = e.value("r", 2.0);
  req.theta = e.value("theta", 0.75);
  req.alpha = e.value("alpha", 0.5);
  req.j = e.value("j", 1);
  req.m = e.value("m", 2);
  req.k = e.value("k", 1);
  req.trials = e.value("trials", 24);
  return req;
}

std::vector<EstimatorRequest> requests_from_config(const json& cfg) {
  if (!cfg.contains("estimators"))
    throw Error(ErrorKind::ConfigError, "missing section 'estimators'");
  std::vector<EstimatorRequest> reqs;
  for (const json& e : cfg["estimators"]) reqs.push_back(request_from_json(e));
  if (reqs.empty()) throw Error(ErrorKind::ConfigError, "estimators list is empty");
  return reqs;
}

/// Write-to-temp + atomic rename; no partial files on error paths.
void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::filesystem::path out_path(const Options& opts, const json& cfg, const std::string& suffix) {
  const std::string prefix =
      cfg.contains("output") ? cfg["output"].value("prefix", "graphsurf") : "graphsurf";
  std::filesystem::create_directories(opts.out_dir);
  return std::filesystem::path(opts.out_dir) / (prefix + suffix);
}

std::uint64_t global_seed(const Options& opts, const json& cfg) {
  if (opts.seed) return *opts.seed;
  return cfg.value("seed", 42u);
}

int threads_of(const Options& opts, const json& cfg) {
  int t = opts.threads;
  if (t <= 0) t = cfg.value("threads", 0);
  return resolve_threads(t);
}

std::string svg_plot(const std::vector<double>& xs,
                     const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  const int width = 640, height = 480, margin = 60;
  double xmin = xs.front(), xmax = xs.back();
  if (xmax <= xmin) xmax = xmin + 1.0;
  double ymin = 0.0, ymax = 1e-30;
  for (const auto& [name, ys] : series)
    for (double y : ys) ymax = std::max(ymax, y);
  ymax *= 1.05;
  const char* palette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad", "#d68910", "#16a085"};

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  os << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  auto px = [&](double x) {
    return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
  };
  auto py = [&](double y) {
    return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
  };
  os << "  <line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
     << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  os << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
     << height - margin << "\" stroke=\"black\"/>\n";
  for (double x : xs) {
    os << "  <text x=\"" << px(x) << "\" y=\"" << height - margin + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
  }
  os << "  <text x=\"" << width / 2 << "\" y=\"" << height - 14
     << "\" font-size=\"13\" text-anchor=\"middle\">delta</text>\n";
  os << "  <text x=\"18\" y=\"" << height / 2
     << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << height / 2
     << ")\">max constant</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double y = ymin + (ymax - ymin) * t / 4.0;
    os << "  <text x=\"" << margin - 6 << "\" y=\"" << py(y) + 4
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
  }
  int color = 0;
  for (const auto& [name, ys] : series) {
    os << "  <polyline fill=\"none\" stroke=\"" << palette[color % 6] << "\" stroke-width=\"1.5\""
       << " points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) os << " ";
      os << px(xs[i]) << "," << py(ys[i]);
    }
    os << "\"/>\n";
    os << "  <text x=\"" << width - margin + 4 << "\" y=\"" << py(ys.back()) + 4
       << "\" font-size=\"11\" fill=\"" << palette[color % 6] << "\">" << name << "</text>\n";
    ++color;
  }
  os << "</svg>\n";
  return os.str();
}

} // namespace

std::string default_config_json() {
  json cfg;
  cfg["base"] = {{"kind", "flat_torus"},
                 {"periods", {2.0 * M_PI, 2.0 * M_PI}},
                 {"grid_shape", {48, 48}},
                 {"radius", 1.0}};
  cfg["height_field"] = {{"type", "zero"},
                         {"modes", {{{"k", {1, 0}}, {"cos", 0.0}, {"sin", 0.1}}}},
                         {"band_limit", 8},
                         {"seed", 1},
                         {"c1_target", 0.09}};
  cfg["estimators"] = {{{"inequality", "poincare"}, {"p", 2.0}, {"trials", 24}}};
  cfg["family"] = {{"deltas", {0.02, 0.05, 0.1}},
                   {"samples", 50},
                   {"band_limit", 8},
                   {"seed", 42}};
  cfg["verify"] = {{"grids", {{48, 48}, {96, 96}}}, {"field_seed", 7}, {"field_band", 4}};
  cfg["output"] = {{"prefix", "graphsurf"}};
  cfg["threads"] = 0;
  cfg["seed"] = 42;
  return cfg.dump(2) + "\n";
}

int cmd_geometry(const Options& opts) {
  json cfg;
  BasePtr base;
  std::optional<HeightField> psi;
  try {
    cfg = load_config(opts);
    base = base_from_config(cfg);
    psi = height_from_config(cfg, base);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  try {
    const BundlePtr bundle = build_geometry(base, *psi);
    const JacobianData jac = graph_map_jacobian(base, *psi);

    std::ostringstream body;
    {
      std::ostringstream dump;
      dump_csv(*bundle, dump);
      std::istringstream lines(dump.str());
      std::string line;
      std::getline(lines, line);
      body << line << ",jpsi\n";
      std::size_t p = 0;
      while (std::getline(lines, line)) body << line << "," << fmt(jac.jpsi[p++]) << "\n";
    }
    write_file_atomic(out_path(opts, cfg, "_geometry.csv"), body.str());

    const double vol = surface_volume(bundle);
    const double bn = lp_norm(b_field(bundle), 2.0);
    const double hn = lp_norm(h_field(bundle), 2.0);
    std::cout << "volume=" << fmt(vol) << " norm_B_L2=" << fmt(bn) << " norm_H_L2=" << fmt(hn)
              << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
}

int cmd_constants(const Options& opts) {
  json cfg;
  BasePtr base;
  std::optional<HeightField> psi;
  std::vector<EstimatorRequest> requests;
  try {
    cfg = load_config(opts);
    base = base_from_config(cfg);
    psi = height_from_config(cfg, base);
    requests = requests_from_config(cfg);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  BundlePtr surface;
  try {
    surface = build_geometry(base, *psi);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
  const std::uint64_t seed = global_seed(opts, cfg);
  const int threads = threads_of(opts, cfg);

  std::ostringstream body;
  body << "inequality,params,estimate,witness,status,wall_time_ms\n";
  for (std::size_t ri = 0; ri < requests.size(); ++ri) {
    const auto start = std::chrono::steady_clock::now();
    std::string status = "ok", witness, params;
    double value = std::numeric_limits<double>::quiet_NaN();
    try {
      const ConstantEstimate est =
          run_estimator(requests[ri], surface, substream(seed, {ri}), threads);
      value = est.value;
      witness = est.witness;
      params = est.params.to_string();
    } catch (const Error& e) {
      status = to_string(e.kind());
    }
    const auto stop = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(stop - start).count();
    body << to_string(requests[ri].kind) << ",\"" << params << "\","
         << (status == "ok" ? fmt(value) : "") << ",\"" << witness << "\"," << status << ","
         << fmt(ms) << "\n";
  }
  write_file_atomic(out_path(opts, cfg, "_constants.csv"), body.str());
  std::cout << body.str();
  return 0;
}

int cmd_sweep(const Options& opts) {
  json cfg;
  BasePtr base;
  std::vector<EstimatorRequest> requests;
  FamilySpec spec;
  std::vector<double> deltas;
  try {
    cfg = load_config(opts);
    base = base_from_config(cfg);
    requests = requests_from_config(cfg);
    if (!cfg.contains("family")) throw Error(ErrorKind::ConfigError, "missing section 'family'");
    const json& fam = cfg["family"];
    spec.base = base;
    deltas = fam.value("deltas", std::vector<double>{0.02, 0.05, 0.1});
    spec.samples = fam.value("samples", 50);
    spec.band_limit = fam.value("band_limit", 8);
    spec.seed = fam.value("seed", global_seed(opts, cfg));
    if (fam.contains("alpha") && !fam["alpha"].is_null()) spec.alpha = fam["alpha"].get<double>();
    if (deltas.empty()) throw Error(ErrorKind::ConfigError, "family.deltas is empty");
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  SweepResult result;
  try {
    result = family_sweep(spec, deltas, requests, threads_of(opts, cfg));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }

  std::ostringstream rec;
  rec << "delta,sample_id,status,error,c1_norm,c1_alpha_norm,volume,norm_b_l2,norm_h_l2,"
         "norm_h_l3,norm_h_l4,jpsi_min,jpsi_max";
  for (const EstimatorRequest& r : result.requests) rec << "," << to_string(r.kind);
  rec << "\n";
  std::size_t succeeded = 0;
  for (const FamilySweepRecord& row : result.records) {
    rec << fmt(row.delta) << "," << row.sample_id << "," << (row.ok ? "ok" : "failed") << ",\""
        << row.error << "\"," << fmt(row.c1_norm_actual) << ","
        << (std::isnan(row.c1_alpha_norm) ? "" : fmt(row.c1_alpha_norm)) << ","
        << fmt(row.volume) << "," << fmt(row.norm_b_l2) << "," << fmt(row.norm_h_l2) << ","
        << fmt(row.norm_h_l3) << "," << fmt(row.norm_h_l4) << "," << fmt(row.jpsi_min) << ","
        << fmt(row.jpsi_max);
    for (std::size_t ri = 0; ri < result.requests.size(); ++ri)
      rec << "," << (row.ok ? fmt(row.estimates[ri].value) : "");
    rec << "\n";
    if (row.ok) ++succeeded;
  }
  write_file_atomic(out_path(opts, cfg, "_records.csv"), rec.str());

  std::ostringstream agg;
  agg << "delta,inequality,per_delta_max,family_max,baseline\n";
  for (const SweepAggregate& a : result.aggregates)
    for (std::size_t ri = 0; ri < result.requests.size(); ++ri)
      agg << fmt(a.delta) << "," << to_string(result.requests[ri].kind) << ","
          << fmt(a.per_delta_max[ri]) << "," << fmt(a.cumulative_max[ri]) << ","
          << fmt(result.baseline[ri].value) << "\n";
  write_file_atomic(out_path(opts, cfg, "_aggregates.csv"), agg.str());

  std::vector<double> xs;
  for (const SweepAggregate& a : result.aggregates) xs.push_back(a.delta);
  std::vector<std::pair<std::string, std::vector<double>>> series;
  for (std::size_t ri = 0; ri < result.requests.size(); ++ri) {
    std::vector<double> ys;
    for (const SweepAggregate& a : result.aggregates) ys.push_back(a.cumulative_max[ri]);
    series.emplace_back(to_string(result.requests[ri].kind), std::move(ys));
  }
  write_file_atomic(out_path(opts, cfg, "_sweep.svg"), svg_plot(xs, series));

  const double success_rate =
      result.records.empty() ? 1.0 : static_cast<double>(succeeded) / result.records.size();
  std::cout << "records=" << result.records.size() << " succeeded=" << succeeded << "\n";
  return success_rate >= 0.9 ? 0 : 4;
}

int cmd_verify(const Options& opts) {
  json cfg;
  std::vector<std::vector<int>> grids;
  try {
    cfg = load_config(opts);
    const json& v = cfg.contains("verify") ? cfg["verify"] : json::object();
    grids = v.value("grids", std::vector<std::vector<int>>{{48, 48}, {96, 96}});
    if (grids.size() != 2)
      throw Error(ErrorKind::ConfigError, "verify.grids must list exactly 2 grids");
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  const json& v = cfg.contains("verify") ? cfg["verify"] : json::object();
  const std::uint64_t field_seed = v.value("field_seed", 7u);
  const int field_band = v.value("field_band", 4);

  struct CheckRow {
    std::string name;
    std::string grid;
    double residual;
  };
  std::vector<std::vector<CheckRow>> levels;
  try {
    for (const std::vector<int>& shape : grids) {
      json level_cfg = cfg;
      level_cfg["base"]["grid_shape"] = shape;
      const BasePtr base = base_from_config(level_cfg);
      const HeightField psi = height_from_config(level_cfg, base);
      const BundlePtr bundle = build_geometry(base, psi);

      std::ostringstream gname;
      for (std::size_t a = 0; a < shape.size(); ++a) gname << (a ? "x" : "") << shape[a];

      std::vector<CheckRow> rows;
      const TensorField simons = simons_residual(bundle);
      double simons_max = 0.0;
      for (double x : simons.data()) simons_max = std::max(simons_max, std::fabs(x));
      rows.push_back({"simons", gname.str(), simons_max});
      rows.push_back({"codazzi", gname.str(), codazzi_residual(bundle)});

      SpectralBasis basis(*base, field_band);
      std::mt19937_64 eng = make_engine(field_seed, {0xd1u});
      const TensorField u =
          TensorField::scalar(bundle, basis.synthesize(*base, random_band_limited_coeffs(basis, eng)));
      auto [hess, lap] = hessian_and_laplacian(u);
      rows.push_back({"divergence", gname.str(), std::fabs(integrate_dmu(lap))});

      const TensorField riem = riemann_from_b(bundle);
      const int n = base->dim;
      double riem_asym = 0.0;
      for (std::size_t p = 0; p < riem.npoints(); ++p)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              for (int l = 0; l < n; ++l) {
                const auto comp = [&](int a, int b, int c, int d) {
                  return riem.value(p, ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d);
                };
                riem_asym = std::max(riem_asym, std::fabs(comp(i, j, k, l) + comp(j, i, k, l)));
                riem_asym = std::max(riem_asym, std::fabs(comp(i, j, k, l) + comp(i, j, l, k)));
                riem_asym = std::max(riem_asym, std::fabs(comp(i, j, k, l) - comp(k, l, i, j)));
              }
      rows.push_back({"riemann_symmetry", gname.str(), riem_asym});

      double trace_res = 0.0;
      for (std::size_t p = 0; p < bundle->npoints(); ++p) {
        const double* gi = bundle->g_inv_at(p);
        const double* bb = bundle->b_at(p);
        double tr = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) tr += gi[i * n + j] * bb[i * n + j];
        trace_res = std::max(trace_res, std::fabs(tr - bundle->h[p]));
      }
      rows.push_back({"trace_identity", gname.str(), trace_res});
      levels.push_back(std::move(rows));
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }

  // observed order between the two levels; residuals at rounding level pass
  const double floor_residual = 1e-10;
  const double refine = static_cast<double>(grids[1][0]) / grids[0][0];
  bool all_ok = true;
  std::ostringstream body;
  body << "check,grid,residual,observed_order\n";
  for (std::size_t c = 0; c < levels[0].size(); ++c) {
    const CheckRow& coarse = levels[0][c];
    const CheckRow& fine = levels[1][c];
    double order;
    std::string order_str;
    if (fine.residual <= floor_residual) {
      order = std::numeric_limits<double>::infinity();
      order_str = "inf";
    } else {
      order = std::log(coarse.residual / fine.residual) / std::log(refine);
      order_str = fmt(order);
    }
    const bool ok = order >= 3.5;
    all_ok = all_ok && ok;
    body << coarse.name << "," << coarse.grid << "," << fmt(coarse.residual) << ",\n";
    body << fine.name << "," << fine.grid << "," << fmt(fine.residual) << "," << order_str
         << "\n";
  }
  write_file_atomic(out_path(opts, cfg, "_verify.csv"), body.str());
  std::cout << body.str();
  return all_ok ? 0 : 5;
}

int run_main(int argc, char** argv) {
  CLI::App app{"graph hypersurface laboratory"};
  app.require_subcommand(0, 1);

  bool print_default = false;
  app.add_flag("--print-default-config", print_default, "print the default config and exit");

  Options opts;
  std::string seed_arg;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON config path")->required();
    sub->add_option("--out-dir", opts.out_dir, "output directory");
    sub->add_option("--threads", opts.threads, "worker threads (0: env/auto)");
    sub->add_option("--seed", seed_arg, "override the config seed");
  };
  CLI::App* geometry = app.add_subcommand("geometry", "dump the geometry of one surface");
  CLI::App* constants = app.add_subcommand("constants", "estimate constants on one surface");
  CLI::App* sweep = app.add_subcommand("sweep", "sweep delta over sampled families");
  CLI::App* verify = app.add_subcommand("verify", "convergence checks of the identities");
  for (CLI::App* sub : {geometry, constants, sweep, verify}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (print_default) {
    std::cout << default_config_json();
    return 0;
  }
  if (!seed_arg.empty()) {
    try {
      opts.seed = std::stoull(seed_arg);
    } catch (const std::exception&) {
      std::cerr << "--seed must be an unsigned integer\n";
      return 2;
    }
  }
  if (geometry->parsed()) return cmd_geometry(opts);
  if (constants->parsed()) return cmd_constants(opts);
  if (sweep->parsed()) return cmd_sweep(opts);
  if (verify->parsed()) return cmd_verify(opts);
  std::cerr << app.help();
  return 2;
}

} // namespace graphsurf::cli
