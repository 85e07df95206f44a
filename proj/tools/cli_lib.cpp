#include "cli_lib.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <numeric>
#include <sstream>

#include "quartic/asymptotics.hpp"
#include "quartic/kloosterman.hpp"
#include "quartic/peyre.hpp"
#include "quartic/torsor.hpp"

namespace quartic::cli {

using json = nlohmann::ordered_json;

std::string to_string(Command c) {
  switch (c) {
    case Command::count: return "count";
    case Command::torsor_count: return "torsor-count";
    case Command::peyre: return "peyre";
    case Command::equidist: return "equidist";
    case Command::kloosterman: return "kloosterman";
    case Command::asymptote: return "asymptote";
    default: return "verify";
  }
}

namespace {

int64_t parse_positive_int(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !(v >= 1) || v > 1e15 || v != std::floor(v))
    throw ConfigError(what + " must be a positive integer, got '" + s + "'");
  return static_cast<int64_t>(v);
}

CountMethod parse_method(const std::string& m) {
  if (m == "full-scan" || m == "full_scan") return CountMethod::full_scan;
  if (m == "parametrized") return CountMethod::parametrized;
  if (m == "torsor") return CountMethod::torsor;
  throw ConfigError("unknown method '" + m + "' (full-scan, parametrized, torsor)");
}

RegionVariant parse_variant(const std::string& v) {
  if (v == "S") return RegionVariant::S;
  if (v == "S1") return RegionVariant::S1;
  if (v == "S2") return RegionVariant::S2;
  throw ConfigError("unknown region variant '" + v + "' (S, S1, S2)");
}

const char* to_string(RegionVariant v) { return v == RegionVariant::S ? "S" : v == RegionVariant::S1 ? "S1" : "S2"; }

std::filesystem::path default_cache_dir() {
  if (const char* e = std::getenv("QUARTIC_CACHE_DIR"); e && *e) return e;
  return ".quartic_cache";
}

int64_t cap_for(CountMethod m) {
  return m == CountMethod::full_scan ? kFullScanCap : m == CountMethod::parametrized ? kParametrizedCap : kTorsorCap;
}

int64_t compute_count(Surface s, int64_t B, CountMethod m) {
  switch (m) {
    case CountMethod::full_scan: return count_full_scan(s, B).count;
    case CountMethod::parametrized: return count_parametrized(s, B).count;
    default: return count_via_torsor(s, B).count;
  }
}

int64_t cached_count(const RunConfig& cfg, CountMethod m, std::ostream& err) {
  const int64_t B = *cfg.B;
  if (B > cap_for(m))
    throw CapError(to_string(m) + " count is capped at B = " + std::to_string(cap_for(m)));
  std::optional<CountCache> cache;
  if (cfg.use_cache) {
    cache.emplace(cfg.cache_dir);
    if (auto hit = cache->lookup(cfg.surface, B, m)) {
      err << "cache hit " << cache->file().string() << '\n';
      return *hit;
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  const int64_t n = compute_count(cfg.surface, B, m);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (cache) cache->store(cfg.surface, B, m, n, secs);
  return n;
}

void emit_count(const RunConfig& cfg, CountMethod m, int64_t n, std::ostream& os) {
  if (cfg.format == "json") {
    json j;
    j["surface"] = quartic::to_string(cfg.surface);
    j["B"] = *cfg.B;
    j["method"] = to_string(m);
    j["count"] = n;
    os << j.dump(2) << '\n';
  } else {
    os << "surface,B,method,count\n" << quartic::to_string(cfg.surface) << ',' << *cfg.B << ',' << to_string(m) << ','
       << n << '\n';
  }
}

std::vector<Variant> variants_of(Surface s) {
  if (s == Surface::V1) return {Variant::V1};
  return {Variant::V2a, Variant::V2b};
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

double weil_worst(int64_t q) {
  const auto tab = kloosterman_table(q);
  double worst = 0;
  for (int64_t r = 0; r < q; ++r)
    for (int64_t s = 0; s < q; ++s)
      worst = std::max(worst, std::abs(tab[static_cast<size_t>(r * q + s)]) / weil_bound(r, s, q));
  return worst;
}

bool run_verify(const RunConfig& cfg, std::ostream& os) {
  bool all = true;
  auto report = [&](const std::string& name, bool ok, const std::string& detail) {
    os << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    all = all && ok;
  };
  const Surface s = cfg.surface;
  const int64_t Bmax = cfg.B_max;

  {
    const auto prof = height_profile(enumerate_points(s, Bmax), Bmax);
    int64_t bad = 0;
    for (int64_t b = 1; b <= Bmax; ++b)
      if (torsor_count(s, b).count != prof[static_cast<size_t>(b)]) ++bad;
    const bool param = count_parametrized(s, Bmax).count == prof[static_cast<size_t>(Bmax)];
    const int64_t scanB = std::min<int64_t>(Bmax, 30);
    const bool scan = count_full_scan(s, scanB).count == prof[static_cast<size_t>(scanB)];
    report("oracle", bad == 0 && param && scan,
           "torsor vs points for B <= " + std::to_string(Bmax) + ", " + std::to_string(bad) +
               " mismatches; full scan at B = " + std::to_string(scanB));
  }
  {
    const auto a = alpha_constants(s);
    const Rational want = s == Surface::V1 ? Rational(1, 1440) : Rational(1, 2160);
    bool ok = a.alpha == want;
    if (s == Surface::V2) ok = ok && *a.alpha_a == Rational(1871, 2016000) && *a.alpha_b == Rational(929, 2016000);
    report("alpha", ok, a.alpha.get_str());
  }
  {
    const auto d = archimedean_density(s, cfg.tolerance);
    std::ostringstream det;
    det.precision(10);
    bool ok = d.value > 0;
    det << "value " << d.value << " error " << d.error;
    if (d.via_b) {
      const double gap = std::fabs(d.via_a->value - d.via_b->value);
      ok = ok && gap <= 2 * (d.via_a->error + d.via_b->error);
      det << " alt " << d.via_b->value << " gap " << gap;
    }
    report("density", ok, det.str());
  }
  {
    double worst = 0;
    for (int64_t q = 1; q <= 100; ++q) worst = std::max(worst, weil_worst(q));
    std::ostringstream det;
    det << "max |K|/bound " << worst << " for q <= 100";
    report("weil", worst <= 1 + 1e-9, det.str());
  }
  {
    int bad = 0;
    for (Variant v : variants_of(s))
      for (uint64_t p = 2; p <= 97; ++p)
        if (is_prime(p) && theta_local_factor(v, p) != theta_expected(p)) ++bad;
    report("local_factors", bad == 0, std::to_string(bad) + " mismatches for p <= 97");
  }
  return all;
}

int run_command(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  switch (cfg.command) {
    case Command::count:
    case Command::torsor_count: {
      if (!cfg.B) throw ConfigError(to_string(cfg.command) + " needs --B");
      const CountMethod m = cfg.command == Command::torsor_count ? CountMethod::torsor : cfg.method;
      emit_count(cfg, m, cached_count(cfg, m, err), os);
      return kOk;
    }
    case Command::peyre: {
      if (cfg.tolerance < 1e-4) throw ConfigError("--tol must be at least 1e-4");
      if (cfg.prime_limit > 100000000) throw CapError("--prime-limit is capped at 1e8");
      const auto j = json::parse(to_json(peyre_constant(cfg.surface, cfg.tolerance, cfg.prime_limit)));
      if (cfg.format == "json") {
        os << j.dump(2) << '\n';
      } else {
        os << "field,value\n";
        for (const auto& [k, v] : j.items()) os << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
      }
      return kOk;
    }
    case Command::equidist: {
      if (cfg.region.X > 1e6) throw CapError("equidist is capped at X = 1e6");
      std::vector<int64_t> qs(static_cast<size_t>(cfg.q_max - cfg.q_min + 1));
      std::iota(qs.begin(), qs.end(), cfg.q_min);
      const auto prof = error_profile(cfg.region, qs);
      for (const auto& n : prof.notes) err << "note: " << n << '\n';
      if (cfg.format == "json") {
        json j = json::array();
        for (const auto& r : prof.rows)
          j.push_back({{"q", r.q}, {"max_error", r.max_error}, {"reference_bound", r.reference_bound}, {"ratio", r.ratio}});
        os << j.dump(2) << '\n';
      } else {
        os << profile_csv(prof);
      }
      return kOk;
    }
    case Command::kloosterman: {
      if (cfg.q_max > kKloostermanTableCap)
        throw CapError("kloosterman is capped at q = " + std::to_string(kKloostermanTableCap));
      bool ok = true;
      json j = json::array();
      std::ostringstream csv;
      csv.precision(10);
      csv << "q,max_ratio\n";
      for (int64_t q = cfg.q_min; q <= cfg.q_max; ++q) {
        const double w = weil_worst(q);
        ok = ok && w <= 1 + 1e-9;
        csv << q << ',' << w << '\n';
        j.push_back({{"q", q}, {"max_ratio", w}});
      }
      os << (cfg.format == "json" ? j.dump(2) + "\n" : csv.str());
      return ok ? kOk : kVerifyFailed;
    }
    case Command::asymptote: {
      if (cfg.B_list.empty()) throw ConfigError("asymptote needs --B-list");
      for (int64_t B : cfg.B_list)
        if (B > kTorsorCap) throw CapError("asymptote is capped at B = " + std::to_string(kTorsorCap));
      auto list = cfg.B_list;
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      const auto rows = ratio_table(cfg.surface, list, cfg.budget_seconds);
      if (cfg.format == "json") {
        json j = json::array();
        for (const auto& r : rows) {
          json e{{"B", r.B}};
          if (r.count) {
            e["count"] = *r.count;
            e["ratio"] = r.ratio;
          } else {
            e["count"] = nullptr;
            e["ratio"] = nullptr;
          }
          e["c_reference"] = r.c_reference;
          e["relative_gap"] = r.count ? json(r.relative_gap) : json(nullptr);
          j.push_back(e);
        }
        os << j.dump(2) << '\n';
      } else {
        os << ratio_csv(rows);
      }
      return kOk;
    }
    default:
      if (cfg.B_max > kVerifyCap) throw CapError("verify is capped at B-max = " + std::to_string(kVerifyCap));
      return run_verify(cfg, os) ? kOk : kVerifyFailed;
  }
}

}  // namespace

std::vector<int64_t> parse_B_list(const std::string& s) {
  std::vector<int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    out.push_back(parse_positive_int(item, "B-list entry"));
  }
  if (out.empty()) throw ConfigError("--B-list is empty");
  return out;
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& help_out) {
  CLI::App app{"Rational point counts and constants for two singular quartic del Pezzo surfaces", "quartic_cli"};
  app.set_config("--config", "", "key = value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);

  RunConfig cfg;
  std::string surface = "V1", B, B_list, method = "parametrized", variant = "S", cache;
  cfg.region.X = 1e4, cfg.region.X1 = 3e5, cfg.region.X2 = 2e3, cfg.region.X3 = 1e6;
  cfg.region.T = 5e3, cfg.region.Z = 10, cfg.region.L1 = 1, cfg.region.L2 = 1;

  app.add_option("--surface", surface, "V1 or V2")->capture_default_str();
  auto* oB = app.add_option("--B", B, "height bound (accepts 1e4 style)");
  auto* oL = app.add_option("--B-list", B_list, "comma separated heights, e.g. 1e4,1e5,1e6");
  auto* oM = app.add_option("--B-max", cfg.B_max, "verify: largest height checked")->capture_default_str();
  oB->excludes(oL);
  oL->excludes(oB);
  oM->excludes(oB);
  app.add_option("--method", method, "count method: full-scan, parametrized, torsor")->capture_default_str();
  app.add_option("--tol", cfg.tolerance, "relative quadrature tolerance")->capture_default_str();
  app.add_option("--prime-limit", cfg.prime_limit, "Euler product cutoff")->capture_default_str();
  app.add_option("--q-min", cfg.q_min, "smallest modulus")->capture_default_str();
  app.add_option("--q-max", cfg.q_max, "largest modulus")->capture_default_str();
  app.add_option("--variant", variant, "equidist region: S, S1, S2")->capture_default_str();
  app.add_option("--X", cfg.region.X)->capture_default_str();
  app.add_option("--X1", cfg.region.X1)->capture_default_str();
  app.add_option("--X2", cfg.region.X2)->capture_default_str();
  app.add_option("--X3", cfg.region.X3)->capture_default_str();
  app.add_option("--T", cfg.region.T)->capture_default_str();
  app.add_option("--Z", cfg.region.Z)->capture_default_str();
  app.add_option("--L1", cfg.region.L1)->capture_default_str();
  app.add_option("--L2", cfg.region.L2)->capture_default_str();
  app.add_option("--budget", cfg.budget_seconds, "asymptote: seconds before rows are marked incomplete")
      ->capture_default_str();
  app.add_option("--format", cfg.format, "csv or json")->capture_default_str();
  app.add_option("--output,-o", cfg.output, "write primary output here instead of stdout");
  app.add_option("--cache", cache, "cache directory (default $QUARTIC_CACHE_DIR or .quartic_cache)");
  app.add_flag("!--no-cache", cfg.use_cache, "skip the count cache");
  app.add_option("--workers", cfg.workers, "OpenMP threads, 0 for the runtime default")->capture_default_str();

  const std::vector<std::pair<Command, std::string>> subs{
      {Command::count, "count points of height <= B"},
      {Command::torsor_count, "count via the torsor enumeration"},
      {Command::peyre, "Peyre constant breakdown as JSON"},
      {Command::equidist, "region error profile over q"},
      {Command::kloosterman, "Weil bound ratios over q"},
      {Command::asymptote, "N(B)/(B log^5 B) against the Peyre constant"},
      {Command::verify, "cross-check suite; exit 1 on any failure"}};
  std::vector<CLI::App*> apps;
  for (const auto& [c, d] : subs) {
    auto* sub = app.add_subcommand(to_string(c), d);
    sub->fallthrough();
    apps.push_back(sub);
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    help_out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    help_out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string(e.what()) + "\n" + app.help());
  }

  for (size_t i = 0; i < apps.size(); ++i)
    if (apps[i]->parsed()) cfg.command = subs[i].first;
  try {
    cfg.surface = parse_surface(surface);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!B.empty()) cfg.B = parse_positive_int(B, "--B");
  if (!B_list.empty()) cfg.B_list = parse_B_list(B_list);
  cfg.method = parse_method(method);
  cfg.region.variant = parse_variant(variant);
  cfg.cache_dir = cache.empty() ? default_cache_dir() : std::filesystem::path(cache);
  if (cfg.B_max < 1) throw ConfigError("--B-max must be positive");
  if (!(cfg.tolerance > 0)) throw ConfigError("--tol must be positive");
  if (cfg.prime_limit < 2) throw ConfigError("--prime-limit must be at least 2");
  if (cfg.q_min < 1 || cfg.q_max < cfg.q_min) throw ConfigError("need 1 <= q-min <= q-max");
  if (!(cfg.budget_seconds > 0)) throw ConfigError("--budget must be positive");
  if (cfg.workers < 0) throw ConfigError("--workers must be nonnegative");
  if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("--format must be csv or json");
  try {
    validate(cfg.region);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

CountCache::CountCache(std::filesystem::path dir) : file_(std::move(dir) / "counts.jsonl") {
  std::filesystem::create_directories(file_.parent_path());
}

std::optional<int64_t> CountCache::lookup(Surface s, int64_t B, CountMethod m) const {
  std::ifstream in(file_);
  std::string line;
  const std::string sn = quartic::to_string(s), mn = to_string(m);
  while (std::getline(in, line)) {
    const auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) continue;
    if (j.value("schema", -1) != kSchema) continue;
    if (j.value("surface", "") == sn && j.value("B", int64_t{-1}) == B && j.value("method", "") == mn &&
        j.contains("count"))
      return j["count"].get<int64_t>();
  }
  return std::nullopt;
}

void CountCache::store(Surface s, int64_t B, CountMethod m, int64_t count, double seconds) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  json j;
  j["schema"] = kSchema;
  j["surface"] = quartic::to_string(s);
  j["B"] = B;
  j["method"] = to_string(m);
  j["count"] = count;
  j["seconds"] = seconds;
  std::ofstream(file_, std::ios::app) << j.dump() << '\n';
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.workers > 0) omp_set_num_threads(cfg.workers);
  std::ostringstream buf;
  const int code = run_command(cfg, buf, err);
  if (cfg.output.empty()) {
    out << buf.str();
  } else {
    const std::filesystem::path p(cfg.output);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + cfg.output);
    f << buf.str();
  }
  return code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = parse_config(args, out);
    if (!cfg) return kOk;
    return execute(*cfg, out, err);
  } catch (const ConfigError& e) {
    err << "error[config]: " << e.what() << '\n';
    return kConfigError;
  } catch (const CapError& e) {
    err << "error[cap]: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const std::invalid_argument& e) {
    err << "error[invalid_argument]: " << e.what() << '\n';
    return kConfigError;
  } catch (const OverflowError& e) {
    err << "error[overflow]: " << e.what() << '\n';
    return kModuleError;
  } catch (const std::exception& e) {
    err << "error[module]: " << e.what() << '\n';
    return kModuleError;
  }
}

}  // namespace quartic::cli
