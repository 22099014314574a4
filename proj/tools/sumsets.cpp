// Command-line front end: exact pair probabilities, the variance series
// certificate, the sharded rigorous-bounds pipeline, Monte Carlo tallies,
// model scans and fits, and small exact enumerations.
//
// Exit codes: 0 success, 2 invalid arguments, 3 capacity, 4 file integrity.
// SUMSETS_WORKERS bounds the worker pool for shards and sampling (default 1).
// Every file-emitting command writes a manifest next to its outputs;
// stdout-only commands print the manifest as their final line.

#include <CLI11.hpp>
#include <json.hpp>

#include <sumsets/arith.hpp>
#include <sumsets/condgraph.hpp>
#include <sumsets/core.hpp>
#include <sumsets/models.hpp>
#include <sumsets/moments.hpp>
#include <sumsets/rigbounds.hpp>
#include <sumsets/simulate.hpp>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sumsets;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string digest_hex(const std::string& bytes) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a:") + buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw integrity_error("cannot open " + path.string());
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

// tmp-and-rename so an interrupt never leaves a half-written file behind
void write_file_atomic(const fs::path& path, const std::string& body) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw integrity_error("cannot open " + tmp.string());
    out << body;
    if (!out) throw integrity_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct Manifest {
  json doc;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  explicit Manifest(const std::string& command) {
    doc["command"] = command;
    doc["version"] = kVersion;
    doc["parameters"] = json::object();
    doc["inputs"] = json::array();
    doc["outputs"] = json::array();
  }
  template <class T>
  void param(const std::string& key, const T& value) {
    doc["parameters"][key] = value;
  }
  void input(const std::string& path, const std::string& bytes) {
    doc["inputs"].push_back({{"path", path}, {"digest", digest_hex(bytes)}});
  }
  void output(const std::string& path, const std::string& bytes) {
    doc["outputs"].push_back({{"path", path}, {"digest", digest_hex(bytes)}});
  }
  void stamp() {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    doc["wall_ms"] = ms.count();
  }
  void to_stdout() {
    stamp();
    std::cout << doc.dump() << "\n";
  }
  void to_file(const fs::path& path) {
    stamp();
    write_file_atomic(path, doc.dump(2) + "\n");
  }
};

// body either lands in --out (manifest beside it) or on stdout (manifest last)
void emit(const std::string& body, const std::string& out, Manifest& man) {
  if (out.empty()) {
    std::cout << body;
    man.output("-", body);
    man.to_stdout();
    return;
  }
  write_file_atomic(out, body);
  man.output(out, body);
  man.to_file(out + ".manifest.json");
  std::cout << "wrote " << out << "\n";
}

uint32_t env_workers() {
  const char* s = std::getenv("SUMSETS_WORKERS");
  if (s == nullptr || *s == '\0') return 1;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == nullptr || *end != '\0' || v < 1 || v > 1024)
    throw std::invalid_argument("SUMSETS_WORKERS must be an integer in [1, 1024]");
  return static_cast<uint32_t>(v);
}

// counts accept plain decimals or 2^k
uint64_t parse_count(const std::string& s) {
  if (s.rfind("2^", 0) == 0) {
    const std::string exp = s.substr(2);
    if (exp.empty() || exp.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad count " + s);
    unsigned long k = std::stoul(exp);
    if (k > 62) throw std::invalid_argument("count exponent too large: " + s);
    return uint64_t(1) << k;
  }
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("bad count " + s);
  return std::stoull(s);
}

std::vector<uint32_t> parse_config(const std::string& s) {
  std::vector<uint32_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad configuration element '" + item + "'");
    out.push_back(static_cast<uint32_t>(std::stoul(item)));
  }
  if (out.empty()) throw std::invalid_argument("empty configuration");
  return out;
}

std::string fmt(double v, int places) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

// --- bounds CSV -------------------------------------------------------------
//
// # bounds kind=z window=26 denominator_log2=51
// k,lower_numerator,upper_numerator,lower,upper
//
// Numerators sit over the fixed dyadic denominator, rounded outward where the
// exact value does not land on the grid; decimals are outward to 5 places.
// Both stay valid bounds.

std::string bounds_csv(const rigbounds::IntervalVector& v) {
  const unsigned d = rigbounds::denominator_log2(v.kind, v.window);
  std::ostringstream out;
  out << "# bounds kind=" << rigbounds::kind_name(v.kind) << " window=" << v.window
      << " denominator_log2=" << d << "\n";
  out << "# lower_numerator/2^denominator_log2 <= value <= upper_numerator/2^denominator_log2\n";
  out << "k,lower_numerator,upper_numerator,lower,upper\n";
  for (uint32_t k = 0; k < rigbounds::kTableSize; ++k) {
    out << k << "," << scaled_floor(v.lower[k], d) << "," << scaled_ceil(v.upper[k], d) << ","
        << format_decimal(v.lower[k], 5, RoundDir::down) << ","
        << format_decimal(v.upper[k], 5, RoundDir::up) << "\n";
  }
  return out.str();
}

rigbounds::IntervalVector parse_bounds_csv(const std::string& body, const std::string& name) {
  std::istringstream in(body);
  std::string line;
  rigbounds::IntervalVector v;
  unsigned d = 0;
  bool header_seen = false;
  uint32_t next_k = 0;
  auto fail = [&](const std::string& why) -> void {
    throw integrity_error("bounds csv " + name + ": " + why);
  };
  while (std::getline(in, line)) {
    if (line.rfind("# bounds ", 0) == 0) {
      std::stringstream meta(line.substr(9));
      std::string tok;
      while (meta >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) fail("malformed metadata");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "kind") {
          if (val == "z") v.kind = rigbounds::Kind::z;
          else if (val == "y") v.kind = rigbounds::Kind::y;
          else if (val == "m") v.kind = rigbounds::Kind::m;
          else if (val == "w") v.kind = rigbounds::Kind::w;
          else fail("unknown kind " + val);
        } else if (key == "window") {
          v.window = static_cast<uint32_t>(std::stoul(val));
        } else if (key == "denominator_log2") {
          d = static_cast<unsigned>(std::stoul(val));
        }
      }
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "k,lower_numerator,upper_numerator,lower,upper") fail("unexpected header");
      header_seen = true;
      continue;
    }
    std::stringstream row(line);
    std::string k_s, lo_s, up_s;
    if (!std::getline(row, k_s, ',') || !std::getline(row, lo_s, ',') ||
        !std::getline(row, up_s, ','))
      fail("short row");
    for (const std::string* s : {&k_s, &lo_s, &up_s})
      if (s->empty() || s->find_first_not_of("0123456789") != std::string::npos)
        fail("malformed integer in row '" + line + "'");
    if (std::stoul(k_s) != next_k) fail("rows out of order");
    if (next_k >= rigbounds::kTableSize) fail("too many rows");
    BigInt den = pow2(d);
    v.lower[next_k] = Rational(BigInt(lo_s), den);
    v.upper[next_k] = Rational(BigInt(up_s), den);
    if (v.lower[next_k] > v.upper[next_k]) fail("lower exceeds upper at k=" + k_s);
    ++next_k;
  }
  if (v.window == 0 || d == 0) fail("missing metadata");
  if (d != rigbounds::denominator_log2(v.kind, v.window)) fail("denominator mismatch");
  if (next_k != rigbounds::kTableSize) fail("row count");
  return v;
}

// --- commands ---------------------------------------------------------------

void cmd_pair_prob(uint32_t i, uint32_t j, bool closed_form) {
  Manifest man("pair-prob");
  man.param("i", i);
  man.param("j", j);
  man.param("closed_form", closed_form);
  DyadicProb exact = condgraph::pair_prob_exact(i, j);
  std::cout << "exact " << exact.to_rational() << "\n";
  if (closed_form) {
    condgraph::ClosedFormResult cf = condgraph::pair_prob_closed_form(i, j);
    std::cout << "closed-form " << cf.value.to_rational() << " "
              << (cf.valid ? "VALID" : "INVALID");
    if (!cf.well_formed) std::cout << " (not well-formed)";
    std::cout << "\n";
  }
  man.to_stdout();
}

void cmd_variance(uint32_t terms) {
  Manifest man("variance");
  man.param("terms", terms);
  moments::VarianceReport r = moments::variance_series(terms);
  std::cout << "terms " << r.truncation << "\n";
  std::cout << "partial_sum " << r.partial_sum.str(40, std::ios_base::fixed) << "\n";
  std::cout << "tail_bound " << r.tail_bound.str(6) << "\n";
  std::cout << "cross_tail_bound " << r.cross_tail_bound.str(6) << "\n";
  std::cout << "lower " << r.lower.str(40, std::ios_base::fixed) << "\n";
  std::cout << "upper " << r.upper.str(40, std::ios_base::fixed) << "\n";
  std::cout << "width " << HighFloat(r.upper - r.lower).str(6) << "\n";
  man.to_stdout();
}

void cmd_bounds(uint32_t n, uint32_t n1, bool all, std::vector<uint64_t> shard_idx,
                const std::string& out_dir) {
  if (all == !shard_idx.empty())
    throw std::invalid_argument("bounds: pass either --all or --shard");
  const uint64_t shard_count = uint64_t(1) << (n - n1);
  if (all)
    for (uint64_t i = 0; i < shard_count; ++i) shard_idx.push_back(i);
  for (uint64_t i : shard_idx)
    if (i >= shard_count)
      throw std::invalid_argument("bounds: shard index " + std::to_string(i) +
                                  " out of range [0, " + std::to_string(shard_count) + ")");
  std::vector<uint64_t> dedup = shard_idx;
  std::sort(dedup.begin(), dedup.end());
  if (std::adjacent_find(dedup.begin(), dedup.end()) != dedup.end())
    throw std::invalid_argument("bounds: duplicate shard index");

  fs::create_directories(out_dir);
  Manifest man("bounds");
  man.param("n", n);
  man.param("n1", n1);
  man.param("shards", shard_idx);
  std::mutex mu;
  std::atomic<size_t> cursor{0};
  std::exception_ptr first_error = nullptr;
  auto work = [&]() {
    for (;;) {
      const size_t slot = cursor.fetch_add(1);
      if (slot >= shard_idx.size()) return;
      const uint64_t key = shard_idx[slot] << n1;
      const fs::path path = fs::path(out_dir) / ("shard-" + std::to_string(key) + ".ckpt");
      try {
        bool kept = false;
        if (fs::exists(path)) {
          try {
            rigbounds::BoundsAccumulator acc = rigbounds::checkpoint_load(path.string());
            kept = acc.window == n && acc.split == n1 &&
                   acc.shards == std::vector<uint64_t>{key};
          } catch (const integrity_error&) {
            kept = false;  // recompute over a stale or damaged file
          }
        }
        if (!kept) {
          rigbounds::BoundsAccumulator acc = rigbounds::enumerate_shard(n, n1, key);
          const fs::path tmp = path.string() + ".tmp";
          rigbounds::checkpoint_save(acc, tmp.string());
          fs::rename(tmp, path);
        }
        const std::string bytes = read_file(path);
        std::lock_guard<std::mutex> lock(mu);
        if (kept)
          man.input(path.string(), bytes);
        else
          man.output(path.string(), bytes);
        std::cout << "shard " << key << (kept ? " kept" : " done") << "\n";
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        cursor.store(shard_idx.size());
      }
    }
  };
  const uint32_t workers = std::min<uint32_t>(env_workers(), shard_idx.size());
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (uint32_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  man.to_file(fs::path(out_dir) / "manifest.json");
}

void cmd_bounds_combine(const std::string& in_dir, const std::string& out) {
  std::vector<std::string> paths;
  if (fs::is_directory(in_dir)) {
    for (const auto& entry : fs::directory_iterator(in_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("shard-", 0) == 0 && name.size() > 5 &&
          name.substr(name.size() - 5) == ".ckpt")
        paths.push_back(entry.path().string());
    }
  }
  if (paths.empty()) throw integrity_error("bounds-combine: no checkpoints in " + in_dir);
  std::sort(paths.begin(), paths.end());
  Manifest man("bounds-combine");
  man.param("in", in_dir);
  for (const std::string& p : paths) man.input(p, read_file(p));
  rigbounds::BoundsAccumulator acc = rigbounds::checkpoint_merge(paths);
  rigbounds::IntervalVector z = rigbounds::combine(acc);
  emit(bounds_csv(z), out, man);
}

void cmd_derive(const std::string& kind, const std::string& in, const std::string& out) {
  Manifest man("derive");
  man.param("kind", kind);
  man.param("in", in);
  const std::string body = read_file(in);
  man.input(in, body);
  rigbounds::IntervalVector z = parse_bounds_csv(body, in);
  if (z.kind != rigbounds::Kind::z)
    throw integrity_error("derive: input must hold z bounds, found kind=" +
                          std::string(rigbounds::kind_name(z.kind)));
  rigbounds::IntervalVector derived;
  if (kind == "y") {
    derived = rigbounds::derive_y(z);
  } else if (kind == "m") {
    derived = rigbounds::derive_convolution(rigbounds::derive_y(z), rigbounds::Convolution::m_from_y);
  } else if (kind == "w") {
    derived = rigbounds::derive_convolution(z, rigbounds::Convolution::w_from_z);
  } else {
    throw std::invalid_argument("derive: kind must be y, m, or w");
  }
  emit(bounds_csv(derived), out, man);
}

std::string tally_csv(const simulate::ConfidenceTable& ct) {
  std::ostringstream out;
  out << "# tally kind=" << ct.kind << " window=" << ct.window << " samples=" << ct.samples
      << " seed=" << ct.seed << " generator=" << simulate::kGeneratorName
      << " level=" << fmt(ct.level, 4) << "\n";
  out << "# counts tally misses inside the window only; anything beyond it is untallied\n";
  out << "k,count,estimate,ci_lower,ci_upper\n";
  for (uint32_t k = 0; k < ct.rows.size(); ++k) {
    const simulate::ConfidenceRow& r = ct.rows[k];
    out << k << "," << r.count << "," << fmt(r.estimate, 10) << "," << fmt(r.lower, 10) << ","
        << fmt(r.upper, 10) << "\n";
  }
  return out.str();
}

void cmd_montecarlo(const std::string& kind, const std::string& samples_s, uint32_t window,
                    uint64_t seed, double level, const std::string& out) {
  const uint64_t samples = parse_count(samples_s);
  const uint32_t workers = env_workers();
  Manifest man("montecarlo");
  man.param("kind", kind);
  man.param("samples", samples);
  man.param("window", window);
  man.param("seed", seed);
  man.param("generator", simulate::kGeneratorName);
  if (kind == "fringe") {
    simulate::FringeTable f = simulate::fringe_stats(window, samples, seed, workers);
    std::ostringstream body;
    body << "# fringe window=" << f.window << " samples=" << f.samples << " seed=" << f.seed
         << " generator=" << simulate::kGeneratorName << "\n";
    body << "# X = first present sum, W = left end of a longest filled run; empty bins omitted\n";
    body << "k,count,mean_first_present,mean_run_start\n";
    for (const simulate::FringeRow& r : f.rows())
      body << r.k << "," << r.count << "," << fmt(r.mean_first_present, 6) << ","
           << fmt(r.mean_run_start, 6) << "\n";
    emit(body.str(), out, man);
    return;
  }
  man.param("level", level);
  simulate::TallyTable t;
  if (kind == "z") {
    t = simulate::sample_z(samples, window, seed, workers);
  } else if (kind == "m") {
    t = simulate::sample_m(window, samples, seed, workers);
  } else if (kind == "y") {
    t = simulate::sample_y(samples, window, seed, workers);
  } else {
    throw std::invalid_argument("montecarlo: kind must be z, m, y, or fringe");
  }
  emit(tally_csv(simulate::confidence(t, level)), out, man);
}

void cmd_models_scan(const std::string& family, double lo, double hi, double step, uint32_t k,
                     const std::string& out) {
  Manifest man("models divot-scan");
  man.param("family", family);
  man.param("lo", lo);
  man.param("hi", hi);
  man.param("step", step);
  man.param("k", k);
  models::DivotScan scan = models::divot_scan(family, lo, hi, step, k);
  json doc;
  doc["family"] = scan.family;
  doc["divot_k"] = scan.divot_k;
  doc["grid_lo"] = scan.grid_lo;
  doc["grid_hi"] = scan.grid_hi;
  doc["grid_step"] = scan.grid_step;
  doc["intervals"] = json::array();
  for (const models::DivotInterval& iv : scan.intervals)
    doc["intervals"].push_back({{"lower", iv.lower}, {"upper", iv.upper}});
  emit(doc.dump(2) + "\n", out, man);
}

void cmd_models_fit(const std::string& in, bool weighted, const std::string& out) {
  Manifest man("models fit");
  man.param("in", in);
  man.param("weighted", weighted);
  const std::string body = read_file(in);
  man.input(in, body);
  std::istringstream stream(body);
  std::string line;
  uint64_t samples = 0;
  std::string kind;
  std::vector<double> estimates;
  bool header_seen = false;
  while (std::getline(stream, line)) {
    if (line.rfind("# tally ", 0) == 0) {
      std::stringstream meta(line.substr(8));
      std::string tok;
      while (meta >> tok) {
        if (tok.rfind("samples=", 0) == 0) samples = std::stoull(tok.substr(8));
        if (tok.rfind("kind=", 0) == 0) kind = tok.substr(5);
      }
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("k,count,estimate", 0) != 0)
        throw integrity_error("models fit: " + in + " is not a tally csv");
      header_seen = true;
      continue;
    }
    std::stringstream row(line);
    std::string k_s, count_s, est_s;
    if (!std::getline(row, k_s, ',') || !std::getline(row, count_s, ',') ||
        !std::getline(row, est_s, ','))
      throw integrity_error("models fit: short row in " + in);
    estimates.push_back(std::stod(est_s));
  }
  if (estimates.empty()) throw integrity_error("models fit: no rows in " + in);
  if (kind != "z")
    throw integrity_error("models fit: the geometric family models the prefix curve; "
                          "input must be a kind=z tally, found kind=" + kind);
  if (estimates.size() > rigbounds::kTableSize) estimates.resize(rigbounds::kTableSize);
  models::LambdaFit fit;
  if (weighted) {
    if (samples == 0) throw integrity_error("models fit: tally metadata lacks samples");
    std::vector<double> w(estimates.size());
    for (size_t k = 0; k < estimates.size(); ++k) {
      const double p = estimates[k];
      const double var = std::max(p * (1 - p), 1.0 / double(samples)) / double(samples);
      w[k] = 1.0 / var;
    }
    fit = models::fit_lambda(estimates, &w);
  } else {
    fit = models::fit_lambda(estimates);
  }
  size_t worst = 0;
  for (size_t k = 1; k < fit.residual_share.size(); ++k)
    if (fit.residual_share[k] > fit.residual_share[worst]) worst = k;
  json doc;
  doc["family"] = "geometric";
  doc["lambda"] = fit.lambda;
  doc["sse"] = fit.sse;
  doc["weighted"] = weighted;
  doc["points"] = estimates.size();
  doc["residual_share"] = fit.residual_share;
  doc["worst_k"] = worst;
  emit(doc.dump(2) + "\n", out, man);
}

void cmd_brute(uint32_t n, const std::string& out) {
  Manifest man("brute");
  man.param("n", n);
  core::ExactDistribution d = core::brute_distribution(n);
  if (!d.sums_to_one()) throw integrity_error("brute: masses do not sum to 1");
  const unsigned den = 2 * n - 1;
  std::ostringstream body;
  body << "# brute window=" << n << " denominator_log2=" << den << "\n";
  body << "# masses sum to exactly 1\n";
  body << "k,numerator,probability\n";
  for (uint32_t k = 0; k < d.masses.size(); ++k) {
    const DyadicProb& p = d.masses[k];
    body << k << "," << (p.numerator() << (den - p.denominator_log2())) << ","
         << fmt(p.to_double(), 10) << "\n";
  }
  emit(body.str(), out, man);
}

void cmd_lambda(const std::string& config_s, uint32_t kmin, uint32_t kmax,
                const std::string& out) {
  std::vector<uint32_t> config = parse_config(config_s);
  Manifest man("lambda");
  man.param("config", config);
  man.param("kmin", kmin);
  man.param("kmax", kmax);
  condgraph::LambdaEstimate est = condgraph::estimate_lambda(config, kmin, kmax);
  std::ostringstream body;
  body << "# lambda config=" << config_s << " k_min=" << est.k_min << " k_max=" << est.k_max
       << " fekete_log2_c=" << est.fekete_log2_c << "\n";
  body << "k,probability,probability_decimal,ratio\n";
  for (size_t t = 0; t < est.probs.size(); ++t) {
    body << (est.k_min + t) << "," << est.probs[t].to_string() << ","
         << fmt(est.probs[t].to_double(), 10) << ",";
    if (t > 0) body << fmt(est.ratios[t - 1], 6);
    body << "\n";
  }
  body << "# lambda_low " << fmt(est.lambda_low, 6) << "\n";
  body << "# lambda_high " << fmt(est.lambda_high, 6) << "\n";
  emit(body.str(), out, man);
}

void cmd_consecutive(uint32_t k, uint32_t m) {
  Manifest man("consecutive");
  man.param("k", k);
  man.param("m", m);
  condgraph::ConsecutiveBounds b = condgraph::consecutive_bounds(k, m);
  std::cout << "lower " << b.lower.to_rational() << " (=" << fmt(b.lower.to_double(), 10)
            << ")\n";
  std::cout << "upper " << fmt(b.upper, 10) << "\n";
  man.to_stdout();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"missing-sum distribution tools"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* pair = app.add_subcommand("pair-prob", "exact probability that i and j are both missing");
  uint32_t pair_i = 0, pair_j = 0;
  bool pair_closed = false;
  pair->add_option("--i", pair_i, "smaller target")->required();
  pair->add_option("--j", pair_j, "larger target")->required();
  pair->add_flag("--closed-form", pair_closed, "also evaluate the closed form and its validity");
  pair->callback([&] { cmd_pair_prob(pair_i, pair_j, pair_closed); });

  auto* var = app.add_subcommand("variance", "variance series certificate for the miss count");
  uint32_t var_terms = 0;
  var->add_option("--terms", var_terms, "truncation depth N >= 2")->required();
  var->callback([&] { cmd_variance(var_terms); });

  auto* bounds = app.add_subcommand("bounds", "enumerate prefix shards into checkpoints");
  uint32_t b_n = 0, b_n1 = 0;
  bool b_all = false;
  std::vector<uint64_t> b_shards;
  std::string b_out;
  bounds->add_option("--n", b_n, "prefix window")->required();
  bounds->add_option("--n1", b_n1, "split point; shards are keyed by bits [n1, n)")->required();
  bounds->add_flag("--all", b_all, "run every shard");
  bounds->add_option("--shard", b_shards, "shard index in [0, 2^(n-n1)); repeatable");
  bounds->add_option("--out", b_out, "checkpoint directory")->required();
  bounds->callback([&] { cmd_bounds(b_n, b_n1, b_all, b_shards, b_out); });

  auto* combine = app.add_subcommand("bounds-combine", "merge checkpoints into z bound tables");
  std::string c_in, c_out;
  combine->add_option("--in", c_in, "checkpoint directory")->required();
  combine->add_option("--out", c_out, "output csv (stdout if omitted)");
  combine->callback([&] { cmd_bounds_combine(c_in, c_out); });

  auto* derive = app.add_subcommand("derive", "derive y, m, or w bound tables from a z table");
  std::string d_kind, d_in, d_out;
  derive->add_option("--kind", d_kind, "y, m, or w")->required();
  derive->add_option("--in", d_in, "z bounds csv")->required();
  derive->add_option("--out", d_out, "output csv (stdout if omitted)");
  derive->callback([&] { cmd_derive(d_kind, d_in, d_out); });

  auto* mc = app.add_subcommand("montecarlo", "sample miss statistics and tally with intervals");
  std::string mc_kind, mc_samples, mc_out;
  uint32_t mc_window = 256;
  uint64_t mc_seed = 1;
  double mc_level = 0.999;
  mc->add_option("--kind", mc_kind, "z, m, y, or fringe")->required();
  mc->add_option("--samples", mc_samples, "sample count (plain or 2^k)")->required();
  mc->add_option("--window", mc_window, "set window (default 256)");
  mc->add_option("--seed", mc_seed, "stream seed (default 1)");
  mc->add_option("--level", mc_level, "confidence level (default 0.999)");
  mc->add_option("--out", mc_out, "output csv (stdout if omitted)");
  mc->callback([&] { cmd_montecarlo(mc_kind, mc_samples, mc_window, mc_seed, mc_level, mc_out); });

  auto* models_cmd = app.add_subcommand("models", "analytic model families");
  models_cmd->require_subcommand(1);
  auto* scan = models_cmd->add_subcommand("divot-scan", "parameter ranges where m dips at k");
  std::string s_family, s_out;
  double s_lo = 0, s_hi = 0, s_step = 1e-4;
  uint32_t s_k = 7;
  scan->add_option("--family", s_family, "geometric or poisson")->required();
  scan->add_option("--lo", s_lo, "scan start")->required();
  scan->add_option("--hi", s_hi, "scan end")->required();
  scan->add_option("--step", s_step, "grid step (default 1e-4)");
  scan->add_option("--k", s_k, "dip position (default 7)");
  scan->add_option("--out", s_out, "output json (stdout if omitted)");
  scan->callback([&] { cmd_models_scan(s_family, s_lo, s_hi, s_step, s_k, s_out); });
  auto* fit = models_cmd->add_subcommand("fit", "least-squares geometric fit to a tally csv");
  std::string f_in, f_out;
  bool f_weighted = false;
  fit->add_option("--in", f_in, "tally csv from montecarlo")->required();
  fit->add_flag("--weighted", f_weighted, "weight by inverse estimate variance");
  fit->add_option("--out", f_out, "output json (stdout if omitted)");
  fit->callback([&] { cmd_models_fit(f_in, f_weighted, f_out); });

  auto* brute = app.add_subcommand("brute", "exact miss distribution by full enumeration");
  uint32_t br_n = 0;
  std::string br_out;
  brute->add_option("--n", br_n, "window, at most 24")->required();
  brute->add_option("--out", br_out, "output csv (stdout if omitted)");
  brute->callback([&] { cmd_brute(br_n, br_out); });

  auto* lam = app.add_subcommand("lambda", "decay-rate bracket for a shifted configuration");
  std::string l_config, l_out;
  uint32_t l_kmin = 1, l_kmax = 0;
  lam->add_option("--config", l_config, "comma-separated targets, e.g. 0,1,3")->required();
  lam->add_option("--kmin", l_kmin, "first shift (default 1)");
  lam->add_option("--kmax", l_kmax, "last shift")->required();
  lam->add_option("--out", l_out, "output csv (stdout if omitted)");
  lam->callback([&] { cmd_lambda(l_config, l_kmin, l_kmax, l_out); });

  auto* consec = app.add_subcommand("consecutive", "bounds on a run of consecutive misses");
  uint32_t cs_k = 0, cs_m = 0;
  consec->add_option("--k", cs_k, "run starts after k")->required();
  consec->add_option("--m", cs_m, "run length")->required();
  consec->callback([&] { cmd_consecutive(cs_k, cs_m); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const capacity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const integrity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
