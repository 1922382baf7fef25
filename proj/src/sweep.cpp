#include "gcbm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gcbm/combinatorics.hpp"
#include "gcbm/limits.hpp"
#include "gcbm/rng.hpp"

namespace gcbm {

const char* method_name(DecoderMethod m) {
  switch (m) {
    case DecoderMethod::kMlExhaustive:
      return "ml";
    case DecoderMethod::kGf2:
      return "gf2";
    case DecoderMethod::kTwoStage:
      return "alg1";
  }
  return "?";
}

DecoderMethod method_from_string(std::string_view text) {
  if (text == "ml") return DecoderMethod::kMlExhaustive;
  if (text == "gf2") return DecoderMethod::kGf2;
  if (text == "alg1") return DecoderMethod::kTwoStage;
  throw ConfigError("unknown decoder method: " + std::string(text));
}

std::uint32_t SweepSpec::effective_trials() const {
  if (trials > 0) return trials;
  return kind == MeasurementKind::kHomogeneity ? 100 : 50;
}

void SweepSpec::validate() const {
  if (n_values.empty() || d_values.empty() || theta_values.empty() ||
      multipliers.empty()) {
    throw ConfigError("sweep: n, d, theta and multipliers must be non-empty");
  }
  for (const auto n : n_values) {
    for (const auto d : d_values) {
      if (d < 2 || 2 * d > n) {
        throw ConfigError("sweep: every (n, d) pair needs 2 <= d <= n/2");
      }
      if (method == DecoderMethod::kMlExhaustive && n > 24) {
        throw ConfigError("sweep: ml method is limited to n <= 24");
      }
    }
  }
  for (const auto theta : theta_values) {
    if (!(theta >= 0.0 && theta < 0.5)) {
      throw ConfigError("sweep: theta must be in [0, 1/2)");
    }
    if (method == DecoderMethod::kGf2 && theta != 0.0) {
      throw ConfigError("sweep: gf2 method requires theta = 0");
    }
  }
  for (const auto mult : multipliers) {
    if (!(mult >= 0.0)) throw ConfigError("sweep: multipliers must be >= 0");
  }
  if (method == DecoderMethod::kGf2 && kind != MeasurementKind::kParity) {
    throw ConfigError("sweep: gf2 method requires parity measurements");
  }
  if (method == DecoderMethod::kTwoStage &&
      kind != MeasurementKind::kHomogeneity) {
    throw ConfigError("sweep: alg1 method requires homogeneity measurements");
  }
  if (!(refine_c > 0.0)) throw ConfigError("sweep: refine_c must be positive");
  spectral.validate();
}

namespace {

double normalization_base(const SweepSpec& spec, std::uint32_t n,
                          std::uint32_t d, double theta) {
  if (spec.normalization == NormalizationMode::kLinearMax) {
    const double nd = static_cast<double>(n);
    return std::max(nd, nd * std::log(nd) / static_cast<double>(d));
  }
  return spec.kind == MeasurementKind::kHomogeneity
             ? homogeneity_threshold(n, d, theta).sample_complexity_limit
             : parity_threshold(n, d, theta).sample_complexity_limit;
}

std::uint64_t grid_point_id(const SweepSpec& spec, std::uint32_t n,
                            std::uint32_t d, double theta, double multiplier) {
  std::uint64_t h = mix_seed(static_cast<std::uint64_t>(spec.kind),
                             static_cast<std::uint64_t>(spec.normalization));
  h = mix_seed(h, n, d);
  h = mix_seed(h, std::bit_cast<std::uint64_t>(theta),
               std::bit_cast<std::uint64_t>(multiplier));
  return h;
}

TrialRecord run_trial(const SweepSpec& spec, const ModelParams& params,
                      std::uint64_t trial_seed) {
  Rng rng(trial_seed);
  const BitVector truth =
      spec.balanced_truth ? BitVector::random_balanced(rng, params.n)
                          : BitVector::random(rng, params.n);
  const MeasurementSet ms =
      sample_measurements(params, truth, rng.next_u64());
  TrialRecord record;
  record.samples = ms.edge_count();
  try {
    DecodeResult decoded;
    switch (spec.method) {
      case DecoderMethod::kMlExhaustive:
        decoded = decode_ml_exhaustive(ms);
        break;
      case DecoderMethod::kGf2:
        decoded = decode_parity_noiseless(ms);
        break;
      case DecoderMethod::kTwoStage:
        decoded = decode_two_stage(ms, spec.spectral, spec.refine_c);
        break;
    }
    record.success =
        recovery_success(params.kind, params.d, truth, decoded.estimate);
  } catch (const UnderdeterminedError&) {
    record.success = false;
  } catch (const InconsistentSystemError&) {
    record.success = false;
  } catch (const DegenerateInputError&) {
    record.success = false;
  }
  return record;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, unsigned jobs) {
  spec.validate();
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  const std::uint32_t trials = spec.effective_trials();

  SweepResult result;
  for (const auto n : spec.n_values) {
    for (const auto d : spec.d_values) {
      for (const auto theta : spec.theta_values) {
        const double base = normalization_base(spec, n, d, theta);
        for (const auto multiplier : spec.multipliers) {
          const auto start = std::chrono::steady_clock::now();
          const double target = multiplier * base;
          double p = 0.0;
          if (target > 0.0) {
            p = std::min(
                1.0, std::exp(std::log(target) -
                              log_binomial(static_cast<double>(n),
                                           static_cast<double>(d))));
          }
          const ModelParams params{n, d, p, theta, spec.kind};
          const std::uint64_t point_id =
              grid_point_id(spec, n, d, theta, multiplier);

          std::vector<TrialRecord> records(trials);
          std::atomic<std::uint32_t> next{0};
          std::exception_ptr failure;
          std::mutex failure_mutex;
          auto worker = [&] {
            for (;;) {
              const std::uint32_t t =
                  next.fetch_add(1, std::memory_order_relaxed);
              if (t >= trials) return;
              try {
                records[t] = run_trial(
                    spec, params, mix_seed(spec.master_seed, point_id, t));
              } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
              }
            }
          };
          const unsigned workers = std::min<unsigned>(jobs, trials);
          if (workers <= 1) {
            worker();
          } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
          }
          if (failure) std::rethrow_exception(failure);

          // aggregate in trial-index order: independent of worker count
          std::uint64_t sample_sum = 0;
          std::uint32_t successes = 0;
          for (const auto& record : records) {
            sample_sum += record.samples;
            successes += record.success;
          }
          SweepRow row;
          row.kind = spec.kind;
          row.n = n;
          row.d = d;
          row.theta = theta;
          row.multiplier = multiplier;
          row.mean_samples =
              static_cast<double>(sample_sum) / static_cast<double>(trials);
          row.successes = successes;
          row.trials = trials;
          row.rate = static_cast<double>(successes) / static_cast<double>(trials);
          row.seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
          result.rows.push_back(row);
        }
      }
    }
  }
  return result;
}

void emit_csv(const SweepResult& result, std::ostream& out,
              bool include_timing) {
  out << "kind,n,d,theta,multiplier,mean_samples,successes,trials,rate,seconds\n";
  for (const auto& row : result.rows) {
    out << kind_code(row.kind) << ',' << row.n << ',' << row.d << ','
        << format_double(row.theta) << ',' << format_double(row.multiplier)
        << ',' << format_double(row.mean_samples) << ',' << row.successes
        << ',' << row.trials << ',' << format_double(row.rate) << ','
        << (include_timing ? format_double(row.seconds) : "0") << '\n';
  }
}

void emit_csv_file(const SweepResult& result, const std::string& path,
                   bool include_timing) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  emit_csv(result, out, include_timing);
  if (!out) throw IoError("write failed: " + path);
}

void emit_plot_script(const SweepResult& result, const std::string& csv_path,
                      const std::string& script_path) {
  if (result.rows.empty()) {
    throw DegenerateInputError("emit_plot_script: empty sweep result");
  }
  std::ofstream out(script_path);
  if (!out) throw IoError("cannot open for writing: " + script_path);
  out << "#!/usr/bin/env python3\n"
         "# Generated plot script: empirical success rate vs normalized\n"
         "# sample complexity, one curve per (kind, n, d, theta).\n"
         "import csv\n"
         "from collections import defaultdict\n"
         "import matplotlib\n"
         "matplotlib.use(\"Agg\")\n"
         "import matplotlib.pyplot as plt\n"
         "\n"
         "CSV_PATH = \""
      << csv_path
      << "\"\n"
         "\n"
         "curves = defaultdict(list)\n"
         "with open(CSV_PATH) as f:\n"
         "    for row in csv.DictReader(f):\n"
         "        key = \"kind={} n={} d={} theta={}\".format(\n"
         "            row[\"kind\"], row[\"n\"], row[\"d\"], row[\"theta\"])\n"
         "        curves[key].append((float(row[\"multiplier\"]),\n"
         "                            float(row[\"rate\"])))\n"
         "\n"
         "plt.figure(figsize=(6.4, 4.2))\n"
         "for key, pts in sorted(curves.items()):\n"
         "    pts.sort()\n"
         "    plt.plot([x for x, _ in pts], [y for _, y in pts],\n"
         "             marker=\"o\", label=key)\n"
         "plt.axvline(1.0, color=\"gray\", linestyle=\":\", linewidth=1)\n"
         "plt.xlabel(\"normalized sample complexity\")\n"
         "plt.ylabel(\"empirical success rate\")\n"
         "plt.ylim(-0.05, 1.05)\n"
         "plt.legend(fontsize=7)\n"
         "plt.tight_layout()\n"
         "plt.savefig(CSV_PATH + \".png\", dpi=150)\n"
         "print(\"wrote\", CSV_PATH + \".png\")\n";
  if (!out) throw IoError("write failed: " + script_path);
}

namespace {

std::string trim(std::string_view text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return std::string(text.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_double(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("sweep config: bad numeric value for " + key + ": " + text);
  }
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const unsigned long long value = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("sweep config: bad integer value for " + key + ": " + text);
  }
}

bool parse_bool(const std::string& text, const std::string& key) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("sweep config: bad boolean value for " + key + ": " + text);
}

}  // namespace

SweepSpec parse_sweep_config(std::istream& in) {
  SweepSpec spec;
  bool trials_given = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("sweep config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "kind") {
      spec.kind = kind_from_string(value);
    } else if (key == "method") {
      spec.method = method_from_string(value);
    } else if (key == "n") {
      spec.n_values.clear();
      for (const auto& item : split_list(value)) {
        spec.n_values.push_back(
            static_cast<std::uint32_t>(parse_u64(item, key)));
      }
    } else if (key == "d") {
      spec.d_values.clear();
      for (const auto& item : split_list(value)) {
        spec.d_values.push_back(
            static_cast<std::uint32_t>(parse_u64(item, key)));
      }
    } else if (key == "theta") {
      spec.theta_values.clear();
      for (const auto& item : split_list(value)) {
        spec.theta_values.push_back(parse_double(item, key));
      }
    } else if (key == "multipliers") {
      spec.multipliers.clear();
      for (const auto& item : split_list(value)) {
        spec.multipliers.push_back(parse_double(item, key));
      }
    } else if (key == "trials") {
      spec.trials = static_cast<std::uint32_t>(parse_u64(value, key));
      trials_given = true;
    } else if (key == "master_seed") {
      spec.master_seed = parse_u64(value, key);
    } else if (key == "normalization") {
      if (value == "theorem") {
        spec.normalization = NormalizationMode::kTheoremThreshold;
      } else if (value == "linear") {
        spec.normalization = NormalizationMode::kLinearMax;
      } else {
        throw ConfigError("sweep config: normalization must be theorem|linear");
      }
    } else if (key == "balanced") {
      spec.balanced_truth = parse_bool(value, key);
    } else if (key == "refine_c") {
      spec.refine_c = parse_double(value, key);
    } else if (key == "power_iterations") {
      spec.spectral.power_iterations =
          static_cast<std::uint32_t>(parse_u64(value, key));
    } else if (key == "tolerance") {
      spec.spectral.tolerance = parse_double(value, key);
    } else if (key == "deflation") {
      spec.spectral.deflation = parse_bool(value, key);
    } else {
      throw ConfigError("sweep config line " + std::to_string(lineno) +
                        ": unknown key " + key);
    }
  }
  if (trials_given && spec.trials == 0) {
    throw ConfigError("sweep config: trials must be >= 1");
  }
  return spec;
}

SweepSpec parse_sweep_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return parse_sweep_config(in);
}

}  // namespace gcbm
