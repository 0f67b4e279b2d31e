#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ftmesh/io.hpp"
#include "ftmesh/metrics.hpp"
#include "ftmesh/optimize.hpp"
#include "ftmesh/parallel.hpp"
#include "ftmesh/sampling.hpp"

namespace ftmesh {

using nlohmann::json;

enum class TargetFamily { HaarUnitary, BlockDiagonal, HaarState };

inline const char* to_string(TargetFamily f) {
  switch (f) {
    case TargetFamily::HaarUnitary: return "haar-unitary";
    case TargetFamily::BlockDiagonal: return "block-diagonal";
    case TargetFamily::HaarState: return "state";
  }
  return "?";
}

inline TargetFamily parse_family(const std::string& s) {
  if (s == "haar-unitary") return TargetFamily::HaarUnitary;
  if (s == "block-diagonal") return TargetFamily::BlockDiagonal;
  if (s == "state") return TargetFamily::HaarState;
  throw std::invalid_argument("unknown target family: " + s);
}

// Number of Fourier layers as a function of the dimension.
struct LayerRule {
  enum class Kind { D, DPlus1, DPlus2, Fixed };
  Kind kind = Kind::DPlus1;
  int fixed = 0;

  static LayerRule d() { return {Kind::D, 0}; }
  static LayerRule d_plus_1() { return {Kind::DPlus1, 0}; }
  static LayerRule d_plus_2() { return {Kind::DPlus2, 0}; }
  static LayerRule fixed_layers(int k) { return {Kind::Fixed, k}; }

  int layers_for(int dim) const {
    switch (kind) {
      case Kind::D: return dim;
      case Kind::DPlus1: return dim + 1;
      case Kind::DPlus2: return dim + 2;
      case Kind::Fixed: return fixed;
    }
    return 0;
  }

  std::string name() const {
    switch (kind) {
      case Kind::D: return "d";
      case Kind::DPlus1: return "d+1";
      case Kind::DPlus2: return "d+2";
      case Kind::Fixed: return std::to_string(fixed);
    }
    return "?";
  }

  static LayerRule parse(const std::string& s) {
    if (s == "d") return d();
    if (s == "d+1") return d_plus_1();
    if (s == "d+2") return d_plus_2();
    try {
      const int k = std::stoi(s);
      if (k >= 1) return fixed_layers(k);
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("unknown layer rule: " + s);
  }
};

enum class PhaseReduction { None, DropRandomPhase, PinInnerLayers, PinLastLayer };

inline const char* to_string(PhaseReduction r) {
  switch (r) {
    case PhaseReduction::None: return "none";
    case PhaseReduction::DropRandomPhase: return "drop-random";
    case PhaseReduction::PinInnerLayers: return "pin-inner";
    case PhaseReduction::PinLastLayer: return "pin-last";
  }
  return "?";
}

inline PhaseReduction parse_reduction(const std::string& s) {
  if (s == "none") return PhaseReduction::None;
  if (s == "drop-random") return PhaseReduction::DropRandomPhase;
  if (s == "pin-inner") return PhaseReduction::PinInnerLayers;
  if (s == "pin-last") return PhaseReduction::PinLastLayer;
  throw std::invalid_argument("unknown phase reduction: " + s);
}

struct ExperimentPlan {
  std::string name = "experiment";
  TargetFamily family = TargetFamily::HaarUnitary;
  std::vector<int> dims;
  LayerRule rule = LayerRule::d_plus_1();
  int n_samples = 100;
  OptimSettings optim;
  PhaseReduction reduction = PhaseReduction::None;
  std::uint64_t master_seed = 0;

  Mode mode() const {
    return family == TargetFamily::HaarState ? Mode::State : Mode::Unitary;
  }

  void validate() const {
    if (dims.empty()) throw std::invalid_argument("plan: dims must be nonempty");
    for (int d : dims)
      if (d < 2) throw std::invalid_argument("plan: dims must all be >= 2");
    if (n_samples < 0) throw std::invalid_argument("plan: n_samples must be >= 0");
    if (family == TargetFamily::HaarState) {
      if (rule.kind != LayerRule::Kind::Fixed || rule.fixed < 1 || rule.fixed > 4)
        throw std::invalid_argument(
            "plan: state family requires a fixed layer count in {1..4}");
    } else if (rule.kind == LayerRule::Kind::Fixed) {
      throw std::invalid_argument("plan: unitary families require rule d, d+1 or d+2");
    }
    if (reduction != PhaseReduction::None && rule.kind != LayerRule::Kind::DPlus1)
      throw std::invalid_argument("plan: phase reduction requires the d+1 rule");
    optim.validate();
  }

  json to_json() const {
    return json{{"name", name},
                {"family", to_string(family)},
                {"dims", dims},
                {"rule", rule.name()},
                {"n_samples", n_samples},
                {"n_starts", optim.n_starts},
                {"max_iterations", optim.max_iterations},
                {"grad_tolerance", optim.grad_tolerance},
                {"infidelity_target", optim.infidelity_target},
                {"reduction", to_string(reduction)},
                {"master_seed", master_seed}};
  }

  // FNV-1a over the canonical JSON encoding
  std::string fingerprint() const {
    const std::string s = to_json().dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

struct ExperimentRecord {
  int dim = 0;
  int ft_layers = 0;
  int sample_index = 0;
  std::string target_kind;
  double best_infidelity = std::numeric_limits<double>::quiet_NaN();
  double log10_infidelity = 0.0;  // clamped at -16
  bool clamped = false;
  bool failed = false;  // all starts aborted
  int n_starts_used = 0;
  long iterations_total = 0;
  double wall_time_ms = 0.0;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> stream_path;  // (dim, sample) lineage
  std::vector<double> phases;              // full free-phase vector, fixed entries 0
  std::vector<int> fixed_indices;          // phase-reduction pins

  json to_json() const {
    json j{{"dim", dim},
           {"ft_layers", ft_layers},
           {"sample_index", sample_index},
           {"target_kind", target_kind},
           {"log10_infidelity", log10_infidelity},
           {"clamped", clamped},
           {"failed", failed},
           {"n_starts_used", n_starts_used},
           {"iterations_total", iterations_total},
           {"wall_time_ms", wall_time_ms},
           {"master_seed", master_seed},
           {"stream_path", stream_path},
           {"phases", phases},
           {"fixed_indices", fixed_indices}};
    if (failed)
      j["best_infidelity"] = nullptr;
    else
      j["best_infidelity"] = best_infidelity;
    return j;
  }

  static ExperimentRecord from_json(const json& j) {
    ExperimentRecord r;
    r.dim = j.at("dim").get<int>();
    r.ft_layers = j.at("ft_layers").get<int>();
    r.sample_index = j.at("sample_index").get<int>();
    r.target_kind = j.at("target_kind").get<std::string>();
    r.failed = j.at("failed").get<bool>();
    if (!r.failed) r.best_infidelity = j.at("best_infidelity").get<double>();
    r.log10_infidelity = j.at("log10_infidelity").get<double>();
    r.clamped = j.at("clamped").get<bool>();
    r.n_starts_used = j.at("n_starts_used").get<int>();
    r.iterations_total = j.at("iterations_total").get<long>();
    r.wall_time_ms = j.at("wall_time_ms").get<double>();
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.stream_path = j.at("stream_path").get<std::vector<std::uint64_t>>();
    r.phases = j.at("phases").get<std::vector<double>>();
    r.fixed_indices = j.at("fixed_indices").get<std::vector<int>>();
    return r;
  }
};

inline double clamp_log10_infidelity(double infidelity, bool* clamped = nullptr) {
  const double floor_value = -16.0;
  if (clamped) *clamped = false;
  if (!(infidelity > 0.0) || std::log10(infidelity) < floor_value) {
    if (clamped) *clamped = true;
    return floor_value;
  }
  return std::log10(infidelity);
}

// Draws the sample target for a plan family on the given seed substream.
inline TargetSpec make_target(TargetFamily family, int dim, const SeedSpec& seed) {
  switch (family) {
    case TargetFamily::HaarUnitary: {
      TargetSpec t;
      t.kind = TargetKind::HaarUnitary;
      t.matrix = haar_unitary(dim, seed);
      t.provenance = seed;
      return t;
    }
    case TargetFamily::BlockDiagonal:
      return block_diagonal_unitary(dim, seed);
    case TargetFamily::HaarState: {
      TargetSpec t;
      t.kind = TargetKind::HaarState;
      t.state = haar_state(dim, seed);
      t.provenance = seed;
      return t;
    }
  }
  throw std::logic_error("make_target: bad family");
}

// Phase subset implementing the requested reduction for a d+1-rule config.
// DropRandomPhase fixes one uniformly chosen free phase; PinInnerLayers fixes
// all d-1 free phases of one uniformly chosen inner layer; PinLastLayer fixes
// those of P_N. Random choices come from the dedicated per-sample substream.
inline PhaseSubset reduction_subset(const MeshConfig& cfg, PhaseReduction reduction,
                                    const SeedSpec& seed) {
  const int n = cfg.free_phase_count();
  const int per_layer = cfg.dim - 1;
  std::vector<int> fixed;
  switch (reduction) {
    case PhaseReduction::None:
      return PhaseSubset::all(n);
    case PhaseReduction::DropRandomPhase: {
      Rng rng(seed);
      fixed.push_back(static_cast<int>(rng.next_u64() % n));
      break;
    }
    case PhaseReduction::PinInnerLayers: {
      const int inner_count = cfg.phase_layer_count() - 2;
      if (inner_count < 1)
        throw std::invalid_argument("reduction: no inner layers to pin");
      Rng rng(seed);
      const int layer = 1 + static_cast<int>(rng.next_u64() % inner_count);
      for (int k = 0; k < per_layer; ++k) fixed.push_back(layer * per_layer + k);
      break;
    }
    case PhaseReduction::PinLastLayer: {
      const int layer = cfg.phase_layer_count() - 1;
      for (int k = 0; k < per_layer; ++k) fixed.push_back(layer * per_layer + k);
      break;
    }
  }
  return PhaseSubset::without(n, fixed);
}

namespace detail {

// seed substream purposes under (dim, sample)
constexpr std::uint64_t kTargetStream = 0;
constexpr std::uint64_t kStartStream = 1;
constexpr std::uint64_t kReductionStream = 2;

inline SeedSpec sample_seed(std::uint64_t master, int dim, int sample) {
  SeedSpec s;
  s.master_seed = master;
  s.stream_path = {static_cast<std::uint64_t>(dim), static_cast<std::uint64_t>(sample)};
  return s;
}

}  // namespace detail

// One (dim, sample) work item, runnable in isolation.
inline ExperimentRecord run_sample(const ExperimentPlan& plan, int dim, int sample) {
  MeshConfig cfg{dim, plan.rule.layers_for(dim), plan.mode()};
  const SeedSpec base = detail::sample_seed(plan.master_seed, dim, sample);
  const TargetSpec target =
      make_target(plan.family, dim, base.child(detail::kTargetStream));
  const PhaseSubset subset =
      reduction_subset(cfg, plan.reduction, base.child(detail::kReductionStream));

  ExperimentRecord rec;
  rec.dim = dim;
  rec.ft_layers = cfg.ft_layers;
  rec.sample_index = sample;
  rec.target_kind = to_string(target.kind);
  rec.master_seed = plan.master_seed;
  rec.stream_path = base.stream_path;
  rec.n_starts_used = plan.optim.n_starts;
  rec.fixed_indices = subset.fixed_indices();
  try {
    const OptimResult result =
        multi_start(cfg, target, plan.optim, base.child(detail::kStartStream), subset);
    rec.best_infidelity = result.best_infidelity;
    rec.log10_infidelity = clamp_log10_infidelity(result.best_infidelity, &rec.clamped);
    rec.iterations_total = result.total_iterations();
    rec.wall_time_ms = result.wall_time_ms;
    rec.phases.assign(result.best_phases.data(),
                      result.best_phases.data() + result.best_phases.size());
  } catch (const MultiStartError& e) {
    rec.failed = true;
    rec.log10_infidelity = 0.0;
    for (const auto& r : e.reports) rec.iterations_total += r.iterations;
  }
  return rec;
}

// Re-evaluates a record's stored phases against its regenerated target.
inline double reverify_record(const ExperimentPlan& plan, const ExperimentRecord& rec) {
  MeshConfig cfg{rec.dim, rec.ft_layers, plan.mode()};
  const SeedSpec base = detail::sample_seed(rec.master_seed, rec.dim, rec.sample_index);
  const TargetSpec target =
      make_target(plan.family, rec.dim, base.child(detail::kTargetStream));
  PhaseVector phases =
      Eigen::Map<const PhaseVector>(rec.phases.data(), rec.phases.size());
  if (cfg.mode == Mode::Unitary)
    return ftmesh::detail::unitary_infidelity_and_gradient(cfg, phases, target.matrix,
                                                           nullptr);
  return ftmesh::detail::state_infidelity_and_gradient(cfg, phases, target.state,
                                                       nullptr);
}

// Runs every (dim, sample) of the plan. When record_path is nonempty, records
// already persisted there (same plan fingerprint) are skipped and new records
// are appended as they complete, so an interrupted campaign can resume.
inline std::vector<ExperimentRecord> run_plan(
    const ExperimentPlan& plan, const std::string& record_path = {},
    const std::function<void(const ExperimentRecord&)>& on_record = {}) {
  plan.validate();
  const std::string fp = plan.fingerprint();

  std::map<std::pair<int, int>, ExperimentRecord> done;
  bool file_existed = false;
  if (!record_path.empty()) {
    std::ifstream is(record_path);
    if (is) {
      file_existed = true;
      std::string line;
      if (!std::getline(is, line))
        throw std::runtime_error(record_path + ": empty record file");
      const json header = json::parse(line);
      if (header.at("plan_fingerprint").get<std::string>() != fp)
        throw std::runtime_error(record_path +
                                 ": existing records belong to a different plan");
      while (std::getline(is, line)) {
        if (line.empty()) continue;
        ExperimentRecord r = ExperimentRecord::from_json(json::parse(line));
        done.emplace(std::make_pair(r.dim, r.sample_index), std::move(r));
      }
    }
  }

  std::ofstream os;
  std::mutex write_mutex;
  if (!record_path.empty()) {
    os.open(record_path, file_existed ? std::ios::app : std::ios::out);
    if (!os) throw std::runtime_error("cannot open for writing: " + record_path);
    if (!file_existed) {
      const json header{{"schema_version", 1},
                        {"master_seed", plan.master_seed},
                        {"generator_name", generator_name()},
                        {"plan_fingerprint", fp},
                        {"plan", plan.to_json()}};
      os << header.dump() << "\n";
      os.flush();
    }
  }

  std::vector<std::pair<int, int>> pending;
  for (int d : plan.dims)
    for (int s = 0; s < plan.n_samples; ++s)
      if (!done.count({d, s})) pending.emplace_back(d, s);

  std::vector<ExperimentRecord> fresh(pending.size());
  // one worker pool across samples; starts inside a sample run sequentially
  ExperimentPlan inner = plan;
  const int jobs = plan.optim.jobs;
  inner.optim.jobs = 1;
  parallel_for(static_cast<int>(pending.size()), jobs, [&](int i) {
    ExperimentRecord rec = run_sample(inner, pending[i].first, pending[i].second);
    if (os.is_open() || on_record) {
      std::lock_guard<std::mutex> lock(write_mutex);
      if (os.is_open()) {
        os << rec.to_json().dump() << "\n";
        os.flush();
      }
      if (on_record) on_record(rec);
    }
    fresh[i] = std::move(rec);
  });

  std::vector<ExperimentRecord> all;
  all.reserve(done.size() + fresh.size());
  for (auto& [key, rec] : done) all.push_back(std::move(rec));
  for (auto& rec : fresh) all.push_back(std::move(rec));
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return std::make_pair(a.dim, a.sample_index) < std::make_pair(b.dim, b.sample_index);
  });
  return all;
}

// ---------------------------------------------------------------------------
// Aggregation

// Counts of log10-infidelity values in 0.5-wide bins over [-16, 0].
struct Histogram {
  static constexpr double kLow = -16.0;
  static constexpr double kHigh = 0.0;
  static constexpr double kWidth = 0.5;
  static constexpr int kBins = 32;

  int dim = 0;
  int ft_layers = 0;
  std::array<long, kBins> counts{};

  long total() const {
    long n = 0;
    for (long c : counts) n += c;
    return n;
  }

  static int bin_of(double log10_value) {
    int idx = static_cast<int>(std::floor((log10_value - kLow) / kWidth));
    return std::clamp(idx, 0, kBins - 1);
  }

  double bin_lo(int i) const { return kLow + i * kWidth; }
  double bin_hi(int i) const { return kLow + (i + 1) * kWidth; }
};

inline Histogram aggregate_histogram(const std::vector<ExperimentRecord>& records,
                                     int dim, int ft_layers) {
  Histogram h;
  h.dim = dim;
  h.ft_layers = ft_layers;
  long matched = 0;
  for (const auto& r : records) {
    if (r.dim != dim || r.ft_layers != ft_layers || r.failed) continue;
    ++matched;
    ++h.counts[Histogram::bin_of(r.log10_infidelity)];
  }
  if (matched == 0)
    throw std::runtime_error("aggregate_histogram: no records match dim=" +
                             std::to_string(dim) +
                             " ft_layers=" + std::to_string(ft_layers));
  return h;
}

struct SummaryRow {
  int dim = 0;
  int ft_layers = 0;
  long n = 0;
  double median_log10 = 0.0;
  double median_infidelity = 0.0;
  double max_infidelity = 0.0;
  std::vector<double> frac_above;  // parallel to the thresholds argument
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

inline std::vector<SummaryRow> summarize(const std::vector<ExperimentRecord>& records,
                                         const std::vector<double>& thresholds) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  std::map<std::pair<int, int>, std::vector<const ExperimentRecord*>> groups;
  for (const auto& r : records)
    if (!r.failed) groups[{r.dim, r.ft_layers}].push_back(&r);
  std::vector<SummaryRow> rows;
  for (const auto& [key, group] : groups) {
    SummaryRow row;
    row.dim = key.first;
    row.ft_layers = key.second;
    row.n = static_cast<long>(group.size());
    std::vector<double> infid, logs;
    infid.reserve(group.size());
    logs.reserve(group.size());
    for (const auto* r : group) {
      infid.push_back(r->best_infidelity);
      logs.push_back(r->log10_infidelity);
    }
    row.median_log10 = median_of(logs);
    row.median_infidelity = median_of(infid);
    row.max_infidelity = *std::max_element(infid.begin(), infid.end());
    for (double t : thresholds) {
      long above = 0;
      for (double v : infid)
        if (v >= t) ++above;
      row.frac_above.push_back(static_cast<double>(above) / row.n);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Report files

inline void write_histogram_csv(const Histogram& h, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << "dim,ft_layers,bin_lo,bin_hi,count\n";
  char buf[128];
  for (int i = 0; i < Histogram::kBins; ++i) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.1f,%.1f,%ld\n", h.dim, h.ft_layers,
                  h.bin_lo(i), h.bin_hi(i), h.counts[i]);
    os << buf;
  }
}

inline void write_summary_csv(const std::vector<SummaryRow>& rows,
                              const std::vector<double>& thresholds,
                              const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << "dim,ft_layers,n,median_log10,median_infidelity,max_infidelity";
  char buf[160];
  for (double t : thresholds) {
    std::snprintf(buf, sizeof(buf), ",frac_above_%g", t);
    os << buf;
  }
  os << "\n";
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%ld,%.6g,%.6g,%.6g", r.dim, r.ft_layers,
                  r.n, r.median_log10, r.median_infidelity, r.max_infidelity);
    os << buf;
    for (double f : r.frac_above) {
      std::snprintf(buf, sizeof(buf), ",%.6g", f);
      os << buf;
    }
    os << "\n";
  }
}

// Standalone SVG bar chart of a log10-infidelity histogram. Output is a pure
// function of the histogram, byte-identical across runs.
inline void render_histogram_svg(const Histogram& h, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);

  const int width = 640, height = 400;
  const int ml = 56, mr = 16, mt = 40, mb = 48;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;
  long max_count = 1;
  for (long c : h.counts) max_count = std::max(max_count, c);

  char buf[256];
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                "height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                width, height, width, height);
  os << buf;
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" "
                "text-anchor=\"middle\">d = %d, %d FT layers (%ld samples)</text>\n",
                width / 2, h.dim, h.ft_layers, h.total());
  os << buf;

  // axes
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n",
                ml, mt + static_cast<int>(plot_h), ml + static_cast<int>(plot_w),
                mt + static_cast<int>(plot_h));
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%d\" y1=\"%d\" x2=\"%d\" y2=\"%d\" stroke=\"black\"/>\n",
                ml, mt, ml, mt + static_cast<int>(plot_h));
  os << buf;

  // bars
  const double bar_w = plot_w / Histogram::kBins;
  for (int i = 0; i < Histogram::kBins; ++i) {
    const double frac = static_cast<double>(h.counts[i]) / max_count;
    const double bh = frac * plot_h;
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                  "fill=\"#4878a8\" stroke=\"white\" stroke-width=\"0.5\"/>\n",
                  ml + i * bar_w, mt + plot_h - bh, bar_w, bh);
    os << buf;
  }

  // x ticks every 2 decades
  for (int v = -16; v <= 0; v += 2) {
    const double x = ml + (v - Histogram::kLow) / (Histogram::kHigh - Histogram::kLow) * plot_w;
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.2f\" y1=\"%d\" x2=\"%.2f\" y2=\"%d\" stroke=\"black\"/>\n",
                  x, mt + static_cast<int>(plot_h), x, mt + static_cast<int>(plot_h) + 5);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.2f\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"middle\">%d</text>\n",
                  x, mt + static_cast<int>(plot_h) + 18, v);
    os << buf;
  }
  // y ticks: 0 and max
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
                "text-anchor=\"end\">0</text>\n",
                ml - 6, mt + static_cast<int>(plot_h) + 4);
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"11\" "
                "text-anchor=\"end\">%ld</text>\n",
                ml - 6, mt + 4, max_count);
  os << buf;

  std::snprintf(buf, sizeof(buf),
                "<text x=\"%d\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\" "
                "text-anchor=\"middle\">log10 infidelity</text>\n",
                ml + static_cast<int>(plot_w) / 2, height - 10);
  os << buf;
  std::snprintf(buf, sizeof(buf),
                "<text x=\"16\" y=\"%d\" font-family=\"sans-serif\" font-size=\"13\" "
                "text-anchor=\"middle\" transform=\"rotate(-90 16 %d)\">count</text>\n",
                mt + static_cast<int>(plot_h) / 2, mt + static_cast<int>(plot_h) / 2);
  os << buf;
  os << "</svg>\n";
}

}  // namespace ftmesh
