#include "cvdiscord/homodyne.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "cvdiscord/format.hpp"

namespace cvdiscord {

VarianceRecord VarianceRecord::normalized() const {
  if (!(snl_reference > 0.0)) {
    throw Error(ErrorKind::DomainError, "snl_reference must be positive");
  }
  for (double v : {var_xa, var_ya, var_xb, var_yb, var_xminus, var_yplus}) {
    if (!(v > 0.0)) throw Error(ErrorKind::DomainError, "variances must be positive");
  }
  VarianceRecord out = *this;
  const double k = 1.0 / snl_reference;
  out.var_xa *= k;
  out.var_ya *= k;
  out.var_xb *= k;
  out.var_yb *= k;
  out.var_xminus *= k;
  out.var_yplus *= k;
  out.snl_reference = 1.0;
  return out;
}

double relative_variance_error(std::int64_t n_samples) {
  if (n_samples < 2) return 0.0;
  return std::sqrt(2.0 / static_cast<double>(n_samples - 1));
}

namespace {

bool positive_definite(const StandardForm& sf) {
  return sf.n * sf.m - sf.c1 * sf.c1 > 0.0 && sf.n * sf.m - sf.c2 * sf.c2 > 0.0;
}

// Largest t in [0, 1] with (n, m, t c1, t c2) physical. t = 0 is physical
// whenever n, m >= 1/2.
double physical_scale(const StandardForm& sf) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double t = 0.5 * (lo + hi);
    const StandardForm trial{sf.n, sf.m, t * sf.c1, t * sf.c2};
    const SymplecticData sd = symplectic_data(trial);
    if (positive_definite(trial) && sd.d_minus >= 0.5) {
      lo = t;
    } else {
      hi = t;
    }
  }
  return lo;
}

}  // namespace

Reconstruction extract_standard_form(const VarianceRecord& record) {
  const VarianceRecord r = record.normalized();
  if (std::abs(r.var_xa - r.var_ya) >= kMaxSingleModeAsymmetry ||
      std::abs(r.var_xb - r.var_yb) >= kMaxSingleModeAsymmetry) {
    throw Error(ErrorKind::AsymmetricSingleModeNoise,
                "single-mode X and Y variances differ by >= " +
                    format_number(kMaxSingleModeAsymmetry) + " SNL");
  }

  Reconstruction out;
  StandardForm& sf = out.state;
  sf.n = 0.5 * r.var_xa;
  sf.m = 0.5 * r.var_xb;
  sf.c1 = 0.5 * (r.var_xa - r.var_xminus);
  sf.c2 = 0.5 * (r.var_yb - r.var_yplus);
  if (sf.c1 < 0.0) {
    out.warnings.push_back("c1 = " + format_number(sf.c1) + " clamped to 0");
    sf.c1 = 0.0;
  }
  if (sf.c2 < 0.0) {
    out.warnings.push_back("c2 = " + format_number(sf.c2) + " clamped to 0");
    sf.c2 = 0.0;
  }

  const double allowance = 5.0 * relative_variance_error(r.n_samples) * std::max(sf.n, sf.m) +
                           kClampTolerance;
  if (std::abs(sf.n - sf.m) > allowance) {
    out.warnings.push_back("n != m: correlations are biased by (n - m)/2 = " +
                           format_number(0.5 * (sf.n - sf.m)));
  }
  for (double* local : {&sf.n, &sf.m}) {
    if (*local < 0.5) {
      if (*local < 0.5 - allowance) {
        throw Error(ErrorKind::UnphysicalReconstruction,
                    "single-mode variance below the shot-noise limit: " + format_number(2.0 * *local) + " SNL");
      }
      out.warnings.push_back("single-mode variance " + format_number(2.0 * *local) +
                             " SNL raised to the shot-noise limit");
      *local = 0.5;
    }
  }

  const SymplecticData sd = symplectic_data(sf);
  if (!sd.physical) {
    const double violation = positive_definite(sf) ? 0.5 - sd.d_minus
                                                   : std::numeric_limits<double>::infinity();
    if (violation > allowance) {
      throw Error(ErrorKind::UnphysicalReconstruction,
                  "d_minus = " + format_number(sd.d_minus) + " is below 1/2 beyond statistical tolerance");
    }
    const double t = physical_scale(sf);
    out.warnings.push_back("correlations scaled by " + format_number(t) +
                           " to reach the physical boundary (d_minus was " + format_number(sd.d_minus) + ")");
    sf.c1 *= t;
    sf.c2 *= t;
    out.projected = true;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct LinearFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double rss = 0.0;
};

LinearFit fit_harmonic(const ScanTrace& trace, int k) {
  const auto rows = static_cast<Eigen::Index>(trace.phase.size());
  Eigen::MatrixXd design(rows, 3);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double phi = trace.phase[static_cast<std::size_t>(i)];
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(k * phi);
    design(i, 2) = std::sin(k * phi);
    y(i) = trace.variance[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d beta = design.colPivHouseholderQr().solve(y);
  LinearFit fit;
  fit.offset = beta(0);
  fit.amplitude = std::hypot(beta(1), beta(2));
  fit.rss = (design * beta - y).squaredNorm();
  return fit;
}

}  // namespace

ScanFit fit_scan(const ScanTrace& trace) {
  const std::size_t count = trace.phase.size();
  if (count != trace.variance.size()) {
    throw Error(ErrorKind::InvalidArgument, "phase and variance arrays differ in length");
  }
  if (count < 16) {
    throw Error(ErrorKind::InsufficientScanRange, "scan needs at least 16 points");
  }
  for (double v : trace.variance) {
    if (!(v > 0.0)) throw Error(ErrorKind::DomainError, "scan variances must be positive");
  }
  const auto [lo, hi] = std::minmax_element(trace.phase.begin(), trace.phase.end());
  const double span = *hi - *lo;
  const double spacing = span / static_cast<double>(count - 1);
  if (span + spacing < 2.0 * std::numbers::pi * (1.0 - 1e-9)) {
    throw Error(ErrorKind::InsufficientScanRange, "scan does not cover a full 2 pi period");
  }

  const LinearFit first = fit_harmonic(trace, 1);
  const LinearFit second = fit_harmonic(trace, 2);
  const bool use_second = second.rss < first.rss;
  const LinearFit& best = use_second ? second : first;

  ScanFit out;
  out.offset = best.offset;
  out.amplitude = best.amplitude;
  out.harmonic = use_second ? 2 : 1;
  out.minimum = best.offset - best.amplitude;

  double mean = 0.0;
  for (double v : trace.variance) mean += v;
  mean /= static_cast<double>(count);
  const double rms = std::sqrt(best.rss / static_cast<double>(count));
  if (rms > 0.1 * mean) {
    out.minimum = *std::min_element(trace.variance.begin(), trace.variance.end());
    out.fallback = true;
  }
  return out;
}

std::vector<double> uniform_phases(int n) {
  std::vector<double> out(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * i / n;
  return out;
}

namespace {

// Unbiased variance from running sums.
struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
  }
  double variance(std::int64_t n) const {
    const double count = static_cast<double>(n);
    return (sum_sq - sum * sum / count) / (count - 1.0);
  }
};

struct PhaseResult {
  double difference = 0.0;  // Half units
  double sum = 0.0;
  std::array<double, 4> single{};  // X_A, Y_A, X_B, Y_B
};

PhaseResult simulate_phase(const Eigen::Matrix4d& chol, double phase, std::int64_t n_samples,
                           std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), 0x9e3779b9u};
  std::mt19937_64 rng(seq);
  // Ziggurat sampler: same stream on every standard library.
  boost::random::normal_distribution<double> normal(0.0, 1.0);

  const double cp = std::cos(phase), sp = std::sin(phase);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  Moments diff, sum;
  std::array<Moments, 4> single;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const Eigen::Vector4d z(normal(rng), normal(rng), normal(rng), normal(rng));
    const Eigen::Vector4d q = chol * z;
    const double xb = q(2) * cp + q(3) * sp;
    const double yb = -q(2) * sp + q(3) * cp;
    diff.add((q(0) - xb) * inv_sqrt2);
    sum.add((q(1) + yb) * inv_sqrt2);
    for (int k = 0; k < 4; ++k) single[static_cast<std::size_t>(k)].add(q(k));
  }
  PhaseResult out;
  out.difference = diff.variance(n_samples);
  out.sum = sum.variance(n_samples);
  for (std::size_t k = 0; k < 4; ++k) out.single[k] = single[k].variance(n_samples);
  return out;
}

}  // namespace

DualHomodyneRun simulate_dual_homodyne(const StandardForm& sf, std::int64_t n_samples,
                                       const std::vector<double>& phases, std::uint64_t seed,
                                       double rf_frequency) {
  const SymplecticData sd = symplectic_data(sf);
  if (!sd.physical) {
    throw Error(ErrorKind::UnphysicalState, "cannot simulate an unphysical state");
  }
  if (n_samples < 10000) {
    throw Error(ErrorKind::InvalidArgument, "simulation needs at least 1e4 samples per phase");
  }
  if (phases.size() < 16) {
    throw Error(ErrorKind::InsufficientScanRange, "simulation needs at least 16 phase points");
  }

  const Eigen::LLT<Eigen::Matrix4d> llt(embed(sf).entries);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::UnphysicalState, "covariance is not positive definite");
  }
  const Eigen::Matrix4d chol = llt.matrixL();

  std::vector<PhaseResult> results(phases.size());
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, phases.size());
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t p = w; p < phases.size(); p += workers) {
          results[p] = simulate_phase(chol, phases[p], n_samples, seed, p);
        }
      });
    }
  }

  DualHomodyneRun run;
  run.sum.which = TraceKind::Sum;
  run.difference.which = TraceKind::Difference;
  std::array<double, 4> pooled{};
  for (std::size_t p = 0; p < phases.size(); ++p) {
    run.difference.phase.push_back(phases[p]);
    run.difference.variance.push_back(2.0 * results[p].difference);
    run.sum.phase.push_back(phases[p]);
    run.sum.variance.push_back(2.0 * results[p].sum);
    for (std::size_t k = 0; k < 4; ++k) pooled[k] += results[p].single[k];
  }
  const double scale = 2.0 / static_cast<double>(phases.size());

  VarianceRecord& rec = run.record;
  rec.rf_frequency = rf_frequency;
  rec.var_xa = scale * pooled[0];
  rec.var_ya = scale * pooled[1];
  rec.var_xb = scale * pooled[2];
  rec.var_yb = scale * pooled[3];
  rec.var_xminus = scan_minimum(run.difference);
  rec.var_yplus = scan_minimum(run.sum);
  rec.snl_reference = 1.0;
  rec.n_samples = n_samples;
  return run;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<const char*, 9> kFieldNames = {
    "rf_hz", "var_xa", "var_ya", "var_xb", "var_yb", "var_xminus", "var_yplus", "snl_ref", "n_samples"};

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

}  // namespace

VarianceRecord parse_variance_row(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  if (fields.size() != kFieldNames.size()) {
    throw Error(ErrorKind::ParseError, "expected 9 fields, got " + std::to_string(fields.size()));
  }

  std::array<double, 8> values{};
  for (std::size_t i = 0; i < 8; ++i) {
    values[i] = parse_double(fields[i], kFieldNames[i]);
  }
  std::int64_t count = 0;
  const std::string& last = fields[8];
  const auto [ptr, ec] = std::from_chars(last.data(), last.data() + last.size(), count);
  if (ec != std::errc() || ptr != last.data() + last.size() || count < 0) {
    throw Error(ErrorKind::ParseError, "field 'n_samples': not a non-negative integer: '" + last + "'");
  }

  VarianceRecord rec;
  rec.rf_frequency = values[0];
  rec.var_xa = values[1];
  rec.var_ya = values[2];
  rec.var_xb = values[3];
  rec.var_yb = values[4];
  rec.var_xminus = values[5];
  rec.var_yplus = values[6];
  rec.snl_reference = values[7];
  rec.n_samples = count;
  return rec;
}

std::string format_variance_row(const VarianceRecord& r) {
  return format_number(r.rf_frequency) + ',' + format_number(r.var_xa) + ',' +
         format_number(r.var_ya) + ',' + format_number(r.var_xb) + ',' + format_number(r.var_yb) +
         ',' + format_number(r.var_xminus) + ',' + format_number(r.var_yplus) + ',' +
         format_number(r.snl_reference) + ',' + std::to_string(r.n_samples);
}

VarianceTable read_variance_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::ParseError, "empty input: missing header");
  }
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (trim(line) != kVarianceCsvHeader) {
    throw Error(ErrorKind::ParseError,
                std::string("missing or unexpected header; expected '") + kVarianceCsvHeader + "'");
  }
  VarianceTable table;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      table.records.push_back(parse_variance_row(trim(line)));
    } catch (const Error& e) {
      table.errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

void write_variance_csv(std::ostream& out, const std::vector<VarianceRecord>& records) {
  out << kVarianceCsvHeader << '\n';
  for (const auto& r : records) out << format_variance_row(r) << '\n';
}

void write_trace_csv(std::ostream& out, const ScanTrace& trace) {
  out << "phase_rad,variance_snl\n";
  for (std::size_t i = 0; i < trace.phase.size(); ++i) {
    out << format_number(trace.phase[i]) << ',' << format_number(trace.variance[i]) << '\n';
  }
}

}  // namespace cvdiscord
