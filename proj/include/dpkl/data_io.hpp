#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dpkl/types.hpp"

namespace dpkl {

// A benchmark data source: either a synthetic distribution with known ground
// truth, or an ingested empirical count histogram.
struct DataSource {
  enum class Kind { kSynthetic, kEmpirical };

  Kind kind = Kind::kSynthetic;
  ProbVector p;      // valid when kind == kSynthetic
  Histogram counts;  // valid when kind == kEmpirical
  std::string label;

  static DataSource synthetic(ProbVector dist, std::string label = "synthetic") {
    DataSource s;
    s.kind = Kind::kSynthetic;
    s.p = std::move(dist);
    s.label = std::move(label);
    return s;
  }

  static DataSource empirical(Histogram c, std::string label = "empirical") {
    if (c.total() <= 0.0) throw Error(errc::empty_histogram, "empirical source needs counts");
    DataSource s;
    s.kind = Kind::kEmpirical;
    s.counts = std::move(c);
    s.label = std::move(label);
    return s;
  }

  std::size_t dimension() const {
    return kind == Kind::kSynthetic ? p.size() : counts.size();
  }
};

// p_i proportional to i^-beta, i = 1..d.
inline ProbVector power_law(std::size_t d, double beta) {
  std::vector<double> w(d);
  for (std::size_t i = 0; i < d; ++i) w[i] = std::pow(static_cast<double>(i + 1), -beta);
  return normalize(std::move(w));
}

inline ProbVector uniform(std::size_t d) {
  return normalize(std::vector<double>(d, 1.0));
}

// The first |masses| coordinates carry the given masses, the rest are zero.
inline ProbVector concentrated(std::size_t d, const std::vector<double>& masses) {
  if (masses.empty() || masses.size() > d)
    throw Error(errc::bad_mass, "need 1..d masses");
  double sum = 0.0;
  for (double m : masses) {
    if (m <= 0.0) throw Error(errc::bad_mass, "masses must be positive");
    sum += m;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw Error(errc::bad_mass, "masses sum to " + std::to_string(sum));
  std::vector<double> p(d, 0.0);
  for (std::size_t i = 0; i < masses.size(); ++i) p[i] = masses[i];
  return validate_prob_vector(std::move(p));
}

// Token-histogram text format: first line `# d=<int>`, then `token_id,count`
// lines. Duplicate token ids accumulate; missing ids stay zero.
inline DataSource load_token_histogram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_error, "cannot open " + path);

  std::string line;
  std::size_t lineno = 0;
  long long d = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (std::sscanf(line.c_str(), "# d=%lld", &d) != 1 || d <= 0)
      throw Error(errc::parse_error, "line 1: expected header '# d=<int>'");
    break;
  }
  if (d < 0) throw Error(errc::empty_file, path + " has no header line");

  Histogram h;
  h.counts.assign(static_cast<std::size_t>(d), 0.0);
  bool saw_data = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    long long id = 0;
    double count = 0.0;
    char trailing = 0;
    int matched = std::sscanf(line.c_str(), "%lld,%lf%c", &id, &count, &trailing);
    if (matched < 2 || (matched == 3 && trailing != '\r') || count < 0.0)
      throw Error(errc::parse_error, "line " + std::to_string(lineno) + ": '" + line + "'");
    if (id < 0 || id >= d)
      throw Error(errc::id_out_of_range,
                  "line " + std::to_string(lineno) + ": token_id " + std::to_string(id));
    h.counts[static_cast<std::size_t>(id)] += count;
    saw_data = true;
  }
  if (!saw_data) throw Error(errc::empty_file, path + " has no count lines");
  return DataSource::empirical(std::move(h), path);
}

// Companion writer for the token-histogram format; zero counts are skipped.
inline void write_token_histogram(const Histogram& h, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(errc::io_error, "cannot open " + path + " for writing");
  out << "# d=" << h.size() << "\n";
  char buf[64];
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h.counts[i] == 0.0) continue;
    std::snprintf(buf, sizeof(buf), "%zu,%.9g\n", i, h.counts[i]);
    out << buf;
  }
  if (!out) throw Error(errc::io_error, "failed writing " + path);
}

// One benchmark cell for the results CSV.
struct ResultRow {
  double n = 0.0;
  std::size_t d = 0;
  double eps = 0.0;
  std::string estimator;
  std::string loss_kind;
  double mean = 0.0;
  double std_dev = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline std::string results_csv_string(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "n,d,eps,estimator,loss_kind,mean,std,trials,seed\n";
  for (const ResultRow& r : rows) {
    out << format_double(r.n) << ',' << r.d << ',' << format_double(r.eps) << ','
        << r.estimator << ',' << r.loss_kind << ',' << format_double(r.mean) << ','
        << format_double(r.std_dev) << ',' << r.trials << ',' << r.seed << '\n';
  }
  return out.str();
}

// Fixed schema, LF endings, no quoting, floats at 9 significant digits.
// Byte-identical output for identical rows.
inline void write_results_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(errc::io_error, "cannot open " + path + " for writing");
  out << results_csv_string(rows);
  if (!out) throw Error(errc::io_error, "failed writing " + path);
}

}  // namespace dpkl
