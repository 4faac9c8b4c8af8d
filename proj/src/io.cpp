#include "kashin/io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace kashin {

using nlohmann::json;

void write_sgnm(std::ostream& out, const SignMatrix& m, std::string_view seed_hex) {
  out << "SGNM " << m.rows() << ' ' << m.cols() << ' ' << provenance_name(m.provenance()) << ' '
      << (seed_hex.empty() ? "-" : seed_hex) << '\n';
  std::string line(m.cols(), '+');
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) line[j] = m.negative(i, j) ? '-' : '+';
    out << line << '\n';
  }
}

SgnmFile read_sgnm(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw FormatError("SGNM: missing header");
  std::istringstream hs(header);
  std::string magic, provenance, seed;
  long long rows = -1, cols = -1;
  if (!(hs >> magic >> rows >> cols >> provenance >> seed) || magic != "SGNM" || rows < 0 ||
      cols < 0) {
    throw FormatError("SGNM: malformed header: " + header);
  }
  SgnmFile file;
  file.seed_hex = seed == "-" ? "" : seed;
  try {
    file.matrix = SignMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                             parse_provenance(provenance));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("SGNM: ") + e.what());
  }
  std::string line;
  for (long long i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) throw FormatError("SGNM: expected " + std::to_string(rows) + " rows");
    if (static_cast<long long>(line.size()) != cols) {
      throw FormatError("SGNM: row " + std::to_string(i) + " has " + std::to_string(line.size()) +
                        " entries, expected " + std::to_string(cols));
    }
    for (long long j = 0; j < cols; ++j) {
      if (line[j] == '-') {
        file.matrix.set_negative(i, j, true);
      } else if (line[j] != '+') {
        throw FormatError("SGNM: invalid character in row " + std::to_string(i));
      }
    }
  }
  return file;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json to_json(const BuildReport& r) {
  return json{{"n", r.rows},
              {"N", r.cols},
              {"k", r.k},
              {"r1", r.kwise_degree},
              {"r", r.walk_degree},
              {"m", r.expander_side},
              {"bits_A1", r.bits_a1},
              {"bits_A2_start", r.bits_a2_start},
              {"bits_A2_walk", r.bits_a2_walk},
              {"bits_total", r.bits_total}};
}

BuildReport build_report_from_json(const json& j) {
  try {
    BuildReport r;
    r.rows = j.at("n").get<std::size_t>();
    r.cols = j.at("N").get<std::size_t>();
    r.k = j.at("k").get<unsigned>();
    r.kwise_degree = j.at("r1").get<unsigned>();
    r.walk_degree = j.at("r").get<unsigned>();
    r.expander_side = j.at("m").get<std::uint64_t>();
    r.bits_a1 = j.at("bits_A1").get<std::uint64_t>();
    r.bits_a2_start = j.at("bits_A2_start").get<std::uint64_t>();
    r.bits_a2_walk = j.at("bits_A2_walk").get<std::uint64_t>();
    r.bits_total = j.at("bits_total").get<std::uint64_t>();
    return r;
  } catch (const json::exception& e) {
    throw FormatError(std::string("build report: ") + e.what());
  }
}

json to_json(const KernelBasis& basis, std::string_view seed_hex) {
  json vectors = json::array();
  for (std::size_t q = 0; q < basis.dim(); ++q) {
    const auto row = basis.vectors.row(q);
    vectors.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return json{{"N", basis.ambient},
              {"dim", basis.dim()},
              {"rank", basis.rank},
              {"seed", std::string(seed_hex)},
              {"vectors", std::move(vectors)}};
}

KernelBasis kernel_from_json(const json& j) {
  try {
    KernelBasis basis;
    basis.ambient = j.at("N").get<std::size_t>();
    basis.rank = j.value("rank", std::size_t{0});
    const auto dim = j.at("dim").get<std::size_t>();
    basis.vectors = Matrix(0, basis.ambient);
    for (const auto& v : j.at("vectors")) {
      const auto row = v.get<std::vector<double>>();
      if (row.size() != basis.ambient) throw FormatError("kernel basis: vector length mismatch");
      basis.vectors.append_row(row);
    }
    if (basis.dim() != dim) throw FormatError("kernel basis: dim does not match vector count");
    return basis;
  } catch (const json::exception& e) {
    throw FormatError(std::string("kernel basis: ") + e.what());
  }
}

void write_kernel_csv(std::ostream& out, const KernelBasis& basis, std::string_view seed_hex) {
  out << "# N=" << basis.ambient << " dim=" << basis.dim() << " rank=" << basis.rank
      << " seed=" << (seed_hex.empty() ? "-" : seed_hex) << '\n';
  for (std::size_t q = 0; q < basis.dim(); ++q) {
    const auto row = basis.vectors.row(q);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << format_double(row[j]);
    }
    out << '\n';
  }
}

KernelBasis read_kernel_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || !header.starts_with("# ")) {
    throw FormatError("kernel CSV: missing header");
  }
  KernelBasis basis;
  std::size_t dim = 0;
  bool have_n = false, have_dim = false;
  std::istringstream hs(header.substr(2));
  std::string field;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) continue;
    const auto key = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    if (key == "N") {
      basis.ambient = std::stoull(value);
      have_n = true;
    } else if (key == "dim") {
      dim = std::stoull(value);
      have_dim = true;
    } else if (key == "rank") {
      basis.rank = std::stoull(value);
    }
  }
  if (!have_n || !have_dim) throw FormatError("kernel CSV: header lacks N or dim");
  basis.vectors = Matrix(0, basis.ambient);
  std::string line;
  std::vector<double> row;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    row.clear();
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      double v;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc{}) throw FormatError("kernel CSV: bad number");
      row.push_back(v);
      p = res.ptr;
      if (p < end && *p == ',') ++p;
    }
    if (row.size() != basis.ambient) throw FormatError("kernel CSV: row length mismatch");
    basis.vectors.append_row(row);
  }
  if (basis.dim() != dim) throw FormatError("kernel CSV: dim does not match row count");
  return basis;
}

json to_json(const KwiseReport& r) {
  return json{{"subset_size", r.subset_size},
              {"seeds", r.seeds},
              {"subsets_checked", r.subsets_checked},
              {"subsets_total", r.subsets_total},
              {"max_count_deviation", r.max_count_deviation},
              {"max_deviation", r.max_deviation},
              {"exact", r.exact()}};
}

json to_json(const LambdaEstimate& r) {
  return json{{"lambda", r.value},
              {"error_bound", r.error_bound},
              {"iterations", r.iterations},
              {"converged", r.converged}};
}

json to_json(const TailReport& r) {
  json flagged = json::array();
  for (const bool f : r.flagged) flagged.push_back(f);
  return json{{"n", r.rows},
              {"N", r.cols},
              {"k", r.k},
              {"xi", r.xi},
              {"trials", r.trials},
              {"t_grid", r.t_grid},
              {"thresholds", r.thresholds},
              {"exceed_counts", r.exceed_counts},
              {"frequencies", r.frequencies},
              {"bounds", r.bounds},
              {"flagged", std::move(flagged)},
              {"three_root_n_count", r.three_root_n_count},
              {"three_root_n_frequency", r.three_root_n_frequency}};
}

json to_json(const PaleyZygmundReport& r) {
  return json{{"N", r.cols},
              {"r", r.degree},
              {"exhaustive", r.exhaustive},
              {"samples", r.samples},
              {"hits", r.hits},
              {"fraction", r.fraction},
              {"standard_error", r.standard_error},
              {"bound", PaleyZygmundReport::kBound},
              {"meets_bound", r.meets_bound()}};
}

json to_json(const SingleVectorReport& r) {
  return json{{"n", r.rows},
              {"N", r.cols},
              {"epsilon", r.epsilon},
              {"threshold", r.threshold},
              {"trials", r.trials},
              {"hits", r.hits},
              {"probability", r.probability},
              {"standard_error", r.standard_error}};
}

json to_json(const DistortionReport& r, bool include_witness) {
  json j{{"N", r.ambient},
         {"dim", r.dim},
         {"delta", r.delta},
         {"baseline", r.baseline},
         {"samples", r.samples},
         {"restarts", r.restarts},
         {"iterations", r.iterations},
         {"evaluated", r.evaluated},
         {"max_ratio", r.max_ratio},
         {"upper_bound_violations", r.upper_bound_violations},
         {"restart_best", r.restart_best}};
  if (include_witness) j["witness"] = r.witness;
  return j;
}

void write_tail_csv(std::ostream& out, const TailReport& r) {
  out << "t,threshold,exceed_count,frequency,bound,flagged\n";
  for (std::size_t i = 0; i < r.t_grid.size(); ++i) {
    out << format_double(r.t_grid[i]) << ',' << format_double(r.thresholds[i]) << ','
        << r.exceed_counts[i] << ',' << format_double(r.frequencies[i]) << ','
        << format_double(r.bounds[i]) << ',' << (r.flagged[i] ? 1 : 0) << '\n';
  }
}

}  // namespace kashin
