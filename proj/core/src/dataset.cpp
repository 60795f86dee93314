// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlgcl/dataset.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mlgcl/error.hpp"

namespace mlgcl {
namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

constexpr std::array<char, 4> kFeatureMagic{'M', 'L', 'G', 'C'};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string where(const std::filesystem::path& p, std::size_t line) {
  return p.filename().string() + ":" + std::to_string(line);
}

Index parse_index(std::string_view s, const std::filesystem::path& p, std::size_t line) {
  Index v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) {
    throw ValidationError(where(p, line) + ": expected a nonnegative integer, got '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s, const std::filesystem::path& p, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError(where(p, line) + ": non-numeric value '" + std::string(s) + "'");
  }
  return v;
}

std::ifstream open_input(const std::filesystem::path& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

struct EdgeRecord {
  Index src;
  Index dst;
  double weight;
};

std::vector<EdgeRecord> read_edges(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<EdgeRecord> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto f = split_fields(t, '\t');
    if (f.size() != 2 && f.size() != 3) throw ValidationError(where(path, lineno) + ": expected 'src<TAB>dst'");
    EdgeRecord e{parse_index(f[0], path, lineno), parse_index(f[1], path, lineno), 1.0};
    if (f.size() == 3) {
      e.weight = parse_real(f[2], path, lineno);
      if (e.weight < 0.0) throw ValidationError(where(path, lineno) + ": negative edge weight");
    }
    edges.push_back(e);
  }
  return edges;
}

std::vector<int> read_labels(const std::filesystem::path& path, Index n) {
  auto in = open_input(path);
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto f = split_fields(t, '\t');
    if (f.size() != 2) throw ValidationError(where(path, lineno) + ": expected 'node<TAB>label'");
    const Index node = parse_index(f[0], path, lineno);
    const Index label = parse_index(f[1], path, lineno);
    if (node >= n) throw ValidationError(where(path, lineno) + ": node index out of range");
    if (label > std::numeric_limits<int>::max()) throw ValidationError(where(path, lineno) + ": label too large");
    labels[node] = static_cast<int>(label);
  }
  for (Index i = 0; i < n; ++i) {
    if (labels[i] < 0) throw ValidationError(path.filename().string() + ": node " + std::to_string(i) + " has no label");
  }
  std::vector<bool> used(static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end()) + 1), false);
  for (int l : labels) used[l] = true;
  for (std::size_t c = 0; c < used.size(); ++c) {
    if (!used[c]) throw ValidationError(path.filename().string() + ": labels are not contiguous from 0");
  }
  return labels;
}

Split read_split(const std::filesystem::path& path, Index n) {
  auto in = open_input(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.filename().string() + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(path.filename().string() + ": expected a JSON object");
  Split s;
  for (const auto& [key, list] : {std::pair{"train", &s.train}, {"val", &s.val}, {"test", &s.test}}) {
    if (!j.contains(key)) throw ValidationError(path.filename().string() + ": missing key '" + key + "'");
    const auto& arr = j.at(key);
    if (!arr.is_array()) throw ValidationError(path.filename().string() + ": '" + key + "' must be an array");
    for (const auto& v : arr) {
      if (!v.is_number_integer()) throw ValidationError(path.filename().string() + ": non-integer index in '" + key + "'");
      list->push_back(v.get<Index>());
    }
  }
  validate_split(s, n);
  return s;
}

}  // namespace

Matrix read_features_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::vector<double> values;
  Index rows = 0;
  Index cols = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty()) continue;
    const auto f = split_fields(t, ',');
    if (cols < 0) cols = static_cast<Index>(f.size());
    if (static_cast<Index>(f.size()) != cols) {
      throw ValidationError(where(path, lineno) + ": expected " + std::to_string(cols) + " columns");
    }
    for (auto cell : f) values.push_back(parse_real(cell, path, lineno));
    ++rows;
  }
  if (rows == 0) throw ValidationError(path.filename().string() + ": no feature rows");
  return Eigen::Map<Matrix>(values.data(), rows, cols);
}

Matrix read_features_bin(const std::filesystem::path& path) {
  auto in = open_input(path, true);
  std::array<char, 4> magic{};
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  in.read(magic.data(), 4);
  in.read(reinterpret_cast<char*>(&rows), 4);
  in.read(reinterpret_cast<char*>(&cols), 4);
  if (!in) throw ValidationError(path.filename().string() + ": truncated header");
  if (magic != kFeatureMagic) throw ValidationError(path.filename().string() + ": bad magic");
  std::vector<float> buf(static_cast<std::size_t>(rows) * cols);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!in) throw ValidationError(path.filename().string() + ": truncated payload");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < buf.size(); ++i) m.data()[i] = static_cast<double>(buf[i]);
  if (!m.allFinite()) throw ValidationError(path.filename().string() + ": NaN or Inf in features");
  return m;
}

void write_features_bin(const Matrix& m, const std::filesystem::path& path) {
  if (m.rows() > std::numeric_limits<std::uint32_t>::max() || m.cols() > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("matrix too large for the binary feature format");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  const auto rows = static_cast<std::uint32_t>(m.rows());
  const auto cols = static_cast<std::uint32_t>(m.cols());
  out.write(kFeatureMagic.data(), 4);
  out.write(reinterpret_cast<const char*>(&rows), 4);
  out.write(reinterpret_cast<const char*>(&cols), 4);
  std::vector<float> buf(static_cast<std::size_t>(m.size()));
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<float>(m.data()[i]);
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(float)));
  if (!out) throw IoError("failed writing " + path.string());
}

Graph load_dataset(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("dataset directory not found: " + dir.string());
  const auto edges_path = dir / "edges.tsv";
  if (!std::filesystem::exists(edges_path)) throw IoError("missing " + edges_path.string());

  Matrix features;
  if (std::filesystem::exists(dir / "features.bin")) {
    features = read_features_bin(dir / "features.bin");
  } else if (std::filesystem::exists(dir / "features.csv")) {
    features = read_features_csv(dir / "features.csv");
  } else {
    throw IoError("missing features.bin or features.csv in " + dir.string());
  }
  const Index n = features.rows();

  std::vector<Triplet> t;
  for (const auto& e : read_edges(edges_path)) {
    if (e.src >= n || e.dst >= n) {
      throw ValidationError("edge (" + std::to_string(e.src) + ", " + std::to_string(e.dst) + ") out of range for " +
                            std::to_string(n) + " nodes");
    }
    t.push_back({e.src, e.dst, e.weight});
    if (e.src != e.dst) t.push_back({e.dst, e.src, e.weight});
  }
  auto adjacency = SparseMatrix::from_triplets(n, n, std::move(t));

  std::optional<std::vector<int>> labels;
  if (std::filesystem::exists(dir / "labels.tsv")) labels = read_labels(dir / "labels.tsv", n);
  std::optional<Split> split;
  if (std::filesystem::exists(dir / "splits.json")) split = read_split(dir / "splits.json", n);
  return Graph(std::move(adjacency), std::move(features), std::move(labels), std::move(split));
}

void save_dataset(const Graph& g, const std::filesystem::path& dir, bool binary_features) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "edges.tsv");
    if (!out) throw IoError("cannot write edges.tsv in " + dir.string());
    for (const auto& e : g.adjacency().triplets()) {
      if (e.row > e.col) continue;
      out << e.row << '\t' << e.col;
      if (e.value != 1.0) out << '\t' << std::setprecision(17) << e.value;
      out << '\n';
    }
  }
  if (binary_features) {
    write_features_bin(g.features(), dir / "features.bin");
  } else {
    std::ofstream out(dir / "features.csv");
    if (!out) throw IoError("cannot write features.csv in " + dir.string());
    out << std::setprecision(17);
    for (Index r = 0; r < g.features().rows(); ++r) {
      for (Index c = 0; c < g.features().cols(); ++c) {
        if (c > 0) out << ',';
        out << g.features()(r, c);
      }
      out << '\n';
    }
  }
  if (g.labels()) {
    std::ofstream out(dir / "labels.tsv");
    for (std::size_t i = 0; i < g.labels()->size(); ++i) out << i << '\t' << (*g.labels())[i] << '\n';
  }
  if (g.split()) {
    nlohmann::json j{{"train", g.split()->train}, {"val", g.split()->val}, {"test", g.split()->test}};
    std::ofstream out(dir / "splits.json");
    out << j.dump() << '\n';
  }
}

}  // namespace mlgcl
