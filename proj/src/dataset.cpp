// Copyright 2026 The mvgcn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mvgcn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "mvgcn/error.hpp"
#include "text_util.hpp"

namespace mvgcn {

using nlohmann::json;

void Dataset::validate() const {
  const Index n = num_vertices();
  if (features.rows() != n) {
    throw InvalidArgument("dataset: feature rows (" +
                          std::to_string(features.rows()) + ") != n (" +
                          std::to_string(n) + ")");
  }
  require_finite(features, "dataset features");
  if (static_cast<Index>(labels.size()) != n) {
    throw InvalidArgument("dataset: labels must have one entry per vertex");
  }
  if (num_classes < 1) throw InvalidArgument("dataset: num_classes must be >= 1");
  for (int l : labels) {
    if (l < -1 || l >= num_classes) {
      throw InvalidArgument("dataset: label " + std::to_string(l) +
                            " outside [0, C)");
    }
  }
}

namespace {

std::filesystem::path require_file(const std::filesystem::path& p) {
  if (!std::filesystem::is_regular_file(p)) {
    throw IoError(p.string(), 0, "missing file", IoError::Kind::kMissingFile);
  }
  return p;
}

std::filesystem::path view_file(const std::filesystem::path& dir, std::size_t i) {
  return dir / ("view" + std::to_string(i + 1) + ".tsv");
}

Eigen::MatrixXd read_features(const std::filesystem::path& path, Index n,
                              Index f) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), 0, "cannot open", IoError::Kind::kUnreadable);
  Eigen::MatrixXd x(n, f);
  std::string line;
  std::size_t line_no = 0;
  Index row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (row >= n) {
      throw IoError(path.string(), line_no,
                    "more than n=" + std::to_string(n) + " feature rows",
                    IoError::Kind::kRaggedRow);
    }
    Index col = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = text.find(',', start);
      const std::string_view field =
          text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
      if (col >= f) {
        throw IoError(path.string(), line_no,
                      "row has more than F=" + std::to_string(f) + " values",
                      IoError::Kind::kRaggedRow);
      }
      double v = 0.0;
      if (!detail::parse_double(field, v) || !std::isfinite(v)) {
        throw IoError(path.string(), line_no, "bad feature value");
      }
      x(row, col++) = v;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (col != f) {
      throw IoError(path.string(), line_no,
                    "row has " + std::to_string(col) + " values, expected " +
                        std::to_string(f),
                    IoError::Kind::kRaggedRow);
    }
    ++row;
  }
  if (row != n) {
    throw IoError(path.string(), line_no,
                  "found " + std::to_string(row) + " feature rows, expected " +
                      std::to_string(n),
                  IoError::Kind::kRaggedRow);
  }
  return x;
}

std::vector<int> read_labels(const std::filesystem::path& path, Index n, int c) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), 0, "cannot open", IoError::Kind::kUnreadable);
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = detail::trim(line);
    if (text.empty() || text.front() == '#' || text == "vertex,class") continue;
    const auto fields = detail::split(text, ',');
    long long v = 0;
    long long k = 0;
    if (fields.size() != 2 || !detail::parse_int(fields[0], v) ||
        !detail::parse_int(fields[1], k)) {
      throw IoError(path.string(), line_no, "expected `vertex,class`");
    }
    if (v < 0 || v >= n) {
      throw IoError(path.string(), line_no, "vertex out of range",
                    IoError::Kind::kOutOfRange);
    }
    if (k < 0 || k >= c) {
      throw IoError(path.string(), line_no,
                    "class id " + std::to_string(k) + " outside [0, " +
                        std::to_string(c) + ")",
                    IoError::Kind::kOutOfRange);
    }
    if (labels[v] != -1) {
      throw IoError(path.string(), line_no, "vertex labeled twice");
    }
    labels[v] = static_cast<int>(k);
  }
  return labels;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& dir,
                     const EdgeListOptions& edge_options) {
  const auto meta_path = require_file(dir / "meta.json");
  json meta;
  try {
    std::ifstream in(meta_path);
    meta = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(meta_path.string(), 0, std::string("bad JSON: ") + e.what());
  }
  Index n = 0;
  std::size_t num_views = 0;
  int c = 0;
  Index f = 0;
  Dataset d;
  try {
    d.name = meta.at("name").get<std::string>();
    n = meta.at("n").get<Index>();
    num_views = meta.at("num_views").get<std::size_t>();
    c = meta.at("C").get<int>();
    f = meta.at("F").get<Index>();
  } catch (const json::exception& e) {
    throw IoError(meta_path.string(), 0, std::string("bad meta field: ") + e.what());
  }
  if (n < 0 || num_views < 1 || c < 1 || f < 0) {
    throw IoError(meta_path.string(), 0, "meta values out of range");
  }

  std::vector<SparseSymGraph> views;
  EdgeListOptions options = edge_options;
  options.num_vertices = n;
  for (std::size_t i = 0; i < num_views; ++i) {
    views.push_back(read_edge_list(require_file(view_file(dir, i)), options));
  }
  d.graph = MultiViewGraph(std::move(views));
  d.features = read_features(require_file(dir / "features.csv"), n, f);
  d.labels = read_labels(require_file(dir / "labels.csv"), n, c);
  d.num_classes = c;
  d.validate();
  return d;
}

void save_dataset(const Dataset& d, const std::filesystem::path& dir) {
  d.validate();
  std::filesystem::create_directories(dir);
  json meta = {{"name", d.name},
               {"n", d.num_vertices()},
               {"num_views", d.graph.num_views()},
               {"C", d.num_classes},
               {"F", d.features.cols()}};
  {
    std::ofstream out(dir / "meta.json");
    if (!out) throw IoError((dir / "meta.json").string(), 0, "cannot write");
    out << meta.dump(2) << '\n';
  }
  for (std::size_t i = 0; i < d.graph.num_views(); ++i) {
    write_edge_list(view_file(dir, i), d.graph.view(i));
  }
  {
    std::ofstream out(dir / "features.csv");
    if (!out) throw IoError((dir / "features.csv").string(), 0, "cannot write");
    std::string row;
    for (Index i = 0; i < d.features.rows(); ++i) {
      row.clear();
      for (Index j = 0; j < d.features.cols(); ++j) {
        if (j) row += ',';
        row += detail::format_double(d.features(i, j));
      }
      out << row << '\n';
    }
  }
  {
    std::ofstream out(dir / "labels.csv");
    if (!out) throw IoError((dir / "labels.csv").string(), 0, "cannot write");
    out << "vertex,class\n";
    for (std::size_t v = 0; v < d.labels.size(); ++v) {
      if (d.labels[v] >= 0) out << v << ',' << d.labels[v] << '\n';
    }
  }
}

SparseSymGraph build_similarity_view(const Eigen::MatrixXd& x, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("similarity view: threshold must lie in (0, 1]");
  }
  require_finite(x, "similarity view features");
  const Index n = x.rows();
  Eigen::MatrixXd xn = x;
  for (Index i = 0; i < n; ++i) {
    const double norm = xn.row(i).norm();
    if (norm > 0.0) xn.row(i) /= norm;
  }

  std::vector<Edge> edges;
  constexpr Index kBlock = 256;
  const double density =
      x.size() == 0 ? 0.0
                    : static_cast<double>((xn.array() != 0.0).count()) /
                          static_cast<double>(x.size());
  if (density < 0.1) {
    using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    const RowSparse xs = xn.sparseView();
    const SparseMatrix xt = xs.transpose();
    for (Index start = 0; start < n; start += kBlock) {
      const Index len = std::min(kBlock, n - start);
      const RowSparse gram = xs.middleRows(start, len) * xt;
      for (Index r = 0; r < len; ++r) {
        const Index u = start + r;
        for (RowSparse::InnerIterator it(gram, r); it; ++it) {
          if (it.col() > u && it.value() > threshold) {
            edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(it.col()), 1.0});
          }
        }
      }
    }
  } else {
    for (Index start = 0; start < n; start += kBlock) {
      const Index len = std::min(kBlock, n - start);
      const Eigen::MatrixXd gram = xn.middleRows(start, len) * xn.transpose();
      for (Index r = 0; r < len; ++r) {
        const Index u = start + r;
        for (Index v = u + 1; v < n; ++v) {
          if (gram(r, v) > threshold) {
            edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), 1.0});
          }
        }
      }
    }
  }
  return SparseSymGraph(n, std::move(edges));
}

LabeledSplit make_split(const Dataset& d, Index per_class, Index val_size,
                        Index test_size, std::uint64_t seed) {
  if (per_class < 1 || val_size < 0 || test_size < 0) {
    throw InvalidArgument("split: per_class must be >= 1, sizes >= 0");
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Vertex>> by_class(static_cast<std::size_t>(d.num_classes));
  for (std::size_t v = 0; v < d.labels.size(); ++v) {
    if (d.labels[v] >= 0) by_class[d.labels[v]].push_back(static_cast<Vertex>(v));
  }

  LabeledSplit s;
  s.labels = d.labels;
  s.num_classes = d.num_classes;
  std::vector<Vertex> rest;
  for (int c = 0; c < d.num_classes; ++c) {
    auto& members = by_class[c];
    if (static_cast<Index>(members.size()) <= per_class) {
      throw InvalidArgument("split: class " + std::to_string(c) + " has " +
                            std::to_string(members.size()) +
                            " labeled vertices, need more than " +
                            std::to_string(per_class));
    }
    std::shuffle(members.begin(), members.end(), rng);
    s.train.insert(s.train.end(), members.begin(), members.begin() + per_class);
    rest.insert(rest.end(), members.begin() + per_class, members.end());
  }
  if (static_cast<Index>(rest.size()) < val_size + test_size) {
    throw InvalidArgument("split: " + std::to_string(rest.size()) +
                          " labeled vertices remain, need " +
                          std::to_string(val_size + test_size));
  }
  std::sort(rest.begin(), rest.end());
  std::shuffle(rest.begin(), rest.end(), rng);
  s.val.assign(rest.begin(), rest.begin() + val_size);
  s.test.assign(rest.begin() + val_size, rest.begin() + val_size + test_size);
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

LabeledSplit read_split_file(const std::filesystem::path& path, const Dataset& d) {
  require_file(path);
  json j;
  try {
    std::ifstream in(path);
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string(), 0, std::string("bad JSON: ") + e.what());
  }
  LabeledSplit s;
  try {
    s.train = j.at("train").get<std::vector<Vertex>>();
    s.val = j.at("val").get<std::vector<Vertex>>();
    s.test = j.at("test").get<std::vector<Vertex>>();
  } catch (const json::exception& e) {
    throw IoError(path.string(), 0, std::string("bad split field: ") + e.what());
  }
  s.labels = d.labels;
  s.num_classes = d.num_classes;
  s.validate(d.num_vertices(), d.num_classes);
  return s;
}

void write_split_file(const std::filesystem::path& path, const LabeledSplit& s) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string(), 0, "cannot open for writing");
  out << json{{"train", s.train}, {"val", s.val}, {"test", s.test}}.dump() << '\n';
}

void SyntheticSpec::validate() const {
  if (num_classes < 1 || n < num_classes || n % num_classes != 0) {
    throw InvalidArgument("synthetic: n must be a positive multiple of C");
  }
  if (views.empty()) throw InvalidArgument("synthetic: need at least one view");
  for (const auto& v : views) {
    if (!(v.p_intra >= 0.0 && v.p_intra <= 1.0 && v.p_inter >= 0.0 &&
          v.p_inter <= 1.0)) {
      throw InvalidArgument("synthetic: probabilities must lie in [0, 1]");
    }
    if (!v.groups.empty() &&
        static_cast<int>(v.groups.size()) != num_classes) {
      throw InvalidArgument("synthetic: view groups need one entry per class");
    }
  }
  if (!(feature_noise >= 0.0) || !std::isfinite(feature_noise)) {
    throw InvalidArgument("synthetic: feature_noise must be finite and >= 0");
  }
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32), stream};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const Index n = spec.n;
  const Index block = n / spec.num_classes;
  Dataset d;
  d.name = "synthetic";
  d.num_classes = spec.num_classes;
  d.labels.resize(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v) d.labels[v] = static_cast<int>(v / block);

  std::vector<SparseSymGraph> views;
  for (std::size_t i = 0; i < spec.views.size(); ++i) {
    const ViewProbabilities& p = spec.views[i];
    std::mt19937_64 rng(p.seed.value_or(derive_seed(spec.seed, static_cast<std::uint32_t>(i + 1))));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto block_of = [&](Index v) {
      const int c = d.labels[v];
      return p.groups.empty() ? c : p.groups[c];
    };
    std::vector<Edge> edges;
    for (Index u = 0; u < n; ++u) {
      for (Index v = u + 1; v < n; ++v) {
        const double prob = block_of(u) == block_of(v) ? p.p_intra : p.p_inter;
        if (unit(rng) < prob) {
          edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), 1.0});
        }
      }
    }
    views.emplace_back(n, std::move(edges));
  }
  d.graph = MultiViewGraph(std::move(views));

  std::mt19937_64 rng(derive_seed(spec.seed, 0xfea7u));
  std::normal_distribution<double> noise(0.0, 1.0);
  d.features = Eigen::MatrixXd::Zero(n, spec.num_classes);
  for (Index v = 0; v < n; ++v) {
    d.features(v, d.labels[v]) = 1.0;
    for (Index c = 0; c < spec.num_classes; ++c) {
      d.features(v, c) += spec.feature_noise * noise(rng);
    }
  }
  return d;
}

LinqsConversion convert_linqs(const std::filesystem::path& content,
                              const std::filesystem::path& cites,
                              const std::string& name,
                              double similarity_threshold) {
  std::ifstream in(require_file(content));
  std::unordered_map<std::string, Vertex> ids;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> label_names;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::vector<std::string> fields;
    for (std::string t; tokens >> t;) fields.push_back(std::move(t));
    if (fields.empty()) continue;
    if (fields.size() < 3) {
      throw IoError(content.string(), line_no, "expected `<id> <features...> <label>`");
    }
    const std::size_t f = fields.size() - 2;
    if (rows.empty()) width = f;
    if (f != width) {
      throw IoError(content.string(), line_no,
                    "row has " + std::to_string(f) + " features, expected " +
                        std::to_string(width),
                    IoError::Kind::kRaggedRow);
    }
    if (!ids.emplace(fields.front(), static_cast<Vertex>(rows.size())).second) {
      throw IoError(content.string(), line_no, "duplicate paper id " + fields.front());
    }
    std::vector<double> row(f);
    for (std::size_t j = 0; j < f; ++j) {
      if (!detail::parse_double(fields[j + 1], row[j])) {
        throw IoError(content.string(), line_no, "bad feature value");
      }
    }
    rows.push_back(std::move(row));
    label_names.push_back(fields.back());
  }

  std::vector<std::string> classes = label_names;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  LinqsConversion out;
  Dataset& d = out.dataset;
  d.name = name;
  d.num_classes = static_cast<int>(classes.size());
  const Index n = static_cast<Index>(rows.size());
  d.features.resize(n, static_cast<Index>(width));
  d.labels.resize(rows.size());
  for (Index i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < width; ++j) d.features(i, j) = rows[i][j];
    d.labels[i] = static_cast<int>(
        std::lower_bound(classes.begin(), classes.end(), label_names[i]) -
        classes.begin());
  }

  std::ifstream cin(require_file(cites));
  std::set<std::pair<Vertex, Vertex>> pairs;
  line_no = 0;
  while (std::getline(cin, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string a;
    std::string b;
    if (!(tokens >> a)) continue;
    if (!(tokens >> b)) {
      throw IoError(cites.string(), line_no, "expected `<cited> <citing>`");
    }
    ++out.citation_lines;
    const auto ia = ids.find(a);
    const auto ib = ids.find(b);
    if (ia == ids.end() || ib == ids.end()) {
      ++out.unknown_ids;
      continue;
    }
    if (ia->second == ib->second) {
      ++out.self_citations;
      continue;
    }
    const auto key = std::minmax(ia->second, ib->second);
    if (!pairs.insert({key.first, key.second}).second) ++out.reciprocal_duplicates;
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) edges.push_back({u, v, 1.0});

  std::vector<SparseSymGraph> views;
  views.emplace_back(n, std::move(edges));
  views.push_back(build_similarity_view(d.features, similarity_threshold));
  d.graph = MultiViewGraph(std::move(views));
  d.validate();
  return out;
}

}  // namespace mvgcn
