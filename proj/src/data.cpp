#include "infsl/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "infsl/error.hpp"
#include "infsl/text.hpp"

namespace infsl {

std::array<double, 2> moon_point(int j, double t) {
  const double x = std::cos(t) + static_cast<double>(j);
  const double y = j % 2 == 0 ? std::sin(t) : 0.5 - std::sin(t);
  return {x, y};
}

Dataset gen_moons(const MoonSpec& spec) {
  if (spec.classes < 2) throw InvalidArgument("gen_moons: need at least 2 classes");
  if (spec.points_per_class < 1) throw InvalidArgument("gen_moons: points_per_class must be >= 1");
  if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) throw InvalidArgument("gen_moons: noise must be >= 0");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::normal_distribution<double> gauss(0.0, 1.0);

  const auto m = static_cast<std::size_t>(spec.classes);
  Dataset data;
  data.dim = 2;
  data.num_classes = spec.classes;
  data.points.reserve(2 * m * spec.points_per_class);
  data.labels.reserve(m * spec.points_per_class);
  for (std::size_t q = 0; q < spec.points_per_class; ++q) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto [x, y] = moon_point(static_cast<int>(j), angle(rng));
      const double nx = gauss(rng);
      const double ny = gauss(rng);
      data.points.push_back(x + spec.noise * nx);
      data.points.push_back(y + spec.noise * ny);
      data.labels.push_back(static_cast<int>(j));
    }
  }
  for (int j = 0; j < spec.classes; ++j) data.class_names.push_back(std::to_string(j));
  return data;
}

// ---------------------------------------------------------------------------

Dataset read_csv(std::istream& is, bool has_label_column) {
  Dataset data;
  std::map<long long, int> remap;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto s = text::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto cells = text::split(s, ',');
    if (width == 0) {
      width = cells.size();
      if (width < (has_label_column ? 2u : 1u)) {
        throw ParseError("csv line " + std::to_string(lineno) + ": too few columns");
      }
      data.dim = has_label_column ? width - 1 : width;
    } else if (cells.size() != width) {
      throw ParseError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(width) +
                       " cells, found " + std::to_string(cells.size()));
    }
    for (std::size_t t = 0; t < data.dim; ++t) {
      const auto v = text::parse_double(cells[t]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("csv line " + std::to_string(lineno) + ": non-numeric cell '" +
                         std::string(text::trim(cells[t])) + "'");
      }
      data.points.push_back(*v);
    }
    if (has_label_column) {
      const auto id = text::parse_int(cells.back());
      if (!id) {
        throw ParseError("csv line " + std::to_string(lineno) + ": label is not an integer");
      }
      auto [it, inserted] = remap.try_emplace(*id, static_cast<int>(remap.size()));
      if (inserted) data.class_names.push_back(std::to_string(*id));
      data.labels.push_back(it->second);
    }
  }
  if (width == 0) throw ParseError("csv: no data rows");
  data.num_classes = static_cast<int>(remap.size());
  return data;
}

Dataset load_csv(const std::string& path, bool has_label_column) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path);
  return read_csv(is, has_label_column);
}

void write_csv(std::ostream& os, const Dataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = data.point(i);
    for (std::size_t t = 0; t < x.size(); ++t) {
      if (t) os << ',';
      os << text::format_double(x[t]);
    }
    if (data.has_labels()) os << ',' << data.labels[i];
    os << '\n';
  }
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ostringstream os;
  write_csv(os, data);
  text::write_file_atomic(path, os.str());
}

// ---------------------------------------------------------------------------

double KeelDataset::minority_fraction() const {
  const auto counts = data.class_counts();
  return static_cast<double>(counts.at(static_cast<std::size_t>(minority_class))) /
         static_cast<double>(data.size());
}

KeelDataset read_keel(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  bool in_data = false;
  std::size_t width = 0;
  KeelDataset out;
  Dataset& data = out.data;
  std::vector<std::string> tags;
  while (std::getline(is, line)) {
    ++lineno;
    const auto s = text::trim(line);
    if (s.empty() || s.front() == '%') continue;
    if (s.front() == '@') {
      if (text::to_lower(s.substr(0, 5)) == "@data") in_data = true;
      continue;
    }
    if (!in_data) throw ParseError("keel line " + std::to_string(lineno) + ": data row before @data");
    const auto cells = text::split(s, ',');
    if (width == 0) {
      width = cells.size();
      if (width < 2) throw ParseError("keel line " + std::to_string(lineno) + ": need features and a class");
      data.dim = width - 1;
    } else if (cells.size() != width) {
      throw ParseError("keel line " + std::to_string(lineno) + ": ragged row");
    }
    for (std::size_t t = 0; t + 1 < width; ++t) {
      const auto v = text::parse_double(cells[t]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("keel line " + std::to_string(lineno) + ": non-numeric feature '" +
                         std::string(text::trim(cells[t])) + "'");
      }
      data.points.push_back(*v);
    }
    tags.push_back(text::to_lower(text::trim(cells.back())));
  }
  if (!in_data) throw ParseError("keel: missing @data section");
  if (tags.empty()) throw ParseError("keel: no data rows");

  std::vector<std::string> vocab;
  for (const auto& t : tags) {
    if (std::find(vocab.begin(), vocab.end(), t) == vocab.end()) vocab.push_back(t);
  }
  if (vocab.size() < 2) throw ParseError("keel: file contains a single class");
  const bool binary_tags =
      vocab.size() == 2 && std::count(vocab.begin(), vocab.end(), "positive") == 1 &&
      std::count(vocab.begin(), vocab.end(), "negative") == 1;
  if (binary_tags) vocab = {"negative", "positive"};
  for (const auto& t : tags) {
    data.labels.push_back(static_cast<int>(std::find(vocab.begin(), vocab.end(), t) - vocab.begin()));
  }
  data.num_classes = static_cast<int>(vocab.size());
  data.class_names = vocab;

  const auto counts = data.class_counts();
  const auto minority = std::min_element(counts.begin(), counts.end());
  const auto majority = std::max_element(counts.begin(), counts.end());
  out.minority_class = static_cast<int>(minority - counts.begin());
  out.imbalance_ratio = static_cast<double>(*majority) / static_cast<double>(*minority);
  return out;
}

KeelDataset load_keel(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path);
  return read_keel(is);
}

}  // namespace infsl
