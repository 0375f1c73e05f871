#include "infsl/report.hpp"

#include <json.hpp>
#include <sstream>

#include "infsl/error.hpp"
#include "infsl/text.hpp"

namespace infsl {

namespace {

using text::format_double;

std::size_t classes_of(const TrialReport& r) { return static_cast<std::size_t>(r.num_classes); }

}  // namespace

std::string format_report_text(const Metadata& meta, const TrialReport& report) {
  std::ostringstream os;
  for (const auto& [key, value] : meta) os << key << " = " << value << '\n';
  os << "num_classes = " << report.num_classes << '\n';
  os << "trials = " << report.accuracies.size() << '\n';
  os << "mean_accuracy = " << format_double(report.mean_accuracy) << '\n';
  os << "convergence_failures = " << report.convergence_failures << '\n';

  os << "\n[trials]\ntrial,accuracy\n";
  for (std::size_t t = 0; t < report.accuracies.size(); ++t) {
    os << t << ',' << format_double(report.accuracies[t]) << '\n';
  }

  os << "\n[per_class]\nclass,precision,recall,f1,support\n";
  for (std::size_t c = 0; c < report.mean_per_class.size(); ++c) {
    const ClassMetrics& m = report.mean_per_class[c];
    os << c << ',' << format_double(m.precision) << ',' << format_double(m.recall) << ','
       << format_double(m.f1) << ',' << m.support << '\n';
  }

  const std::size_t k = classes_of(report);
  os << "\n[confusion]\ntruth\\predicted";
  for (std::size_t c = 0; c < k; ++c) os << ',' << c;
  os << '\n';
  for (std::size_t r = 0; r < k; ++r) {
    os << r;
    for (std::size_t c = 0; c < k; ++c) os << ',' << report.confusion.at(r * k + c);
    os << '\n';
  }
  return os.str();
}

std::string format_report_json(const Metadata& meta, const TrialReport& report) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (const auto& [key, value] : meta) m[key] = value;
  j["metadata"] = m;
  j["num_classes"] = report.num_classes;
  j["trials"] = report.accuracies.size();
  j["mean_accuracy"] = report.mean_accuracy;
  j["convergence_failures"] = report.convergence_failures;
  j["accuracies"] = report.accuracies;
  nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
  for (const ClassMetrics& c : report.mean_per_class) {
    per_class.push_back(
        {{"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}, {"support", c.support}});
  }
  j["per_class"] = per_class;
  const std::size_t k = classes_of(report);
  nlohmann::ordered_json confusion = nlohmann::ordered_json::array();
  for (std::size_t r = 0; r < k; ++r) {
    confusion.push_back(std::vector<std::size_t>(report.confusion.begin() + static_cast<std::ptrdiff_t>(r * k),
                                                 report.confusion.begin() + static_cast<std::ptrdiff_t>((r + 1) * k)));
  }
  j["confusion"] = confusion;
  return j.dump(2) + "\n";
}

void write_report(const std::string& stem, const Metadata& meta, const TrialReport& report) {
  const std::string body = format_report_text(meta, report);
  const std::string json = format_report_json(meta, report);
  text::write_file_atomic(stem + ".txt", body);
  text::write_file_atomic(stem + ".json", json);
}

std::string format_predictions_csv(std::span<const int> predictions, std::span<const int> truth) {
  if (!truth.empty() && truth.size() != predictions.size()) {
    throw InvalidArgument("predictions and truth differ in length");
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    os << i << ',' << predictions[i];
    if (!truth.empty()) os << ',' << truth[i];
    os << '\n';
  }
  return os.str();
}

PredictionTable parse_predictions_csv(const std::string& content) {
  PredictionTable out;
  std::istringstream is(content);
  std::string line;
  std::size_t lineno = 0, width = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto s = text::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto cells = text::split(s, ',');
    const std::string where = "predictions line " + std::to_string(lineno);
    if (width == 0) {
      width = cells.size();
      if (width != 2 && width != 3) throw ParseError(where + ": expected 2 or 3 columns");
    } else if (cells.size() != width) {
      throw ParseError(where + ": ragged row");
    }
    std::vector<long long> v;
    for (auto c : cells) {
      const auto x = text::parse_int(c);
      if (!x || *x < 0) throw ParseError(where + ": expected a non-negative integer");
      v.push_back(*x);
    }
    if (static_cast<std::size_t>(v[0]) != out.predictions.size()) {
      throw ParseError(where + ": node indices must be consecutive from 0");
    }
    out.predictions.push_back(static_cast<int>(v[1]));
    if (width == 3) out.truth.push_back(static_cast<int>(v[2]));
  }
  if (out.predictions.empty()) throw ParseError("predictions: no rows");
  return out;
}

TrialReport report_from_evaluation(Method method, int num_classes, const Evaluation& ev) {
  TrialReport r;
  r.method = method;
  r.num_classes = num_classes;
  r.accuracies = {ev.accuracy};
  r.mean_accuracy = ev.accuracy;
  r.mean_per_class = ev.per_class;
  r.confusion = ev.confusion;
  return r;
}

}  // namespace infsl
