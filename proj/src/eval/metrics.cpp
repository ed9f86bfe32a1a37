#include "mirkit/eval/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "mirkit/error.hpp"

namespace mirkit::eval {

namespace {

void require_sorted(std::span<const double> values, const char* what) {
  if (!std::is_sorted(values.begin(), values.end()))
    fail(ErrorKind::UnsortedInput, std::string(what) + " must be sorted ascending");
}

}  // namespace

MatchResult match_events(std::span<const double> detections, std::span<const double> annotations, double window) {
  require_sorted(detections, "detections");
  require_sorted(annotations, "annotations");
  require(window >= 0.0, ErrorKind::InvalidParameter, "matching window must be >= 0");

  MatchResult result;
  std::vector<bool> used(detections.size(), false);
  for (double ann : annotations) {
    const auto first = std::lower_bound(detections.begin(), detections.end(), ann - window);
    std::size_t best = detections.size();
    double best_dist = 0.0;
    for (auto it = first; it != detections.end() && *it <= ann + window; ++it) {
      const auto idx = std::size_t(it - detections.begin());
      if (used[idx]) continue;
      const double dist = std::abs(*it - ann);
      if (best == detections.size() || dist < best_dist) {
        best = idx;
        best_dist = dist;
      }
    }
    if (best != detections.size()) {
      used[best] = true;
      result.pairs.emplace_back(detections[best], ann);
    }
  }
  result.true_positives = result.pairs.size();
  result.false_positives = detections.size() - result.true_positives;
  result.false_negatives = annotations.size() - result.true_positives;
  return result;
}

FMeasure f_measure(const MatchResult& r) {
  const double tp = double(r.true_positives);
  const double fp = double(r.false_positives);
  const double fn = double(r.false_negatives);
  if (tp == 0 && fp == 0 && fn == 0) return {1.0, 1.0, 1.0};
  FMeasure m;
  m.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  m.recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  m.f1 = m.precision + m.recall > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

BeatScores evaluate_beats(std::span<const double> detections, std::span<const double> annotations, double window,
                          double sigma) {
  BeatScores scores;
  scores.f1 = f_measure(match_events(detections, annotations, window)).f1;
  if (detections.empty() && annotations.empty()) {
    scores.cemgil = 1.0;
  } else if (!detections.empty() && !annotations.empty()) {
    double acc = 0.0;
    for (double det : detections) {
      // nearest annotation
      const auto it = std::lower_bound(annotations.begin(), annotations.end(), det);
      double dist = std::numeric_limits<double>::infinity();
      if (it != annotations.end()) dist = *it - det;
      if (it != annotations.begin()) dist = std::min(dist, det - *(it - 1));
      acc += std::exp(-dist * dist / (2.0 * sigma * sigma));
    }
    scores.cemgil = acc / double(std::max(detections.size(), annotations.size()));
  }
  return scores;
}

TempoScores evaluate_tempo(std::span<const features::TempoEstimate> detected, double annotated_bpm,
                           double tolerance) {
  if (detected.empty()) fail(ErrorKind::EmptyDetections, "no tempo detected");
  require(annotated_bpm > 0.0, ErrorKind::InvalidParameter, "annotated tempo must be > 0");
  require(tolerance >= 0.0, ErrorKind::InvalidParameter, "tempo tolerance must be >= 0");
  const double top = detected.front().bpm;
  auto close = [&](double factor) {
    const double target = factor * annotated_bpm;
    return std::abs(top - target) <= tolerance * target;
  };
  TempoScores scores;
  scores.acc1 = close(1.0);
  constexpr std::array<double, 5> factors = {1.0, 2.0, 3.0, 1.0 / 2.0, 1.0 / 3.0};
  scores.acc2 = std::any_of(factors.begin(), factors.end(), close);
  return scores;
}

std::vector<double> parse_events(const std::string& text) {
  std::vector<double> events;
  std::istringstream lines(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first) || first[0] == '#') continue;
    try {
      std::size_t used = 0;
      events.push_back(std::stod(first, &used));
      if (used != first.size()) throw std::invalid_argument(first);
    } catch (const std::exception&) {
      fail(ErrorKind::ParseError, "line " + std::to_string(number) + ": not a number: " + first);
    }
  }
  return events;
}

std::vector<double> read_events(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::FileNotFound, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_events(buffer.str());
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

double read_tempo_annotation(const std::filesystem::path& path) {
  const auto values = read_events(path);
  if (values.empty()) fail(ErrorKind::ParseError, path.string() + ": no tempo value");
  return values.front();
}

std::string format_report(const std::vector<std::string>& columns, const std::vector<ReportRow>& rows) {
  std::string out = "file";
  for (const auto& c : columns) out += "\t" + c;
  out += "\n";
  std::vector<double> sums(columns.size(), 0.0);
  char buf[64];
  for (const auto& row : rows) {
    require(row.values.size() == columns.size(), ErrorKind::DimensionMismatch, "report row width");
    out += row.name;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      std::snprintf(buf, sizeof buf, "\t%.4f", row.values[i]);
      out += buf;
      sums[i] += row.values[i];
    }
    out += "\n";
  }
  out += "mean";
  for (double s : sums) {
    std::snprintf(buf, sizeof buf, "\t%.4f", rows.empty() ? 0.0 : s / double(rows.size()));
    out += buf;
  }
  out += "\n";
  return out;
}

}  // namespace mirkit::eval
