#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mirkit/features/tempo.hpp"

namespace mirkit::eval {

inline constexpr double kOnsetWindow = 0.025;
inline constexpr double kBeatWindow = 0.070;
inline constexpr double kCemgilSigma = 0.040;
inline constexpr double kTempoTolerance = 0.04;

struct MatchResult {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::vector<std::pair<double, double>> pairs;  // (detection, annotation)
};

/// Greedy one-to-one matching: annotations in time order each take the nearest
/// unmatched detection within +-window (ties go to the earlier detection).
MatchResult match_events(std::span<const double> detections, std::span<const double> annotations, double window);

struct FMeasure {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Empty detections and empty annotations score (1, 1, 1).
FMeasure f_measure(const MatchResult& result);

struct BeatScores {
  double f1 = 0.0;
  double cemgil = 0.0;
};

BeatScores evaluate_beats(std::span<const double> detections, std::span<const double> annotations,
                          double window = kBeatWindow, double sigma = kCemgilSigma);

struct TempoScores {
  bool acc1 = false;
  bool acc2 = false;
};

TempoScores evaluate_tempo(std::span<const features::TempoEstimate> detected, double annotated_bpm,
                           double tolerance = kTempoTolerance);

// --- annotation files and reports ---

/// First numeric token of every non-empty, non-comment line.
std::vector<double> read_events(const std::filesystem::path& path);
std::vector<double> parse_events(const std::string& text);
double read_tempo_annotation(const std::filesystem::path& path);

struct ReportRow {
  std::string name;
  std::vector<double> values;
};

/// Tab-separated table: header, one row per file, then a "mean" row.
std::string format_report(const std::vector<std::string>& columns, const std::vector<ReportRow>& rows);

}  // namespace mirkit::eval
