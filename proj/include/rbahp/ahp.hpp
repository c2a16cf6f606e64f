#pragma once

// Analytic hierarchy process primitives: pairwise comparison matrices built
// from quantitative scores, column-normalization weights, the closed-form
// weights that coincide with them for ideally consistent matrices, and the
// consistency diagnostics.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbahp/error.hpp"

namespace rbahp {

inline constexpr double kIdentityTolerance = 1e-12;
inline constexpr double kConsistencyTolerance = 1e-9;

/// cost: smaller raw value is preferred. benefit: larger raw value is preferred.
enum class Orientation { cost, benefit };

inline constexpr std::string_view to_string(Orientation o) noexcept {
  return o == Orientation::cost ? "cost" : "benefit";
}

/// Strictly positive per-alternative quantities (dp, dr, ...).
class ScoreVector {
 public:
  ScoreVector() = default;
  ScoreVector(std::initializer_list<double> values) : ScoreVector(std::vector<double>(values)) {}
  explicit ScoreVector(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::invalid_parameter, "scores must be finite and strictly positive");
      }
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Non-negative weights summing to one.
class WeightVector {
 public:
  WeightVector() = default;
  WeightVector(std::initializer_list<double> weights) : WeightVector(std::vector<double>(weights)) {}
  explicit WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw Error(ErrorCode::empty_scores, "weight vector is empty");
    double sum = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::invalid_parameter, "weights must be non-negative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > kConsistencyTolerance) {
      throw Error(ErrorCode::invalid_parameter, "weights must sum to 1");
    }
  }

  /// Divides by the total. The input must have a positive sum.
  [[nodiscard]] static WeightVector normalized(std::vector<double> raw) {
    const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
    if (!(sum > 0.0)) throw Error(ErrorCode::invalid_parameter, "cannot normalize a zero vector");
    for (double& w : raw) w /= sum;
    return WeightVector(std::move(raw));
  }

  [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return weights_[i]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return weights_; }
  [[nodiscard]] auto begin() const noexcept { return weights_.begin(); }
  [[nodiscard]] auto end() const noexcept { return weights_.end(); }

 private:
  std::vector<double> weights_;
};

/// Positive reciprocal k x k matrix; entry (i, j) is how many times factor i
/// is more significant than factor j.
class PairwiseMatrix {
 public:
  PairwiseMatrix() = default;

  PairwiseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<double>> copy;
    for (const auto& row : rows) copy.emplace_back(row);
    *this = PairwiseMatrix(copy);
  }

  explicit PairwiseMatrix(const std::vector<std::vector<double>>& rows) : k_(rows.size()) {
    if (k_ == 0) throw Error(ErrorCode::empty_scores, "pairwise matrix is empty");
    entries_.reserve(k_ * k_);
    for (const auto& row : rows) {
      if (row.size() != k_) throw Error(ErrorCode::dimension_mismatch, "pairwise matrix must be square");
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
    check();
  }

  [[nodiscard]] std::size_t size() const noexcept { return k_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return entries_[i * k_ + j]; }

 private:
  friend PairwiseMatrix matrix_from_scores(const ScoreVector&, Orientation);

  PairwiseMatrix(std::size_t k, std::vector<double> entries) : k_(k), entries_(std::move(entries)) {}

  void check() const {
    for (std::size_t i = 0; i < k_; ++i) {
      if ((*this)(i, i) != 1.0) throw Error(ErrorCode::invalid_parameter, "diagonal entries must equal 1");
      for (std::size_t j = 0; j < k_; ++j) {
        const double v = (*this)(i, j);
        if (!(v > 0.0) || !std::isfinite(v)) {
          throw Error(ErrorCode::invalid_parameter, "pairwise entries must be positive");
        }
        if (std::abs(v * (*this)(j, i) - 1.0) > kIdentityTolerance) {
          throw Error(ErrorCode::invalid_parameter, "pairwise matrix must be reciprocal");
        }
      }
    }
  }

  std::size_t k_ = 0;
  std::vector<double> entries_;
};

/// One selection criterion. firstRowPreference is the criterion's entry in
/// the first row of the criteria-level matrix; the first criterion uses 1.
struct CriterionSpec {
  std::string id;
  Orientation orientation = Orientation::cost;
  double first_row_preference = 1.0;

  friend bool operator==(const CriterionSpec&, const CriterionSpec&) = default;
};

/// cost: M(i, j) = v_j / v_i. benefit: M(i, j) = v_i / v_j.
[[nodiscard]] inline PairwiseMatrix matrix_from_scores(const ScoreVector& scores, Orientation orientation) {
  if (scores.empty()) throw Error(ErrorCode::empty_scores, "score vector is empty");
  const std::size_t k = scores.size();
  std::vector<double> entries(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      entries[i * k + j] = i == j ? 1.0
                           : orientation == Orientation::cost ? scores[j] / scores[i]
                                                              : scores[i] / scores[j];
    }
  }
  return PairwiseMatrix(k, std::move(entries));
}

/// Column j of the matrix divided by its sum.
[[nodiscard]] inline std::vector<double> normalized_column(const PairwiseMatrix& m, std::size_t j) {
  const std::size_t k = m.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += m(i, j);
  std::vector<double> column(k);
  for (std::size_t i = 0; i < k; ++i) column[i] = m(i, j) / sum;
  return column;
}

/// Column-normalize, then average each row.
[[nodiscard]] inline WeightVector normalize_weights(const PairwiseMatrix& m) {
  const std::size_t k = m.size();
  std::vector<double> weights(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    const auto column = normalized_column(m, j);
    for (std::size_t i = 0; i < k; ++i) weights[i] += column[i];
  }
  for (double& w : weights) w /= static_cast<double>(k);
  return WeightVector::normalized(std::move(weights));
}

/// Closed form of normalize_weights(matrix_from_scores(scores, orientation)):
/// the normalized inverse scores (cost) or normalized scores (benefit).
[[nodiscard]] inline WeightVector weights_from_scores(const ScoreVector& scores, Orientation orientation) {
  if (scores.empty()) throw Error(ErrorCode::empty_scores, "score vector is empty");
  std::vector<double> weights(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    weights[i] = orientation == Orientation::cost ? 1.0 / scores[i] : scores[i];
  }
  return WeightVector::normalized(std::move(weights));
}

namespace detail {

inline ScoreVector preference_scores(std::span<const CriterionSpec> specs) {
  if (specs.empty()) throw Error(ErrorCode::empty_scores, "criteria list is empty");
  std::vector<double> t;
  t.reserve(specs.size());
  for (const auto& spec : specs) {
    if (!(spec.first_row_preference > 0.0) || !std::isfinite(spec.first_row_preference)) {
      throw Error(ErrorCode::non_positive_preference,
                  "criterion '" + spec.id + "' has a non-positive first-row preference");
    }
    t.push_back(spec.first_row_preference);
  }
  if (t.front() != 1.0) {
    throw Error(ErrorCode::invalid_parameter, "the first criterion must have first-row preference 1");
  }
  return ScoreVector(std::move(t));
}

}  // namespace detail

/// Criteria-level matrix filled from its first row: M(i, j) = t_j / t_i.
[[nodiscard]] inline PairwiseMatrix criteria_matrix(std::span<const CriterionSpec> specs) {
  return matrix_from_scores(detail::preference_scores(specs), Orientation::cost);
}

/// Criteria weights w_i = (1/t_i) / sum_s (1/t_s). With t = (1, 1/s) this is
/// (1/(1+s), s/(1+s)).
[[nodiscard]] inline WeightVector criteria_weights(std::span<const CriterionSpec> specs) {
  return weights_from_scores(detail::preference_scores(specs), Orientation::cost);
}

/// True iff |M(i,s) M(s,j) - M(i,j)| <= tol * M(i,j) for every triple.
[[nodiscard]] inline bool ideal_consistency_check(const PairwiseMatrix& m, double tol = kConsistencyTolerance) {
  const std::size_t k = m.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t s = 0; s < k; ++s) {
      for (std::size_t j = 0; j < k; ++j) {
        if (std::abs(m(i, s) * m(s, j) - m(i, j)) > tol * m(i, j)) return false;
      }
    }
  }
  return true;
}

/// Principal eigenvalue by power iteration. Stops when successive estimates
/// differ by at most 1e-10; throws no_convergence after 10000 iterations.
[[nodiscard]] inline double principal_eigenvalue(const PairwiseMatrix& m) {
  constexpr double kTolerance = 1e-10;
  constexpr int kMaxIterations = 10000;

  const std::size_t k = m.size();
  std::vector<double> x(k, 1.0 / static_cast<double>(k));
  std::vector<double> y(k);
  double previous = 0.0;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    double lambda = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += m(i, j) * x[j];
      y[i] = acc;
      lambda += acc;
    }
    // x sums to one, so the sum of Mx is the Rayleigh-style estimate.
    for (std::size_t i = 0; i < k; ++i) x[i] = y[i] / lambda;
    if (iter > 0 && std::abs(lambda - previous) <= kTolerance) return lambda;
    previous = lambda;
  }
  throw Error(ErrorCode::no_convergence, "power iteration did not converge");
}

/// CI = (lambda_max - k) / (k - 1). Diagnostic only; zero for ideally
/// consistent matrices.
[[nodiscard]] inline double consistency_index(const PairwiseMatrix& m) {
  const std::size_t k = m.size();
  if (k < 2) throw Error(ErrorCode::invalid_parameter, "consistency index needs k >= 2");
  const double lambda = principal_eigenvalue(m);
  return (lambda - static_cast<double>(k)) / static_cast<double>(k - 1);
}

/// score_i = sum_c criteria[c] * alternatives[c][i].
[[nodiscard]] inline WeightVector combine(const WeightVector& criteria, std::span<const WeightVector> alternatives) {
  if (alternatives.size() != criteria.size()) {
    throw Error(ErrorCode::dimension_mismatch, "one alternative weight vector is required per criterion");
  }
  const std::size_t k = alternatives.front().size();
  std::vector<double> scores(k, 0.0);
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    if (alternatives[c].size() != k) {
      throw Error(ErrorCode::dimension_mismatch, "alternative weight vectors differ in size");
    }
    for (std::size_t i = 0; i < k; ++i) scores[i] += criteria[c] * alternatives[c][i];
  }
  return WeightVector(std::move(scores));
}

}  // namespace rbahp
