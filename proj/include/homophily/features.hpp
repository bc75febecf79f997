#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "homophily/matrix.hpp"

namespace homophily {

// Per-user development features, grouped as Reputation, Reciprocity,
// Communication, Standardization and Information.
enum class Feature : std::size_t {
  // reputation
  followers,
  stars_obtained,
  eigenvector_centrality,
  forked_by,
  // reciprocity
  followed,
  forks_made,
  stars_given,
  commits_to_others,
  // communication
  comments_written,
  issues_opened,
  // standardization
  language_count,
  spec_web,
  spec_functional,
  spec_scientific,
  // information
  repository_count,
  registration_year,
  commits_base,
  commits_forked,
};

inline constexpr std::size_t kFeatureCount = 18;

enum class FeatureGroup { reputation, reciprocity, communication, standardization, information };

std::string_view feature_name(Feature f);
FeatureGroup feature_group(Feature f);
/// Throws InvalidArgument for unknown names.
Feature parse_feature(std::string_view name);
const std::array<Feature, kFeatureCount>& all_features();

struct FeatureTableLimits {
  int min_registration_year = 2008;
  int max_registration_year = 2014;
};

/// One row per user. Immutable after construction.
class UserFeatureTable {
 public:
  using Row = std::array<double, kFeatureCount>;

  UserFeatureTable() = default;
  /// Validates non-negative counts, fractions in [0,1] and the registration span.
  UserFeatureTable(std::vector<std::string> users, std::vector<Row> rows,
                   const FeatureTableLimits& limits = {});

  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  const std::vector<std::string>& users() const noexcept { return users_; }
  const Row& row(std::size_t i) const { return rows_.at(i); }
  double value(std::size_t i, Feature f) const { return rows_.at(i)[static_cast<std::size_t>(f)]; }

  /// Keeps rows whose index satisfies `keep`.
  template <class Pred>
  UserFeatureTable filtered(Pred keep) const {
    UserFeatureTable out;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (keep(i)) {
        out.users_.push_back(users_[i]);
        out.rows_.push_back(rows_[i]);
      }
    }
    return out;
  }

 private:
  std::vector<std::string> users_;
  std::vector<Row> rows_;
};

/// Reads a feature CSV: header naming "user" and every canonical feature
/// column (any order). Empty or non-numeric cells fail the load.
UserFeatureTable load_feature_table(std::istream& in, const FeatureTableLimits& limits = {});
void write_feature_table(std::ostream& out, const UserFeatureTable& table);

/// Columns summed as "activity" by filter_active_users.
std::vector<Feature> default_activity_columns();

/// Keeps users whose activity sum is at least `threshold` and non-zero.
UserFeatureTable filter_active_users(const UserFeatureTable& table, double threshold = 10.0,
                                     const std::vector<Feature>& activity = default_activity_columns());

/// ln(x + shift) per cell, then z-scored per column (sample sd).
struct TransformedMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> column_names;
  Matrix values;
  std::vector<double> means;
  std::vector<double> sds;
  double shift = 5.0;
};

/// Throws InvalidArgument on negative input, UndefinedError naming the
/// column on zero variance (including a single row).
TransformedMatrix transform_matrix(const Matrix& raw, std::vector<std::string> column_names,
                                   std::vector<std::string> row_labels, double shift = 5.0);

TransformedMatrix transform_features(const UserFeatureTable& table, double shift = 5.0,
                                     const std::vector<Feature>& columns = {});

/// Raw values reproduced from a transformed matrix: exp(z * sd + mean) - shift.
Matrix inverse_transform(const TransformedMatrix& t);

}  // namespace homophily
