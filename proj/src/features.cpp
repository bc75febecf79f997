#include "homophily/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "homophily/csv.hpp"
#include "homophily/error.hpp"

namespace homophily {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kNames{
    "followers",        "stars_obtained",  "eigenvector_centrality", "forked_by",
    "followed",         "forks_made",      "stars_given",            "commits_to_others",
    "comments_written", "issues_opened",   "language_count",         "spec_web",
    "spec_functional",  "spec_scientific", "repository_count",       "registration_year",
    "commits_base",     "commits_forked",
};

std::array<Feature, kFeatureCount> make_all() {
  std::array<Feature, kFeatureCount> out{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) out[i] = static_cast<Feature>(i);
  return out;
}

bool is_fraction(Feature f) {
  return f == Feature::spec_web || f == Feature::spec_functional || f == Feature::spec_scientific;
}

double parse_number(std::string_view s, std::size_t line, std::string_view column) {
  s = csv::trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ParseError("missing or non-numeric value in column " + std::string(column), line);
  }
  return v;
}

}  // namespace

std::string_view feature_name(Feature f) { return kNames.at(static_cast<std::size_t>(f)); }

FeatureGroup feature_group(Feature f) {
  const auto i = static_cast<std::size_t>(f);
  if (i < 4) return FeatureGroup::reputation;
  if (i < 8) return FeatureGroup::reciprocity;
  if (i < 10) return FeatureGroup::communication;
  if (i < 14) return FeatureGroup::standardization;
  return FeatureGroup::information;
}

Feature parse_feature(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kNames[i] == name) return static_cast<Feature>(i);
  }
  throw InvalidArgument("unknown feature column: " + std::string(name));
}

const std::array<Feature, kFeatureCount>& all_features() {
  static const auto all = make_all();
  return all;
}

UserFeatureTable::UserFeatureTable(std::vector<std::string> users, std::vector<Row> rows,
                                   const FeatureTableLimits& limits)
    : users_(std::move(users)), rows_(std::move(rows)) {
  if (users_.size() != rows_.size()) throw InvalidArgument("user and row counts differ");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (Feature f : all_features()) {
      const double v = rows_[i][static_cast<std::size_t>(f)];
      const std::string where = " for user " + users_[i] + " in " + std::string(feature_name(f));
      if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("negative or non-finite value" + where);
      if (is_fraction(f) && v > 1.0) throw InvalidArgument("fraction above 1" + where);
      if (f == Feature::registration_year &&
          (v < limits.min_registration_year || v > limits.max_registration_year)) {
        throw InvalidArgument("registration year outside configured span" + where);
      }
    }
  }
}

UserFeatureTable load_feature_table(std::istream& in, const FeatureTableLimits& limits) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::size_t> column_of(kFeatureCount, SIZE_MAX);
  std::size_t user_column = SIZE_MAX;
  std::size_t width = 0;
  bool header = true;
  std::vector<std::string> users;
  std::vector<UserFeatureTable::Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split(csv::trim(line));
    if (header) {
      header = false;
      width = fields.size();
      for (std::size_t c = 0; c < fields.size(); ++c) {
        const auto name = csv::trim(fields[c]);
        if (name == "user") {
          user_column = c;
        } else {
          column_of[static_cast<std::size_t>(parse_feature(name))] = c;
        }
      }
      if (user_column == SIZE_MAX) throw ParseError("feature header lacks a user column", line_no);
      for (std::size_t f = 0; f < kFeatureCount; ++f) {
        if (column_of[f] == SIZE_MAX) {
          throw ParseError("feature header lacks column " + std::string(kNames[f]), line_no);
        }
      }
      continue;
    }
    if (fields.size() != width) throw ParseError("wrong field count", line_no);
    UserFeatureTable::Row row{};
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      row[f] = parse_number(fields[column_of[f]], line_no, kNames[f]);
    }
    users.emplace_back(csv::trim(fields[user_column]));
    rows.push_back(row);
  }
  return UserFeatureTable(std::move(users), std::move(rows), limits);
}

void write_feature_table(std::ostream& out, const UserFeatureTable& table) {
  std::vector<std::string> header{"user"};
  for (auto name : kNames) header.emplace_back(name);
  csv::write_row(out, header);
  for (std::size_t i = 0; i < table.size(); ++i) {
    std::vector<std::string> fields{table.users()[i]};
    for (double v : table.row(i)) fields.push_back(csv::format_double(v));
    csv::write_row(out, fields);
  }
}

std::vector<Feature> default_activity_columns() {
  return {Feature::issues_opened, Feature::comments_written, Feature::commits_base,
          Feature::commits_forked, Feature::commits_to_others};
}

UserFeatureTable filter_active_users(const UserFeatureTable& table, double threshold,
                                     const std::vector<Feature>& activity) {
  return table.filtered([&](std::size_t i) {
    double sum = 0.0;
    for (Feature f : activity) sum += table.value(i, f);
    return sum > 0.0 && sum >= threshold;
  });
}

TransformedMatrix transform_matrix(const Matrix& raw, std::vector<std::string> column_names,
                                   std::vector<std::string> row_labels, double shift) {
  if (column_names.size() != raw.cols()) throw InvalidArgument("column name count mismatch");
  TransformedMatrix t;
  t.shift = shift;
  t.values = Matrix(raw.rows(), raw.cols());
  t.means.assign(raw.cols(), 0.0);
  t.sds.assign(raw.cols(), 0.0);
  const double n = static_cast<double>(raw.rows());
  for (std::size_t c = 0; c < raw.cols(); ++c) {
    for (std::size_t r = 0; r < raw.rows(); ++r) {
      const double x = raw(r, c);
      if (!(x >= 0.0)) throw InvalidArgument("negative value in column " + column_names[c]);
      t.values(r, c) = std::log(x + shift);
      t.means[c] += t.values(r, c);
    }
    t.means[c] /= n;
    double ss = 0.0;
    for (std::size_t r = 0; r < raw.rows(); ++r) {
      const double d = t.values(r, c) - t.means[c];
      ss += d * d;
    }
    t.sds[c] = raw.rows() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    if (!(t.sds[c] > 0.0)) throw UndefinedError("zero variance in column " + column_names[c]);
    for (std::size_t r = 0; r < raw.rows(); ++r) {
      t.values(r, c) = (t.values(r, c) - t.means[c]) / t.sds[c];
    }
  }
  t.column_names = std::move(column_names);
  t.row_labels = std::move(row_labels);
  return t;
}

TransformedMatrix transform_features(const UserFeatureTable& table, double shift,
                                     const std::vector<Feature>& columns) {
  std::vector<Feature> cols = columns;
  if (cols.empty()) cols.assign(all_features().begin(), all_features().end());
  Matrix raw(table.size(), cols.size());
  std::vector<std::string> names;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    names.emplace_back(feature_name(cols[c]));
    for (std::size_t r = 0; r < table.size(); ++r) raw(r, c) = table.value(r, cols[c]);
  }
  return transform_matrix(raw, std::move(names), table.users(), shift);
}

Matrix inverse_transform(const TransformedMatrix& t) {
  Matrix raw(t.values.rows(), t.values.cols());
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    for (std::size_t c = 0; c < raw.cols(); ++c) {
      // Round-off can push a zero slightly negative.
      raw(r, c) = std::max(0.0, std::exp(t.values(r, c) * t.sds[c] + t.means[c]) - t.shift);
    }
  }
  return raw;
}

}  // namespace homophily
