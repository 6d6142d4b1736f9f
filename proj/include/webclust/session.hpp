#pragma once

// Ingestion of msnbc.com-style sequence logs: one line per user session,
// whitespace-separated 1-based page-category codes, '%' comment lines, and
// an optional embedded category-name line ahead of the data rows.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "webclust/errors.hpp"

namespace webclust {

using CategoryCode = std::uint16_t;

// Ordered category names; the 1-based position of a name is its integer code.
class CategoryDictionary {
public:
    CategoryDictionary() = default;
    explicit CategoryDictionary(std::vector<std::string> names);

    std::size_t size() const noexcept { return names_.size(); }
    const std::string& name(CategoryCode code) const { return names_.at(code - 1); }
    const std::vector<std::string>& names() const noexcept { return names_; }

    bool operator==(const CategoryDictionary&) const = default;

private:
    std::vector<std::string> names_;
};

// The 17 msnbc.com page categories, code 1 = "frontpage".
CategoryDictionary msnbc_dictionary();

struct Session {
    std::uint32_t id = 0;              // 1-based, assigned in file order
    std::vector<CategoryCode> visits;  // non-empty, codes in 1..dictionary size

    bool operator==(const Session&) const = default;
};

struct SessionDataset {
    CategoryDictionary dictionary;
    std::vector<Session> sessions;  // ids are 1..n with no gaps
};

struct DatasetStats {
    std::size_t num_sessions = 0;
    double avg_visits = 0.0;
    std::size_t num_categories = 0;
    std::size_t length_min = 0;
    std::size_t length_max = 0;
};

// Embedded-dictionary mode: the last non-comment line before the first
// all-integer line names the categories; absence is a ParseError.
SessionDataset parse_log(std::istream& in);

// External-dictionary mode: every non-comment, non-blank line must be a
// data row.
SessionDataset parse_log(std::istream& in, const CategoryDictionary& dictionary);

SessionDataset parse_log_file(const std::string& path);
SessionDataset parse_log_file(const std::string& path, const CategoryDictionary& dictionary);

// All non-comment tokens in the file, in order, become category names.
CategoryDictionary load_dictionary_file(const std::string& path);

// Canonical text form; parse_log(serialize_log(d)) reproduces d exactly.
void serialize_log(const SessionDataset& data, std::ostream& out);

DatasetStats dataset_stats(const SessionDataset& data);

}  // namespace webclust
