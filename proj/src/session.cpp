#include "webclust/session.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <unordered_set>

namespace webclust {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) tokens.push_back(s.substr(start, i - start));
    }
    return tokens;
}

bool is_integer_token(std::string_view t) {
    std::size_t i = t.front() == '-' ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
        if (t[i] < '0' || t[i] > '9') return false;
    return true;
}

CategoryCode parse_code(std::string_view token, std::size_t num_categories,
                        std::size_t line_no) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec == std::errc::result_out_of_range || ptr != token.data() + token.size() ||
        ec != std::errc() || value < 1 || value > static_cast<long long>(num_categories)) {
        throw ValidationError("category code " + std::string(token) + " outside 1.." +
                                  std::to_string(num_categories),
                              line_no);
    }
    return static_cast<CategoryCode>(value);
}

SessionDataset parse_log_impl(std::istream& in, const CategoryDictionary* external) {
    SessionDataset data;
    bool have_dict = external != nullptr;
    if (external) data.dictionary = *external;

    std::string line;
    std::size_t line_no = 0;
    bool data_started = false;
    // Embedded mode: the most recent candidate for the category-name line.
    std::string pending_names;
    std::size_t pending_line = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty() || view.front() == '%') continue;

        auto tokens = split_ws(view);
        bool all_integers =
            std::all_of(tokens.begin(), tokens.end(), is_integer_token);

        if (!all_integers) {
            if (data_started || external) {
                auto bad = std::find_if_not(tokens.begin(), tokens.end(), is_integer_token);
                throw ParseError("non-integer token '" + std::string(*bad) + "'", line_no);
            }
            pending_names = view;
            pending_line = line_no;
            continue;
        }

        if (!data_started) {
            data_started = true;
            if (!have_dict) {
                if (pending_names.empty())
                    throw ParseError(
                        "no category-name line found before the first data row; "
                        "supply an external dictionary",
                        line_no);
                auto name_tokens = split_ws(pending_names);
                std::vector<std::string> names(name_tokens.begin(), name_tokens.end());
                try {
                    data.dictionary = CategoryDictionary(std::move(names));
                } catch (const ValidationError& e) {
                    throw ParseError(std::string("bad category-name line: ") + e.what(),
                                     pending_line);
                }
                have_dict = true;
            }
        }

        Session s;
        s.id = static_cast<std::uint32_t>(data.sessions.size() + 1);
        s.visits.reserve(tokens.size());
        for (auto t : tokens)
            s.visits.push_back(parse_code(t, data.dictionary.size(), line_no));
        data.sessions.push_back(std::move(s));
    }

    if (data.sessions.empty()) throw ParseError("no data rows found");
    return data;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return in;
}

}  // namespace

CategoryDictionary::CategoryDictionary(std::vector<std::string> names)
    : names_(std::move(names)) {
    if (names_.empty()) throw ValidationError("category dictionary is empty");
    if (names_.size() > std::numeric_limits<CategoryCode>::max())
        throw ValidationError("category dictionary exceeds " +
                              std::to_string(std::numeric_limits<CategoryCode>::max()) +
                              " entries");
    std::unordered_set<std::string_view> seen;
    for (const auto& n : names_) {
        if (n.empty()) throw ValidationError("empty category name");
        if (!seen.insert(n).second)
            throw ValidationError("duplicate category name '" + n + "'");
    }
}

CategoryDictionary msnbc_dictionary() {
    return CategoryDictionary({"frontpage", "news", "tech", "local", "opinion", "on-air",
                               "misc", "weather", "health", "living", "business", "sports",
                               "summary", "bbs", "travel", "msn-news", "msn-sports"});
}

SessionDataset parse_log(std::istream& in) { return parse_log_impl(in, nullptr); }

SessionDataset parse_log(std::istream& in, const CategoryDictionary& dictionary) {
    return parse_log_impl(in, &dictionary);
}

SessionDataset parse_log_file(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_log(in);
}

SessionDataset parse_log_file(const std::string& path, const CategoryDictionary& dictionary) {
    auto in = open_or_throw(path);
    return parse_log(in, dictionary);
}

CategoryDictionary load_dictionary_file(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view view = trim(line);
        if (view.empty() || view.front() == '%') continue;
        for (auto t : split_ws(view)) names.emplace_back(t);
    }
    return CategoryDictionary(std::move(names));
}

void serialize_log(const SessionDataset& data, std::ostream& out) {
    out << "% Different categories found in input file:\n\n";
    const auto& names = data.dictionary.names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out << ' ';
        out << names[i];
    }
    out << "\n\n% Sequences:\n\n";
    for (const auto& s : data.sessions) {
        for (std::size_t i = 0; i < s.visits.size(); ++i) {
            if (i) out << ' ';
            out << s.visits[i];
        }
        out << '\n';
    }
}

DatasetStats dataset_stats(const SessionDataset& data) {
    if (data.sessions.empty()) throw std::invalid_argument("dataset_stats: empty dataset");
    DatasetStats stats;
    stats.num_sessions = data.sessions.size();
    stats.num_categories = data.dictionary.size();
    stats.length_min = std::numeric_limits<std::size_t>::max();
    std::size_t total = 0;
    for (const auto& s : data.sessions) {
        total += s.visits.size();
        stats.length_min = std::min(stats.length_min, s.visits.size());
        stats.length_max = std::max(stats.length_max, s.visits.size());
    }
    stats.avg_visits = static_cast<double>(total) / static_cast<double>(stats.num_sessions);
    return stats;
}

}  // namespace webclust
