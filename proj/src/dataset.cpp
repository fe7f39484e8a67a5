#include "figmn/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "figmn/errors.hpp"
#include "figmn/rng.hpp"
#include "figmn/stats.hpp"

namespace figmn {

namespace {

// RFC-4180 field splitting: quoted fields, "" escapes, comma separator.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            if (!cur.empty())
                throw ParseError("stray quote in line " + std::to_string(line_no));
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (quoted) throw ParseError("unterminated quote in line " + std::to_string(line_no));
    fields.push_back(cur);
    return fields;
}

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool is_missing(const std::string& s) { return s.empty() || s == "?"; }

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return false;
    out = v;
    return true;
}

std::string basename_no_ext(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

} // namespace

Dataset load_csv(const std::string& path, const std::string& class_spec) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");

    std::vector<std::vector<std::string>> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line, line_no);
        for (auto& f : fields) f = trimmed(f);
        records.push_back(std::move(fields));
    }
    if (records.empty()) throw EmptyDataset("'" + path + "' has no header row");

    const std::vector<std::string> header = records.front();
    const int n_cols = static_cast<int>(header.size());

    // Resolve the class column from a name or a (possibly negative) index.
    int class_col = -1;
    {
        double idx;
        const bool numeric_spec =
            parse_number(class_spec, idx) && idx == std::floor(idx);
        if (numeric_spec) {
            int i = static_cast<int>(idx);
            if (i < 0) i += n_cols;
            if (i < 0 || i >= n_cols)
                throw ParseError("class column index " + class_spec + " out of range");
            class_col = i;
        } else {
            for (int i = 0; i < n_cols; ++i)
                if (header[i] == class_spec) class_col = i;
            if (class_col < 0)
                throw ParseError("class column '" + class_spec + "' not found in header");
        }
    }

    // Keep complete rows only.
    std::vector<const std::vector<std::string>*> live;
    int dropped = 0;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (static_cast<int>(rec.size()) != n_cols)
            throw ParseError("row " + std::to_string(r + 1) + " has " +
                             std::to_string(rec.size()) + " fields, expected " +
                             std::to_string(n_cols));
        bool missing = false;
        for (const auto& f : rec)
            if (is_missing(f)) { missing = true; break; }
        if (missing)
            ++dropped;
        else
            live.push_back(&rec);
    }
    if (dropped > 0)
        std::cerr << "warning: dropped " << dropped << " rows with missing values from '"
                  << path << "'\n";
    if (live.size() < 2) throw EmptyDataset("'" + path + "' has fewer than 2 usable rows");

    // Column typing: a non-class column must be entirely numeric or
    // entirely nominal; a mix means a corrupted numeric column.
    std::vector<bool> numeric(n_cols, true);
    for (int cidx = 0; cidx < n_cols; ++cidx) {
        if (cidx == class_col) continue;
        int n_num = 0, n_nom = 0;
        std::size_t bad_row = 0;
        std::string bad_value;
        for (std::size_t r = 0; r < live.size(); ++r) {
            double v;
            if (parse_number((*live[r])[cidx], v)) {
                ++n_num;
            } else {
                if (n_nom == 0) {
                    bad_row = r;
                    bad_value = (*live[r])[cidx];
                }
                ++n_nom;
            }
        }
        if (n_num > 0 && n_nom > 0)
            throw ParseError("value '" + bad_value + "' in column '" + header[cidx] +
                             "' (row " + std::to_string(bad_row + 2) + ") is not numeric");
        numeric[cidx] = n_nom == 0;
    }

    // Vocabulary of each nominal column and of the class column.
    std::map<int, std::vector<std::string>> nominal_values;
    for (int cidx = 0; cidx < n_cols; ++cidx) {
        if (cidx == class_col || numeric[cidx]) continue;
        std::set<std::string> values;
        for (const auto* rec : live) values.insert((*rec)[cidx]);
        nominal_values[cidx] = {values.begin(), values.end()};
    }
    std::set<std::string> class_values;
    for (const auto* rec : live) class_values.insert((*rec)[class_col]);
    if (class_values.size() < 2)
        throw ParseError("'" + path + "' has fewer than 2 classes");

    Dataset ds;
    ds.name = basename_no_ext(path);
    ds.dropped_rows = dropped;
    ds.class_names.assign(class_values.begin(), class_values.end());
    // Numeric-looking labels sort numerically, so "10" comes after "2".
    std::stable_sort(ds.class_names.begin(), ds.class_names.end(),
                     [](const std::string& a, const std::string& b) {
                         double x, y;
                         const bool na = parse_number(a, x), nb = parse_number(b, y);
                         if (na && nb) return x < y;
                         if (na != nb) return na;
                         return a < b;
                     });

    for (int cidx = 0; cidx < n_cols; ++cidx) {
        if (cidx == class_col) continue;
        if (numeric[cidx]) {
            ds.attribute_names.push_back(header[cidx]);
        } else {
            for (const auto& v : nominal_values[cidx])
                ds.attribute_names.push_back(header[cidx] + "=" + v);
        }
    }

    ds.rows.reserve(live.size());
    ds.labels.reserve(live.size());
    for (const auto* rec : live) {
        Vector row;
        row.reserve(ds.attribute_names.size());
        for (int cidx = 0; cidx < n_cols; ++cidx) {
            if (cidx == class_col) continue;
            if (numeric[cidx]) {
                double v;
                parse_number((*rec)[cidx], v);
                row.push_back(v);
            } else {
                for (const auto& v : nominal_values[cidx])
                    row.push_back((*rec)[cidx] == v ? 1.0 : 0.0);
            }
        }
        ds.rows.push_back(std::move(row));
        const auto it =
            std::find(ds.class_names.begin(), ds.class_names.end(), (*rec)[class_col]);
        ds.labels.push_back(static_cast<int>(it - ds.class_names.begin()));
    }
    return ds;
}

void standardize(Dataset& ds) {
    if (ds.rows.empty()) return;
    const int f = ds.n_features();
    RunningStats stats(f);
    for (const auto& row : ds.rows) stats.update(row);
    const Vector sd = stats.std(1e-12);
    const Vector& mean = stats.mean();
    for (auto& row : ds.rows)
        for (int i = 0; i < f; ++i) row[i] = (row[i] - mean[i]) / sd[i];
}

EncodedDataset encode_for_igmn(const Dataset& ds) {
    EncodedDataset out;
    const int f = ds.n_features();
    const int c = ds.n_classes();
    out.rows.reserve(ds.rows.size());
    for (std::size_t r = 0; r < ds.rows.size(); ++r) {
        Vector row = ds.rows[r];
        row.resize(f + c, 0.0);
        row[f + ds.labels[r]] = 1.0;
        out.rows.push_back(std::move(row));
    }
    out.plan = SlicePlan::trailing_targets(f + c, c);
    return out;
}

int decode_one_hot(std::span<const double> block) {
    int best = 0;
    for (std::size_t i = 1; i < block.size(); ++i)
        if (block[i] > block[best]) best = static_cast<int>(i);
    return best;
}

Vector column_std(const std::vector<Vector>& rows) {
    if (rows.empty()) throw EmptyDataset("cannot take the std of zero rows");
    RunningStats stats(static_cast<int>(rows.front().size()));
    for (const auto& row : rows) stats.update(row);
    return stats.std(0.0);
}

FoldSplit stratified_folds(const Dataset& ds, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("fold count must be at least 2");
    FoldSplit split;
    split.n_folds = k;
    split.seed = seed;
    split.fold_of_row.assign(ds.n_rows(), 0);

    std::vector<std::vector<std::size_t>> by_class(ds.n_classes());
    for (std::size_t r = 0; r < ds.n_rows(); ++r) by_class[ds.labels[r]].push_back(r);

    bool can_stratify = true;
    for (const auto& members : by_class)
        if (static_cast<int>(members.size()) < k) can_stratify = false;

    Rng rng(seed);
    auto shuffle = [&rng](std::vector<std::size_t>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.uniform_int(static_cast<int>(i))]);
    };

    if (!can_stratify) {
        std::cerr << "warning: a class has fewer than " << k
                  << " members; falling back to a non-stratified split\n";
        split.stratified = false;
        std::vector<std::size_t> all(ds.n_rows());
        for (std::size_t r = 0; r < all.size(); ++r) all[r] = r;
        shuffle(all);
        for (std::size_t i = 0; i < all.size(); ++i)
            split.fold_of_row[all[i]] = static_cast<int>(i % k);
        return split;
    }

    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& members = by_class[c];
        shuffle(members);
        // Rotate the starting fold per class so fold sizes stay balanced.
        const int start = static_cast<int>(c % static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < members.size(); ++i)
            split.fold_of_row[members[i]] = static_cast<int>((start + i) % k);
    }
    return split;
}

} // namespace figmn
