#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "figmn/inference.hpp"
#include "figmn/linalg.hpp"

namespace figmn {

/// A loaded classification dataset: numeric feature rows (nominal
/// non-class attributes one-hot encoded at load time), integer labels and
/// the label vocabulary.
struct Dataset {
    std::string name;
    std::vector<Vector> rows;
    std::vector<std::string> attribute_names;
    std::vector<int> labels;
    std::vector<std::string> class_names;
    int dropped_rows = 0;  // rows removed because of missing values

    int n_classes() const { return static_cast<int>(class_names.size()); }
    int n_features() const { return static_cast<int>(attribute_names.size()); }
    std::size_t n_rows() const { return rows.size(); }
};

/// Loads an RFC-4180-style CSV with a header row. class_spec selects the
/// class column by name or by 0-based index (negative counts from the
/// end). Rows with missing cells ("" or "?") are dropped and counted.
Dataset load_csv(const std::string& path, const std::string& class_spec);

/// Z-scores every feature column in place.
void standardize(Dataset& ds);

/// Appends the one-hot class block to each row; the returned plan marks it
/// as the target slice.
struct EncodedDataset {
    std::vector<Vector> rows;
    SlicePlan plan;
};
EncodedDataset encode_for_igmn(const Dataset& ds);

/// Decodes a one-hot block back to a label index (argmax, low-index ties).
int decode_one_hot(std::span<const double> block);

/// Per-dimension std of a set of rows (for batch sigma_ini).
Vector column_std(const std::vector<Vector>& rows);

struct FoldSplit {
    std::vector<int> fold_of_row;
    int n_folds = 0;
    std::uint64_t seed = 0;
    bool stratified = true;
};

/// Deterministic stratified k-fold assignment. Degrades to a plain
/// shuffled split (with a warning on stderr) when some class has fewer
/// than k members.
FoldSplit stratified_folds(const Dataset& ds, int k, std::uint64_t seed);

} // namespace figmn
