#ifndef ALDAG_DATASET_HPP
#define ALDAG_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "aldag/errors.hpp"

namespace aldag {

/// Name and ordered level list of one categorical variable.
/// The level order is the encoding order: level index == code value.
struct VariableMeta {
    std::string name;
    std::vector<std::string> levels;

    int cardinality() const { return static_cast<int>(levels.size()); }
};

/// Immutable table of N rows over p categorical variables, stored as
/// row-major integer codes. Safe to share read-only across threads.
class CategoricalDataset {
public:
    CategoricalDataset() = default;

    /// Takes ownership of the metadata and the row-major code matrix.
    /// Throws std::invalid_argument if any code is out of range or the
    /// matrix is not rectangular.
    CategoricalDataset(std::vector<VariableMeta> variables, std::vector<int> codes);

    std::int64_t n_rows() const { return n_rows_; }
    int n_vars() const { return static_cast<int>(variables_.size()); }
    int card(int var) const { return variables_[static_cast<std::size_t>(var)].cardinality(); }
    const VariableMeta& variable(int var) const { return variables_[static_cast<std::size_t>(var)]; }
    const std::vector<VariableMeta>& variables() const { return variables_; }

    int code(std::int64_t row, int var) const {
        return codes_[static_cast<std::size_t>(row) * static_cast<std::size_t>(n_vars()) +
                      static_cast<std::size_t>(var)];
    }

    const std::string& level_name(std::int64_t row, int var) const {
        return variables_[static_cast<std::size_t>(var)].levels[static_cast<std::size_t>(code(row, var))];
    }

    std::vector<int> cards() const;

    /// Dataset whose column j is this dataset's column `cols[j]`.
    CategoricalDataset reordered(const std::vector<int>& cols) const;

private:
    std::int64_t n_rows_ = 0;
    std::vector<VariableMeta> variables_;
    std::vector<int> codes_;
};

struct CsvOptions {
    char delimiter = ',';
    bool has_header = true;
};

/// Reads a rectangular UTF-8 table. Each column becomes one variable;
/// distinct cell strings become levels in first-appearance order, so the
/// encoding is reproducible without external metadata. Without a header,
/// columns are named V1..Vp.
///
/// Throws ParseError on ragged rows or unreadable files, MissingValueError
/// on empty cells, EmptyDataError when no data rows remain.
CategoricalDataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Equal-frequency discretization. Bin boundaries are the empirical
/// quantiles at fractions m/bins (inverse-CDF convention); each value maps
/// to the smallest bin whose upper boundary is >= the value. Throws
/// DegenerateBinsError when the values have fewer distinct entries than
/// bins.
std::vector<int> equal_frequency_discretize(std::span<const double> values, int bins);

/// Dense contingency table over an ordered subset of variables,
/// row-major with the last variable fastest.
class CountTable {
public:
    CountTable(std::vector<int> vars, std::vector<int> cards);

    const std::vector<int>& vars() const { return vars_; }
    const std::vector<int>& cards() const { return cards_; }
    std::size_t size() const { return counts_.size(); }
    std::int64_t& operator[](std::size_t i) { return counts_[i]; }
    std::int64_t operator[](std::size_t i) const { return counts_[i]; }
    std::int64_t total() const;

    /// Flat index of a configuration given per-variable codes.
    std::size_t index_of(std::span<const int> config) const;

    /// Inverse of index_of.
    std::vector<int> config_of(std::size_t index) const;

    /// Sums out the variable at position `pos` in vars().
    CountTable marginalize(int pos) const;

private:
    std::vector<int> vars_;
    std::vector<int> cards_;
    std::vector<std::size_t> strides_;
    std::vector<std::int64_t> counts_;
};

/// Joint counts of the rows over `vars`. An empty subset yields a single
/// cell holding n_rows. Entries always sum to n_rows.
CountTable joint_counts(const CategoricalDataset& data, std::span<const int> vars);

}  // namespace aldag

#endif  // ALDAG_DATASET_HPP
