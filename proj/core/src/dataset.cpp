#include "aldag/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace aldag {

CategoricalDataset::CategoricalDataset(std::vector<VariableMeta> variables, std::vector<int> codes)
    : variables_(std::move(variables)), codes_(std::move(codes)) {
    const std::size_t p = variables_.size();
    if (p == 0) {
        if (!codes_.empty()) throw std::invalid_argument("codes present but no variables");
        return;
    }
    if (codes_.size() % p != 0) throw std::invalid_argument("code matrix is not rectangular");
    n_rows_ = static_cast<std::int64_t>(codes_.size() / p);
    for (std::size_t j = 0; j < p; ++j) {
        if (variables_[j].cardinality() < 1)
            throw std::invalid_argument("variable '" + variables_[j].name + "' has no levels");
        std::set<std::string> seen(variables_[j].levels.begin(), variables_[j].levels.end());
        if (seen.size() != variables_[j].levels.size())
            throw std::invalid_argument("variable '" + variables_[j].name + "' has duplicate level names");
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(n_rows_); ++r) {
        for (std::size_t j = 0; j < p; ++j) {
            const int c = codes_[r * p + j];
            if (c < 0 || c >= variables_[j].cardinality())
                throw std::invalid_argument("code out of range for variable '" + variables_[j].name + "'");
        }
    }
}

std::vector<int> CategoricalDataset::cards() const {
    std::vector<int> out(static_cast<std::size_t>(n_vars()));
    for (int j = 0; j < n_vars(); ++j) out[static_cast<std::size_t>(j)] = card(j);
    return out;
}

CategoricalDataset CategoricalDataset::reordered(const std::vector<int>& cols) const {
    const int p = static_cast<int>(cols.size());
    std::vector<VariableMeta> vars(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) vars[static_cast<std::size_t>(j)] = variable(cols[static_cast<std::size_t>(j)]);
    std::vector<int> codes(static_cast<std::size_t>(n_rows_) * static_cast<std::size_t>(p));
    for (std::int64_t r = 0; r < n_rows_; ++r)
        for (int j = 0; j < p; ++j)
            codes[static_cast<std::size_t>(r) * static_cast<std::size_t>(p) + static_cast<std::size_t>(j)] =
                code(r, cols[static_cast<std::size_t>(j)]);
    return CategoricalDataset(std::move(vars), std::move(codes));
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == delimiter) {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(ch);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace

CategoricalDataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");

    std::vector<std::string> names;
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t lineno = 0;
    bool header_pending = options.has_header;
    std::size_t width = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;  // blank lines are skipped
        auto fields = split_line(line, options.delimiter);
        if (header_pending) {
            names = std::move(fields);
            width = names.size();
            header_pending = false;
            continue;
        }
        if (width == 0) width = fields.size();
        if (fields.size() != width)
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(width) + " fields, got " + std::to_string(fields.size()));
        rows.push_back(std::move(fields));
    }

    if (rows.empty()) throw EmptyDataError("'" + path.string() + "' has no data rows");

    if (names.empty()) {
        names.resize(width);
        for (std::size_t j = 0; j < width; ++j) names[j] = "V" + std::to_string(j + 1);
    }

    std::vector<VariableMeta> vars(width);
    std::vector<std::unordered_map<std::string, int>> code_of(width);
    for (std::size_t j = 0; j < width; ++j) vars[j].name = names[j];

    std::vector<int> codes;
    codes.reserve(rows.size() * width);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t j = 0; j < width; ++j) {
            const std::string& cell = rows[r][j];
            if (cell.empty())
                throw MissingValueError(path.string() + ": empty cell in row " + std::to_string(r + 1) +
                                        ", column '" + names[j] + "'");
            auto it = code_of[j].find(cell);
            if (it == code_of[j].end()) {
                it = code_of[j].emplace(cell, static_cast<int>(vars[j].levels.size())).first;
                vars[j].levels.push_back(cell);
            }
            codes.push_back(it->second);
        }
    }
    return CategoricalDataset(std::move(vars), std::move(codes));
}

std::vector<int> equal_frequency_discretize(std::span<const double> values, int bins) {
    if (bins < 2) throw std::invalid_argument("bins must be >= 2");
    if (values.empty()) throw std::invalid_argument("values must be nonempty");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t distinct =
        static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    if (distinct < static_cast<std::size_t>(bins))
        throw DegenerateBinsError("only " + std::to_string(distinct) + " distinct values for " +
                                  std::to_string(bins) + " bins");
    sorted.assign(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    // Upper boundary of bin m is the empirical quantile at (m+1)/bins:
    // the smallest order statistic with at least that fraction of mass below
    // or equal to it.
    const std::size_t n = sorted.size();
    std::vector<double> upper(static_cast<std::size_t>(bins) - 1);
    for (int m = 1; m < bins; ++m) {
        const std::size_t idx =
            (n * static_cast<std::size_t>(m) + static_cast<std::size_t>(bins) - 1) /
            static_cast<std::size_t>(bins);
        upper[static_cast<std::size_t>(m) - 1] = sorted[idx - 1];
    }

    std::vector<int> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        int b = bins - 1;
        for (int m = 0; m < bins - 1; ++m) {
            if (values[i] <= upper[static_cast<std::size_t>(m)]) {
                b = m;
                break;
            }
        }
        out[i] = b;
    }
    return out;
}

CountTable::CountTable(std::vector<int> vars, std::vector<int> cards)
    : vars_(std::move(vars)), cards_(std::move(cards)) {
    if (vars_.size() != cards_.size()) throw std::invalid_argument("vars/cards size mismatch");
    strides_.resize(vars_.size());
    std::size_t stride = 1;
    for (std::size_t j = vars_.size(); j-- > 0;) {
        strides_[j] = stride;
        stride *= static_cast<std::size_t>(cards_[j]);
    }
    counts_.assign(stride, 0);
}

std::int64_t CountTable::total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

std::size_t CountTable::index_of(std::span<const int> config) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < vars_.size(); ++j)
        idx += static_cast<std::size_t>(config[j]) * strides_[j];
    return idx;
}

std::vector<int> CountTable::config_of(std::size_t index) const {
    std::vector<int> config(vars_.size());
    for (std::size_t j = 0; j < vars_.size(); ++j) {
        config[j] = static_cast<int>(index / strides_[j]);
        index %= strides_[j];
    }
    return config;
}

CountTable CountTable::marginalize(int pos) const {
    std::vector<int> vars = vars_;
    std::vector<int> cards = cards_;
    vars.erase(vars.begin() + pos);
    cards.erase(cards.begin() + pos);
    CountTable out(std::move(vars), std::move(cards));
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        auto config = config_of(i);
        config.erase(config.begin() + pos);
        out[out.index_of(config)] += counts_[i];
    }
    return out;
}

CountTable joint_counts(const CategoricalDataset& data, std::span<const int> vars) {
    std::vector<int> vs(vars.begin(), vars.end());
    std::vector<int> cards(vars.size());
    for (std::size_t j = 0; j < vs.size(); ++j) cards[j] = data.card(vs[j]);
    CountTable table(std::move(vs), std::move(cards));
    const auto& tvars = table.vars();
    for (std::int64_t r = 0; r < data.n_rows(); ++r) {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < tvars.size(); ++j) {
            idx = idx * static_cast<std::size_t>(data.card(tvars[j])) +
                  static_cast<std::size_t>(data.code(r, tvars[j]));
        }
        table[idx] += 1;
    }
    return table;
}

}  // namespace aldag
