// SMAWK matrix search: leftmost row maxima of a totally monotone matrix
// in O(rows + cols) entry evaluations. The matrix is implicit; entries
// are produced on demand by a callable so no O(rows*cols) storage is
// ever materialized.
//
// Total monotonicity here is the row-maxima form: for a < a', b < b',
//   A(a,b) <= A(a,b')  implies  A(a',b) <= A(a',b'),
// which follows from the inverse Monge condition
//   A(a,b') + A(a',b) <= A(a,b) + A(a',b').
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace jscmd {

namespace detail {

template <typename Entry>
void smawk_rec(const std::vector<std::size_t>& rows,
               const std::vector<std::size_t>& cols, Entry& entry,
               std::vector<std::size_t>& argmax) {
    if (rows.empty()) return;

    // REDUCE: drop columns that cannot hold any row's leftmost maximum,
    // leaving at most |rows| survivors. Ties keep the earlier column.
    std::vector<std::size_t> survivors;
    survivors.reserve(rows.size());
    for (std::size_t c : cols) {
        while (!survivors.empty()) {
            std::size_t r = rows[survivors.size() - 1];
            if (entry(r, survivors.back()) < entry(r, c))
                survivors.pop_back();
            else
                break;
        }
        if (survivors.size() < rows.size()) survivors.push_back(c);
    }

    // Solve the odd rows recursively.
    std::vector<std::size_t> odd;
    odd.reserve(rows.size() / 2);
    for (std::size_t i = 1; i < rows.size(); i += 2) odd.push_back(rows[i]);
    smawk_rec(odd, survivors, entry, argmax);

    // INTERPOLATE: each even row's maximum sits between its odd
    // neighbours' answers, so one left-to-right sweep fills them all.
    std::size_t pos = 0;
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        std::size_t row = rows[i];
        std::size_t stop = (i + 1 < rows.size()) ? argmax[rows[i + 1]]
                                                 : survivors.back();
        std::size_t best_col = survivors[pos];
        auto best = entry(row, best_col);
        while (survivors[pos] != stop) {
            ++pos;
            auto v = entry(row, survivors[pos]);
            if (v > best) {
                best = v;
                best_col = survivors[pos];
            }
        }
        argmax[row] = best_col;
    }
}

} // namespace detail

/// Leftmost maximum column for each row of an implicitly defined
/// rows x cols totally monotone matrix. `entry(row, col)` may be called
/// several times per cell; it should be cheap (table lookups and adds).
template <typename Entry>
std::vector<std::size_t> smawk_row_maxima(std::size_t rows, std::size_t cols,
                                          Entry entry) {
    std::vector<std::size_t> row_ids(rows), col_ids(cols);
    for (std::size_t i = 0; i < rows; ++i) row_ids[i] = i;
    for (std::size_t j = 0; j < cols; ++j) col_ids[j] = j;
    std::vector<std::size_t> argmax(rows, 0);
    detail::smawk_rec(row_ids, col_ids, entry, argmax);
    return argmax;
}

} // namespace jscmd
