#pragma once

#include <cstdio>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "pca/rng.hpp"
#include "pca/types.hpp"

namespace pca {

// Random access performance table: P[i][j] is the probability that a packet
// cannot be recovered when the channel is at esn0_rows_db[i] and the number
// of users on the RA block falls in [user_thresholds[j], user_thresholds[j+1]).
struct RaPerformanceTable {
    std::vector<Count> user_thresholds;            // strictly ascending
    std::vector<double> esn0_rows_db;              // strictly ascending
    std::vector<std::vector<double>> loss_matrix;  // |rows| x |thresholds|

    bool operator==(const RaPerformanceTable&) const = default;
};

// Text layout: first data row lists the user-count thresholds; each following
// row is an Es/N0 value followed by one probability per threshold band.
// '#' starts a comment, blank lines are skipped.
inline RaPerformanceTable parse_ra_table(std::istream& in) {
    RaPerformanceTable table;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::vector<double> values;
        std::string tok;
        while (row >> tok) {
            try {
                std::size_t used = 0;
                const double v = std::stod(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                values.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("not a number: '" + tok + "'", line_no,
                                 static_cast<int>(values.size()) + 1);
            }
        }
        if (values.empty()) continue;
        if (!have_header) {
            for (std::size_t j = 0; j < values.size(); ++j) {
                const auto u = static_cast<Count>(values[j]);
                if (static_cast<double>(u) != values[j] || u < 0)
                    throw ParseError("user threshold must be a non-negative integer",
                                     line_no, static_cast<int>(j) + 1);
                if (j > 0 && u <= table.user_thresholds.back())
                    throw ParseError("user thresholds must be strictly ascending",
                                     line_no, static_cast<int>(j) + 1);
                table.user_thresholds.push_back(u);
            }
            have_header = true;
            continue;
        }
        if (values.size() != table.user_thresholds.size() + 1)
            throw ParseError("expected Es/N0 value plus " +
                                 std::to_string(table.user_thresholds.size()) +
                                 " probabilities",
                             line_no, static_cast<int>(values.size()));
        if (!table.esn0_rows_db.empty() && values[0] <= table.esn0_rows_db.back())
            throw ParseError("Es/N0 rows must be strictly ascending", line_no, 1);
        table.esn0_rows_db.push_back(values[0]);
        std::vector<double> probs(values.begin() + 1, values.end());
        for (std::size_t j = 0; j < probs.size(); ++j) {
            if (probs[j] < 0.0 || probs[j] > 1.0)
                throw ParseError("probability outside [0,1]", line_no,
                                 static_cast<int>(j) + 2);
        }
        table.loss_matrix.push_back(std::move(probs));
    }
    if (!have_header || table.esn0_rows_db.empty())
        throw ParseError("table needs a threshold row and at least one Es/N0 row",
                         line_no == 0 ? 1 : line_no, 1);
    return table;
}

inline RaPerformanceTable parse_ra_table(const std::string& text) {
    std::istringstream in(text);
    return parse_ra_table(in);
}

inline std::string to_text(const RaPerformanceTable& table) {
    std::ostringstream out;
    for (std::size_t j = 0; j < table.user_thresholds.size(); ++j)
        out << (j ? " " : "") << table.user_thresholds[j];
    out << "\n";
    char buf[32];
    for (std::size_t i = 0; i < table.esn0_rows_db.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", table.esn0_rows_db[i]);
        out << buf;
        for (double p : table.loss_matrix[i]) {
            std::snprintf(buf, sizeof buf, "%.17g", p);
            out << " " << buf;
        }
        out << "\n";
    }
    return out.str();
}

// Row: nearest table Es/N0 at or below the channel's (no interpolation, the
// conservative choice). Band: thresholds[j] <= n_users < thresholds[j+1];
// below the first threshold there is no contention and the loss is 0; at or
// beyond the last threshold the last band applies.
inline double loss_probability(const RaPerformanceTable& table, double esn0_db,
                               Count n_users) {
    std::size_t row = table.esn0_rows_db.size();
    for (std::size_t i = 0; i < table.esn0_rows_db.size(); ++i) {
        if (table.esn0_rows_db[i] <= esn0_db) row = i; else break;
    }
    if (row == table.esn0_rows_db.size())
        throw ConfigError("channel below table range");
    if (n_users < table.user_thresholds.front()) return 0.0;
    std::size_t band = table.user_thresholds.size() - 1;
    for (std::size_t j = 0; j + 1 < table.user_thresholds.size(); ++j) {
        if (n_users >= table.user_thresholds[j] && n_users < table.user_thresholds[j + 1]) {
            band = j;
            break;
        }
    }
    return table.loss_matrix[row][band];
}

inline bool draw_loss(double p, Rng& rng) {
    return rng.uniform01() < p;
}

}  // namespace pca
