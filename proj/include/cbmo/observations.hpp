#ifndef CBMO_OBSERVATIONS_HPP
#define CBMO_OBSERVATIONS_HPP

#include <cbmo/error.hpp>
#include <cbmo/ontology.hpp>
#include <cbmo/text.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cbmo {

// ---------------------------------------------------------------------------
// CSV records (RFC 4180 quoting)
// ---------------------------------------------------------------------------

struct CsvRecord {
    std::size_t line = 0; ///< 1-based line where the record starts
    std::vector<std::string> fields;
};

/// Splits CSV text into records. Quoted fields may contain commas, doubled
/// quotes and line breaks. Blank lines are skipped.
inline std::vector<CsvRecord> read_csv(std::string_view source)
{
    std::vector<CsvRecord> records;
    CsvRecord current;
    std::string field;
    std::size_t line = 1;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool record_has_content = false;
    std::size_t quote_line = 0;

    auto finish_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto finish_record = [&] {
        finish_field();
        if (record_has_content) {
            records.push_back(std::move(current));
        }
        current = CsvRecord{};
        record_has_content = false;
    };

    for (std::size_t i = 0; i < source.size(); ++i) {
        char c = source[i];
        if (!record_has_content && current.fields.empty() && field.empty() && !in_quotes) {
            current.line = line;
        }
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < source.size() && source[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty() || field_was_quoted) {
                throw ParseError(line, ParseErrorKind::Syntax, "unexpected quote inside unquoted field");
            }
            in_quotes = true;
            field_was_quoted = true;
            record_has_content = true;
            quote_line = line;
            break;
        case ',':
            record_has_content = true;
            finish_field();
            break;
        case '\r':
            break;
        case '\n':
            finish_record();
            ++line;
            break;
        default:
            if (field_was_quoted) {
                throw ParseError(line, ParseErrorKind::Syntax, "text after closing quote");
            }
            if (!text::is_space(c)) {
                record_has_content = true;
            }
            field.push_back(c);
        }
    }
    if (in_quotes) {
        throw ParseError(quote_line, ParseErrorKind::Syntax, "unterminated quoted field");
    }
    if (record_has_content || !current.fields.empty()) {
        finish_record();
    }
    return records;
}

/// Quotes a field when it contains a delimiter, quote or line break.
inline std::string csv_escape(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// ---------------------------------------------------------------------------
// Observation table
// ---------------------------------------------------------------------------

struct ObservationColumn {
    ConceptId id{};
    std::vector<double> values;

    friend bool operator==(const ObservationColumn&, const ObservationColumn&) = default;
};

/// periods x (indicator columns + profit). Every series has periods.size()
/// entries.
struct ObservationTable {
    std::vector<std::string> periods;
    std::vector<ObservationColumn> columns;
    std::vector<double> profit;

    std::size_t rows() const noexcept { return periods.size(); }

    const ObservationColumn* find(ConceptId id) const
    {
        auto it = std::find_if(columns.begin(), columns.end(), [id](const auto& c) { return c.id == id; });
        return it == columns.end() ? nullptr : &*it;
    }

    std::vector<ConceptId> concepts() const
    {
        std::vector<ConceptId> out;
        for (const auto& c : columns) {
            out.push_back(c.id);
        }
        return out;
    }

    /// Rows [first, first + count).
    ObservationTable slice(std::size_t first, std::size_t count) const
    {
        auto take = [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            return V(v.begin() + static_cast<std::ptrdiff_t>(first),
                     v.begin() + static_cast<std::ptrdiff_t>(first + count));
        };
        ObservationTable out;
        out.periods = take(periods);
        out.profit = take(profit);
        for (const auto& c : columns) {
            out.columns.push_back({c.id, take(c.values)});
        }
        return out;
    }

    friend bool operator==(const ObservationTable&, const ObservationTable&) = default;
};

/// Header name -> concept.
using ColumnBinding = std::map<std::string, ConceptId>;

/// Binds each input element's own symbol ("CAP", "PRT", ...) to itself.
inline ColumnBinding identity_binding(const ConceptSchema& schema = canonical_schema())
{
    ColumnBinding binding;
    for (auto id : schema.input_elements) {
        binding.emplace(std::string(symbol(id)), id);
    }
    return binding;
}

/// Reads a two-column binding file: `<header>,<concept>` per row. A first
/// row whose second field is literally "concept" is treated as a header.
inline ColumnBinding load_binding(std::string_view csv)
{
    ColumnBinding binding;
    auto records = read_csv(csv);
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != 2) {
            throw ParseError(rec.line, ParseErrorKind::BadArity, "binding rows have two fields: header,concept");
        }
        auto concept_text = text::trim(rec.fields[1]);
        if (r == 0 && text::iequals(concept_text, "concept")) {
            continue;
        }
        auto id = concept_from_symbol(concept_text);
        if (!id) {
            throw ParseError(rec.line, ParseErrorKind::UnknownConcept,
                             "unknown concept '" + std::string(concept_text) + "'");
        }
        binding[std::string(text::trim(rec.fields[0]))] = *id;
    }
    return binding;
}

struct LoadOptions {
    /// When false a missing profit column yields an empty profit series
    /// (used for prediction inputs).
    bool require_profit = true;
};

/// Ingests observation CSV. Column 0 is the period label, the column named
/// "profit" (any case) is the target, every other header must be bound to
/// a distinct schema input element. Rows keep file order.
inline ObservationTable load_observations(std::string_view csv, const ColumnBinding& binding,
                                          const LoadOptions& options = {},
                                          const ConceptSchema& schema = canonical_schema())
{
    auto records = read_csv(csv);
    if (records.empty()) {
        throw ParseError(1, ParseErrorKind::BadArity, "missing header row");
    }
    const auto& header = records.front();
    if (header.fields.size() < 2) {
        throw ParseError(header.line, ParseErrorKind::BadArity, "header needs a period column and at least one more");
    }

    std::optional<std::size_t> profit_index;
    std::vector<std::pair<std::size_t, ConceptId>> bound;
    for (std::size_t c = 1; c < header.fields.size(); ++c) {
        auto name = text::trim(header.fields[c]);
        if (text::iequals(name, "profit")) {
            if (profit_index) {
                throw ParseError(header.line, ParseErrorKind::BadArity, "more than one profit column");
            }
            profit_index = c;
            continue;
        }
        auto it = binding.find(std::string(name));
        if (it == binding.end()) {
            throw ParseError(header.line, ParseErrorKind::UnknownConcept,
                             "column '" + std::string(name) + "' is not bound to a concept");
        }
        auto id = it->second;
        if (std::find(schema.input_elements.begin(), schema.input_elements.end(), id)
            == schema.input_elements.end()) {
            throw ParseError(header.line, ParseErrorKind::UnknownConcept,
                             "column '" + std::string(name) + "' binds " + std::string(symbol(id))
                                 + ", which is not a model input");
        }
        for (const auto& [_, existing] : bound) {
            if (existing == id) {
                throw ParseError(header.line, ParseErrorKind::DuplicateElement,
                                 "concept " + std::string(symbol(id)) + " bound by more than one column");
            }
        }
        bound.emplace_back(c, id);
    }
    if (!profit_index && options.require_profit) {
        throw ParseError(header.line, ParseErrorKind::BadArity, "header has no 'profit' column");
    }
    if (records.size() < 2) {
        throw ParseError(header.line, ParseErrorKind::BadArity, "no data rows");
    }

    ObservationTable table;
    for (const auto& [_, id] : bound) {
        table.columns.push_back({id, {}});
    }
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.fields.size()) {
            throw ParseError(rec.line, ParseErrorKind::BadArity,
                             "expected " + std::to_string(header.fields.size()) + " fields, found "
                                 + std::to_string(rec.fields.size()));
        }
        auto cell = [&](std::size_t c) {
            auto value = text::parse_double(rec.fields[c]);
            if (!value) {
                throw ParseError(rec.line, ParseErrorKind::Syntax,
                                 "column '" + std::string(text::trim(header.fields[c])) + "': '" + rec.fields[c]
                                     + "' is not a finite number");
            }
            return *value;
        };
        table.periods.emplace_back(text::trim(rec.fields[0]));
        for (std::size_t k = 0; k < bound.size(); ++k) {
            table.columns[k].values.push_back(cell(bound[k].first));
        }
        if (profit_index) {
            table.profit.push_back(cell(*profit_index));
        }
    }
    return table;
}

/// Writes a table back as CSV with concept symbols as headers.
inline std::string write_observations(const ObservationTable& table, std::string_view period_header = "period")
{
    std::string out = csv_escape(period_header);
    for (const auto& c : table.columns) {
        out.append(",").append(symbol(c.id));
    }
    if (!table.profit.empty()) {
        out.append(",profit");
    }
    out.append("\n");
    for (std::size_t r = 0; r < table.rows(); ++r) {
        out.append(csv_escape(table.periods[r]));
        for (const auto& c : table.columns) {
            out.append(",").append(text::format_double(c.values[r]));
        }
        if (!table.profit.empty()) {
            out.append(",").append(text::format_double(table.profit[r]));
        }
        out.append("\n");
    }
    return out;
}

} // namespace cbmo

#endif // CBMO_OBSERVATIONS_HPP
