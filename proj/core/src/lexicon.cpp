#include "vadminer/lexicon.hpp"

#include "vadminer/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace vadminer {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return fields;
}

std::optional<std::size_t> column_for(std::string_view header_name) {
    const std::string name = ascii_lower(header_name);
    if (name == "word") return 0;
    if (name == "valence" || name == "v.mean.sum") return 1;
    if (name == "arousal" || name == "a.mean.sum") return 2;
    if (name == "dominance" || name == "d.mean.sum") return 3;
    return std::nullopt;
}

void check_word(std::string_view word) {
    if (word.empty()) throw ValidationError("empty word");
    if (std::any_of(word.begin(), word.end(), is_space))
        throw ValidationError(fmt::format("word '{}' contains whitespace", word));
}

void check_score(double value, std::string_view word, std::string_view what) {
    if (!std::isfinite(value) || value < kMinScore || value > kMaxScore)
        throw ValidationError(
            fmt::format("{} score {} of '{}' outside [1, 9]", what, value, word));
}

} // namespace

std::string_view dimension_name(Dimension dim) {
    switch (dim) {
    case Dimension::Valence: return "valence";
    case Dimension::Arousal: return "arousal";
    case Dimension::Dominance: return "dominance";
    }
    return "valence";
}

char dimension_letter(Dimension dim) {
    switch (dim) {
    case Dimension::Valence: return 'V';
    case Dimension::Arousal: return 'A';
    case Dimension::Dominance: return 'D';
    }
    return 'V';
}

std::optional<Dimension> parse_dimension(std::string_view text) {
    const std::string s = ascii_lower(text);
    if (s == "v" || s == "valence") return Dimension::Valence;
    if (s == "a" || s == "arousal") return Dimension::Arousal;
    if (s == "d" || s == "dominance") return Dimension::Dominance;
    return std::nullopt;
}

std::string ascii_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

Lexicon::Lexicon(std::vector<LexiconEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("empty lexicon");
    index_.reserve(entries_.size());
    std::array<double, 3> sums{};
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        auto& e = entries_[i];
        e.word = ascii_lower(e.word);
        check_word(e.word);
        check_score(e.valence, e.word, "valence");
        check_score(e.arousal, e.word, "arousal");
        check_score(e.dominance, e.word, "dominance");
        if (!index_.emplace(e.word, i).second)
            throw ValidationError(fmt::format("duplicate word '{}'", e.word));
        sums[0] += e.valence;
        sums[1] += e.arousal;
        sums[2] += e.dominance;
    }
    const auto n = static_cast<double>(entries_.size());
    for (std::size_t d = 0; d < 3; ++d) baseline_[d] = sums[d] / n;
}

std::optional<LexiconEntry> Lexicon::lookup(std::string_view word) const {
    if (const auto* e = find_lower(ascii_lower(word))) return *e;
    return std::nullopt;
}

const LexiconEntry* Lexicon::find_lower(std::string_view lower_word) const noexcept {
    const auto it = index_.find(lower_word);
    return it == index_.end() ? nullptr : &entries_[it->second];
}

Lexicon load_lexicon(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    std::array<std::optional<std::size_t>, 4> columns{};
    std::size_t header_width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (trim(view).empty()) continue;
        const auto fields = split_commas(view);
        header_width = fields.size();
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (const auto col = column_for(fields[i]); col && !columns[*col]) columns[*col] = i;
        break;
    }
    if (header_width == 0) throw ValidationError("empty lexicon");
    static constexpr std::array<const char*, 4> kNames{"word", "valence", "arousal", "dominance"};
    for (std::size_t c = 0; c < 4; ++c)
        if (!columns[c])
            throw ParseError(line_no, fmt::format("header is missing the '{}' column", kNames[c]));

    std::vector<LexiconEntry> entries;
    std::unordered_map<std::string, std::size_t> first_seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_commas(line);
        if (fields.size() != header_width)
            throw ParseError(line_no, fmt::format("expected {} columns, found {}", header_width,
                                                  fields.size()));
        LexiconEntry entry;
        entry.word = ascii_lower(fields[*columns[0]]);
        if (entry.word.empty()) throw ParseError(line_no, "empty word");
        if (std::any_of(entry.word.begin(), entry.word.end(), is_space))
            throw ParseError(line_no, fmt::format("word '{}' contains whitespace", entry.word));
        double* targets[3] = {&entry.valence, &entry.arousal, &entry.dominance};
        for (std::size_t d = 0; d < 3; ++d) {
            const auto field = fields[*columns[d + 1]];
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
                throw ParseError(line_no, fmt::format("non-numeric {} score '{}'", kNames[d + 1], field));
            if (!std::isfinite(value) || value < kMinScore || value > kMaxScore)
                throw ParseError(line_no,
                                 fmt::format("{} score {} outside [1, 9]", kNames[d + 1], value));
            *targets[d] = value;
        }
        if (const auto [it, inserted] = first_seen.emplace(entry.word, line_no); !inserted)
            throw ValidationError(fmt::format("duplicate word '{}' at line {} (first at line {})",
                                              entry.word, line_no, it->second));
        entries.push_back(std::move(entry));
    }
    if (entries.empty()) throw ValidationError("empty lexicon");
    return Lexicon(std::move(entries));
}

Lexicon load_lexicon_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot open lexicon '{}'", path.string()));
    return load_lexicon(in);
}

void write_lexicon(std::ostream& out, const Lexicon& lexicon) {
    out << "word,valence,arousal,dominance\n";
    for (const auto& e : lexicon.entries())
        out << fmt::format("{},{},{},{}\n", e.word, e.valence, e.arousal, e.dominance);
}

} // namespace vadminer
