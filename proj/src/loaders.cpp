#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <tuple>
#include <sstream>
#include <unordered_map>

#include "saff/error.hpp"
#include "saff/io.hpp"

namespace saff {

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

namespace {

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Reads header plus data rows; blank lines are skipped.
class CsvTable {
 public:
  CsvTable(std::istream& in, std::string_view source,
           std::span<const std::string_view> required)
      : source_(source) {
    std::string line;
    std::size_t number = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
      ++number;
      if (number == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
      if (trim(line).empty()) continue;
      if (!have_header) {
        header_line_ = number;
        parse_header(split(line), required);
        have_header = true;
        continue;
      }
      auto fields = split(line);
      if (fields.size() != columns_.size())
        error(number, "row has " + std::to_string(fields.size()) + " fields, header has " +
                          std::to_string(columns_.size()));
      rows_.push_back({number, std::move(fields)});
    }
    empty_ = !have_header;
  }

  bool empty() const { return empty_; }
  const std::vector<CsvRow>& rows() const { return rows_; }

  const std::string& field(const CsvRow& row, std::string_view column) const {
    return row.fields[index_.at(std::string(column))];
  }

  [[noreturn]] void error(std::size_t line, const std::string& what) const {
    fail(ErrorCategory::validation, std::string(source_) + ":" + std::to_string(line) + ": " + what);
  }

  [[noreturn]] void field_error(const CsvRow& row, std::string_view column,
                                const std::string& what) const {
    error(row.line, "field '" + std::string(column) + "' " + what);
  }

  double number(const CsvRow& row, std::string_view column, double lo, double hi) const {
    const auto& text = field(row, column);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
      field_error(row, column, "is not a number: '" + text + "'");
    if (!(value >= lo && value <= hi))
      field_error(row, column, "value " + text + " outside [" + format_double(lo) + ", " +
                                   format_double(hi) + "]");
    return value;
  }

  int integer(const CsvRow& row, std::string_view column, int lo, int hi) const {
    const auto& text = field(row, column);
    int value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
      field_error(row, column, "is not an integer: '" + text + "'");
    if (value < lo || value > hi)
      field_error(row, column, "value " + text + " outside [" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "]");
    return value;
  }

  const std::string& identifier(const CsvRow& row, std::string_view column) const {
    const auto& text = field(row, column);
    if (text.empty()) field_error(row, column, "is empty");
    return text;
  }

  std::string_view source() const { return source_; }

 private:
  void parse_header(const std::vector<std::string>& names,
                    std::span<const std::string_view> required) {
    columns_ = names;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (std::ranges::find(required, names[i]) == required.end())
        error(header_line_, "unknown column '" + names[i] + "'");
      if (!index_.emplace(names[i], i).second)
        error(header_line_, "duplicate column '" + names[i] + "'");
    }
    for (auto name : required)
      if (!index_.contains(std::string(name)))
        error(header_line_, "missing column '" + std::string(name) + "'");
  }

  std::string_view source_;
  std::size_t header_line_ = 0;
  std::vector<std::string> columns_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<CsvRow> rows_;
  bool empty_ = true;
};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open " + path.string());
  return in;
}

template <typename T, typename Parse>
T category(const CsvTable& table, const CsvRow& row, std::string_view column, Parse parse,
           std::string_view expected) {
  const auto& text = table.field(row, column);
  auto value = parse(text);
  if (!value)
    table.field_error(row, column,
                      "has unknown category '" + text + "' (expected " + std::string(expected) + ")");
  return *value;
}

}  // namespace

std::vector<DataTuple> parse_tuples(std::istream& in, std::string_view source) {
  const CsvTable table(in, source, kTupleColumns);
  if (table.empty() || table.rows().empty())
    fail(ErrorCategory::validation, std::string(source) + ": no tuples");

  std::vector<DataTuple> tuples;
  std::unordered_map<std::string, std::size_t> by_id;
  std::map<std::string, std::size_t> first_line;
  std::set<std::pair<std::string, std::string>> seen_pairs;

  for (const auto& row : table.rows()) {
    const auto& tuple_id = table.identifier(row, "tuple_id");
    DonorRecord donor;
    donor.donor_id = table.identifier(row, "donor_id");
    donor.donor_age = table.integer(row, "donor_age", 0, 120);
    donor.donor_race = category<Race>(table, row, "donor_race", parse_race, "Black or Other");
    donor.donor_gender =
        category<Gender>(table, row, "donor_gender", parse_gender, "Male or Female");
    donor.kdpi = table.number(row, "kdpi", 0.0, 100.0);

    MatchRecord r;
    r.recipient_id = table.identifier(row, "recipient_id");
    r.recipient_age = table.integer(row, "recipient_age", 17, 120);
    r.recipient_race = category<Race>(table, row, "recipient_race", parse_race, "Black or Other");
    r.recipient_gender =
        category<Gender>(table, row, "recipient_gender", parse_gender, "Male or Female");
    r.epts = table.number(row, "epts", 0.0, 100.0);
    r.distance = table.number(row, "distance", 0.0, 1e9);
    r.arp_probability = table.number(row, "arp_probability", 0.0, 1.0);
    r.surgeon_decision = table.integer(row, "surgeon_decision", 0, 1);

    if (!seen_pairs.emplace(tuple_id, r.recipient_id).second)
      table.field_error(row, "recipient_id",
                        "duplicates recipient '" + r.recipient_id + "' in tuple '" + tuple_id + "'");

    auto [it, inserted] = by_id.emplace(tuple_id, tuples.size());
    if (inserted) {
      DataTuple t;
      t.tuple_id = tuple_id;
      t.donor = donor;
      tuples.push_back(std::move(t));
      first_line[tuple_id] = row.line;
    } else {
      const auto& d = tuples[it->second].donor;
      if (d.donor_id != donor.donor_id || d.donor_age != donor.donor_age ||
          d.donor_race != donor.donor_race || d.donor_gender != donor.donor_gender ||
          d.kdpi != donor.kdpi)
        table.field_error(row, "donor_id",
                          "donor fields disagree with earlier rows of tuple '" + tuple_id + "'");
    }
    tuples[it->second].records.push_back(std::move(r));
  }

  for (const auto& t : tuples) {
    if (t.records.size() < 2)
      table.error(first_line[t.tuple_id],
                  "tuple '" + t.tuple_id + "' has K=" + std::to_string(t.records.size()) +
                      " records; at least 2 are required");
  }
  return tuples;
}

std::vector<DataTuple> load_tuples(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_tuples(in, path.string());
}

ResponseBundle parse_responses(std::istream& in, std::string_view source,
                               const std::vector<DataTuple>& tuples) {
  const CsvTable table(in, source, kResponseColumns);
  if (table.empty() || table.rows().empty())
    fail(ErrorCategory::validation, std::string(source) + ": no responses");
  if (tuples.empty()) fail(ErrorCategory::validation, "responses need loaded tuples");

  std::unordered_map<std::string, std::size_t> tuple_index;
  for (std::size_t m = 0; m < tuples.size(); ++m) tuple_index.emplace(tuples[m].tuple_id, m);

  std::vector<std::string> participants;
  std::unordered_map<std::string, std::size_t> participant_index;
  std::set<Question> questions;
  // (participant, question, tuple) -> score
  std::map<std::tuple<std::size_t, Question, std::size_t>, std::uint8_t> cells;

  for (const auto& row : table.rows()) {
    const auto& pid = table.identifier(row, "participant_id");
    const auto& tid = table.identifier(row, "tuple_id");
    const auto question =
        category<Question>(table, row, "question", parse_question, "overall, age, gender or race");
    const int score = table.integer(row, "score", 1, 7);
    const auto tuple = tuple_index.find(tid);
    if (tuple == tuple_index.end())
      table.field_error(row, "tuple_id", "references unknown tuple '" + tid + "'");
    auto [pit, fresh] = participant_index.emplace(pid, participants.size());
    if (fresh) participants.push_back(pid);
    questions.insert(question);
    if (!cells.emplace(std::tuple{pit->second, question, tuple->second},
                       static_cast<std::uint8_t>(score))
             .second)
      table.error(row.line, "duplicate response of participant '" + pid + "' to tuple '" +
                                tid + "' question '" + std::string(question_name(question)) + "'");
  }

  ResponseBundle bundle;
  std::vector<std::size_t> kept;
  for (std::size_t p = 0; p < participants.size(); ++p) {
    std::size_t missing = 0;
    for (Question q : questions)
      for (std::size_t m = 0; m < tuples.size(); ++m)
        if (!cells.contains({p, q, m})) ++missing;
    if (missing == 0) {
      kept.push_back(p);
      bundle.participant_ids.push_back(participants[p]);
    } else {
      bundle.dropped_participants.push_back(participants[p]);
    }
  }
  if (!bundle.dropped_participants.empty()) {
    std::string list;
    for (const auto& id : bundle.dropped_participants) list += (list.empty() ? "" : ", ") + id;
    bundle.warnings.push_back("dropped " + std::to_string(bundle.dropped_participants.size()) +
                              " participant(s) with incomplete responses: " + list);
  }
  if (kept.empty())
    fail(ErrorCategory::validation,
         std::string(source) + ": no participant answered every tuple and question");

  for (Question q : questions) {
    std::vector<std::uint8_t> scores;
    scores.reserve(kept.size() * tuples.size());
    for (auto p : kept)
      for (std::size_t m = 0; m < tuples.size(); ++m) scores.push_back(cells.at({p, q, m}));
    bundle.sets.emplace(q, ResponseSet(q, kept.size(), tuples.size(), std::move(scores)));
  }
  return bundle;
}

ResponseBundle load_responses(const std::filesystem::path& path,
                              const std::vector<DataTuple>& tuples) {
  auto in = open_input(path);
  return parse_responses(in, path.string(), tuples);
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCategory::io, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) fail(ErrorCategory::io, "failed writing " + path.string());
}

}  // namespace

void write_tuples_csv(const std::filesystem::path& path, const std::vector<DataTuple>& tuples) {
  auto out = open_output(path);
  for (std::size_t i = 0; i < kTupleColumns.size(); ++i)
    out << (i ? "," : "") << kTupleColumns[i];
  out << '\n';
  for (const auto& t : tuples) {
    for (const auto& r : t.records) {
      out << t.tuple_id << ',' << t.donor.donor_id << ',' << t.donor.donor_age << ','
          << race_name(t.donor.donor_race) << ',' << gender_name(t.donor.donor_gender) << ','
          << format_double(t.donor.kdpi) << ',' << r.recipient_id << ',' << r.recipient_age
          << ',' << race_name(r.recipient_race) << ',' << gender_name(r.recipient_gender) << ','
          << format_double(r.epts) << ',' << format_double(r.distance) << ','
          << format_double(r.arp_probability) << ',' << r.surgeon_decision << '\n';
    }
  }
  finish(out, path);
}

void write_responses_csv(const std::filesystem::path& path,
                         const std::vector<DataTuple>& tuples,
                         const std::vector<ResponseSet>& sets) {
  auto out = open_output(path);
  out << "participant_id,tuple_id,question,score\n";
  if (sets.empty()) {
    finish(out, path);
    return;
  }
  const auto n_part = sets.front().participants();
  for (const auto& s : sets)
    if (s.participants() != n_part || s.tuples() != tuples.size())
      fail(ErrorCategory::dimension, "response sets disagree in shape");
  for (std::size_t n = 0; n < n_part; ++n)
    for (std::size_t m = 0; m < tuples.size(); ++m)
      for (const auto& s : sets)
        out << 'P' << (n + 1) << ',' << tuples[m].tuple_id << ',' << question_name(s.question())
            << ',' << s.score(n, m) << '\n';
  finish(out, path);
}

}  // namespace saff
