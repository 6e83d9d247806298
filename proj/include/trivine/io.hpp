#pragma once

// Study-count tables and simulation scenario files.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "trivine/margins.hpp"
#include "trivine/simstudy.hpp"

namespace trivine {

struct InputRow {
    std::string study_id;
    int tp = 0, fp = 0, fn = 0, tn = 0;

    friend bool operator==(const InputRow&, const InputRow&) = default;
};

struct InputTable {
    std::vector<InputRow> rows;
    std::vector<std::string> warnings;

    std::vector<StudyRecord> records() const;
};

// Thrown for malformed input; line is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

// CSV with header study_id,tp,fp,fn,tn in any order and case. UTF-8 BOM,
// CRLF, blank lines and double-quoted fields are accepted.
InputTable parse_input(std::istream& in);
InputTable read_input(const std::string& path);

// Canonical form: header in the order above, LF line endings.
void write_input(std::ostream& out, const InputTable& table);

// key = value lines; '#' starts a comment. fit may repeat.
SimScenario parse_scenario(std::istream& in);
SimScenario read_scenario(const std::string& path);

}  // namespace trivine
