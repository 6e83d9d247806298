#include "trivine/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "trivine/model.hpp"

namespace trivine {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split_csv(const std::string& line, int lineno) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false, was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            if (!trim(cur).empty()) throw ParseError("line " + std::to_string(lineno) + ": stray quote", lineno);
            cur.clear();
            quoted = was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? cur : trim(cur));
            cur.clear();
            was_quoted = false;
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw ParseError("line " + std::to_string(lineno) + ": unterminated quote", lineno);
    fields.push_back(was_quoted ? cur : trim(cur));
    return fields;
}

int parse_count(const std::string& text, const char* column, int lineno) {
    const std::string where = "line " + std::to_string(lineno) + ", column " + column;
    long long v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    if (b != e && *b == '+') ++b;
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (text.empty() || ec != std::errc() || ptr != e) throw ParseError(where + ": not an integer: '" + text + "'", lineno);
    if (v < 0) throw ParseError(where + ": negative count " + text, lineno);
    if (v > 100000000) throw ParseError(where + ": count too large", lineno);
    return static_cast<int>(v);
}

}  // namespace

std::vector<StudyRecord> InputTable::records() const {
    std::vector<StudyRecord> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(StudyRecord::from_2x2(r.tp, r.fp, r.fn, r.tn));
    return out;
}

InputTable parse_input(std::istream& in) {
    static const std::array<const char*, 5> kColumns{"study_id", "tp", "fp", "fn", "tn"};
    InputTable table;
    std::string line;
    int lineno = 0;
    std::array<int, 5> pos{-1, -1, -1, -1, -1};
    std::size_t width = 0;
    bool header = false;
    std::set<std::string> seen;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line, lineno);
        if (!header) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                const std::string name = lower(fields[i]);
                for (std::size_t c = 0; c < kColumns.size(); ++c)
                    if (name == kColumns[c]) {
                        if (pos[c] >= 0)
                            throw ParseError("line " + std::to_string(lineno) + ": duplicate column " + kColumns[c],
                                             lineno);
                        pos[c] = static_cast<int>(i);
                    }
            }
            for (std::size_t c = 0; c < kColumns.size(); ++c)
                if (pos[c] < 0) throw ParseError(std::string("missing column ") + kColumns[c], lineno);
            width = fields.size();
            header = true;
            continue;
        }
        if (fields.size() != width)
            throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(width) +
                                 " fields, found " + std::to_string(fields.size()),
                             lineno);
        InputRow row;
        row.study_id = fields[pos[0]];
        row.tp = parse_count(fields[pos[1]], "tp", lineno);
        row.fp = parse_count(fields[pos[2]], "fp", lineno);
        row.fn = parse_count(fields[pos[3]], "fn", lineno);
        row.tn = parse_count(fields[pos[4]], "tn", lineno);
        if (!seen.insert(row.study_id).second)
            table.warnings.push_back("line " + std::to_string(lineno) + ": duplicate study_id '" + row.study_id + "'");
        table.rows.push_back(std::move(row));
    }
    if (!header) throw ParseError("empty input: no header row", 0);
    return table;
}

InputTable read_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
    return parse_input(in);
}

void write_input(std::ostream& out, const InputTable& table) {
    out << "study_id,tp,fp,fn,tn\n";
    for (const auto& r : table.rows) {
        std::string id = r.study_id;
        if (id.find_first_of(",\"\n\r") != std::string::npos || id != trim(id)) {
            std::string q = "\"";
            for (char c : id) {
                if (c == '"') q.push_back('"');
                q.push_back(c);
            }
            id = q + "\"";
        }
        out << id << ',' << r.tp << ',' << r.fp << ',' << r.fn << ',' << r.tn << '\n';
    }
}

namespace {

double parse_real(const std::string& v, const std::string& key, int lineno) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": " + key + " expects a number, got '" + v + "'",
                         lineno);
    }
}

long long parse_int(const std::string& v, const std::string& key, int lineno) {
    long long x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
        throw ParseError("line " + std::to_string(lineno) + ": " + key + " expects an integer, got '" + v + "'",
                         lineno);
    return x;
}

std::vector<double> parse_list(const std::string& v, const std::string& key, int lineno) {
    std::vector<double> out;
    std::string item;
    std::istringstream ss(v);
    while (std::getline(ss, item, ',')) out.push_back(parse_real(trim(item), key, lineno));
    return out;
}

}  // namespace

SimScenario parse_scenario(std::istream& in) {
    SimScenario s;
    std::string line;
    int lineno = 0;
    std::set<std::string> seen;
    std::string margin = "beta", families = "Clayton90/Clayton90";
    int perm = 1;
    std::vector<double> pi{0.8, 0.7, 0.4}, disp{0.1, 0.1, 0.05}, tau{-0.5, -0.3};
    std::vector<std::string> fits;

    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value", lineno);
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string val = trim(line.substr(eq + 1));
        if (key != "fit" && !seen.insert(key).second)
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key " + key, lineno);
        try {
            if (key == "n_studies") s.n_studies = static_cast<int>(parse_int(val, key, lineno));
            else if (key == "replications") s.replications = static_cast<int>(parse_int(val, key, lineno));
            else if (key == "seed") s.seed = static_cast<std::uint64_t>(parse_int(val, key, lineno));
            else if (key == "true_margin") margin = val;
            else if (key == "true_families") families = val;
            else if (key == "true_permutation") perm = static_cast<int>(parse_int(val, key, lineno));
            else if (key == "true_pi") pi = parse_list(val, key, lineno);
            else if (key == "true_disp") disp = parse_list(val, key, lineno);
            else if (key == "true_tau") tau = parse_list(val, key, lineno);
            else if (key == "fit") fits.push_back(val);
            else if (key == "size_shape") s.size.shape = parse_real(val, key, lineno);
            else if (key == "size_rate") s.size.rate = parse_real(val, key, lineno);
            else if (key == "size_lag") s.size.lag = parse_real(val, key, lineno);
            else if (key == "nq") s.nq = static_cast<int>(parse_int(val, key, lineno));
            else if (key == "starts") s.starts = static_cast<int>(parse_int(val, key, lineno));
            else throw ParseError("line " + std::to_string(lineno) + ": unknown key " + key, lineno);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what(), lineno);
        }
    }

    s.true_spec = parse_model(margin + ":" + families + ":" + std::to_string(perm));
    if (pi.size() != 3) throw ParseError("true_pi needs three values", 0);
    if (disp.size() != 3) throw ParseError("true_disp needs three values", 0);
    std::size_t k = 0;
    for (int j = 0; j < 3; ++j) {
        s.true_params.pi[j] = pi[j];
        s.true_params.disp[j] = disp[j];
    }
    for (int e = 0; e < 3; ++e) {
        if (s.true_spec.families[e] == CopulaFamily::Independence) continue;
        if (k >= tau.size()) throw ParseError("true_tau needs one value per non-independence edge", 0);
        s.true_params.tau[e] = tau[k++];
    }
    if (k != tau.size()) throw ParseError("true_tau needs one value per non-independence edge", 0);
    if (fits.empty()) s.fit_specs.push_back(s.true_spec);
    for (const auto& f : fits) s.fit_specs.push_back(parse_model(f));
    validate(s);
    return s;
}

SimScenario read_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
    return parse_scenario(in);
}

}  // namespace trivine
