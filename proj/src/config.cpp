#include "wlanfair/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "wlanfair/errors.hpp"

namespace wlanfair {

namespace {

std::string strip(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Removes a trailing comment. Quotes are respected so '#' may appear in
// string values.
std::string strip_comment(const std::string& s) {
    bool in_quote = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_quote = !in_quote;
        else if (s[i] == '#' && !in_quote) return s.substr(0, i);
    }
    return s;
}

struct Parser {
    std::string path;
    int line_no = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError(path, line_no, msg);
    }

    double number(const std::string& text) const {
        const char* begin = text.c_str();
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0')
            fail("malformed number '" + text + "'");
        return v;
    }

    long integer(const std::string& text) const {
        const char* begin = text.c_str();
        char* end = nullptr;
        long v = std::strtol(begin, &end, 10);
        if (end == begin || *end != '\0')
            fail("malformed integer '" + text + "'");
        return v;
    }

    std::string quoted(const std::string& text) const {
        if (text.size() < 2 || text.front() != '"' || text.back() != '"')
            fail("expected a quoted string, got '" + text + "'");
        return text.substr(1, text.size() - 2);
    }

    std::vector<std::string> array(const std::string& text) const {
        if (text.size() < 2 || text.front() != '[' || text.back() != ']')
            fail("expected an array, got '" + text + "'");
        std::string body = text.substr(1, text.size() - 2);
        std::vector<std::string> items;
        std::string cur;
        bool in_quote = false;
        for (char c : body) {
            if (c == '"') in_quote = !in_quote;
            if (c == ',' && !in_quote) {
                items.push_back(strip(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        cur = strip(cur);
        if (!cur.empty()) items.push_back(cur);
        for (const std::string& it : items)
            if (it.empty()) fail("empty array element");
        return items;
    }
};

}  // namespace

SweepSpec load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot open file");

    SweepSpec spec;
    spec.variants = {"new_cubic", "old_quartic", "exact_transcendental",
                     "simulation"};
    bool have_up = false, have_down = false, have_buffers = false;

    Parser p{path, 0};
    std::string section;
    std::string raw;
    while (std::getline(in, raw)) {
        p.line_no++;
        std::string line = strip(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') p.fail("unterminated section header");
            section = strip(line.substr(1, line.size() - 2));
            if (section != "scenario" && section != "sweep" && section != "sim")
                p.fail("unknown section [" + section + "]");
            continue;
        }

        std::size_t eq = line.find('=');
        if (eq == std::string::npos) p.fail("expected 'key = value'");
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        if (key.empty()) p.fail("missing key before '='");
        if (value.empty()) p.fail("missing value for '" + key + "'");
        if (section.empty())
            p.fail("key '" + key + "' appears before any section");

        if (section == "scenario") {
            if (key == "name") {
                spec.scenario_name = p.quoted(value);
            } else if (key == "up") {
                spec.base.up_stations = static_cast<int>(p.integer(value));
                have_up = true;
            } else if (key == "down") {
                spec.base.down_stations = static_cast<int>(p.integer(value));
                have_down = true;
            } else if (key == "window") {
                spec.base.max_window = static_cast<int>(p.integer(value));
            } else if (key == "rtt") {
                spec.base.rtt = p.number(value);
            } else {
                p.fail("unknown key '" + key + "' in [scenario]");
            }
        } else if (section == "sweep") {
            if (key == "buffers") {
                spec.buffer_values.clear();
                for (const std::string& it : p.array(value))
                    spec.buffer_values.push_back(
                        static_cast<int>(p.integer(it)));
                have_buffers = true;
            } else if (key == "variants") {
                spec.variants.clear();
                for (const std::string& it : p.array(value))
                    spec.variants.push_back(p.quoted(it));
            } else if (key == "seeds") {
                spec.seeds.clear();
                for (const std::string& it : p.array(value)) {
                    long s = p.integer(it);
                    if (s < 0) p.fail("seeds must be nonnegative");
                    spec.seeds.push_back(static_cast<std::uint64_t>(s));
                }
            } else {
                p.fail("unknown key '" + key + "' in [sweep]");
            }
        } else {  // [sim]
            if (key == "duration") {
                spec.sim.duration = p.number(value);
            } else if (key == "warmup") {
                spec.sim.warmup = p.number(value);
            } else if (key == "wireless_rate") {
                spec.sim.wireless_rate = p.number(value);
            } else if (key == "wired_delay") {
                spec.sim.wired_delay = p.number(value);
            } else if (key == "data_frame") {
                spec.sim.data_frame = static_cast<int>(p.integer(value));
            } else if (key == "ack_frame") {
                spec.sim.ack_frame = static_cast<int>(p.integer(value));
            } else {
                p.fail("unknown key '" + key + "' in [sim]");
            }
        }
    }

    p.line_no = 0;  // whole-file complaints carry no specific line
    if (!have_up) p.fail("[scenario] is missing required key 'up'");
    if (!have_down) p.fail("[scenario] is missing required key 'down'");
    if (!have_buffers) p.fail("[sweep] is missing required key 'buffers'");

    try {
        validate_sweep_spec(spec);
    } catch (const std::invalid_argument& e) {
        p.fail(e.what());
    }
    return spec;
}

}  // namespace wlanfair
