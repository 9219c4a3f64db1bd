#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fsmix/io.hpp"
#include "fsmix/qubo.hpp"

namespace fsmix::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

const std::map<std::string, std::string> &Config::schema() {
    static const std::map<std::string, std::string> keys = {
        // builtin:<name> | load:<path> | generate | random
        {"problem.source", "builtin:spec_qubo"},
        {"problem.n_cut", "6"},
        {"problem.n_gadget", "4"},
        {"problem.j_gadget", "0.25"},
        {"problem.j_couple", "0.5"},
        {"problem.bias", "1.5"},
        {"problem.variant", "table"},
        {"problem.n", "10"},
        // Optional diagonal substitution for loaded files, e.g. 3 -> 4.4.
        {"problem.diagonal_from", ""},
        {"problem.diagonal_to", ""},
        // Comma-separated bitstrings forming a false-minimum manifold (load/random).
        {"problem.false_min", ""},

        {"schedule.p", "10"},
        {"schedule.p_min", "1"},
        {"schedule.p_max", "20"},
        // formula | <fixed tau>
        {"schedule.tau", "formula"},

        {"protocol.strategies", "unmodified,suppressed,thresholded"},
        {"protocol.theta", "0.2"},
        {"protocol.metric", "exact"},
        {"protocol.layer_order", "prose"},
        {"protocol.mixer", "power"},

        {"run.seed", "0"},
        {"run.instances", "25"},

        {"qaoa.p", "24"},
        {"qaoa.max_iters", "300"},
        {"qaoa.shots", "1000"},
        {"qaoa.n_runs", "100"},
        {"qaoa.init", "random_uniform"},
        {"qaoa.objective", "sampled"},
        // linear_trust_region | nelder_mead
        {"qaoa.optimizer", "linear_trust_region"},
        {"qaoa.bins", "20"},

        // Empty states default to the spec_qubo pair built from its cut solution.
        {"phase_map.true_state", ""},
        {"phase_map.false_state", ""},
        {"phase_map.tau", "0.5"},
        {"phase_map.points", "999"},

        {"three_qubit.tau", "2.356194490192345"},
        {"three_qubit.p_min", "1"},
        {"three_qubit.p_max", "10"},
        // 0 means exact probabilities; otherwise shots per estimate.
        {"three_qubit.shots", "0"},
    };
    return keys;
}

Config::Config() : values_(schema()) {}

void Config::load_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    parse_text(buf.str(), path.string());
}

void Config::parse_text(std::string_view text, std::string_view origin) {
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') {
            continue;
        }
        const std::string where = std::string(origin) + ":" + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(where + "unterminated section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(where + "expected key = value");
        }
        if (section.empty()) {
            throw ConfigError(where + "key outside of any [section]");
        }
        const auto key = section + "." + std::string(trim(line.substr(0, eq)));
        try {
            set(key, std::string(trim(line.substr(eq + 1))));
        } catch (const ConfigError &e) {
            throw ConfigError(where + e.what());
        }
    }
}

void Config::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("--set expects section.key=value, got '" + std::string(assignment) + "'");
    }
    set(std::string(trim(assignment.substr(0, eq))),
        std::string(trim(assignment.substr(eq + 1))));
}

void Config::set(const std::string &key, const std::string &value) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    it->second = value;
}

const std::string &Config::get(const std::string &key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    return it->second;
}

double Config::get_double(const std::string &key) const {
    const auto &v = get(key);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
    return out;
}

std::uint64_t Config::get_u64(const std::string &key) const {
    const auto &v = get(key);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
    return out;
}

std::size_t Config::get_size(const std::string &key) const {
    return static_cast<std::size_t>(get_u64(key));
}

std::vector<std::string> Config::get_list(const std::string &key) const {
    std::vector<std::string> out;
    std::string_view rest = get(key);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = trim(rest.substr(0, comma));
        if (!item.empty()) {
            out.emplace_back(item);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(comma + 1);
    }
    return out;
}

std::string Config::effective_text() const {
    std::ostringstream out;
    std::string section;
    for (const auto &[key, value] : values_) {
        const auto dot = key.find('.');
        const auto sec = key.substr(0, dot);
        if (sec != section) {
            out << (section.empty() ? "" : "\n") << '[' << sec << "]\n";
            section = sec;
        }
        out << key.substr(dot + 1) << " = " << value << '\n';
    }
    return out.str();
}

std::string Config::hash() const { return hex64(fnv1a(effective_text())); }

} // namespace fsmix::cli
