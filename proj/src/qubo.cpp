#include "fsmix/qubo.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace fsmix {

// Bitstring ------------------------------------------------------------------

Bitstring::Bitstring(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b > 1) {
            throw std::invalid_argument("Bitstring: entries must be 0 or 1");
        }
    }
}

Bitstring Bitstring::from_index(std::uint64_t index, std::size_t n) {
    if (n > 64) {
        throw std::invalid_argument("Bitstring::from_index: n exceeds 64");
    }
    std::vector<std::uint8_t> bits(n);
    for (std::size_t j = 0; j < n; ++j) {
        bits[j] = static_cast<std::uint8_t>((index >> j) & 1U);
    }
    return Bitstring(std::move(bits));
}

Bitstring Bitstring::parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("Bitstring::parse: unexpected character '" +
                                        std::string(1, c) + "' in \"" + std::string(text) +
                                        "\"");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Bitstring(std::move(bits));
}

Bitstring Bitstring::constant(std::size_t n, std::uint8_t value) {
    return Bitstring(std::vector<std::uint8_t>(n, value));
}

std::uint64_t Bitstring::to_index() const {
    if (bits_.size() > 64) {
        throw std::logic_error("Bitstring::to_index: more than 64 bits");
    }
    std::uint64_t index = 0;
    for (std::size_t j = 0; j < bits_.size(); ++j) {
        index |= static_cast<std::uint64_t>(bits_[j]) << j;
    }
    return index;
}

std::string Bitstring::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t j = 0; j < bits_.size(); ++j) {
        s[j] = static_cast<char>('0' + bits_[j]);
    }
    return s;
}

Bitstring Bitstring::inverted() const {
    auto bits = bits_;
    for (auto &b : bits) {
        b ^= 1U;
    }
    return Bitstring(std::move(bits));
}

Bitstring Bitstring::concat(const Bitstring &tail) const {
    auto bits = bits_;
    bits.insert(bits.end(), tail.bits_.begin(), tail.bits_.end());
    return Bitstring(std::move(bits));
}

// QuboMatrix -----------------------------------------------------------------

QuboMatrix::QuboMatrix(std::size_t n) : n_(n), q_(n * n, 0.0) {
    if (n == 0) {
        throw std::invalid_argument("QuboMatrix: size must be positive");
    }
}

QuboMatrix QuboMatrix::from_dense(std::size_t n, std::span<const double> row_major,
                                  double tol) {
    if (row_major.size() != n * n) {
        throw std::invalid_argument("QuboMatrix::from_dense: expected " +
                                    std::to_string(n * n) + " entries, got " +
                                    std::to_string(row_major.size()));
    }
    QuboMatrix q(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double a = row_major[i * n + j];
            const double b = row_major[j * n + i];
            if (!std::isfinite(a) || !std::isfinite(b)) {
                throw std::invalid_argument("QuboMatrix::from_dense: non-finite entry");
            }
            if (std::abs(a - b) > tol) {
                throw std::invalid_argument(
                    "QuboMatrix::from_dense: asymmetric entries at (" + std::to_string(i) +
                    "," + std::to_string(j) + ")");
            }
            q.set(i, j, a);
        }
    }
    return q;
}

void QuboMatrix::check_index(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) {
        throw std::out_of_range("QuboMatrix: index out of range");
    }
}

void QuboMatrix::set(std::size_t i, std::size_t j, double value) {
    check_index(i, j);
    if (!std::isfinite(value)) {
        throw std::invalid_argument("QuboMatrix: non-finite entry");
    }
    q_[i * n_ + j] = value;
    q_[j * n_ + i] = value;
}

void QuboMatrix::add(std::size_t i, std::size_t j, double delta) {
    check_index(i, j);
    set(i, j, q_[i * n_ + j] + delta);
}

// Energies -------------------------------------------------------------------

namespace {

void check_size(const QuboMatrix &q) {
    if (q.size() > kMaxQubits) {
        throw std::invalid_argument("QUBO size " + std::to_string(q.size()) +
                                    " exceeds the enumeration cap of " +
                                    std::to_string(kMaxQubits));
    }
}

} // namespace

double energy(const QuboMatrix &q, const Bitstring &x) {
    const std::size_t n = q.size();
    if (x.size() != n) {
        throw std::invalid_argument("energy: bitstring length " + std::to_string(x.size()) +
                                    " does not match QUBO size " + std::to_string(n));
    }
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0U) {
            continue;
        }
        e += q(i, i);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (x[j] != 0U) {
                e += 2.0 * q(i, j);
            }
        }
    }
    return e;
}

double energy_of_index(const QuboMatrix &q, std::uint64_t index) {
    const std::size_t n = q.size();
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (((index >> i) & 1U) == 0U) {
            continue;
        }
        e += q(i, i);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (((index >> j) & 1U) != 0U) {
                e += 2.0 * q(i, j);
            }
        }
    }
    return e;
}

std::vector<double> basis_energies_naive(const QuboMatrix &q) {
    check_size(q);
    const std::uint64_t dim = std::uint64_t{1} << q.size();
    std::vector<double> out(dim);
    for (std::uint64_t z = 0; z < dim; ++z) {
        out[z] = energy_of_index(q, z);
    }
    return out;
}

std::vector<double> basis_energies(const QuboMatrix &q) {
    check_size(q);
    const std::size_t n = q.size();
    const std::uint64_t dim = std::uint64_t{1} << n;
    std::vector<double> out(dim);

    // field[k] = sum_{j != k} q(k, j) x_j for the current Gray-code state.
    std::vector<double> field(n, 0.0);
    std::uint64_t state = 0;
    double e = 0.0;
    out[0] = 0.0;

    // Re-deriving from scratch periodically bounds accumulated rounding.
    constexpr std::uint64_t kResync = 1024;

    for (std::uint64_t step = 1; step < dim; ++step) {
        const auto k = static_cast<std::size_t>(std::countr_zero(step));
        const bool was_set = ((state >> k) & 1U) != 0U;
        const double sign = was_set ? -1.0 : 1.0;
        e += sign * (q(k, k) + 2.0 * field[k]);
        state ^= std::uint64_t{1} << k;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != k) {
                field[j] += sign * q(j, k);
            }
        }
        if (step % kResync == 0) {
            e = energy_of_index(q, state);
            for (std::size_t j = 0; j < n; ++j) {
                double f = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i != j && ((state >> i) & 1U) != 0U) {
                        f += q(j, i);
                    }
                }
                field[j] = f;
            }
        }
        out[state] = e;
    }
    return out;
}

// Exhaustive solve ------------------------------------------------------------

GroundTruth exhaustive_solve(std::span<const double> energies, std::size_t n) {
    if (n > kMaxQubits) {
        throw std::invalid_argument("exhaustive_solve: size " + std::to_string(n) +
                                    " exceeds the cap of " + std::to_string(kMaxQubits));
    }
    if (energies.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("exhaustive_solve: energy table has wrong length");
    }
    const double min_e = *std::min_element(energies.begin(), energies.end());
    GroundTruth truth;
    truth.min_energy = min_e;
    for (std::uint64_t z = 0; z < energies.size(); ++z) {
        if (energies[z] - min_e <= kDegeneracyTol) {
            truth.optimal_states.push_back(Bitstring::from_index(z, n));
        }
    }
    std::sort(truth.optimal_states.begin(), truth.optimal_states.end());
    return truth;
}

GroundTruth exhaustive_solve(const QuboMatrix &q) {
    return exhaustive_solve(basis_energies_naive(q), q.size());
}

GroundTruth with_false_minimum(GroundTruth truth, const QuboMatrix &q,
                               std::vector<Bitstring> manifold) {
    if (manifold.empty()) {
        truth.false_min_states.clear();
        truth.false_min_energy.reset();
        return truth;
    }
    const double e0 = energy(q, manifold.front());
    for (const auto &s : manifold) {
        const double e = energy(q, s);
        if (std::abs(e - e0) > 1e-9) {
            throw std::invalid_argument("with_false_minimum: manifold energies differ (" +
                                        s.to_string() + ")");
        }
        if (std::find(truth.optimal_states.begin(), truth.optimal_states.end(), s) !=
            truth.optimal_states.end()) {
            throw std::invalid_argument("with_false_minimum: state " + s.to_string() +
                                        " is optimal");
        }
    }
    if (!(e0 > truth.min_energy)) {
        throw std::invalid_argument("with_false_minimum: manifold is not above the minimum");
    }
    std::sort(manifold.begin(), manifold.end());
    truth.false_min_states = std::move(manifold);
    truth.false_min_energy = e0;
    return truth;
}

// Generators -----------------------------------------------------------------

void GadgetParams::validate() const {
    if (n_cut < 1 || n_gadget < 1) {
        throw std::invalid_argument("GadgetParams: n_cut and n_gadget must be >= 1");
    }
    if (total_size() > kMaxQubits) {
        throw std::invalid_argument("GadgetParams: total size exceeds the qubit cap");
    }
    if (!std::isfinite(j_gadget) || !std::isfinite(j_couple) || !std::isfinite(bias)) {
        throw std::invalid_argument("GadgetParams: non-finite coupling");
    }
}

namespace {

template <class WeightSource>
GadgetInstance build_gadget(const GadgetParams &params, WeightSource &&next_weight) {
    params.validate();
    const std::size_t nc = params.n_cut;
    const std::size_t ng = params.n_gadget;
    QuboMatrix q(params.total_size());

    // Weighted max-cut block; every pair term is inversion symmetric.
    for (std::size_t i = 0; i < nc; ++i) {
        for (std::size_t j = i + 1; j < nc; ++j) {
            const double w = next_weight();
            q.add(i, j, w);
            q.add(i, i, -w);
            q.add(j, j, -w);
        }
    }

    // Max-cut minimizers; the lexicographically smallest becomes Sol.
    std::vector<double> cut_energy(std::size_t{1} << nc);
    for (std::uint64_t z = 0; z < cut_energy.size(); ++z) {
        double e = 0.0;
        for (std::size_t i = 0; i < nc; ++i) {
            if (((z >> i) & 1U) == 0U) {
                continue;
            }
            e += q(i, i);
            for (std::size_t j = i + 1; j < nc; ++j) {
                if (((z >> j) & 1U) != 0U) {
                    e += 2.0 * q(i, j);
                }
            }
        }
        cut_energy[z] = e;
    }
    const double cut_min = *std::min_element(cut_energy.begin(), cut_energy.end());
    std::vector<Bitstring> minimizers;
    for (std::uint64_t z = 0; z < cut_energy.size(); ++z) {
        if (cut_energy[z] - cut_min <= kDegeneracyTol) {
            minimizers.push_back(Bitstring::from_index(z, nc));
        }
    }
    const Bitstring sol = *std::min_element(minimizers.begin(), minimizers.end());
    const bool tied = minimizers.size() > 2;

    const double couple = params.j_couple / static_cast<double>(ng * nc);
    const bool printed = params.variant == GadgetVariant::as_printed;
    for (std::size_t i = 0; i < nc; ++i) {
        const double s = 2.0 * (static_cast<double>(sol[i]) - 0.5) * couple;
        for (std::size_t j = nc; j < nc + ng; ++j) {
            if (printed) {
                q.add(i, j, -s);
                q.add(i, i, s);
                q.add(j, j, s);
            } else {
                q.add(i, j, s);
                q.add(i, i, -s);
                q.add(j, j, -s);
            }
        }
    }

    // Ferromagnetic gadget block.
    for (std::size_t i = nc; i < nc + ng; ++i) {
        for (std::size_t j = i + 1; j < nc + ng; ++j) {
            if (printed) {
                q.add(i, i, 2.0 * params.j_gadget);
            } else {
                q.add(i, i, params.j_gadget);
                q.add(j, j, params.j_gadget);
            }
            q.add(i, j, -params.j_gadget);
        }
    }

    // Partners are free exactly when their gadget variable is 1.
    for (std::size_t i = nc; i < nc + ng; ++i) {
        q.add(i, i + ng, -1.0);
        q.set(i + ng, i + ng, 2.0);
    }

    for (std::size_t i = 0; i < nc; ++i) {
        const double b = printed ? (static_cast<double>(sol[i]) / 2.0 - 1.0)
                                 : (1.0 - 2.0 * static_cast<double>(sol[i]));
        q.add(i, i, b * params.bias / static_cast<double>(nc));
    }

    return GadgetInstance{std::move(q), sol, tied};
}

} // namespace

GadgetInstance generate_gadget_problem(const GadgetParams &params, Rng &rng) {
    return build_gadget(params, [&rng] { return rng.uniform(-1.0, 1.0); });
}

GadgetInstance generate_gadget_problem(const GadgetParams &params) {
    Rng rng(params.seed);
    return generate_gadget_problem(params, rng);
}

GadgetInstance generate_gadget_problem(const GadgetParams &params,
                                       std::span<const double> cut_weights) {
    params.validate();
    if (cut_weights.size() != params.weight_count()) {
        throw std::invalid_argument("generate_gadget_problem: expected " +
                                    std::to_string(params.weight_count()) +
                                    " cut weights, got " + std::to_string(cut_weights.size()));
    }
    std::size_t next = 0;
    return build_gadget(params, [&] { return cut_weights[next++]; });
}

std::vector<Bitstring> false_minimum_manifold(const Bitstring &sol, std::size_t n_cut,
                                              std::size_t n_gadget) {
    if (sol.size() != n_cut) {
        throw std::invalid_argument("false_minimum_manifold: sol length must equal n_cut");
    }
    if (n_gadget > 20) {
        throw std::invalid_argument("false_minimum_manifold: n_gadget too large");
    }
    const Bitstring head = sol.inverted().concat(Bitstring::constant(n_gadget, 1));
    std::vector<Bitstring> out;
    out.reserve(std::size_t{1} << n_gadget);
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << n_gadget); ++y) {
        out.push_back(head.concat(Bitstring::from_index(y, n_gadget)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

GroundTruth gadget_ground_truth(const GadgetInstance &instance, const GadgetParams &params) {
    GroundTruth truth = exhaustive_solve(instance.q);
    // The manifold mirrors whichever cut assignment actually wins, which is
    // Sol for the table variant and usually its inverse for the printed one.
    const auto &best = truth.optimal_states.front();
    std::vector<std::uint8_t> head(best.bits().begin(),
                                   best.bits().begin() + static_cast<long>(params.n_cut));
    return with_false_minimum(
        std::move(truth), instance.q,
        false_minimum_manifold(Bitstring(std::move(head)), params.n_cut, params.n_gadget));
}

QuboMatrix random_qubo(std::size_t n, Rng &rng) {
    if (n < 1) {
        throw std::invalid_argument("random_qubo: n must be >= 1");
    }
    QuboMatrix q(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            q.set(i, j, rng.uniform(-1.0, 1.0));
        }
    }
    return q;
}

QuboMatrix substitute_diagonal(QuboMatrix q, double from, double to, double tol) {
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (std::abs(q(i, i) - from) <= tol) {
            q.set(i, i, to);
        }
    }
    return q;
}

// File format ------------------------------------------------------------------

QuboParseError::QuboParseError(std::size_t line, std::size_t column, const std::string &what)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + what),
      line_(line), column_(column) {}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Token {
    std::string_view text;
    std::size_t column; // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        if (i >= line.size() || line[i] == '#') {
            break;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
               line[i] != '#') {
            ++i;
        }
        out.push_back({line.substr(start, i - start), start + 1});
    }
    return out;
}

std::size_t parse_index(const Token &t, std::size_t line_no) {
    std::size_t v = 0;
    const auto *end = t.text.data() + t.text.size();
    auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw QuboParseError(line_no, t.column,
                             "expected a non-negative integer, got '" + std::string(t.text) +
                                 "'");
    }
    return v;
}

double parse_value(const Token &t, std::size_t line_no) {
    double v = 0.0;
    const auto *end = t.text.data() + t.text.size();
    auto [ptr, ec] = std::from_chars(t.text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw QuboParseError(line_no, t.column,
                             "expected a finite number, got '" + std::string(t.text) + "'");
    }
    return v;
}

} // namespace

void save_qubo(const QuboMatrix &q, std::ostream &out, std::string_view comment) {
    out << "n " << q.size() << '\n';
    if (!comment.empty()) {
        std::istringstream lines{std::string(comment)};
        std::string line;
        while (std::getline(lines, line)) {
            out << "# " << line << '\n';
        }
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = i; j < q.size(); ++j) {
            if (q(i, j) != 0.0) {
                out << i << ' ' << j << ' ' << format_double(q(i, j)) << '\n';
            }
        }
    }
}

void save_qubo(const QuboMatrix &q, const std::filesystem::path &path,
               std::string_view comment) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    save_qubo(q, out, comment);
    if (!out) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

QuboMatrix load_qubo(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> n;
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, std::size_t>> entries;

    while (std::getline(in, line)) {
        ++line_no;
        const auto tokens = tokenize(line);
        if (tokens.empty()) {
            continue;
        }
        if (!n) {
            if (tokens[0].text != "n") {
                throw QuboParseError(line_no, tokens[0].column,
                                     "expected header 'n <integer>'");
            }
            if (tokens.size() != 2) {
                throw QuboParseError(line_no, tokens[0].column,
                                     "header must be exactly 'n <integer>'");
            }
            const std::size_t size = parse_index(tokens[1], line_no);
            if (size == 0 || size > kMaxQubits) {
                throw QuboParseError(line_no, tokens[1].column,
                                     "size must be in [1, " + std::to_string(kMaxQubits) + "]");
            }
            n = size;
            continue;
        }
        if (tokens.size() != 3) {
            const std::size_t col = tokens.size() > 3 ? tokens[3].column : tokens.back().column;
            throw QuboParseError(line_no, col, "expected 'i j value'");
        }
        const std::size_t i = parse_index(tokens[0], line_no);
        const std::size_t j = parse_index(tokens[1], line_no);
        if (i >= *n) {
            throw QuboParseError(line_no, tokens[0].column, "row index out of range");
        }
        if (j >= *n) {
            throw QuboParseError(line_no, tokens[1].column, "column index out of range");
        }
        const double v = parse_value(tokens[2], line_no);
        if (!entries.emplace(std::make_pair(i, j), std::make_pair(v, line_no)).second) {
            throw QuboParseError(line_no, tokens[0].column,
                                 "duplicate entry (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
        }
    }
    if (!n) {
        throw QuboParseError(line_no + 1, 1, "empty input: expected header 'n <integer>'");
    }

    QuboMatrix q(*n);
    for (const auto &[key, val] : entries) {
        const auto [i, j] = key;
        const auto mirror = entries.find({j, i});
        if (i != j && mirror != entries.end() &&
            std::abs(mirror->second.first - val.first) > 1e-12) {
            throw QuboParseError(std::max(val.second, mirror->second.second), 1,
                                 "asymmetric entries (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") and (" + std::to_string(j) + "," +
                                     std::to_string(i) + ")");
        }
        q.set(i, j, val.first);
    }
    return q;
}

QuboMatrix load_qubo(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open QUBO file '" + path.string() + "'");
    }
    return load_qubo(in);
}

std::uint64_t fixture_hash(const QuboMatrix &q) {
    std::ostringstream os;
    save_qubo(q, os);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : os.str()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

} // namespace fsmix
