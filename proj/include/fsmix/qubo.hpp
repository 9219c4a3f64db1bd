#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fsmix/rng.hpp"

namespace fsmix {

/// Hard cap on qubit count for dense enumeration and simulation.
inline constexpr std::size_t kMaxQubits = 26;

/// Absolute tolerance used to decide that two energies are degenerate.
inline constexpr double kDegeneracyTol = 1e-12;

/**
 * Assignment of 0/1 values to n variables. Element j is the value of
 * variable (qubit) j, which is bit j of the basis-state index. Text form
 * lists qubit 0 first, so "110" is index 3.
 */
class Bitstring {
  public:
    Bitstring() = default;
    explicit Bitstring(std::vector<std::uint8_t> bits);

    static Bitstring from_index(std::uint64_t index, std::size_t n);
    static Bitstring parse(std::string_view text);
    static Bitstring constant(std::size_t n, std::uint8_t value);

    [[nodiscard]] std::uint64_t to_index() const;
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] std::size_t size() const { return bits_.size(); }
    [[nodiscard]] std::uint8_t operator[](std::size_t j) const { return bits_[j]; }
    [[nodiscard]] std::span<const std::uint8_t> bits() const { return bits_; }

    [[nodiscard]] Bitstring inverted() const;
    [[nodiscard]] Bitstring concat(const Bitstring &tail) const;

    auto operator<=>(const Bitstring &) const = default;
    bool operator==(const Bitstring &) const = default;

  private:
    std::vector<std::uint8_t> bits_;
};

/// Symmetric n x n real matrix. Writes always keep q(i,j) == q(j,i).
class QuboMatrix {
  public:
    explicit QuboMatrix(std::size_t n);

    /// Builds from a dense row-major buffer; throws if it is not symmetric
    /// within `tol` or has non-finite entries.
    static QuboMatrix from_dense(std::size_t n, std::span<const double> row_major,
                                 double tol = 1e-12);

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const {
        return q_[i * n_ + j];
    }
    [[nodiscard]] std::span<const double> data() const { return q_; }

    void set(std::size_t i, std::size_t j, double value);
    void add(std::size_t i, std::size_t j, double delta);

    bool operator==(const QuboMatrix &) const = default;

  private:
    void check_index(std::size_t i, std::size_t j) const;

    std::size_t n_;
    std::vector<double> q_;
};

/// x^T Q x with the symmetric matrix (each off-diagonal pair counted twice).
double energy(const QuboMatrix &q, const Bitstring &x);
double energy_of_index(const QuboMatrix &q, std::uint64_t index);

/// Energy of every basis index, computed by walking a Gray code with
/// incrementally maintained local fields (O(2^n n)).
std::vector<double> basis_energies(const QuboMatrix &q);
/// Direct O(2^n n^2) evaluation; the reference for basis_energies.
std::vector<double> basis_energies_naive(const QuboMatrix &q);

struct GroundTruth {
    double min_energy = 0.0;
    std::vector<Bitstring> optimal_states;
    std::vector<Bitstring> false_min_states;
    std::optional<double> false_min_energy;
};

GroundTruth exhaustive_solve(const QuboMatrix &q);
GroundTruth exhaustive_solve(std::span<const double> energies, std::size_t n);

/// Attaches a false-minimum manifold. Throws if any member is optimal or the
/// members do not share one energy above the minimum.
GroundTruth with_false_minimum(GroundTruth truth, const QuboMatrix &q,
                               std::vector<Bitstring> manifold);

enum class GadgetVariant {
    /// Matches the published instance table; Sol ++ 0 is the unique minimum.
    table,
    /// Line-by-line transcription of the printed generator listing.
    as_printed,
};

struct GadgetParams {
    std::size_t n_cut = 1;
    std::size_t n_gadget = 1;
    double j_gadget = 0.25;
    double j_couple = 0.5;
    double bias = 1.5;
    std::uint64_t seed = 0;
    GadgetVariant variant = GadgetVariant::table;

    [[nodiscard]] std::size_t total_size() const { return n_cut + 2 * n_gadget; }
    [[nodiscard]] std::size_t weight_count() const { return n_cut * (n_cut - 1) / 2; }
    void validate() const;
};

struct GadgetInstance {
    QuboMatrix q;
    Bitstring sol;
    /// True when the max-cut block has minimizers beyond the inversion pair.
    bool sol_tied = false;
};

GadgetInstance generate_gadget_problem(const GadgetParams &params, Rng &rng);
GadgetInstance generate_gadget_problem(const GadgetParams &params);
/// Same construction with the max-cut weights supplied in draw order
/// (i < j, row by row) instead of drawn.
GadgetInstance generate_gadget_problem(const GadgetParams &params,
                                       std::span<const double> cut_weights);

/// The 2^n_gadget states (not Sol) ++ 1^n_gadget ++ y.
std::vector<Bitstring> false_minimum_manifold(const Bitstring &sol, std::size_t n_cut,
                                              std::size_t n_gadget);

/// Truth for a gadget instance with its false-minimum manifold attached.
GroundTruth gadget_ground_truth(const GadgetInstance &instance, const GadgetParams &params);

/// Symmetric matrix, upper triangle (with diagonal) i.i.d. uniform in [-1, 1).
QuboMatrix random_qubo(std::size_t n, Rng &rng);

/// Replaces every diagonal entry equal to `from` (within tol) by `to`.
QuboMatrix substitute_diagonal(QuboMatrix q, double from, double to, double tol = 1e-9);

class QuboParseError : public std::runtime_error {
  public:
    QuboParseError(std::size_t line, std::size_t column, const std::string &what);
    [[nodiscard]] std::size_t line() const { return line_; }
    [[nodiscard]] std::size_t column() const { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

void save_qubo(const QuboMatrix &q, std::ostream &out, std::string_view comment = {});
void save_qubo(const QuboMatrix &q, const std::filesystem::path &path,
               std::string_view comment = {});
QuboMatrix load_qubo(std::istream &in);
QuboMatrix load_qubo(const std::filesystem::path &path);

/// FNV-1a over the canonical text form; identifies a fixture in metadata.
std::uint64_t fixture_hash(const QuboMatrix &q);
std::string hex64(std::uint64_t value);

} // namespace fsmix
