#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fsmix::cli {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/**
 * Sectioned key=value settings. Every key is "section.name" and must appear
 * in the schema; values start at the schema default and are overridden by a
 * config file and then by --set pairs, in that order.
 */
class Config {
  public:
    Config();

    void load_file(const std::filesystem::path &path);
    void parse_text(std::string_view text, std::string_view origin = "<text>");
    /// "section.key=value"
    void apply_override(std::string_view assignment);
    void set(const std::string &key, const std::string &value);

    [[nodiscard]] const std::string &get(const std::string &key) const;
    [[nodiscard]] double get_double(const std::string &key) const;
    [[nodiscard]] std::size_t get_size(const std::string &key) const;
    [[nodiscard]] std::uint64_t get_u64(const std::string &key) const;
    [[nodiscard]] std::vector<std::string> get_list(const std::string &key) const;

    /// Canonical INI text of every key, grouped by section.
    [[nodiscard]] std::string effective_text() const;
    /// hex64(fnv1a(effective_text())).
    [[nodiscard]] std::string hash() const;

    [[nodiscard]] static const std::map<std::string, std::string> &schema();

  private:
    std::map<std::string, std::string> values_;
};

} // namespace fsmix::cli
