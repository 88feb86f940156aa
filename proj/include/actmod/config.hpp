#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

namespace actmod {

/// Scenario configuration: an INI file with one section per module
/// (sim, plant, load, controller, gains, reference, detector, scenario).
/// Every scenario starts from a preset; files and overrides may only change
/// keys the preset defines, so typos fail loudly.
class Config {
 public:
  static Config preset(const std::string& scenario);

  const std::string& scenario() const noexcept { return scenario_; }

  void merge_file(const std::filesystem::path& path);
  void merge_text(const std::string& ini_text);
  /// `key` is "section.name".
  void set(const std::string& key, const std::string& value);
  /// "section.name=value".
  void set_assignment(const std::string& assignment);

  bool has(const std::string& key) const;
  std::string text(const std::string& key) const;
  double number(const std::string& key) const;
  std::int64_t integer(const std::string& key) const;
  std::uint64_t unsigned_integer(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<std::string> words(const std::string& key) const;

  /// Resolved configuration as INI text; loading it into a fresh preset
  /// of the same scenario reproduces this configuration exactly.
  std::string echo() const;
  std::uint64_t hash() const;

 private:
  std::string scenario_;
  boost::property_tree::ptree tree_;
};

const std::vector<std::string>& scenario_names();

}  // namespace actmod
