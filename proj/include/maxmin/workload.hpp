#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <variant>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "errors.hpp"
#include "model.hpp"

namespace maxmin {

// DAX runtimes (seconds) become MI through one reference speed.
inline constexpr double kDefaultReferenceMips = 1000.0;
inline constexpr double kMinCloudletLength = 1.0;

inline constexpr std::string_view kCsvHeader = "task_id,length_mi";

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

inline std::optional<std::uint64_t> parse_uint(std::string_view s) {
  s = trim(s);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

// Shortest text that parses back to the same double.
inline std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

// Uniform in [0, 1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
template <typename Rng>
double unit_interval(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in [0, bound) by rejection.
template <typename Rng>
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

inline void collect_jobs(const boost::property_tree::ptree& node, std::vector<const boost::property_tree::ptree*>& out) {
  for (const auto& [name, child] : node) {
    if (name == "job") out.push_back(&child);
    if (name != "<xmlattr>") collect_jobs(child, out);
  }
}

}  // namespace detail

/// Reads the job elements of a Pegasus DAX document, in document order.
/// Dependency elements are ignored: cloudlets are independent.
inline std::vector<Cloudlet> parse_dax(const std::string& xml_text, double reference_mips = kDefaultReferenceMips) {
  namespace pt = boost::property_tree;
  if (!(reference_mips > 0.0)) throw ConfigError("reference_mips must be positive");

  pt::ptree tree;
  std::istringstream in(xml_text);
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError("malformed XML: " + e.message(), static_cast<long>(e.line()));
  }

  std::vector<const pt::ptree*> jobs;
  detail::collect_jobs(tree, jobs);

  std::vector<Cloudlet> cloudlets;
  cloudlets.reserve(jobs.size());
  for (const auto* job : jobs) {
    const std::string id = job->get<std::string>("<xmlattr>.id", "<unnamed>");
    const auto runtime_text = job->get_optional<std::string>("<xmlattr>.runtime");
    if (!runtime_text) throw ParseError("job " + id + " has no runtime attribute");
    const auto runtime = detail::parse_double(*runtime_text);
    if (!runtime || !std::isfinite(*runtime)) throw ParseError("job " + id + " has unparseable runtime '" + *runtime_text + "'");
    if (*runtime < 0.0) throw ParseError("job " + id + " has negative runtime " + *runtime_text);

    const double length = std::max(*runtime * reference_mips, kMinCloudletLength);
    cloudlets.push_back({static_cast<CloudletId>(cloudlets.size()), length});
  }
  return cloudlets;
}

/// Reads `task_id,length_mi` rows.
inline std::vector<Cloudlet> parse_csv(const std::string& csv_text) {
  std::vector<Cloudlet> cloudlets;
  std::unordered_set<CloudletId> ids;
  std::istringstream in(csv_text);
  std::string line;
  long line_no = 0;

  if (!std::getline(in, line) || detail::trim(line) != kCsvHeader) {
    throw ParseError("bad header, expected '" + std::string(kCsvHeader) + "'", 1);
  }
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = detail::trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos) throw ParseError("row " + std::to_string(line_no) + ": expected two fields", line_no);
    const auto id = detail::parse_uint(row.substr(0, comma));
    const auto length = detail::parse_double(row.substr(comma + 1));
    if (!id) throw ParseError("row " + std::to_string(line_no) + ": bad task_id", line_no);
    if (!length || !std::isfinite(*length)) throw ParseError("row " + std::to_string(line_no) + ": bad length_mi", line_no);
    if (*length <= 0.0) {
      throw ParseError("row " + std::to_string(line_no) + ": non-positive length " + std::string(row.substr(comma + 1)),
                       line_no);
    }
    if (!ids.insert(*id).second) throw ParseError("duplicate task id " + std::to_string(*id), line_no);
    cloudlets.push_back({*id, *length});
  }
  return cloudlets;
}

inline std::string to_csv(const std::vector<Cloudlet>& cloudlets) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& c : cloudlets) {
    out += std::to_string(c.id);
    out += ',';
    out += detail::format_double(c.length);
    out += '\n';
  }
  return out;
}

struct UniformLengths {
  double lo = 0.0;
  double hi = 0.0;
};

/// Two populations; `heavy_fraction` of the tasks (rounded up) are heavy.
struct BimodalLengths {
  double light_lo = 0.0;
  double light_hi = 0.0;
  double heavy_lo = 0.0;
  double heavy_hi = 0.0;
  double heavy_fraction = 0.0;
};

using LengthDistribution = std::variant<UniformLengths, BimodalLengths>;

inline void check_descriptor(const LengthDistribution& descriptor) {
  if (const auto* u = std::get_if<UniformLengths>(&descriptor)) {
    if (!(u->lo > 0.0 && u->lo <= u->hi && std::isfinite(u->hi))) {
      throw DescriptorError("uniform descriptor needs 0 < lo <= hi");
    }
    return;
  }
  const auto& b = std::get<BimodalLengths>(descriptor);
  if (!(b.light_lo > 0.0 && b.light_lo <= b.light_hi && b.light_hi < b.heavy_lo && b.heavy_lo <= b.heavy_hi &&
        std::isfinite(b.heavy_hi))) {
    throw DescriptorError("bimodal descriptor needs 0 < light_lo <= light_hi < heavy_lo <= heavy_hi");
  }
  if (!(b.heavy_fraction >= 0.0 && b.heavy_fraction <= 1.0)) {
    throw DescriptorError("bimodal heavy_fraction must lie in [0, 1]");
  }
}

inline std::size_t heavy_count(const BimodalLengths& b, std::size_t count) {
  const double raw = std::ceil(b.heavy_fraction * static_cast<double>(count) - 1e-9);
  return std::min(count, static_cast<std::size_t>(std::max(0.0, raw)));
}

/// Seeded synthetic workload. Pure function of its arguments.
inline std::vector<Cloudlet> gen_synthetic(const LengthDistribution& descriptor, std::size_t count, std::uint64_t seed) {
  check_descriptor(descriptor);
  if (count == 0) throw DescriptorError("count must be positive");

  std::mt19937_64 rng(seed);
  auto draw = [&rng](double lo, double hi) { return lo + (hi - lo) * detail::unit_interval(rng); };

  std::vector<Cloudlet> cloudlets(count);
  if (const auto* u = std::get_if<UniformLengths>(&descriptor)) {
    for (std::size_t i = 0; i < count; ++i) cloudlets[i] = {i, draw(u->lo, u->hi)};
    return cloudlets;
  }

  const auto& b = std::get<BimodalLengths>(descriptor);
  std::vector<bool> heavy(count, false);
  std::fill_n(heavy.begin(), heavy_count(b, count), true);
  for (std::size_t i = count; i > 1; --i) {
    const auto k = detail::uniform_index(rng, i);
    std::swap(heavy[i - 1], heavy[k]);
  }
  for (std::size_t i = 0; i < count; ++i) {
    cloudlets[i] = {i, heavy[i] ? draw(b.heavy_lo, b.heavy_hi) : draw(b.light_lo, b.light_hi)};
  }
  return cloudlets;
}

/// Fits a parsed workload to a requested load. Shorter requests take the
/// first `count` tasks; longer ones sample with replacement under `seed`.
/// Ids are renumbered 0..count-1 in the result.
inline std::vector<Cloudlet> select_count(const std::vector<Cloudlet>& source, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ConfigError("count must be positive");
  if (source.empty()) throw ConfigError("cannot draw cloudlets from an empty workload");
  std::vector<Cloudlet> out;
  out.reserve(count);
  if (count <= source.size()) {
    for (std::size_t i = 0; i < count; ++i) out.push_back({i, source[i].length});
    return out;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) out.push_back({i, source[detail::uniform_index(rng, source.size())].length});
  return out;
}

/// `n` VMs with ids 0..n-1. With an explicit list its size must equal `n`;
/// a pattern is repeated cyclically. VMs are dealt round-robin into
/// `datacenters` tags when that is non-zero.
inline std::vector<VmSpec> make_vm_pool(std::size_t n, const std::vector<double>& mips, bool cyclic,
                                        std::size_t datacenters = 0) {
  if (n == 0) throw ConfigError("vm pool needs at least one VM");
  if (mips.empty()) throw ConfigError("vm pool needs at least one MIPS value");
  if (!cyclic && mips.size() != n) {
    throw ConfigError("mips_list has " + std::to_string(mips.size()) + " entries for " + std::to_string(n) + " VMs");
  }
  std::vector<VmSpec> vms;
  vms.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double speed = mips[j % mips.size()];
    if (!(speed > 0.0) || !std::isfinite(speed)) throw ConfigError("VM speeds must be positive and finite");
    VmSpec vm{j, speed, std::nullopt};
    if (datacenters > 0) vm.datacenter_tag = "dc" + std::to_string(j % datacenters);
    vms.push_back(std::move(vm));
  }
  return vms;
}

inline std::vector<VmSpec> make_vm_pool_from_list(const std::vector<double>& mips_list) {
  return make_vm_pool(mips_list.size(), mips_list, false);
}

}  // namespace maxmin
