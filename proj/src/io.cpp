#include "efx/io.hpp"

#include <cstdint>
#include <cstdio>
#include <limits>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

namespace efx {

using nlohmann::json;

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_word(std::uint64_t& h, std::uint64_t word) {
  for (int b = 0; b < 8; ++b) {
    h ^= (word >> (8 * b)) & 0xFF;
    h *= kFnvPrime;
  }
}

json parse_document(const std::string& text, std::string_view expected_kind) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "line L, column C" in its message.
    throw ParseError(std::string(expected_kind) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError(std::string(expected_kind) + ": top level must be an object");
  if (!doc.contains("format_version")) {
    throw ParseError(std::string(expected_kind) + ": missing field 'format_version'");
  }
  const auto& ver = doc["format_version"];
  if (!ver.is_number_integer() || ver.get<int>() != kFormatVersion) {
    throw ParseError(std::string(expected_kind) + ": unsupported format_version " +
                     ver.dump() + " (expected " + std::to_string(kFormatVersion) + ")");
  }
  if (doc.contains("kind") && doc["kind"] != expected_kind) {
    throw ParseError("expected kind '" + std::string(expected_kind) + "', got " +
                     doc["kind"].dump());
  }
  return doc;
}

std::int64_t get_integer(const json& doc, const char* field) {
  if (!doc.contains(field)) throw ParseError(std::string("missing field '") + field + "'");
  const auto& v = doc[field];
  if (!v.is_number_integer()) {
    throw ParseError(std::string("field '") + field + "' must be an integer, got " + v.dump());
  }
  return v.get<std::int64_t>();
}

std::string slurp(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::string instance_digest(const Instance& inst) {
  std::uint64_t h = kFnvOffset;
  fnv_word(h, inst.agents());
  fnv_word(h, inst.goods());
  for (Value v : inst.values()) fnv_word(h, static_cast<std::uint64_t>(v));
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_instance(const Instance& inst, std::ostream& out) {
  out << "{\n  \"format_version\": " << kFormatVersion
      << ",\n  \"kind\": \"efx-instance\",\n  \"n\": " << inst.agents()
      << ",\n  \"m\": " << inst.goods() << ",\n  \"scale\": " << inst.scale()
      << ",\n  \"values\": [";
  for (Agent i = 0; i < inst.agents(); ++i) {
    out << (i ? ",\n    [" : "\n    [");
    auto row = inst.row(i);
    for (std::size_t g = 0; g < row.size(); ++g) out << (g ? ", " : "") << row[g];
    out << "]";
  }
  out << "\n  ]\n}\n";
}

Instance parse_instance(const std::string& text) {
  const json doc = parse_document(text, "efx-instance");
  const std::int64_t n = get_integer(doc, "n");
  const std::int64_t m = get_integer(doc, "m");
  const std::int64_t scale = doc.contains("scale") ? get_integer(doc, "scale") : kDefaultScale;
  if (n < 1) throw ParseError("field 'n' must be >= 1, got " + std::to_string(n));
  if (m < 0) throw ParseError("field 'm' must be >= 0, got " + std::to_string(m));
  if (scale < 1) throw ParseError("field 'scale' must be >= 1");
  if (!doc.contains("values") || !doc["values"].is_array()) {
    throw ParseError("missing array field 'values'");
  }
  const auto& rows = doc["values"];
  if (rows.size() != static_cast<std::size_t>(n)) {
    const std::string which =
        rows.size() > static_cast<std::size_t>(n)
            ? "row " + std::to_string(n + 1) + " is extra"
            : "row " + std::to_string(rows.size() + 1) + " is missing";
    throw ParseError("values: declared n = " + std::to_string(n) + " but found " +
                     std::to_string(rows.size()) + " rows (" + which + ")");
  }
  std::vector<Value> flat;
  flat.reserve(static_cast<std::size_t>(n * m));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string where = "values row " + std::to_string(i + 1);
    if (!row.is_array()) throw ParseError(where + ": expected an array");
    if (row.size() != static_cast<std::size_t>(m)) {
      throw ParseError(where + ": has " + std::to_string(row.size()) +
                       " entries, declared m = " + std::to_string(m));
    }
    for (std::size_t g = 0; g < row.size(); ++g) {
      const auto& v = row[g];
      if (!v.is_number_integer()) {
        throw ParseError(where + ", good " + std::to_string(g + 1) +
                         ": expected an integer, got " + v.dump());
      }
      if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
        throw ParseError(where + ", good " + std::to_string(g + 1) + ": value too large");
      }
      const auto x = v.get<std::int64_t>();
      if (x < 0) {
        throw ParseError(where + ", good " + std::to_string(g + 1) +
                         ": negative value " + std::to_string(x));
      }
      flat.push_back(x);
    }
  }
  try {
    return Instance(static_cast<std::size_t>(n), static_cast<std::size_t>(m),
                    std::move(flat), scale);
  } catch (const InvalidInstance& e) {
    throw ParseError(e.what());
  }
}

Instance parse_instance(std::istream& in) { return parse_instance(slurp(in)); }

void write_allocation(const Instance& inst, const Allocation& alloc,
                      std::ostream& out) {
  check_allocation(inst, alloc);
  out << "{\n  \"format_version\": " << kFormatVersion
      << ",\n  \"kind\": \"efx-allocation\",\n  \"instance_digest\": \""
      << instance_digest(inst) << "\",\n  \"owner\": [";
  for (std::size_t g = 0; g < alloc.owner.size(); ++g) {
    out << (g ? ", " : "") << alloc.owner[g] + 1;
  }
  out << "]\n}\n";
}

AllocationFile parse_allocation(const std::string& text, const Instance* inst) {
  const json doc = parse_document(text, "efx-allocation");
  if (!doc.contains("owner") || !doc["owner"].is_array()) {
    throw ParseError("missing array field 'owner'");
  }
  AllocationFile file;
  if (doc.contains("instance_digest")) {
    if (!doc["instance_digest"].is_string()) throw ParseError("field 'instance_digest' must be a string");
    file.instance_digest = doc["instance_digest"].get<std::string>();
  }
  const auto& owner = doc["owner"];
  const std::size_t n_limit = inst ? inst->agents() : std::numeric_limits<Agent>::max();
  if (inst && owner.size() != inst->goods()) {
    throw ParseError("owner: has " + std::to_string(owner.size()) +
                     " entries, instance has m = " + std::to_string(inst->goods()));
  }
  file.allocation.owner.reserve(owner.size());
  for (std::size_t g = 0; g < owner.size(); ++g) {
    const auto& v = owner[g];
    const std::string where = "owner entry " + std::to_string(g + 1);
    if (!v.is_number_integer()) throw ParseError(where + ": expected an integer, got " + v.dump());
    const auto a = v.get<std::int64_t>();
    if (a < 1 || static_cast<std::uint64_t>(a) > n_limit) {
      throw ParseError(where + ": agent " + std::to_string(a) + " outside 1.." +
                       std::to_string(n_limit));
    }
    file.allocation.owner.push_back(static_cast<Agent>(a - 1));
  }
  if (inst && file.instance_digest && *file.instance_digest != instance_digest(*inst)) {
    throw ParseError("instance_digest " + *file.instance_digest +
                     " does not match instance (" + instance_digest(*inst) + ")");
  }
  return file;
}

AllocationFile parse_allocation(std::istream& in, const Instance* inst) {
  return parse_allocation(slurp(in), inst);
}

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

Instance load_instance(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return parse_instance(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_instance(inst, out);
}

AllocationFile load_allocation(const std::filesystem::path& path,
                               const Instance* inst) {
  auto in = open_in(path);
  try {
    return parse_allocation(in, inst);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_allocation(const Instance& inst, const Allocation& alloc,
                     const std::filesystem::path& path) {
  auto out = open_out(path);
  write_allocation(inst, alloc, out);
}

}  // namespace efx
