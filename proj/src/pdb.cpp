#include "wgraphlet/pdb.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "wgraphlet/error.hpp"

namespace wgraphlet {
namespace {

std::string_view columns(std::string_view line, std::size_t first, std::size_t last) {
  // 1-based inclusive PDB column numbers.
  if (line.size() < first) return {};
  return line.substr(first - 1, std::min(last, line.size()) - (first - 1));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Element from columns 77-78, else inferred from the atom name field.
std::string element_of(std::string_view line) {
  auto field = trim(columns(line, 77, 78));
  if (!field.empty()) {
    std::string e;
    for (char c : field)
      if (std::isalpha(static_cast<unsigned char>(c))) e += c;
    if (!e.empty()) return upper(e);
  }
  auto name = columns(line, 13, 16);
  if (name.empty()) return {};
  const char lead = name[0];
  if (lead == ' ' || std::isdigit(static_cast<unsigned char>(lead))) {
    for (char c : name.substr(1))
      if (std::isalpha(static_cast<unsigned char>(c)))
        return std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    return {};
  }
  // Left-justified names are either 4-character hydrogens or two-letter elements.
  const char first = static_cast<char>(std::toupper(static_cast<unsigned char>(lead)));
  if (first == 'H' || first == 'D') return std::string(1, first);
  if (name.size() >= 2 && std::isalpha(static_cast<unsigned char>(name[1])))
    return upper(name.substr(0, 2));
  return std::string(1, first);
}

bool is_water(std::string_view res_name) {
  static constexpr std::string_view kWater[] = {"HOH", "WAT", "DOD", "H2O", "TIP", "SOL"};
  return std::find(std::begin(kWater), std::end(kWater), res_name) != std::end(kWater);
}

struct ResidueKey {
  int number;
  char icode;
  auto operator<=>(const ResidueKey&) const = default;
};

}  // namespace

ResidueRange parse_residue_range(std::string_view text) {
  text = trim(text);
  // The separator is the first '-' that is not a leading sign.
  const auto sep = text.find('-', 1);
  if (sep == std::string_view::npos) throw InputError("residue range must be 'start-end': " + std::string(text));
  auto first = parse_number<int>(text.substr(0, sep));
  auto last = parse_number<int>(text.substr(sep + 1));
  if (!first || !last) throw InputError("residue range must be 'start-end': " + std::string(text));
  if (*first > *last) throw InputError("residue range start exceeds end: " + std::string(text));
  return {*first, *last};
}

ResidueChain parse_pdb(std::string_view text, char chain, std::optional<ResidueRange> range,
                       std::string protein_id) {
  std::map<ResidueKey, Residue> by_key;
  bool chain_seen = false;
  bool in_model = false;
  std::size_t line_no = 0;

  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto record = columns(line, 1, 6);
    if (record.starts_with("MODEL")) {
      if (in_model) break;
      in_model = true;
      continue;
    }
    if (record.starts_with("ENDMDL")) break;
    if (record != "ATOM  " && record != "ATOM") continue;

    if (line.size() < 54) throw ParseError("truncated ATOM record", line_no);
    if (line[21] != chain) continue;
    chain_seen = true;

    const char alt_loc = line[16];
    if (alt_loc != ' ' && alt_loc != 'A') continue;

    const std::string res_name(trim(columns(line, 18, 20)));
    if (is_water(res_name)) continue;

    const auto res_seq = parse_number<int>(columns(line, 23, 26));
    if (!res_seq) throw ParseError("bad residue number '" + std::string(columns(line, 23, 26)) + "'", line_no);
    const auto x = parse_number<double>(columns(line, 31, 38));
    const auto y = parse_number<double>(columns(line, 39, 46));
    const auto z = parse_number<double>(columns(line, 47, 54));
    if (!x || !y || !z) throw ParseError("bad coordinate field", line_no);
    if (!std::isfinite(*x) || !std::isfinite(*y) || !std::isfinite(*z))
      throw ParseError("non-finite coordinate", line_no);

    const std::string element = element_of(line);
    if (element.empty()) throw ParseError("cannot determine element", line_no);

    const ResidueKey key{*res_seq, line[26]};
    auto& residue = by_key[key];
    if (residue.name.empty()) {
      residue.author_number = key.number;
      residue.insertion_code = key.icode;
      residue.name = res_name;
    }
    if (element == "H" || element == "D") continue;
    residue.atoms.push_back({element, Eigen::Vector3d(*x, *y, *z)});
  }

  if (!chain_seen)
    throw NotFoundError("chain '" + std::string(1, chain) + "' not found in ATOM records");

  ResidueChain out;
  out.protein_id = std::move(protein_id);
  out.chain_id = chain;
  for (auto& [key, residue] : by_key) {
    if (residue.atoms.empty()) continue;
    if (range && (key.number < range->first || key.number > range->last)) continue;
    residue.ordinal = static_cast<int>(out.residues.size()) + 1;
    out.residues.push_back(std::move(residue));
  }
  if (out.residues.size() < 2)
    throw DegenerateInputError("chain '" + std::string(1, chain) + "' has " +
                               std::to_string(out.residues.size()) +
                               " residue(s) with heavy atoms; at least 2 required");
  return out;
}

ResidueChain read_pdb_file(const std::filesystem::path& path, char chain,
                           std::optional<ResidueRange> range) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_pdb(buffer.str(), chain, range, path.stem().string());
}

}  // namespace wgraphlet
