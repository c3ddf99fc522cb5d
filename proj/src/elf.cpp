#include "helix/elf.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <string_view>

#include "helix/error.hpp"
#include "helix/util.hpp"

namespace helix::elf {
namespace {

constexpr std::uint32_t kShtSymtab = 2;
constexpr std::uint16_t kShnUndef = 0;
constexpr std::uint16_t kShnCommon = 0xfff2;

[[noreturn]] void malformed(const std::string& what) { throw Error("malformed ELF: " + what); }

class Reader {
 public:
  Reader(std::span<const std::uint8_t> data, bool big_endian) : data_(data), big_(big_endian) {}

  std::uint64_t uint(std::uint64_t offset, std::size_t width) const {
    if (offset > data_.size() || width > data_.size() - offset) malformed("read past end of file");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      std::uint64_t byte = data_[offset + (big_ ? i : width - 1 - i)];
      v = (v << 8) | byte;
    }
    return v;
  }
  std::uint8_t u8(std::uint64_t o) const { return static_cast<std::uint8_t>(uint(o, 1)); }
  std::uint16_t u16(std::uint64_t o) const { return static_cast<std::uint16_t>(uint(o, 2)); }
  std::uint32_t u32(std::uint64_t o) const { return static_cast<std::uint32_t>(uint(o, 4)); }
  std::uint64_t u64(std::uint64_t o) const { return uint(o, 8); }

  std::string cstring(std::uint64_t table_off, std::uint64_t table_size, std::uint64_t index) const {
    if (index >= table_size) malformed("string index out of range");
    std::uint64_t start = table_off + index;
    std::uint64_t end = table_off + table_size;
    if (end > data_.size()) malformed("string table past end of file");
    auto first = data_.begin() + static_cast<std::ptrdiff_t>(start);
    auto last = std::find(first, data_.begin() + static_cast<std::ptrdiff_t>(end), std::uint8_t{0});
    return std::string(first, last);
  }

 private:
  std::span<const std::uint8_t> data_;
  bool big_;
};

struct Section {
  std::uint32_t type = 0;
  std::uint64_t offset = 0;
  std::uint64_t size = 0;
  std::uint32_t link = 0;
  std::uint64_t entsize = 0;
};

SymbolType to_type(unsigned t) {
  switch (t) {
    case 0: return SymbolType::notype;
    case 1: return SymbolType::object;
    case 2: return SymbolType::func;
    case 3: return SymbolType::section;
    case 4: return SymbolType::file;
    case 10: return SymbolType::ifunc;
    default: return SymbolType::other;
  }
}

Binding to_binding(unsigned b) {
  switch (b) {
    case 0: return Binding::local;
    case 1: return Binding::global;
    case 2: return Binding::weak;
    default: return Binding::other;
  }
}

}  // namespace

bool is_elf(std::span<const std::uint8_t> data) {
  return data.size() >= 16 && std::memcmp(data.data(), "\x7f" "ELF", 4) == 0;
}

ObjectFile parse_object(std::span<const std::uint8_t> data) {
  if (!is_elf(data)) malformed("missing ELF magic");
  const bool is64 = data[4] == 2;
  if (data[4] != 1 && data[4] != 2) malformed("unknown ELF class");
  if (data[5] != 1 && data[5] != 2) malformed("unknown ELF data encoding");
  Reader r(data, data[5] == 2);

  ObjectFile obj;
  switch (r.u16(16)) {
    case 1: obj.type = FileType::relocatable; break;
    case 2: obj.type = FileType::executable; break;
    case 3: obj.type = FileType::shared; break;
    default: obj.type = FileType::other;
  }

  const std::uint64_t shoff = is64 ? r.u64(0x28) : r.u32(0x20);
  const std::uint16_t shentsize = r.u16(is64 ? 0x3a : 0x2e);
  std::uint64_t shnum = r.u16(is64 ? 0x3c : 0x30);
  if (shoff == 0) return obj;

  auto read_section = [&](std::uint64_t i) {
    std::uint64_t base = shoff + i * shentsize;
    Section s;
    s.type = r.u32(base + 4);
    if (is64) {
      s.offset = r.u64(base + 0x18);
      s.size = r.u64(base + 0x20);
      s.link = r.u32(base + 0x28);
      s.entsize = r.u64(base + 0x38);
    } else {
      s.offset = r.u32(base + 0x10);
      s.size = r.u32(base + 0x14);
      s.link = r.u32(base + 0x18);
      s.entsize = r.u32(base + 0x24);
    }
    return s;
  };
  if (shnum == 0) shnum = read_section(0).size;  // extended section numbering
  if (shentsize < (is64 ? 64u : 40u)) malformed("section header entry too small");

  for (std::uint64_t i = 0; i < shnum; ++i) {
    Section symtab = read_section(i);
    if (symtab.type != kShtSymtab) continue;
    if (symtab.link >= shnum) malformed("symtab links to missing string table");
    Section strtab = read_section(symtab.link);
    const std::uint64_t entsize = symtab.entsize ? symtab.entsize : (is64 ? 24 : 16);
    const std::uint64_t count = symtab.size / entsize;
    obj.symbols.reserve(count);
    for (std::uint64_t k = 1; k < count; ++k) {  // entry 0 is the null symbol
      std::uint64_t e = symtab.offset + k * entsize;
      std::uint32_t name = r.u32(e);
      std::uint8_t info = r.u8(e + (is64 ? 4 : 12));
      std::uint16_t shndx = r.u16(e + (is64 ? 6 : 14));
      Symbol sym;
      sym.name = r.cstring(strtab.offset, strtab.size, name);
      sym.binding = to_binding(info >> 4);
      sym.type = to_type(info & 0xf);
      sym.defined = shndx != kShnUndef;
      sym.common = shndx == kShnCommon;
      obj.symbols.push_back(std::move(sym));
    }
    break;
  }
  return obj;
}

ObjectFile read_object(const std::filesystem::path& path) {
  auto data = read_file(path);
  return parse_object(data);
}

namespace {

[[noreturn]] void bad_archive(const std::string& what) { throw Error("bad archive: " + what); }

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

std::uint64_t parse_decimal(std::string_view field, const char* what) {
  field = trim_right(field);
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || p != field.data() + field.size()) bad_archive(std::string("bad ") + what + " field");
  return v;
}

std::vector<std::string> parse_index(std::span<const std::uint8_t> body, std::size_t width) {
  Reader r(body, true);
  if (body.size() < width) bad_archive("truncated symbol index");
  std::uint64_t count = r.uint(0, width);
  std::uint64_t strings = width + count * width;
  if (strings > body.size()) bad_archive("symbol index count exceeds member size");
  std::vector<std::string> names;
  names.reserve(count);
  std::uint64_t pos = strings;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (pos >= body.size()) bad_archive("symbol index strings truncated");
    auto first = body.begin() + static_cast<std::ptrdiff_t>(pos);
    auto last = std::find(first, body.end(), std::uint8_t{0});
    names.emplace_back(first, last);
    pos += names.back().size() + 1;
  }
  return names;
}

}  // namespace

Archive parse_archive(std::span<const std::uint8_t> data) {
  constexpr std::string_view magic = "!<arch>\n";
  constexpr std::string_view thin = "!<thin>\n";
  auto head = std::string_view(reinterpret_cast<const char*>(data.data()), std::min<std::size_t>(data.size(), 8));
  if (head == thin) bad_archive("thin archives are not supported");
  if (head != magic) bad_archive("missing !<arch> magic");

  Archive ar;
  std::string_view long_names;
  std::size_t pos = magic.size();
  while (pos < data.size()) {
    if (data.size() - pos < 60) bad_archive("truncated member header");
    std::string_view hdr(reinterpret_cast<const char*>(data.data() + pos), 60);
    if (hdr.substr(58, 2) != "`\n") bad_archive("bad member header terminator");
    std::string_view raw_name = trim_right(hdr.substr(0, 16));
    std::uint64_t size = parse_decimal(hdr.substr(48, 10), "size");
    pos += 60;
    if (size > data.size() - pos) bad_archive("member extends past end of archive");
    auto body = data.subspan(pos, size);
    pos += size + (size & 1);

    if (raw_name == "/") {
      ar.index = parse_index(body, 4);
      continue;
    }
    if (raw_name == "/SYM64/") {
      ar.index = parse_index(body, 8);
      continue;
    }
    if (raw_name == "//") {
      long_names = std::string_view(reinterpret_cast<const char*>(body.data()), body.size());
      continue;
    }
    if (raw_name == "__.SYMDEF" || raw_name == "__.SYMDEF SORTED") continue;

    std::string name;
    if (raw_name.size() > 1 && raw_name.front() == '/') {
      std::uint64_t off = parse_decimal(raw_name.substr(1), "long name offset");
      if (off >= long_names.size()) bad_archive("long name offset out of range");
      auto rest = long_names.substr(off);
      name = std::string(rest.substr(0, rest.find("/\n")));
    } else if (raw_name.starts_with("#1/")) {
      std::uint64_t len = parse_decimal(raw_name.substr(3), "BSD name length");
      if (len > body.size()) bad_archive("BSD name longer than member");
      name.assign(reinterpret_cast<const char*>(body.data()), len);
      name.erase(name.find_last_not_of('\0') + 1);
      body = body.subspan(len);
    } else {
      name = std::string(raw_name);
      if (!name.empty() && name.back() == '/') name.pop_back();
    }

    if (!is_elf(body)) bad_archive("member " + name + " is not an ELF object");
    Member m;
    m.name = std::move(name);
    try {
      m.object = parse_object(body);
    } catch (const Error& e) {
      bad_archive("member " + m.name + ": " + e.what());
    }
    ar.members.push_back(std::move(m));
  }
  return ar;
}

Archive read_archive(const std::filesystem::path& path) {
  auto data = read_file(path);
  return parse_archive(data);
}

std::vector<std::string> defined_functions(const std::vector<Symbol>& symbols) {
  std::vector<std::string> out;
  for (const auto& s : symbols) {
    if (s.defined && s.type == SymbolType::func && !s.name.empty()) out.push_back(s.name);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace helix::elf
