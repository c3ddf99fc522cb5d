#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace helix::elf {

enum class Binding : std::uint8_t { local = 0, global = 1, weak = 2, other = 255 };
enum class SymbolType : std::uint8_t { notype = 0, object = 1, func = 2, section = 3, file = 4, ifunc = 10, other = 255 };

struct Symbol {
  std::string name;
  Binding binding = Binding::local;
  SymbolType type = SymbolType::notype;
  bool defined = false;  // st_shndx != SHN_UNDEF
  bool common = false;   // st_shndx == SHN_COMMON
};

enum class FileType { relocatable, executable, shared, other };

struct ObjectFile {
  FileType type = FileType::other;
  std::vector<Symbol> symbols;  // .symtab; empty if the file was stripped
};

// Parses the ELF header and static symbol table. Accepts ELF32/ELF64 in either
// byte order. Throws helix::Error on malformed input.
ObjectFile parse_object(std::span<const std::uint8_t> data);
ObjectFile read_object(const std::filesystem::path& path);

bool is_elf(std::span<const std::uint8_t> data);

struct Member {
  std::string name;
  ObjectFile object;
};

struct Archive {
  std::vector<std::string> index;  // names from the `/` or `/SYM64/` symbol index
  std::vector<Member> members;     // ELF members in archive order
};

// Reads a System V / GNU `ar` archive. Thin archives and non-ELF members are
// rejected with helix::Error("bad archive: ...").
Archive parse_archive(std::span<const std::uint8_t> data);
Archive read_archive(const std::filesystem::path& path);

// Defined function-typed symbols (any binding) across the given symbols.
std::vector<std::string> defined_functions(const std::vector<Symbol>& symbols);

}  // namespace helix::elf
