#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "escot/errors.hpp"

namespace escot {

// Finite symbol set; the position of a symbol is its code, and the set
// size is the n of the 1-out-of-n transfers.
class Alphabet {
 public:
  explicit Alphabet(const std::string& symbols);
  static const Alphabet& dna();  // {A,C,G,T}, n=4

  std::size_t size() const { return symbols_.size(); }
  char symbol_of(std::uint8_t code) const;
  bool contains(char c) const { return lookup_[static_cast<unsigned char>(c)] >= 0; }
  // -1 when absent.
  int code_of(char c) const { return lookup_[static_cast<unsigned char>(c)]; }
  const std::string& symbols() const { return symbols_; }

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::string symbols_;
  std::array<int, 256> lookup_;
};

struct EncodedSequence {
  std::string id;
  std::vector<std::uint8_t> codes;

  std::size_t length() const { return codes.size(); }
};

// Lowercase input is uppercased; anything outside the alphabet (including
// 'N' and other ambiguity codes) raises UnknownSymbol.
EncodedSequence encode(const std::string& text, const Alphabet& alphabet, std::string id = {});
std::string decode(const EncodedSequence& seq, const Alphabet& alphabet);

struct SequenceDatabase {
  Alphabet alphabet = Alphabet::dna();
  std::vector<EncodedSequence> entries;

  std::size_t size() const { return entries.size(); }
};

enum class SequenceFormat {
  PlainLines,  // one uppercase sequence per line, LF or CRLF
  Fasta,       // '>' header lines; header's first token is the id
  Auto,        // sniff: leading '>' selects FASTA
};

SequenceDatabase load_database(const std::filesystem::path& path,
                               SequenceFormat format = SequenceFormat::Auto,
                               const Alphabet& alphabet = Alphabet::dna());
void save_database(const SequenceDatabase& db, const std::filesystem::path& path,
                   SequenceFormat format = SequenceFormat::PlainLines);
// First record of the file.
EncodedSequence load_sequence(const std::filesystem::path& path,
                              SequenceFormat format = SequenceFormat::Auto,
                              const Alphabet& alphabet = Alphabet::dna());

struct SyntheticDataset {
  EncodedSequence ancestor;  // per-entry mutation source; natural query material
  SequenceDatabase database;
};

// Deterministic in all arguments including seed. Entries are independent
// mutations (sub/ins/del) of one random ancestor, so edit distances to the
// ancestor cluster near length*mutation_rate. Entry ids are "1".."count".
SyntheticDataset generate_synthetic_dataset(std::size_t count, std::size_t length,
                                            double mutation_rate, std::uint64_t seed,
                                            const Alphabet& alphabet = Alphabet::dna());
SequenceDatabase generate_synthetic(std::size_t count, std::size_t length, double mutation_rate,
                                    std::uint64_t seed, const Alphabet& alphabet = Alphabet::dna());

// One mutation pass over `base` at the given per-position rate; exposed for
// building mixed-distance databases.
EncodedSequence mutate_sequence(const EncodedSequence& base, double mutation_rate,
                                std::uint64_t seed, const Alphabet& alphabet, std::string id);

}  // namespace escot
