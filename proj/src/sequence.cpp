#include "escot/sequence.hpp"

#include <cctype>
#include <fstream>
#include <random>
#include <sstream>

namespace escot {

Alphabet::Alphabet(const std::string& symbols) {
  if (symbols.size() < 2 || symbols.size() > 256)
    throw InvalidParameter("alphabet must have between 2 and 256 symbols");
  lookup_.fill(-1);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    char up = static_cast<char>(std::toupper(static_cast<unsigned char>(symbols[i])));
    if (lookup_[static_cast<unsigned char>(up)] >= 0)
      throw InvalidParameter("duplicate alphabet symbol");
    lookup_[static_cast<unsigned char>(up)] = static_cast<int>(i);
    symbols_.push_back(up);
  }
}

const Alphabet& Alphabet::dna() {
  static const Alphabet a("ACGT");
  return a;
}

char Alphabet::symbol_of(std::uint8_t code) const {
  if (code >= symbols_.size()) throw CodeOutOfRange("symbol code " + std::to_string(code));
  return symbols_[code];
}

EncodedSequence encode(const std::string& text, const Alphabet& alphabet, std::string id) {
  if (text.empty()) throw InvalidParameter("empty sequence");
  EncodedSequence seq;
  seq.id = std::move(id);
  seq.codes.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char up = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
    int code = alphabet.code_of(up);
    if (code < 0) throw UnknownSymbol(i, text[i]);
    seq.codes.push_back(static_cast<std::uint8_t>(code));
  }
  return seq;
}

std::string decode(const EncodedSequence& seq, const Alphabet& alphabet) {
  std::string out;
  out.reserve(seq.codes.size());
  for (auto code : seq.codes) out.push_back(alphabet.symbol_of(code));
  return out;
}

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

SequenceFormat sniff(std::istream& in) {
  return in.peek() == '>' ? SequenceFormat::Fasta : SequenceFormat::PlainLines;
}

SequenceDatabase parse_plain(std::istream& in, const Alphabet& alphabet) {
  SequenceDatabase db;
  db.alphabet = alphabet;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    try {
      db.entries.push_back(encode(line, alphabet, std::to_string(lineno)));
    } catch (const UnknownSymbol& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return db;
}

SequenceDatabase parse_fasta(std::istream& in, const Alphabet& alphabet) {
  SequenceDatabase db;
  db.alphabet = alphabet;
  std::string line, id, body;
  std::size_t lineno = 0, record_line = 0;
  auto finish = [&] {
    if (id.empty() && body.empty()) return;
    if (id.empty()) throw ParseError(record_line, "sequence data before first FASTA header");
    if (body.empty()) throw ParseError(record_line, "FASTA record '" + id + "' has no sequence");
    try {
      db.entries.push_back(encode(body, alphabet, id));
    } catch (const UnknownSymbol& e) {
      throw ParseError(record_line, e.what());
    }
    id.clear();
    body.clear();
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (line[0] == '>') {
      finish();
      std::istringstream header(line.substr(1));
      header >> id;
      if (id.empty()) throw ParseError(lineno, "empty FASTA header");
      record_line = lineno;
    } else {
      if (id.empty()) throw ParseError(lineno, "sequence data before first FASTA header");
      body += line;
    }
  }
  finish();
  return db;
}

void check_unique_ids(const SequenceDatabase& db) {
  for (std::size_t i = 0; i < db.entries.size(); ++i)
    for (std::size_t j = i + 1; j < db.entries.size(); ++j)
      if (db.entries[i].id == db.entries[j].id)
        throw ParseError("duplicate sequence id '" + db.entries[i].id + "'");
}

}  // namespace

SequenceDatabase load_database(const std::filesystem::path& path, SequenceFormat format,
                               const Alphabet& alphabet) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  if (format == SequenceFormat::Auto) format = sniff(in);
  SequenceDatabase db =
      format == SequenceFormat::Fasta ? parse_fasta(in, alphabet) : parse_plain(in, alphabet);
  if (db.entries.empty()) throw ParseError("empty input: " + path.string());
  check_unique_ids(db);
  return db;
}

void save_database(const SequenceDatabase& db, const std::filesystem::path& path,
                   SequenceFormat format) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  for (const auto& entry : db.entries) {
    if (format == SequenceFormat::Fasta) out << '>' << entry.id << '\n';
    out << decode(entry, db.alphabet) << '\n';
  }
}

EncodedSequence load_sequence(const std::filesystem::path& path, SequenceFormat format,
                              const Alphabet& alphabet) {
  return load_database(path, format, alphabet).entries.front();
}

EncodedSequence mutate_sequence(const EncodedSequence& base, double mutation_rate,
                                std::uint64_t seed, const Alphabet& alphabet, std::string id) {
  if (mutation_rate < 0.0 || mutation_rate > 1.0)
    throw InvalidParameter("mutation_rate must be in [0,1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(alphabet.size()) - 1);

  EncodedSequence out;
  out.id = std::move(id);
  out.codes.reserve(base.codes.size() + 8);
  for (std::uint8_t c : base.codes) {
    if (coin(rng) >= mutation_rate) {
      out.codes.push_back(c);
      continue;
    }
    double op = coin(rng);
    if (op < 0.8) {
      // substitution with a different symbol
      std::uint8_t repl;
      do {
        repl = static_cast<std::uint8_t>(pick(rng));
      } while (repl == c && alphabet.size() > 1);
      out.codes.push_back(repl);
    } else if (op < 0.9) {
      out.codes.push_back(static_cast<std::uint8_t>(pick(rng)));  // insertion
      out.codes.push_back(c);
    }  // else deletion: drop c
  }
  if (out.codes.empty()) out.codes.push_back(base.codes.front());
  return out;
}

SyntheticDataset generate_synthetic_dataset(std::size_t count, std::size_t length,
                                            double mutation_rate, std::uint64_t seed,
                                            const Alphabet& alphabet) {
  if (count == 0 || length == 0) throw InvalidParameter("count and length must be positive");
  if (mutation_rate < 0.0 || mutation_rate > 1.0)
    throw InvalidParameter("mutation_rate must be in [0,1]");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(alphabet.size()) - 1);

  SyntheticDataset ds;
  ds.ancestor.id = "ancestor";
  ds.ancestor.codes.reserve(length);
  for (std::size_t i = 0; i < length; ++i)
    ds.ancestor.codes.push_back(static_cast<std::uint8_t>(pick(rng)));

  ds.database.alphabet = alphabet;
  ds.database.entries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t entry_seed = rng();
    ds.database.entries.push_back(
        mutate_sequence(ds.ancestor, mutation_rate, entry_seed, alphabet, std::to_string(i + 1)));
  }
  return ds;
}

SequenceDatabase generate_synthetic(std::size_t count, std::size_t length, double mutation_rate,
                                    std::uint64_t seed, const Alphabet& alphabet) {
  return generate_synthetic_dataset(count, length, mutation_rate, seed, alphabet).database;
}

}  // namespace escot
