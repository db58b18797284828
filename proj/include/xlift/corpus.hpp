#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace xlift {

/// Tokenized text: one token sequence per non-empty input line.
struct Corpus {
  std::vector<std::vector<std::string>> lines;
  std::string lang;
  std::string domain;
  /// Line indices marking document starts; starts with 0, strictly
  /// increasing, all < lines.size(). Absent for plain line streams.
  std::optional<std::vector<std::size_t>> doc_bounds;

  std::size_t size() const { return lines.size(); }
};

/// Bag-of-words per document, the unit of the corpus-similarity score.
struct DocumentSet {
  std::vector<std::map<std::string, std::int64_t>> docs;
  std::string lang;
  std::string domain;

  std::size_t size() const { return docs.size(); }
};

/// How to carve a line stream into documents.
struct SegmentPolicy {
  enum class Kind { native, block };
  Kind kind = Kind::block;
  std::size_t block_lines = 20;

  static SegmentPolicy native() { return {Kind::native, 0}; }
  static SegmentPolicy block(std::size_t n) { return {Kind::block, n}; }
  std::string str() const;
};

/// Lowercase a line and split it on whitespace, with every punctuation
/// character isolated as its own token. Bytes >= 0x80 (UTF-8 continuation
/// and lead bytes) pass through untouched and never count as punctuation.
std::vector<std::string> tokenize(const std::string& line);

/// Read a UTF-8 text file, one record per line; empty lines are skipped.
/// bounds_path, if non-empty, names a sidecar file of 0-based document-start
/// line indices (one per row, sorted, first entry 0) over the kept lines.
Corpus load_corpus(const std::string& path, const std::string& lang,
                   const std::string& domain,
                   const std::string& bounds_path = "");

/// Write one space-joined line per row (inverse of load_corpus up to
/// tokenization, which is idempotent).
void save_corpus(const Corpus& c, const std::string& path);

/// Uniform sample without replacement of min(n, |c|) lines, original order
/// preserved. Deterministic per seed. doc_bounds are dropped.
Corpus sample_lines(const Corpus& c, std::size_t n, std::uint64_t seed);

/// Union of both line multisets in a uniformly shuffled order; tags join as
/// "a+b". The joint pre-training input. doc_bounds are dropped.
Corpus concat_shuffle(const Corpus& a, const Corpus& b, std::uint64_t seed);

/// Carve the corpus into documents per the policy and bag each one.
DocumentSet segment_documents(const Corpus& c, const SegmentPolicy& policy);

}  // namespace xlift
