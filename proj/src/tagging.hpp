#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpus.hpp"

namespace absa {

struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive, scalar values

  friend bool operator==(const Token&, const Token&) = default;
};

// The index order (O, B, I) is shared by every probability vector.
enum class BioTag { O = 0, B = 1, I = 2 };
inline constexpr std::size_t kNumTags = 3;

// "O", "B-ASPECT", "I-ASPECT"
std::string_view tag_name(BioTag tag);
std::optional<BioTag> tag_from_name(std::string_view name);

struct TaggedSequence {
  std::vector<Token> tokens;
  std::vector<BioTag> tags;
};

// Maximal runs of word characters form tokens; every other non-space
// character (hyphens included) is a token of its own.
std::vector<Token> tokenize(std::string_view text);

// True if the token is a run of word characters rather than punctuation.
bool is_word_token(const Token& token);

enum class AlignmentPolicy { WarnAndCover, Strict };

// Tags the first token intersecting each span B, later intersecting tokens I.
// A span edge inside a token tags the whole token and warns, or throws
// ValidationError under AlignmentPolicy::Strict.
TaggedSequence encode_bio(const Review& review, std::vector<Token> tokens,
                          AlignmentPolicy policy = AlignmentPolicy::WarnAndCover,
                          const WarningSink& warn = {});

// Every maximal B I* run becomes one span covering its tokens; the term is
// the text between the first token start and last token end. Unrepaired
// stray I tags are ignored.
std::vector<AspectSpan> decode_bio(std::string_view text, const TaggedSequence& seq);

// Rewrites any I that does not follow B or I into B.
std::vector<BioTag> repair_bio(std::vector<BioTag> tags);
bool is_well_formed(const std::vector<BioTag>& tags);

// CoNLL-style export: "token\ttag" per line, blank line between sequences.
void write_conll(std::ostream& out, const std::vector<TaggedSequence>& seqs,
                 const json& header = nullptr);
// Reads the same format. Token offsets are not stored in the file; they are
// assigned as if tokens were separated by single spaces.
std::vector<TaggedSequence> read_conll(std::istream& in);

}  // namespace absa
