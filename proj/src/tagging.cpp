#include "tagging.hpp"

#include <istream>
#include <ostream>

#include "utf8.hpp"

namespace absa {

std::string_view tag_name(BioTag tag) {
  switch (tag) {
    case BioTag::O: return "O";
    case BioTag::B: return "B-ASPECT";
    case BioTag::I: return "I-ASPECT";
  }
  return "O";
}

std::optional<BioTag> tag_from_name(std::string_view name) {
  if (name == "O") return BioTag::O;
  if (name == "B-ASPECT") return BioTag::B;
  if (name == "I-ASPECT") return BioTag::I;
  return std::nullopt;
}

std::vector<Token> tokenize(std::string_view text) {
  const auto cps = utf8::decode(text);
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    if (utf8::is_space(cps[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (utf8::is_word(cps[i])) {
      while (j < cps.size() && utf8::is_word(cps[j])) ++j;
    }
    tokens.push_back(
        {utf8::encode(std::u32string_view(cps).substr(i, j - i)), i, j});
    i = j;
  }
  return tokens;
}

bool is_word_token(const Token& token) {
  const auto cps = utf8::decode(token.text);
  return !cps.empty() && utf8::is_word(cps.front());
}

TaggedSequence encode_bio(const Review& review, std::vector<Token> tokens,
                          AlignmentPolicy policy, const WarningSink& warn) {
  TaggedSequence seq{std::move(tokens), {}};
  seq.tags.assign(seq.tokens.size(), BioTag::O);
  for (const auto& span : review.spans) {
    bool first = true;
    bool start_aligned = false, end_aligned = false;
    for (std::size_t t = 0; t < seq.tokens.size(); ++t) {
      const auto& tok = seq.tokens[t];
      if (tok.start == span.start) start_aligned = true;
      if (tok.end == span.end) end_aligned = true;
      if (tok.end <= span.start || tok.start >= span.end) continue;
      seq.tags[t] = first ? BioTag::B : BioTag::I;
      first = false;
    }
    if (first) {
      // Span covers whitespace only; nothing to tag.
      const std::string msg = "span '" + span.term + "' at [" +
                              std::to_string(span.start) + "," +
                              std::to_string(span.end) + ") covers no token";
      if (policy == AlignmentPolicy::Strict) throw ValidationError(msg);
      emit(warn, msg);
      continue;
    }
    if (!start_aligned || !end_aligned) {
      const std::string msg = "span '" + span.term + "' at [" +
                              std::to_string(span.start) + "," +
                              std::to_string(span.end) +
                              ") does not align with token boundaries";
      if (policy == AlignmentPolicy::Strict) throw ValidationError(msg);
      emit(warn, msg + "; whole tokens tagged");
    }
  }
  return seq;
}

std::vector<AspectSpan> decode_bio(std::string_view text, const TaggedSequence& seq) {
  if (seq.tags.size() != seq.tokens.size()) {
    throw ValidationError("tag count does not match token count");
  }
  std::vector<AspectSpan> spans;
  std::optional<std::size_t> run_start;
  std::size_t run_end = 0;
  auto flush = [&] {
    if (!run_start) return;
    spans.push_back({utf8::substr(text, *run_start, run_end), *run_start, run_end,
                     std::nullopt});
    run_start.reset();
  };
  for (std::size_t t = 0; t < seq.tags.size(); ++t) {
    switch (seq.tags[t]) {
      case BioTag::B:
        flush();
        run_start = seq.tokens[t].start;
        run_end = seq.tokens[t].end;
        break;
      case BioTag::I:
        if (run_start) run_end = seq.tokens[t].end;
        break;
      case BioTag::O:
        flush();
        break;
    }
  }
  flush();
  return spans;
}

std::vector<BioTag> repair_bio(std::vector<BioTag> tags) {
  BioTag prev = BioTag::O;
  for (auto& tag : tags) {
    if (tag == BioTag::I && prev == BioTag::O) tag = BioTag::B;
    prev = tag;
  }
  return tags;
}

bool is_well_formed(const std::vector<BioTag>& tags) {
  BioTag prev = BioTag::O;
  for (auto tag : tags) {
    if (tag == BioTag::I && prev == BioTag::O) return false;
    prev = tag;
  }
  return true;
}

void write_conll(std::ostream& out, const std::vector<TaggedSequence>& seqs,
                 const json& header) {
  write_header(out, header);
  for (std::size_t s = 0; s < seqs.size(); ++s) {
    if (s > 0) out << '\n';
    const auto& seq = seqs[s];
    for (std::size_t t = 0; t < seq.tokens.size(); ++t) {
      out << seq.tokens[t].text << '\t' << tag_name(seq.tags[t]) << '\n';
    }
  }
}

std::vector<TaggedSequence> read_conll(std::istream& in) {
  std::vector<TaggedSequence> seqs;
  TaggedSequence current;
  std::size_t offset = 0;
  bool open = false;
  std::string line;
  std::size_t line_no = 0;
  auto finish = [&] {
    if (open) seqs.push_back(std::move(current));
    current = {};
    offset = 0;
    open = false;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') continue;
    if (line.empty()) {
      finish();
      continue;
    }
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw ValidationError("line " + std::to_string(line_no) +
                            ": expected token<TAB>tag");
    }
    const auto tag = tag_from_name(std::string_view(line).substr(tab + 1));
    if (!tag) {
      throw ValidationError("line " + std::to_string(line_no) + ": unknown tag '" +
                            line.substr(tab + 1) + "'");
    }
    std::string text = line.substr(0, tab);
    const std::size_t len = utf8::length(text);
    current.tokens.push_back({std::move(text), offset, offset + len});
    current.tags.push_back(*tag);
    offset += len + 1;
    open = true;
  }
  finish();
  return seqs;
}

}  // namespace absa
