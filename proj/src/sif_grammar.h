#pragma once

// Grammar helpers shared by the validator and the segmenter.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sifkit::grammar {

// A $..$ region; `close` is the index of the closing '$' or npos when the
// region runs off the end of the input.
struct Region {
  std::size_t open = 0;
  std::size_t close = 0;
};

// Greedy left-to-right pairing of dollars. Inside a region a backslash
// escapes the following byte, so "\$" does not close it.
std::vector<Region> math_regions(std::string_view s);

enum class BodyKind { Formula, Blank, Choice, Sep, Tag, FigureId, FigureBase64, FormFigureId };

struct BodyClass {
  BodyKind kind = BodyKind::Formula;
  std::string payload;  // tag name or figure payload
};

// Classifies the body of a region that passed validation.
BodyClass classify(std::string_view body);

}  // namespace sifkit::grammar
