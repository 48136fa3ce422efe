#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pixi/common/random.hpp"
#include "pixi/content/catalog.hpp"

namespace pixi::content {

inline constexpr std::size_t kMaxExcerptWords = 50;

struct Excerpt {
  std::string item_id;
  std::size_t start_index = 0;
  std::vector<std::string> words;
  std::optional<std::size_t> required_keyword_position;

  friend bool operator==(const Excerpt&, const Excerpt&) = default;
};

// A window of min(50, text length) words with a uniformly drawn start.
Excerpt random_excerpt(const ContentItem& item, RandomStream& rng);

// A window containing one occurrence of `keyword` (normalized comparison).
// The occurrence is uniform over all occurrences and the window uniform over
// those covering it. Throws NotFound when the keyword is absent.
Excerpt excerpt_containing(const ContentItem& item, std::string_view keyword, RandomStream& rng);

// Same as above with precomputed occurrence positions (e.g. from a Catalog index).
Excerpt excerpt_containing(const ContentItem& item, std::span<const std::size_t> occurrences,
                           RandomStream& rng);

}  // namespace pixi::content
