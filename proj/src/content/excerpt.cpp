#include "pixi/content/excerpt.hpp"

#include <algorithm>

#include "pixi/common/error.hpp"
#include "pixi/content/text.hpp"

namespace pixi::content {

namespace {

Excerpt window(const ContentItem& item, std::size_t start, std::size_t length) {
  Excerpt e;
  e.item_id = item.item_id;
  e.start_index = start;
  e.words.assign(item.text_source.begin() + static_cast<std::ptrdiff_t>(start),
                 item.text_source.begin() + static_cast<std::ptrdiff_t>(start + length));
  return e;
}

}  // namespace

Excerpt random_excerpt(const ContentItem& item, RandomStream& rng) {
  const auto n = item.text_source.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "item '" + item.item_id + "' has no text");
  const auto length = std::min(kMaxExcerptWords, n);
  const auto start = rng.uniform_index(n - length + 1);
  return window(item, start, length);
}

Excerpt excerpt_containing(const ContentItem& item, std::span<const std::size_t> occurrences,
                           RandomStream& rng) {
  if (occurrences.empty()) {
    throw Error(ErrorCode::NotFound, "keyword does not occur in item '" + item.item_id + "'");
  }
  const auto n = item.text_source.size();
  const auto length = std::min(kMaxExcerptWords, n);
  const auto position = occurrences[rng.uniform_index(occurrences.size())];
  if (position >= n) throw Error(ErrorCode::Internal, "occurrence outside item text");

  // Starts s with s <= position < s + length and s + length <= n.
  const auto lowest = position + 1 >= length ? position + 1 - length : 0;
  const auto highest = std::min(position, n - length);
  const auto start = lowest + rng.uniform_index(highest - lowest + 1);

  auto e = window(item, start, length);
  e.required_keyword_position = position - start;
  return e;
}

Excerpt excerpt_containing(const ContentItem& item, std::string_view keyword, RandomStream& rng) {
  const auto key = normalize_word(keyword);
  std::vector<std::size_t> positions;
  if (!key.empty()) {
    for (std::size_t i = 0; i < item.text_source.size(); ++i) {
      if (normalize_word(item.text_source[i]) == key) positions.push_back(i);
    }
  }
  if (positions.empty()) {
    throw Error(ErrorCode::NotFound, "keyword '" + std::string(keyword) +
                                         "' does not occur in item '" + item.item_id + "'");
  }
  return excerpt_containing(item, positions, rng);
}

}  // namespace pixi::content
