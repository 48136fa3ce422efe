#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pixi/common/random.hpp"

namespace pixi::content {

enum class Category { Books, Movies, Images };

inline constexpr std::array<Category, 3> kAllCategories{Category::Books, Category::Movies,
                                                        Category::Images};

std::string_view to_string(Category category);
Category parse_category(std::string_view name);

struct ContentItem {
  std::string item_id;
  Category category = Category::Books;
  std::string title;
  std::string cover_ref;
  std::vector<std::string> text_source;
};

// Maps a normalized word to the ascending word offsets where it occurs.
using WordIndex = std::unordered_map<std::string, std::vector<std::size_t>>;

// Immutable after construction; safe to share across request handlers.
class Catalog {
public:
  Catalog() = default;

  // Validates unique ids and non-empty text, then builds per-item indexes.
  static Catalog from_items(std::vector<ContentItem> items);

  std::size_t size() const { return items_.size(); }
  std::span<const ContentItem> all() const { return items_; }

  const ContentItem* find(std::string_view item_id) const;
  // Throws NotFound.
  const ContentItem& at(std::string_view item_id) const;

  // Items of one category, ordered by item_id.
  std::vector<const ContentItem*> items(Category category) const;
  std::size_t count(Category category) const;

  const WordIndex& word_index(std::string_view item_id) const;
  // Positions of a normalized word in an item; empty when absent.
  std::span<const std::size_t> occurrences(std::string_view item_id,
                                           std::string_view normalized) const;

private:
  std::vector<ContentItem> items_;
  std::unordered_map<std::string, std::size_t> by_id_;
  std::array<std::vector<std::size_t>, 3> by_category_;
  std::vector<WordIndex> indexes_;
};

WordIndex build_word_index(const std::vector<std::string>& words);

// Reads `catalog.json` under root_path plus the referenced text files.
Catalog load_catalog(const std::filesystem::path& root_path);

inline constexpr std::size_t kItemsPerPage = 20;

// The user's fixed page of suggested items: n distinct items of `category`,
// a pure function of (catalog, user_id, category, n, server_seed).
std::vector<const ContentItem*> items_for_user(const Catalog& catalog,
                                               std::string_view user_id, Category category,
                                               std::size_t n, std::uint64_t server_seed);

// Autocomplete search. Items whose case-folded title contains the normalized
// prefix, ranked by word-start match, then title length, then item_id.
std::vector<const ContentItem*> search_items(const Catalog& catalog, Category category,
                                             std::string_view prefix);

}  // namespace pixi::content
