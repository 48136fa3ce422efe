#include "pixi/content/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pixi/common/error.hpp"
#include "pixi/content/text.hpp"

namespace pixi::content {

namespace {

std::size_t category_slot(Category category) { return static_cast<std::size_t>(category); }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool is_word_boundary(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && !std::isalnum(u);
}

}  // namespace

std::string_view to_string(Category category) {
  switch (category) {
    case Category::Books: return "books";
    case Category::Movies: return "movies";
    case Category::Images: return "images";
  }
  return "books";
}

Category parse_category(std::string_view name) {
  const auto folded = case_fold(name);
  if (folded == "books") return Category::Books;
  if (folded == "movies") return Category::Movies;
  if (folded == "images") return Category::Images;
  throw Error(ErrorCode::InvalidArgument, "unknown category '" + std::string(name) + "'");
}

WordIndex build_word_index(const std::vector<std::string>& words) {
  WordIndex index;
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto key = normalize_word(words[i]);
    if (key.empty()) continue;
    index[std::move(key)].push_back(i);
  }
  return index;
}

Catalog Catalog::from_items(std::vector<ContentItem> items) {
  Catalog catalog;
  catalog.items_ = std::move(items);
  catalog.indexes_.reserve(catalog.items_.size());
  for (std::size_t i = 0; i < catalog.items_.size(); ++i) {
    const auto& item = catalog.items_[i];
    if (item.item_id.empty()) throw Error(ErrorCode::InvalidArgument, "item with empty id");
    if (item.text_source.empty()) {
      throw Error(ErrorCode::InvalidArgument, "item '" + item.item_id + "' has empty text");
    }
    if (!catalog.by_id_.emplace(item.item_id, i).second) {
      throw Error(ErrorCode::Conflict, "duplicate item id '" + item.item_id + "'");
    }
    catalog.by_category_[category_slot(item.category)].push_back(i);
    catalog.indexes_.push_back(build_word_index(item.text_source));
  }
  for (auto& slot : catalog.by_category_) {
    std::sort(slot.begin(), slot.end(), [&](std::size_t a, std::size_t b) {
      return catalog.items_[a].item_id < catalog.items_[b].item_id;
    });
  }
  return catalog;
}

const ContentItem* Catalog::find(std::string_view item_id) const {
  const auto it = by_id_.find(std::string(item_id));
  return it == by_id_.end() ? nullptr : &items_[it->second];
}

const ContentItem& Catalog::at(std::string_view item_id) const {
  const auto* item = find(item_id);
  if (!item) throw Error(ErrorCode::NotFound, "unknown item '" + std::string(item_id) + "'");
  return *item;
}

std::vector<const ContentItem*> Catalog::items(Category category) const {
  std::vector<const ContentItem*> out;
  for (auto i : by_category_[category_slot(category)]) out.push_back(&items_[i]);
  return out;
}

std::size_t Catalog::count(Category category) const {
  return by_category_[category_slot(category)].size();
}

const WordIndex& Catalog::word_index(std::string_view item_id) const {
  const auto it = by_id_.find(std::string(item_id));
  if (it == by_id_.end()) {
    throw Error(ErrorCode::NotFound, "unknown item '" + std::string(item_id) + "'");
  }
  return indexes_[it->second];
}

std::span<const std::size_t> Catalog::occurrences(std::string_view item_id,
                                                  std::string_view normalized) const {
  const auto& index = word_index(item_id);
  const auto it = index.find(std::string(normalized));
  if (it == index.end()) return {};
  return it->second;
}

Catalog load_catalog(const std::filesystem::path& root_path) {
  const auto manifest_path = root_path / "catalog.json";
  if (!std::filesystem::exists(manifest_path)) {
    throw Error(ErrorCode::NotFound, "missing catalog manifest " + manifest_path.string());
  }
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, "catalog manifest: " + std::string(e.what()));
  }
  if (!manifest.is_array()) throw Error(ErrorCode::Parse, "catalog manifest must be an array");

  std::vector<ContentItem> items;
  items.reserve(manifest.size());
  for (const auto& entry : manifest) {
    ContentItem item;
    try {
      item.item_id = entry.at("item_id").get<std::string>();
      item.category = parse_category(entry.at("category").get<std::string>());
      item.title = entry.at("title").get<std::string>();
      item.cover_ref = entry.value("cover", std::string{});
      const auto text_path = root_path / entry.at("text").get<std::string>();
      if (!std::filesystem::exists(text_path)) {
        throw Error(ErrorCode::NotFound, "item '" + item.item_id + "' references missing text " +
                                             text_path.filename().string());
      }
      item.text_source = tokenize(read_file(text_path));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Parse, "catalog entry: " + std::string(e.what()));
    }
    if (item.text_source.empty()) {
      throw Error(ErrorCode::InvalidArgument, "item '" + item.item_id + "' has empty text");
    }
    items.push_back(std::move(item));
  }
  return Catalog::from_items(std::move(items));
}

std::vector<const ContentItem*> items_for_user(const Catalog& catalog, std::string_view user_id,
                                               Category category, std::size_t n,
                                               std::uint64_t server_seed) {
  auto pool = catalog.items(category);
  if (pool.size() < n) {
    throw Error(ErrorCode::InvalidArgument,
                "category " + std::string(to_string(category)) + " has " +
                    std::to_string(pool.size()) + " items, fewer than " + std::to_string(n));
  }
  std::string key = "items|";
  key += to_string(category);
  key += '|';
  key += user_id;
  RandomStream rng(keyed_hash(server_seed, key));
  // Partial Fisher-Yates: the first n slots end up a uniform ordered sample.
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + rng.uniform_index(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  return pool;
}

std::vector<const ContentItem*> search_items(const Catalog& catalog, Category category,
                                             std::string_view prefix) {
  const auto needle = normalize_word(prefix);
  if (needle.empty()) return {};

  struct Hit {
    const ContentItem* item;
    bool word_start;
    std::size_t length;
  };
  std::vector<Hit> hits;
  for (const auto* item : catalog.items(category)) {
    const auto title = case_fold(item->title);
    bool found = false;
    bool word_start = false;
    for (auto pos = title.find(needle); pos != std::string::npos;
         pos = title.find(needle, pos + 1)) {
      found = true;
      if (pos == 0 || is_word_boundary(title[pos - 1])) {
        word_start = true;
        break;
      }
    }
    if (found) hits.push_back({item, word_start, utf8_length(item->title)});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.word_start != b.word_start) return a.word_start;
    if (a.length != b.length) return a.length < b.length;
    return a.item->item_id < b.item->item_id;
  });
  std::vector<const ContentItem*> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(h.item);
  return out;
}

}  // namespace pixi::content
