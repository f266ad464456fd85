#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sciret {

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// A posting venue. The five tracked venues form a closed set; anything else
// is carried as Other(name) with a lowercased, non-empty name.
class Platform {
 public:
  enum class Kind { Blog, Facebook, News, Twitter, Wikipedia, Other };

  Platform() = default;
  Platform(Kind kind) : kind_(kind) {}  // NOLINT(google-explicit-constructor)

  static Platform other(std::string_view name) {
    std::string lowered = to_lower_ascii(name);
    if (lowered.empty()) throw std::invalid_argument("Other platform name must be non-empty");
    Platform p(Kind::Other);
    p.other_ = std::move(lowered);
    return p;
  }

  // Case-insensitive; accepts singular and plural spellings of the tracked
  // venues. Unknown names map to Other(name).
  static Platform parse(std::string_view name) {
    const std::string n = to_lower_ascii(name);
    if (n == "blog" || n == "blogs") return Kind::Blog;
    if (n == "facebook") return Kind::Facebook;
    if (n == "news") return Kind::News;
    if (n == "twitter" || n == "tweet" || n == "tweets") return Kind::Twitter;
    if (n == "wikipedia" || n == "wiki") return Kind::Wikipedia;
    return other(n);
  }

  Kind kind() const { return kind_; }
  bool is_other() const { return kind_ == Kind::Other; }

  std::string name() const {
    switch (kind_) {
      case Kind::Blog: return "Blog";
      case Kind::Facebook: return "Facebook";
      case Kind::News: return "News";
      case Kind::Twitter: return "Twitter";
      case Kind::Wikipedia: return "Wikipedia";
      case Kind::Other: return other_;
    }
    return other_;
  }

  friend bool operator==(const Platform&, const Platform&) = default;
  friend std::strong_ordering operator<=>(const Platform& a, const Platform& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.other_.compare(b.other_) <=> 0;
  }

 private:
  Kind kind_ = Kind::Twitter;
  std::string other_;
};

inline constexpr Platform::Kind kTrackedPlatforms[] = {
    Platform::Kind::Blog, Platform::Kind::Facebook, Platform::Kind::News,
    Platform::Kind::Twitter, Platform::Kind::Wikipedia};

}  // namespace sciret
