#include "gtr/point.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <mutex>

#include "gtr/errors.hpp"

namespace gtr {

Point parse_point(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "inf" || t == "oo" || t == "infinity" || t == "\xe2\x88\x9e") return Point::infinity();
  return Point::finite(parse_rational(t));
}

namespace {

struct Registry {
  std::mutex mu;
  std::map<Point, std::uint8_t> ids;
  std::deque<Point> points;  // stable references
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

std::uint8_t point_id(const Point& p) {
  Registry& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  auto it = r.ids.find(p);
  if (it != r.ids.end()) return it->second;
  if (r.points.size() >= 255) fail(ErrorKind::Internal, "too many distinct points");
  r.points.push_back(p);
  auto id = static_cast<std::uint8_t>(r.points.size());
  r.ids.emplace(p, id);
  return id;
}

const Point& point_of(std::uint8_t id) {
  Registry& r = registry();
  std::lock_guard<std::mutex> lock(r.mu);
  if (id == 0 || id > r.points.size()) fail(ErrorKind::Internal, "unknown point id");
  return r.points[id - 1];
}

}  // namespace gtr
