#include "osid/interval_set.hpp"

#include <algorithm>

#include "osid/errors.hpp"

namespace osid {

bool Interval::valid() const {
  if (lo < 0) return false;
  if (!hi) return true;
  if (lo < *hi) return true;
  return lo == *hi && lo_closed && hi_closed;
}

bool Interval::contains(const Rat& v) const {
  if (v < lo || (v == lo && !lo_closed)) return false;
  if (!hi) return true;
  if (v > *hi || (v == *hi && !hi_closed)) return false;
  return true;
}

std::string Interval::str() const {
  std::string s = lo_closed ? "[" : "(";
  s += rat_str(lo);
  s += "..";
  if (hi) {
    s += rat_str(*hi);
    s += hi_closed ? "]" : ")";
  } else {
    s += "inf)";
  }
  return s;
}

namespace {

// True when a and the interval starting right after it form one connected
// set: overlap, or touching endpoints with at least one side closed.
bool connects(const Interval& a, const Interval& b) {
  if (!a.hi) return true;
  if (b.lo < *a.hi) return true;
  if (b.lo > *a.hi) return false;
  return a.hi_closed || b.lo_closed;
}

Interval merged(const Interval& a, const Interval& b) {
  Interval out = a;
  if (!b.hi) {
    out.hi.reset();
    out.hi_closed = false;
  } else if (a.hi && (*b.hi > *a.hi || (*b.hi == *a.hi && b.hi_closed))) {
    out.hi = b.hi;
    out.hi_closed = b.hi_closed;
  }
  return out;
}

}  // namespace

RationalIntervalSet RationalIntervalSet::of(std::vector<Interval> parts) {
  for (const Interval& iv : parts)
    if (!iv.valid()) throw ConfigError("invalid interval " + iv.str());
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  RationalIntervalSet out;
  for (Interval& iv : parts) {
    if (!out.parts_.empty() && connects(out.parts_.back(), iv))
      out.parts_.back() = merged(out.parts_.back(), iv);
    else
      out.parts_.push_back(std::move(iv));
  }
  return out;
}

void RationalIntervalSet::append(Interval iv) {
  if (!iv.valid()) throw ConfigError("invalid interval " + iv.str());
  if (!parts_.empty()) {
    const Interval& last = parts_.back();
    if (!last.hi || iv.lo < *last.hi)
      throw ConfigError("append out of order: " + iv.str() + " after " + last.str());
    if (connects(last, iv)) {
      parts_.back() = merged(last, iv);
      return;
    }
  }
  parts_.push_back(std::move(iv));
}

bool RationalIntervalSet::contains(const Rat& v) const {
  // First part whose lo is > v cannot contain it; check the one before.
  size_t lo = 0, hi = parts_.size();
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (parts_[mid].lo <= v)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo == 0) return false;
  return parts_[lo - 1].contains(v);
}

RationalIntervalSet RationalIntervalSet::interior(const std::optional<Rat>& ambient_hi) const {
  RationalIntervalSet out;
  for (Interval iv : parts_) {
    iv.lo_closed = iv.lo_closed && iv.lo == 0;
    if (iv.hi) iv.hi_closed = iv.hi_closed && ambient_hi && *iv.hi == *ambient_hi;
    if (iv.hi && iv.lo == *iv.hi && !(iv.lo_closed && iv.hi_closed)) continue;
    out.parts_.push_back(std::move(iv));
  }
  return out;
}

std::vector<std::string> RationalIntervalSet::part_strings() const {
  std::vector<std::string> out;
  out.reserve(parts_.size());
  for (const Interval& iv : parts_) out.push_back(iv.str());
  return out;
}

std::string RationalIntervalSet::str() const {
  if (parts_.empty()) return "{}";
  std::string s;
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (i) s += " u ";
    s += parts_[i].str();
  }
  return s;
}

bool RationalIntervalSet::operator==(const RationalIntervalSet& other) const {
  if (parts_.size() != other.parts_.size()) return false;
  for (size_t i = 0; i < parts_.size(); ++i) {
    const Interval& a = parts_[i];
    const Interval& b = other.parts_[i];
    if (a.lo != b.lo || a.lo_closed != b.lo_closed || a.hi_closed != b.hi_closed) return false;
    if (a.hi.has_value() != b.hi.has_value()) return false;
    if (a.hi && *a.hi != *b.hi) return false;
  }
  return true;
}

OpennessVerdict check_openness(const RationalIntervalSet& u,
                               const std::optional<Rat>& ambient_hi) {
  OpennessVerdict verdict;
  auto offend = [&](const Rat& v) {
    if (verdict.witnesses.empty() || verdict.witnesses.back() != v)
      verdict.witnesses.push_back(v);
  };
  for (const Interval& iv : u.parts()) {
    if (iv.lo_closed && iv.lo != 0) offend(iv.lo);
    if (iv.hi && iv.hi_closed && !(ambient_hi && *iv.hi == *ambient_hi)) offend(*iv.hi);
  }
  std::sort(verdict.witnesses.begin(), verdict.witnesses.end());
  verdict.witnesses.erase(std::unique(verdict.witnesses.begin(), verdict.witnesses.end()),
                          verdict.witnesses.end());
  verdict.open = verdict.witnesses.empty();
  return verdict;
}

}  // namespace osid
