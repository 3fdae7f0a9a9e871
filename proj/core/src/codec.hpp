#pragma once

#include <string>
#include <vector>

namespace dchain::detail {

// Fixed-width big-endian letters, so byte order equals lexicographic order.
inline std::string encode_sequence(const std::vector<unsigned>& s) {
  std::string out;
  out.reserve(4 * s.size());
  for (unsigned v : s) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
  }
  return out;
}

inline std::vector<unsigned> decode_sequence(const std::string& p) {
  std::vector<unsigned> s(p.size() / 4);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto* b = reinterpret_cast<const unsigned char*>(p.data() + 4 * i);
    s[i] = (unsigned(b[0]) << 24) | (unsigned(b[1]) << 16) | (unsigned(b[2]) << 8) | unsigned(b[3]);
  }
  return s;
}

inline std::string sequence_text(const std::vector<unsigned>& s, char open, char close) {
  bool digits = true;
  for (unsigned v : s) digits = digits && v < 10;
  std::string out(1, open);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i && !digits) out += ",";
    out += std::to_string(s[i]);
  }
  out += close;
  return out;
}

}  // namespace dchain::detail
