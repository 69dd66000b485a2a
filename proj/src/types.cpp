#include "corelect/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace corelect {

std::vector<int> members(TypeMask m) {
  std::vector<int> out;
  for (int i = 0; i < kMaxVoters; ++i)
    if (contains(m, i)) out.push_back(i);
  return out;
}

bool type_less(TypeMask a, TypeMask b) {
  int pa = popcount(a), pb = popcount(b);
  if (pa != pb) return pa < pb;
  // Equal cardinality: compare member sequences lexicographically. The
  // lowest differing voter decides, so compare the lowest set bit of the
  // symmetric difference.
  TypeMask diff = a ^ b;
  if (diff == 0) return false;
  TypeMask low = diff & (~diff + 1u);
  return (a & low) != 0;
}

std::string type_str(TypeMask m) {
  std::string out;
  for (int i : members(m)) {
    if (!out.empty()) out += ',';
    out += std::to_string(i + 1);
  }
  return out;
}

TypeMask parse_type(const std::string& key, int n) {
  TypeMask m = 0;
  std::size_t pos = 0;
  while (pos < key.size()) {
    std::size_t next = key.find(',', pos);
    std::string tok = key.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    int v = std::stoi(tok);
    if (v < 1 || v > n) throw std::out_of_range("voter index " + tok + " out of range for n=" + std::to_string(n));
    m |= TypeMask(1) << (v - 1);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (m == 0) throw std::invalid_argument("empty candidate type key");
  return m;
}

std::vector<TypeMask> all_types(int n) {
  std::vector<TypeMask> out;
  out.reserve((std::size_t(1) << n) - 1);
  for (TypeMask m = 1; m < (TypeMask(1) << n); ++m) out.push_back(m);
  std::sort(out.begin(), out.end(), type_less);
  return out;
}

}  // namespace corelect
