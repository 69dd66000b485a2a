#include "corelect/instance.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "corelect/errors.hpp"

namespace corelect {

using json = nlohmann::json;

std::vector<TypeMask> Instance::active_types() const {
  std::vector<TypeMask> out;
  for (const auto& [r, c] : supply)
    if (c > 0) out.push_back(r);
  std::sort(out.begin(), out.end(), type_less);
  return out;
}

long Instance::approved_supply(int voter) const {
  long total = 0;
  for (const auto& [r, c] : supply)
    if (contains(r, voter)) total += c;
  return total;
}

void Instance::validate() const {
  if (n < 0 || n > kMaxVoters) throw precondition_error("voter count out of range");
  if (k < 0) throw precondition_error("negative committee size");
  if ((int)budgets.size() != n) throw precondition_error("budget vector length != n");
  Rat total(0);
  for (const Rat& b : budgets) {
    if (b < 0) throw precondition_error("negative voter budget");
    total += b;
  }
  if (total != Rat(k)) throw precondition_error("voter budgets must sum to k exactly");
  for (const auto& [r, c] : supply) {
    if (r == 0 || r >= (TypeMask(1) << n)) throw precondition_error("invalid candidate type");
    if (c < 0) throw precondition_error("negative supply");
  }
}

Rat Committee::size() const {
  Rat total(0);
  for (const auto& [r, a] : amounts) total += a;
  return total;
}

bool Committee::empty() const {
  return std::all_of(amounts.begin(), amounts.end(), [](const auto& e) { return e.second == 0; });
}

void Committee::normalize() {
  for (auto it = amounts.begin(); it != amounts.end();) {
    if (it->second == 0)
      it = amounts.erase(it);
    else {
      if (integral && !is_integer(it->second))
        throw invariant_error("integral committee with fractional amount");
      ++it;
    }
  }
}

UtilityVector UtilityVector::of_longs(const std::vector<long>& v) {
  UtilityVector u;
  u.integral = true;
  u.values.reserve(v.size());
  for (long x : v) u.values.emplace_back(x);
  return u;
}

std::vector<long> UtilityVector::as_longs() const {
  std::vector<long> out;
  out.reserve(values.size());
  for (const Rat& q : values) {
    if (!is_integer(q)) throw precondition_error("utility vector is not integral");
    out.push_back(to_long(q.get_num()));
  }
  return out;
}

ReducedProfile reduce_profile(const ApprovalProfile& profile) {
  if (profile.approvals.empty()) throw precondition_error("profile has no voters");
  if (profile.k < 0) throw precondition_error("negative committee size");
  std::set<std::string> known(profile.candidates.begin(), profile.candidates.end());
  for (const auto& a : profile.approvals)
    for (const auto& c : a)
      if (!known.count(c)) throw precondition_error("approval of unknown candidate " + c);

  // Voter types by first occurrence.
  std::vector<std::set<std::string>> distinct;
  std::vector<long> multiplicity;
  for (const auto& a : profile.approvals) {
    auto it = std::find(distinct.begin(), distinct.end(), a);
    if (it == distinct.end()) {
      distinct.push_back(a);
      multiplicity.push_back(1);
    } else {
      ++multiplicity[it - distinct.begin()];
    }
  }
  int t = (int)distinct.size();
  if (t > kMaxVoters) throw precondition_error("more than 16 distinct approval sets");

  ReducedProfile out;
  out.instance.n = t;
  out.instance.k = profile.k;
  Rat per_voter = Rat(profile.k, (long)profile.approvals.size());
  per_voter.canonicalize();
  for (int i = 0; i < t; ++i) out.instance.budgets.push_back(Rat(multiplicity[i]) * per_voter);

  for (const auto& name : profile.candidates) {
    TypeMask r = 0;
    for (int i = 0; i < t; ++i)
      if (distinct[i].count(name)) r |= TypeMask(1) << i;
    if (r == 0) continue;  // approved by nobody
    ++out.instance.supply[r];
    out.type_assignment[name] = r;
    out.approved_order.push_back(name);
  }
  out.instance.validate();
  return out;
}

UtilityVector utility(const Instance& instance, const Committee& x) {
  UtilityVector u;
  u.values.assign(instance.n, Rat(0));
  u.integral = x.integral;
  for (const auto& [r, a] : x.amounts) {
    if (r == 0 || r >= (TypeMask(1) << instance.n))
      throw precondition_error("committee keyed by invalid type");
    for (int i = 0; i < instance.n; ++i)
      if (contains(r, i)) u.values[i] += a;
  }
  return u;
}

Rat coalition_budget(const Instance& instance, Coalition s) {
  Rat total(0);
  for (int i = 0; i < instance.n; ++i)
    if (contains(s.mask, i)) total += instance.budgets[i];
  return total;
}

bool is_affordable(const Instance& instance, const Committee& x, Coalition s) {
  Rat total(0);
  for (const auto& [r, a] : x.amounts) {
    if (a < 0 || a > instance.supply_of(r)) return false;
    if (x.integral && !is_integer(a)) return false;
    total += a;
  }
  return total <= coalition_budget(instance, s);
}

std::vector<std::string> expand_committee(const ReducedProfile& reduced, const Committee& x) {
  if (!x.integral) throw precondition_error("expand_committee needs an integral committee");
  std::map<TypeMask, long> wanted;
  for (const auto& [r, a] : x.amounts) {
    if (!is_integer(a) || a < 0) throw precondition_error("non-integral committee amount");
    wanted[r] = to_long(a.get_num());
  }
  std::vector<std::string> out;
  // Names gathered per type in profile input order.
  std::map<TypeMask, std::vector<std::string>> by_type;
  for (const auto& name : reduced.approved_order) by_type[reduced.type_assignment.at(name)].push_back(name);
  for (const auto& [r, cnt] : wanted) {
    if (cnt == 0) continue;
    auto it = by_type.find(r);
    if (it == by_type.end() || (long)it->second.size() < cnt)
      throw precondition_error("committee exceeds named supply of type " + type_str(r));
    for (long j = 0; j < cnt; ++j) out.push_back(it->second[j]);
  }
  return out;
}

// --- JSON ---

Instance instance_from_json(const std::string& text) {
  json j = json::parse(text);
  Instance inst;
  inst.n = j.at("n").get<int>();
  inst.k = j.at("k").get<long>();
  for (const auto& b : j.at("budgets")) inst.budgets.push_back(parse_rat(b.get<std::string>()));
  for (const auto& [key, val] : j.at("supply").items())
    inst.supply[parse_type(key, inst.n)] = val.get<long>();
  inst.validate();
  return inst;
}

std::string instance_to_json(const Instance& instance) {
  json j;
  j["n"] = instance.n;
  j["k"] = instance.k;
  json budgets = json::array();
  for (const Rat& b : instance.budgets) budgets.push_back(rat_str(b));
  j["budgets"] = budgets;
  json supply = json::object();
  for (TypeMask r : instance.active_types()) supply[type_str(r)] = instance.supply_of(r);
  j["supply"] = supply;
  return j.dump(2);
}

ApprovalProfile profile_from_json(const std::string& text) {
  json j = json::parse(text);
  ApprovalProfile p;
  p.k = j.at("k").get<long>();
  for (const auto& c : j.at("candidates")) p.candidates.push_back(c.get<std::string>());
  for (const auto& voter : j.at("approvals")) {
    std::set<std::string> a;
    for (const auto& c : voter) a.insert(c.get<std::string>());
    p.approvals.push_back(std::move(a));
  }
  return p;
}

static std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw precondition_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Instance load_instance(const std::string& path) { return instance_from_json(slurp(path)); }
ApprovalProfile load_profile(const std::string& path) { return profile_from_json(slurp(path)); }

}  // namespace corelect
