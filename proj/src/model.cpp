#include "mixvote/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mixvote/errors.hpp"

namespace mixvote {

namespace {

GoodSet canonical_goods(GoodSet goods) {
  std::sort(goods.begin(), goods.end());
  goods.erase(std::unique(goods.begin(), goods.end()), goods.end());
  return goods;
}

void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_rational(const Rational& r) {
  std::size_t h = mpz_get_ui(r.get_num_mpz_t());
  hash_combine(h, mpz_get_ui(r.get_den_mpz_t()));
  hash_combine(h, static_cast<std::size_t>(mpz_sgn(r.get_num_mpz_t()) + 1));
  return h;
}

}  // namespace

Bundle::Bundle(IntervalSet c, GoodSet g) : cake(std::move(c)), goods(canonical_goods(std::move(g))) {}

Rational bundle_size(const Bundle& b) { return b.cake.measure() + static_cast<unsigned long>(b.goods.size()); }

Bundle intersect(const Bundle& a, const Bundle& b) {
  Bundle out;
  out.cake = a.cake.intersect(b.cake);
  std::set_intersection(a.goods.begin(), a.goods.end(), b.goods.begin(), b.goods.end(),
                        std::back_inserter(out.goods));
  return out;
}

Bundle unite(const Bundle& a, const Bundle& b) {
  Bundle out;
  out.cake = a.cake.unite(b.cake);
  std::set_union(a.goods.begin(), a.goods.end(), b.goods.begin(), b.goods.end(),
                 std::back_inserter(out.goods));
  return out;
}

bool is_subset(const Bundle& inner, const Bundle& outer) {
  return std::includes(outer.goods.begin(), outer.goods.end(), inner.goods.begin(),
                       inner.goods.end()) &&
         outer.cake.contains(inner.cake);
}

std::size_t BundleHash::operator()(const Bundle& b) const {
  std::size_t h = b.goods.size();
  for (GoodId g : b.goods) hash_combine(h, g);
  for (const auto& iv : b.cake.intervals()) {
    hash_combine(h, hash_rational(iv.lo));
    hash_combine(h, hash_rational(iv.hi));
  }
  return h;
}

Instance::Instance(Rational cake_length, std::vector<std::string> good_names,
                   std::vector<Bundle> approvals, Rational alpha)
    : cake_length_(std::move(cake_length)),
      good_names_(std::move(good_names)),
      approvals_(std::move(approvals)),
      alpha_(std::move(alpha)) {
  cake_length_.canonicalize();
  alpha_.canonicalize();
  validate();
}

void Instance::validate() const {
  if (cake_length_ < 0) throw ParseError("cake length must be nonnegative");
  if (cake_length_ == 0 && good_names_.empty()) {
    throw ParseError("instance has neither cake nor goods (max(c, m) must be positive)");
  }
  if (approvals_.empty()) throw ParseError("instance needs at least one agent");
  const Rational total = cake_length_ + static_cast<unsigned long>(good_names_.size());
  if (alpha_ <= 0 || alpha_ > total) {
    throw ParseError("alpha = " + to_string(alpha_) + " must lie in (0, c + m] = (0, " +
                     to_string(total) + "]");
  }
  std::set<std::string> seen;
  for (const auto& name : good_names_) {
    if (!seen.insert(name).second) throw ParseError("duplicate good name '" + name + "'");
  }
  for (std::size_t i = 0; i < approvals_.size(); ++i) {
    try {
      check_bundle(approvals_[i]);
    } catch (const InvalidAllocation& e) {
      throw ParseError("agent " + std::to_string(i) + ": " + e.what());
    }
  }
}

const Bundle& Instance::approval(AgentId i) const {
  if (i >= approvals_.size()) {
    throw DomainError("agent index " + std::to_string(i) + " out of range (n = " +
                      std::to_string(approvals_.size()) + ")");
  }
  return approvals_[i];
}

IntervalSet Instance::full_cake() const {
  if (cake_length_ == 0) return {};
  return IntervalSet::single(0, cake_length_);
}

GoodSet Instance::all_goods() const {
  GoodSet g(good_names_.size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = k;
  return g;
}

Rational Instance::agents_per_unit() const {
  return Rational(static_cast<unsigned long>(approvals_.size())) / alpha_;
}

Rational Instance::group_cap(std::size_t group_size) const {
  Rational cap = Rational(static_cast<unsigned long>(group_size)) * alpha_ /
                 static_cast<unsigned long>(approvals_.size());
  cap.canonicalize();
  return cap;
}

void Instance::check_bundle(const Bundle& b) const {
  for (GoodId g : b.goods) {
    if (g >= good_names_.size()) {
      throw InvalidAllocation("good index " + std::to_string(g) + " outside the instance");
    }
  }
  if (!b.cake.empty() && b.cake.intervals().back().hi > cake_length_) {
    throw InvalidAllocation("cake piece extends beyond [0, " + to_string(cake_length_) + "]");
  }
}

void Instance::check_allocation(const Bundle& a) const {
  check_bundle(a);
  const Rational s = bundle_size(a);
  if (s > alpha_) {
    throw InvalidAllocation("allocation size " + to_string(s) + " exceeds alpha = " +
                            to_string(alpha_));
  }
}

Rational utility(const Instance& inst, AgentId i, const Bundle& a) {
  return bundle_size(intersect(inst.approval(i), a));
}

std::vector<Rational> utilities(const Instance& inst, const Bundle& a) {
  std::vector<Rational> out;
  out.reserve(inst.num_agents());
  for (AgentId i = 0; i < inst.num_agents(); ++i) out.push_back(utility(inst, i, a));
  return out;
}

Bundle common_bundle(const Instance& inst, const AgentSet& group) {
  if (group.empty()) throw DomainError("common bundle of an empty group is undefined");
  Bundle out = inst.approval(group.front());
  for (std::size_t k = 1; k < group.size(); ++k) out = intersect(out, inst.approval(group[k]));
  return out;
}

std::vector<Atom> atomize(const Instance& inst, const IntervalSet& remaining_cake,
                          const GoodSet& remaining_goods) {
  std::vector<Atom> atoms;
  for (GoodId g : remaining_goods) {
    Atom a;
    a.kind = Atom::Kind::Good;
    a.good = g;
    for (AgentId i = 0; i < inst.num_agents(); ++i) {
      const auto& goods = inst.approval(i).goods;
      if (std::binary_search(goods.begin(), goods.end(), g)) a.approvers.push_back(i);
    }
    atoms.push_back(std::move(a));
  }
  if (remaining_cake.empty()) return atoms;

  std::vector<Rational> cuts{Rational(0), inst.cake_length()};
  for (const auto& r : inst.approvals()) {
    for (const auto& iv : r.cake.intervals()) {
      cuts.push_back(iv.lo);
      cuts.push_back(iv.hi);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  for (const auto& piece : remaining_cake.intervals()) {
    auto it = std::upper_bound(cuts.begin(), cuts.end(), piece.lo);
    Rational lo = piece.lo;
    while (lo < piece.hi) {
      Rational hi = (it != cuts.end() && *it < piece.hi) ? *it : piece.hi;
      if (it != cuts.end() && *it < piece.hi) ++it;
      Atom a;
      a.kind = Atom::Kind::Cake;
      a.interval = {lo, hi};
      Rational mid = (lo + hi) / 2;
      for (AgentId i = 0; i < inst.num_agents(); ++i) {
        if (inst.approval(i).cake.contains_point(mid)) a.approvers.push_back(i);
      }
      atoms.push_back(std::move(a));
      lo = hi;
    }
  }
  return atoms;
}

std::string describe(const Bundle& b, const Instance& inst) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (GoodId g : b.goods) {
    os << (first ? "" : ", ") << inst.good_names().at(g);
    first = false;
  }
  for (const auto& iv : b.cake.intervals()) {
    os << (first ? "" : ", ") << "[" << to_string(iv.lo) << ", " << to_string(iv.hi) << "]";
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace mixvote
