#include "specdiff/systems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "specdiff/rng.hpp"

namespace specdiff {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frac(double x) { return x - std::floor(x); }

std::int64_t mod(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

// ---------------------------------------------------------------------------
// SubstitutionRule
// ---------------------------------------------------------------------------

std::vector<std::vector<std::uint64_t>> SubstitutionRule::matrix() const {
  const std::size_t d = alphabet_size();
  std::vector<std::vector<std::uint64_t>> m(d,
                                            std::vector<std::uint64_t>(d, 0));
  for (std::size_t j = 0; j < d; ++j) {
    for (Symbol s : images[j]) m[s][j] += 1;
  }
  return m;
}

bool SubstitutionRule::is_primitive() const {
  const std::size_t d = alphabet_size();
  if (d == 0 || images.size() != d) return false;
  for (const auto& img : images) {
    if (img.empty()) return false;
  }
  // Wielandt bound: primitive iff M^((d-1)^2 + 1) is entrywise positive
  auto m = matrix();
  std::vector<std::vector<bool>> b(d, std::vector<bool>(d, false));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) b[i][j] = m[i][j] > 0;
  }
  const std::size_t power = (d - 1) * (d - 1) + 1;
  auto cur = b;
  for (std::size_t step = 1; step < power; ++step) {
    std::vector<std::vector<bool>> next(d, std::vector<bool>(d, false));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        if (!cur[i][k]) continue;
        for (std::size_t j = 0; j < d; ++j) {
          if (b[k][j]) next[i][j] = true;
        }
      }
    }
    cur = next;
  }
  for (const auto& row : cur) {
    for (bool v : row) {
      if (!v) return false;
    }
  }
  return true;
}

double SubstitutionRule::perron_eigenvalue() const {
  const std::size_t d = alphabet_size();
  auto m = matrix();
  std::vector<double> v(d, 1.0 / static_cast<double>(d));
  double lambda = 1.0;
  for (int it = 0; it < 200; ++it) {
    std::vector<double> w(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        w[i] += static_cast<double>(m[i][j]) * v[j];
      }
    }
    double s = std::accumulate(w.begin(), w.end(), 0.0);
    lambda = s;
    for (auto& x : w) x /= s;
    v = w;
  }
  return lambda;
}

std::vector<double> SubstitutionRule::letter_frequencies() const {
  const std::size_t d = alphabet_size();
  auto m = matrix();
  std::vector<double> v(d, 1.0 / static_cast<double>(d));
  for (int it = 0; it < 200; ++it) {
    std::vector<double> w(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        w[i] += static_cast<double>(m[i][j]) * v[j];
      }
    }
    double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= s;
    v = w;
  }
  return v;
}

std::uint64_t SubstitutionRule::fingerprint() const {
  std::string blob;
  for (char c : letters) blob.push_back(c);
  blob.push_back('|');
  for (const auto& img : images) {
    for (Symbol s : img) blob.push_back(static_cast<char>('0' + s));
    blob.push_back(';');
  }
  return fnv1a64(blob);
}

SubstitutionRule SubstitutionRule::fibonacci() {
  return from_strings({{'a', "ab"}, {'b', "a"}});
}

SubstitutionRule SubstitutionRule::thue_morse() {
  return from_strings({{'a', "ab"}, {'b', "ba"}});
}

SubstitutionRule SubstitutionRule::period_doubling() {
  return from_strings({{'a', "ab"}, {'b', "aa"}});
}

SubstitutionRule SubstitutionRule::from_strings(
    const std::vector<std::pair<char, std::string>>& rules) {
  SubstitutionRule r;
  for (const auto& [letter, _] : rules) r.letters.push_back(letter);
  auto index_of = [&r](char c) -> Symbol {
    for (std::size_t i = 0; i < r.letters.size(); ++i) {
      if (r.letters[i] == c) return static_cast<Symbol>(i);
    }
    throw std::invalid_argument(
        std::string("substitution image uses unknown letter '") + c + "'");
  };
  for (const auto& [_, image] : rules) {
    std::vector<Symbol> img;
    for (char c : image) img.push_back(index_of(c));
    r.images.push_back(std::move(img));
  }
  return r;
}

namespace {

// first letter whose image starts with itself
int fixed_point_seed(const SubstitutionRule& rule) {
  for (std::size_t i = 0; i < rule.alphabet_size(); ++i) {
    if (!rule.images[i].empty() && rule.images[i][0] == i) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

std::vector<Symbol> apply_rule(const SubstitutionRule& rule,
                               const std::vector<Symbol>& word) {
  std::vector<Symbol> out;
  std::size_t total = 0;
  for (Symbol s : word) total += rule.images[s].size();
  out.reserve(total);
  for (Symbol s : word) {
    const auto& img = rule.images[s];
    out.insert(out.end(), img.begin(), img.end());
  }
  return out;
}

}  // namespace

std::vector<Symbol> substitution_fixed_point(const SubstitutionRule& rule,
                                             std::int64_t length) {
  if (!rule.is_primitive()) {
    throw std::invalid_argument("substitution rule is not primitive");
  }
  const int seed = fixed_point_seed(rule);
  if (seed < 0) {
    throw std::invalid_argument(
        "substitution has no letter whose image starts with itself");
  }
  std::vector<Symbol> word{static_cast<Symbol>(seed)};
  while (static_cast<std::int64_t>(word.size()) < length) {
    word = apply_rule(rule, word);
    if (word.size() > (1ULL << 31)) {
      throw std::invalid_argument("substitution fixed point is too long");
    }
  }
  word.resize(static_cast<std::size_t>(length));
  return word;
}

// ---------------------------------------------------------------------------
// SystemSpec
// ---------------------------------------------------------------------------

namespace {

void validate_simplex(const std::vector<double>& p, const char* what) {
  double sum = 0.0;
  for (double x : p) {
    if (x < 0.0) throw std::invalid_argument(std::string(what) + ": negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument(std::string(what) +
                                ": probabilities must sum to 1");
  }
}

// small-denominator rationality guard for rotation angles
void warn_if_near_rational(double alpha) {
  for (int q = 1; q <= 64; ++q) {
    const double p = std::round(alpha * q);
    if (std::abs(alpha - p / q) < 1e-12) {
      std::cerr << "warning: rotation angle " << alpha
                << " is within 1e-12 of " << static_cast<long>(p) << "/" << q
                << "; atom separation will degrade\n";
      return;
    }
  }
}

}  // namespace

SystemSpec::SystemSpec(Variant v, std::string name)
    : variant_(std::move(v)), name_(std::move(name)) {
  if (const auto* c = std::get_if<FiniteCyclicSpec>(&variant_)) {
    if (c->size < 1) throw std::invalid_argument("cyclic: size >= 1 required");
    FiniteCyclicSpec fixed = *c;
    if (fixed.weights.empty()) {
      fixed.weights.assign(static_cast<std::size_t>(fixed.size),
                           1.0 / static_cast<double>(fixed.size));
    }
    if (static_cast<std::int64_t>(fixed.weights.size()) != fixed.size) {
      throw std::invalid_argument("cyclic: weight vector size mismatch");
    }
    validate_simplex(fixed.weights, "cyclic weights");
    const std::int64_t g = std::gcd(mod(fixed.step, fixed.size), fixed.size);
    if (g == 1) {
      // rotation by a unit: the only invariant vector is uniform
      const double u = 1.0 / static_cast<double>(fixed.size);
      for (double w : fixed.weights) {
        if (std::abs(w - u) > 1e-12) {
          throw std::invalid_argument(
              "cyclic: unit step forces uniform weights");
        }
      }
    } else {
      // invariance: weights constant along step-orbits
      for (std::int64_t j = 0; j < fixed.size; ++j) {
        const std::int64_t k = mod(j + fixed.step, fixed.size);
        if (std::abs(fixed.weights[static_cast<std::size_t>(j)] -
                     fixed.weights[static_cast<std::size_t>(k)]) > 1e-12) {
          throw std::invalid_argument("cyclic: weights are not invariant");
        }
      }
    }
    variant_ = fixed;
  } else if (const auto* r = std::get_if<RotationSpec>(&variant_)) {
    if (!(r->alpha > 0.0 && r->alpha < 1.0)) {
      throw std::invalid_argument("rotation: alpha must lie in (0,1)");
    }
    warn_if_near_rational(r->alpha);
  } else if (const auto* b = std::get_if<BernoulliSpec>(&variant_)) {
    if (b->letters.empty() || b->letters.size() != b->probs.size()) {
      throw std::invalid_argument("bernoulli: letters/probs mismatch");
    }
    validate_simplex(b->probs, "bernoulli probs");
  } else if (const auto* s = std::get_if<SubstitutionSpec>(&variant_)) {
    if (!s->rule.is_primitive()) {
      throw std::invalid_argument("substitution rule is not primitive");
    }
  } else if (const auto* e = std::get_if<ExplicitSpec>(&variant_)) {
    if (e->period.empty()) {
      throw std::invalid_argument("explicit sequence: empty period");
    }
    for (Symbol s : e->period) {
      if (s >= e->letters.size()) {
        throw std::invalid_argument("explicit sequence: symbol out of range");
      }
    }
  }
}

SystemSpec SystemSpec::finite_cyclic(std::int64_t size, std::int64_t step,
                                     std::vector<double> weights) {
  return SystemSpec(FiniteCyclicSpec{size, step, std::move(weights)},
                    "cyclic:" + std::to_string(size));
}

SystemSpec SystemSpec::rotation(double alpha) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "rotation:%.17g", alpha);
  return SystemSpec(RotationSpec{alpha}, buf);
}

SystemSpec SystemSpec::golden_rotation() {
  return SystemSpec(RotationSpec{(std::sqrt(5.0) - 1.0) / 2.0}, "rotation");
}

SystemSpec SystemSpec::bernoulli(std::vector<char> letters,
                                 std::vector<double> probs) {
  return SystemSpec(BernoulliSpec{std::move(letters), std::move(probs)},
                    "bernoulli");
}

SystemSpec SystemSpec::substitution(SubstitutionRule rule, std::string name) {
  return SystemSpec(SubstitutionSpec{std::move(rule)}, std::move(name));
}

SystemSpec SystemSpec::explicit_periodic(std::vector<char> letters,
                                         std::vector<Symbol> period) {
  return SystemSpec(ExplicitSpec{std::move(letters), std::move(period)},
                    "explicit");
}

SystemSpec SystemSpec::built_in(const std::string& name) {
  if (name == "fibonacci") {
    return substitution(SubstitutionRule::fibonacci(), "fibonacci");
  }
  if (name == "thue-morse") {
    return substitution(SubstitutionRule::thue_morse(), "thue-morse");
  }
  if (name == "period-doubling") {
    return substitution(SubstitutionRule::period_doubling(),
                        "period-doubling");
  }
  if (name == "rotation") return golden_rotation();
  if (name == "bernoulli") return bernoulli({'a', 'b'}, {0.5, 0.5});
  if (name == "cyclic") return finite_cyclic(12);
  throw std::invalid_argument("unknown built-in system: " + name);
}

std::vector<std::string> SystemSpec::built_in_names() {
  return {"fibonacci", "thue-morse",      "period-doubling",
          "rotation",  "bernoulli",       "cyclic"};
}

bool SystemSpec::is_finite_cyclic() const {
  return std::holds_alternative<FiniteCyclicSpec>(variant_);
}

bool SystemSpec::is_rotation() const {
  return std::holds_alternative<RotationSpec>(variant_);
}

bool SystemSpec::is_symbolic() const {
  return std::holds_alternative<BernoulliSpec>(variant_) ||
         std::holds_alternative<SubstitutionSpec>(variant_) ||
         std::holds_alternative<ExplicitSpec>(variant_);
}

std::size_t SystemSpec::alphabet_size() const {
  if (const auto* c = std::get_if<FiniteCyclicSpec>(&variant_)) {
    return static_cast<std::size_t>(c->size);
  }
  if (const auto* b = std::get_if<BernoulliSpec>(&variant_)) {
    return b->letters.size();
  }
  if (const auto* s = std::get_if<SubstitutionSpec>(&variant_)) {
    return s->rule.alphabet_size();
  }
  if (const auto* e = std::get_if<ExplicitSpec>(&variant_)) {
    return e->letters.size();
  }
  throw std::invalid_argument("rotation has no alphabet");
}

int SystemSpec::symbol_index(char letter) const {
  const std::vector<char>* names = nullptr;
  if (const auto* b = std::get_if<BernoulliSpec>(&variant_)) {
    names = &b->letters;
  } else if (const auto* s = std::get_if<SubstitutionSpec>(&variant_)) {
    names = &s->rule.letters;
  } else if (const auto* e = std::get_if<ExplicitSpec>(&variant_)) {
    names = &e->letters;
  } else {
    return -1;
  }
  for (std::size_t i = 0; i < names->size(); ++i) {
    if ((*names)[i] == letter) return static_cast<int>(i);
  }
  return -1;
}

char SystemSpec::letter_name(Symbol s) const {
  if (const auto* b = std::get_if<BernoulliSpec>(&variant_)) {
    return b->letters.at(s);
  }
  if (const auto* sub = std::get_if<SubstitutionSpec>(&variant_)) {
    return sub->rule.letters.at(s);
  }
  if (const auto* e = std::get_if<ExplicitSpec>(&variant_)) {
    return e->letters.at(s);
  }
  return static_cast<char>('0' + s);
}

std::vector<double> SystemSpec::letter_frequencies() const {
  if (const auto* c = std::get_if<FiniteCyclicSpec>(&variant_)) {
    return c->weights;
  }
  if (const auto* b = std::get_if<BernoulliSpec>(&variant_)) {
    return b->probs;
  }
  if (const auto* s = std::get_if<SubstitutionSpec>(&variant_)) {
    return s->rule.letter_frequencies();
  }
  if (const auto* e = std::get_if<ExplicitSpec>(&variant_)) {
    std::vector<double> freq(e->letters.size(), 0.0);
    for (Symbol s : e->period) freq[s] += 1.0;
    for (double& f : freq) f /= static_cast<double>(e->period.size());
    return freq;
  }
  throw std::invalid_argument("rotation has no letter frequencies");
}

// ---------------------------------------------------------------------------
// symbol sources
// ---------------------------------------------------------------------------

namespace {

class BufferSource final : public SymbolSource {
 public:
  BufferSource(std::shared_ptr<const std::vector<Symbol>> buf,
               std::int64_t first_coord)
      : buf_(std::move(buf)), first_(first_coord) {}

  Symbol at(std::int64_t coord) const override {
    const std::int64_t idx = coord - first_;
    if (idx < 0 || idx >= static_cast<std::int64_t>(buf_->size())) {
      throw std::out_of_range(
          "state window exhausted; sample with a larger horizon");
    }
    return (*buf_)[static_cast<std::size_t>(idx)];
  }
  std::int64_t min_coord() const override { return first_; }
  std::int64_t max_coord() const override {
    return first_ + static_cast<std::int64_t>(buf_->size()) - 1;
  }

 private:
  std::shared_ptr<const std::vector<Symbol>> buf_;
  std::int64_t first_;
};

// lazily materialized i.i.d. sequence: symbol at coordinate j is a pure
// function of (seed, j), so arbitrarily long orbits use O(1) memory
class BernoulliSource final : public SymbolSource {
 public:
  BernoulliSource(std::uint64_t seed, std::vector<double> cum)
      : seed_(seed), cum_(std::move(cum)) {}

  Symbol at(std::int64_t coord) const override {
    const double u = coordinate_uniform(seed_, coord);
    std::size_t lo = 0;
    while (lo + 1 < cum_.size() && u >= cum_[lo]) ++lo;
    return static_cast<Symbol>(lo);
  }
  std::int64_t min_coord() const override {
    return std::numeric_limits<std::int64_t>::min() / 2;
  }
  std::int64_t max_coord() const override {
    return std::numeric_limits<std::int64_t>::max() / 2;
  }

 private:
  std::uint64_t seed_;
  std::vector<double> cum_;  // cumulative probabilities, last entry 1
};

class PeriodicSource final : public SymbolSource {
 public:
  explicit PeriodicSource(std::vector<Symbol> period)
      : period_(std::move(period)) {}

  Symbol at(std::int64_t coord) const override {
    return period_[static_cast<std::size_t>(
        mod(coord, static_cast<std::int64_t>(period_.size())))];
  }
  std::int64_t min_coord() const override {
    return std::numeric_limits<std::int64_t>::min() / 2;
  }
  std::int64_t max_coord() const override {
    return std::numeric_limits<std::int64_t>::max() / 2;
  }

 private:
  std::vector<Symbol> period_;
};

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> cum(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cum[i] = acc;
  }
  cum.back() = 1.0;
  return cum;
}

// supertile prefixes are shared across samples; the cache is keyed by the
// rule fingerprint and the supertile level
std::shared_ptr<const std::vector<Symbol>> supertile_prefix(
    const SubstitutionRule& rule, int level) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, int>,
                  std::shared_ptr<const std::vector<Symbol>>>
      cache;
  const auto key = std::make_pair(rule.fingerprint(), level);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const int seed = fixed_point_seed(rule);
  if (seed < 0) {
    throw std::invalid_argument(
        "substitution has no letter whose image starts with itself");
  }
  std::vector<Symbol> word{static_cast<Symbol>(seed)};
  for (int i = 0; i < level; ++i) word = apply_rule(rule, word);
  auto shared =
      std::make_shared<const std::vector<Symbol>>(std::move(word));
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = shared;
  return shared;
}

int supertile_level(const SubstitutionRule& rule, std::int64_t horizon) {
  const double lambda = rule.perron_eigenvalue();
  const double h = static_cast<double>(std::max<std::int64_t>(horizon, 2));
  int level = static_cast<int>(std::ceil(std::log(h) / std::log(lambda))) + 4;
  // the window [p - horizon, p + horizon] must fit with interior positions
  while (true) {
    double len = std::pow(lambda, level);
    if (len > 2.0 * h + 16.0 || level > 64) break;
    ++level;
  }
  return level;
}

// two-sided fixed point: seed pair u|v with sigma^p(u) ending in u and
// sigma^p(v) starting with v, u v legal; expand both sides past `radius`
std::shared_ptr<const SymbolSource> two_sided_fixed_point(
    const SubstitutionRule& rule, std::int64_t radius) {
  const std::size_t d = rule.alphabet_size();
  int power = 0;
  int u = -1;
  int v = -1;
  std::vector<Symbol> legality =
      substitution_fixed_point(rule, std::min<std::int64_t>(65536, 1 << 16));
  auto pair_is_legal = [&legality](int a, int b) {
    for (std::size_t i = 0; i + 1 < legality.size(); ++i) {
      if (legality[i] == a && legality[i + 1] == b) return true;
    }
    return false;
  };
  for (int p = 1; p <= 6 && u < 0; ++p) {
    std::vector<int> ends, starts;
    for (std::size_t L = 0; L < d; ++L) {
      std::vector<Symbol> w{static_cast<Symbol>(L)};
      for (int i = 0; i < p; ++i) w = apply_rule(rule, w);
      if (w.front() == L) starts.push_back(static_cast<int>(L));
      if (w.back() == L) ends.push_back(static_cast<int>(L));
    }
    for (int ue : ends) {
      for (int vs : starts) {
        if (pair_is_legal(ue, vs)) {
          u = ue;
          v = vs;
          power = p;
          break;
        }
      }
      if (u >= 0) break;
    }
  }
  if (u < 0) {
    throw std::invalid_argument(
        "substitution admits no two-sided fixed-point seed pair");
  }
  std::vector<Symbol> right{static_cast<Symbol>(v)};
  while (static_cast<std::int64_t>(right.size()) <= radius) {
    right = apply_rule(rule, right);
    for (int i = 1; i < power; ++i) right = apply_rule(rule, right);
  }
  std::vector<Symbol> left{static_cast<Symbol>(u)};
  while (static_cast<std::int64_t>(left.size()) <= radius) {
    left = apply_rule(rule, left);
    for (int i = 1; i < power; ++i) left = apply_rule(rule, left);
  }
  std::vector<Symbol> buf;
  buf.reserve(left.size() + right.size());
  buf.insert(buf.end(), left.begin(), left.end());
  buf.insert(buf.end(), right.begin(), right.end());
  const std::int64_t first = -static_cast<std::int64_t>(left.size());
  return std::make_shared<BufferSource>(
      std::make_shared<const std::vector<Symbol>>(std::move(buf)), first);
}

}  // namespace

// ---------------------------------------------------------------------------
// states and the action
// ---------------------------------------------------------------------------

std::string State::describe(const SystemSpec& spec) const {
  std::ostringstream os;
  if (const auto* idx = std::get_if<std::int64_t>(&value)) {
    os << "index=" << *idx;
  } else if (const auto* rot = std::get_if<RotationState>(&value)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "xi=%.17g", rotation_angle(spec, *this));
    os << buf;
    (void)rot;
  } else if (const auto* w = std::get_if<SeqWindow>(&value)) {
    os << "window[";
    const std::int64_t lo = std::max<std::int64_t>(w->source->min_coord() - w->shift, -8);
    const std::int64_t hi = std::min<std::int64_t>(w->source->max_coord() - w->shift, 8);
    for (std::int64_t j = lo; j <= hi; ++j) {
      if (j == 0) os << '.';
      os << spec.letter_name(w->source->at(w->shift + j));
    }
    os << "]@" << w->shift;
  }
  return os.str();
}

State apply_action(const SystemSpec& spec, const State& x, std::int64_t t) {
  State out = x;
  if (auto* idx = std::get_if<std::int64_t>(&out.value)) {
    const auto& c = std::get<FiniteCyclicSpec>(spec.variant());
    *idx = mod(*idx + t * c.step, c.size);
  } else if (auto* rot = std::get_if<RotationState>(&out.value)) {
    rot->shift += t;
  } else if (auto* w = std::get_if<SeqWindow>(&out.value)) {
    // alpha_t is the left shift by -t: (alpha_t x)_j = x_{j - t}
    w->shift -= t;
  }
  return out;
}

double rotation_angle(const SystemSpec& spec, const State& x) {
  const auto& r = std::get<RotationSpec>(spec.variant());
  const auto& s = std::get<RotationState>(x.value);
  return frac(s.base_xi + static_cast<double>(s.shift) * r.alpha);
}

State sample_invariant(const SystemSpec& spec, std::uint64_t seed,
                       std::int64_t horizon) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  State st;
  if (const auto* c = std::get_if<FiniteCyclicSpec>(&spec.variant())) {
    Rng rng(derive_seed(seed, "cyclic-state"));
    const double u = rng.uniform();
    double acc = 0.0;
    std::int64_t idx = c->size - 1;
    for (std::int64_t j = 0; j < c->size; ++j) {
      acc += c->weights[static_cast<std::size_t>(j)];
      if (u < acc) {
        idx = j;
        break;
      }
    }
    st.value = idx;
  } else if (std::holds_alternative<RotationSpec>(spec.variant())) {
    Rng rng(derive_seed(seed, "rotation-state"));
    st.value = RotationState{rng.uniform(), 0};
  } else if (const auto* b = std::get_if<BernoulliSpec>(&spec.variant())) {
    st.value = SeqWindow{std::make_shared<BernoulliSource>(
                             derive_seed(seed, "bernoulli-seq"),
                             cumulative(b->probs)),
                         0};
  } else if (const auto* s = std::get_if<SubstitutionSpec>(&spec.variant())) {
    const int level = supertile_level(s->rule, horizon);
    auto prefix = supertile_prefix(s->rule, level);
    const std::int64_t len = static_cast<std::int64_t>(prefix->size());
    const std::int64_t lo = horizon;
    const std::int64_t hi = len - 1 - horizon;
    if (hi < lo) {
      throw std::invalid_argument("supertile too short for the horizon");
    }
    Rng rng(derive_seed(seed, "supertile-pos"));
    const std::int64_t pos =
        lo + static_cast<std::int64_t>(
                 rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    st.value = SeqWindow{std::make_shared<BufferSource>(prefix, 0), pos};
  } else if (const auto* e = std::get_if<ExplicitSpec>(&spec.variant())) {
    Rng rng(derive_seed(seed, "phase"));
    const std::int64_t pos = static_cast<std::int64_t>(
        rng.below(static_cast<std::uint64_t>(e->period.size())));
    st.value = SeqWindow{std::make_shared<PeriodicSource>(e->period), pos};
  }
  return st;
}

State origin_state(const SystemSpec& spec, std::int64_t horizon) {
  State st;
  if (spec.is_finite_cyclic()) {
    st.value = std::int64_t{0};
  } else if (spec.is_rotation()) {
    st.value = RotationState{0.0, 0};
  } else if (const auto* b = std::get_if<BernoulliSpec>(&spec.variant())) {
    st.value = SeqWindow{std::make_shared<BernoulliSource>(
                             derive_seed(0, "bernoulli-seq"),
                             cumulative(b->probs)),
                         0};
  } else if (const auto* s = std::get_if<SubstitutionSpec>(&spec.variant())) {
    st.value = SeqWindow{two_sided_fixed_point(s->rule, horizon + 1), 0};
  } else if (const auto* e = std::get_if<ExplicitSpec>(&spec.variant())) {
    st.value = SeqWindow{std::make_shared<PeriodicSource>(e->period), 0};
  }
  return st;
}

// ---------------------------------------------------------------------------
// Observable
// ---------------------------------------------------------------------------

Observable Observable::letter_weights(const SystemSpec& spec,
                                      std::vector<cplx> weights, bool centered,
                                      std::string name) {
  if (spec.is_rotation()) {
    throw std::invalid_argument("letter weights need a symbolic/finite system");
  }
  if (weights.size() != spec.alphabet_size()) {
    throw std::invalid_argument("letter weights: size must match alphabet");
  }
  Observable f;
  f.kind_ = Kind::kLetterWeights;
  if (centered) {
    const auto freq = spec.letter_frequencies();
    cplx mean{0.0, 0.0};
    for (std::size_t i = 0; i < weights.size(); ++i) {
      mean += freq[i] * weights[i];
    }
    for (auto& w : weights) w -= mean;
  }
  f.weights_ = std::move(weights);
  f.sup_bound_ = 0.0;
  f.is_real_ = true;
  for (const auto& w : f.weights_) {
    f.sup_bound_ = std::max(f.sup_bound_, std::abs(w));
    if (w.imag() != 0.0) f.is_real_ = false;
  }
  f.name_ = std::move(name);
  return f;
}

Observable Observable::cylinder(const SystemSpec& spec,
                                std::vector<Symbol> pattern,
                                std::int64_t anchor, std::string name) {
  if (!spec.is_symbolic() && !spec.is_finite_cyclic()) {
    throw std::invalid_argument("cylinder needs a symbolic system");
  }
  if (pattern.empty()) {
    throw std::invalid_argument("cylinder: empty pattern");
  }
  for (Symbol s : pattern) {
    if (s >= spec.alphabet_size()) {
      throw std::invalid_argument("cylinder: symbol out of range");
    }
  }
  Observable f;
  f.kind_ = Kind::kCylinder;
  f.pattern_ = std::move(pattern);
  f.anchor_ = anchor;
  f.sup_bound_ = 1.0;
  f.is_real_ = true;
  f.coord_min_ = anchor;
  f.coord_max_ = anchor + static_cast<std::int64_t>(f.pattern_.size()) - 1;
  f.name_ = std::move(name);
  return f;
}

Observable Observable::character(const SystemSpec& spec, std::int64_t k) {
  if (!spec.is_rotation()) {
    throw std::invalid_argument("character observables need the rotation");
  }
  Observable f;
  f.kind_ = Kind::kCharacter;
  f.character_k_ = k;
  f.alpha_ = std::get<RotationSpec>(spec.variant()).alpha;
  f.sup_bound_ = 1.0;
  f.is_real_ = (k == 0);
  f.name_ = "character:" + std::to_string(k);
  return f;
}

Observable Observable::constant_one(const SystemSpec& spec) {
  if (spec.is_rotation()) {
    Observable f = character(spec, 0);
    f.name_ = "constant";
    return f;
  }
  std::vector<cplx> w(spec.alphabet_size(), cplx{1.0, 0.0});
  return letter_weights(spec, std::move(w), false, "constant");
}

Observable Observable::parse(const SystemSpec& spec, const std::string& text) {
  auto split_tail = [&text](std::size_t colon) {
    return text.substr(colon + 1);
  };
  if (text == "constant") return constant_one(spec);
  if (text == "character") return character(spec, -1);
  if (text.rfind("character:", 0) == 0) {
    return character(spec, std::stoll(split_tail(9)));
  }
  if (text == "pm1" || text == "origin") {
    if (spec.alphabet_size() != 2) {
      throw std::invalid_argument("pm1 needs a two-letter alphabet");
    }
    return letter_weights(spec, {cplx{1.0, 0.0}, cplx{-1.0, 0.0}}, false,
                          text);
  }
  if (text.rfind("indicator:", 0) == 0 ||
      text.rfind("indicator-centered:", 0) == 0) {
    const bool centered = text.rfind("indicator-centered:", 0) == 0;
    const std::string tail = text.substr(text.find(':') + 1);
    if (tail.size() != 1) {
      throw std::invalid_argument("indicator wants a single letter");
    }
    const int idx = spec.symbol_index(tail[0]);
    if (idx < 0) {
      throw std::invalid_argument(std::string("unknown letter: ") + tail);
    }
    std::vector<cplx> w(spec.alphabet_size(), cplx{0.0, 0.0});
    w[static_cast<std::size_t>(idx)] = cplx{1.0, 0.0};
    return letter_weights(spec, std::move(w), centered, text);
  }
  if (text.rfind("weights:", 0) == 0) {
    std::vector<cplx> w;
    std::stringstream ss(text.substr(8));
    std::string item;
    while (std::getline(ss, item, ',')) w.emplace_back(std::stod(item), 0.0);
    return letter_weights(spec, std::move(w), false, text);
  }
  throw std::invalid_argument("unknown observable: " + text);
}

cplx Observable::eval(const State& x) const {
  switch (kind_) {
    case Kind::kLetterWeights: {
      if (const auto* idx = std::get_if<std::int64_t>(&x.value)) {
        return weights_[static_cast<std::size_t>(*idx)];
      }
      const auto& w = std::get<SeqWindow>(x.value);
      return weights_[w.source->at(w.shift)];
    }
    case Kind::kCylinder: {
      if (const auto* idx = std::get_if<std::int64_t>(&x.value)) {
        return (pattern_.size() == 1 && anchor_ == 0 &&
                pattern_[0] == static_cast<Symbol>(*idx))
                   ? cplx{1.0, 0.0}
                   : cplx{0.0, 0.0};
      }
      const auto& w = std::get<SeqWindow>(x.value);
      for (std::size_t i = 0; i < pattern_.size(); ++i) {
        if (w.source->at(w.shift + anchor_ +
                         static_cast<std::int64_t>(i)) != pattern_[i]) {
          return {0.0, 0.0};
        }
      }
      return {1.0, 0.0};
    }
    case Kind::kCharacter: {
      const auto& s = std::get<RotationState>(x.value);
      const double xi =
          frac(s.base_xi + static_cast<double>(s.shift) * alpha_);
      const double ang =
          kTwoPi * static_cast<double>(character_k_) * xi;
      return {std::cos(ang), std::sin(ang)};
    }
  }
  return {0.0, 0.0};
}

// ---------------------------------------------------------------------------
// orbit sampling
// ---------------------------------------------------------------------------

SampledSignal orbit_samples(const SystemSpec& spec, const Observable& f,
                            const State& x, std::int64_t length) {
  if (length < 1) throw std::invalid_argument("orbit length must be >= 1");
  SampledSignal sig;
  sig.values.resize(static_cast<std::size_t>(length));
  for (std::int64_t n = 0; n < length; ++n) {
    sig.values[static_cast<std::size_t>(n)] =
        f.eval(apply_action(spec, x, -n));
  }
  sig.origin = x.describe(spec);
  return sig;
}

std::vector<cplx> two_sided_samples(const SystemSpec& spec,
                                    const Observable& f, const State& x,
                                    std::int64_t half) {
  std::vector<cplx> out(static_cast<std::size_t>(2 * half + 1));
  for (std::int64_t t = -half; t <= half; ++t) {
    out[static_cast<std::size_t>(t + half)] =
        f.eval(apply_action(spec, x, -t));
  }
  return out;
}

}  // namespace specdiff
