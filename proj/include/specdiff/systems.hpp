#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "specdiff/test_function.hpp"

namespace specdiff {

using Symbol = std::uint8_t;

// ---------------------------------------------------------------------------
// substitution rules
// ---------------------------------------------------------------------------

struct SubstitutionRule {
  std::vector<char> letters;                 // display names; index == Symbol
  std::vector<std::vector<Symbol>> images;   // image word per letter

  std::size_t alphabet_size() const { return letters.size(); }

  // abelianization: matrix()[i][j] = occurrences of letter i in images[j]
  std::vector<std::vector<std::uint64_t>> matrix() const;
  bool is_primitive() const;
  double perron_eigenvalue() const;
  // invariant letter frequencies (normalized Perron eigenvector)
  std::vector<double> letter_frequencies() const;

  std::uint64_t fingerprint() const;

  static SubstitutionRule fibonacci();        // a -> ab, b -> a
  static SubstitutionRule thue_morse();       // a -> ab, b -> ba
  static SubstitutionRule period_doubling();  // a -> ab, b -> aa
  static SubstitutionRule from_strings(
      const std::vector<std::pair<char, std::string>>& rules);
};

// Prefix of the one-sided fixed point from the first letter whose image
// starts with itself. Throws if no such letter exists.
std::vector<Symbol> substitution_fixed_point(const SubstitutionRule& rule,
                                             std::int64_t length);

// ---------------------------------------------------------------------------
// system specifications
// ---------------------------------------------------------------------------

struct FiniteCyclicSpec {
  std::int64_t size = 1;
  std::int64_t step = 1;
  std::vector<double> weights;  // invariant; uniform when empty
};

struct RotationSpec {
  double alpha = 0.0;  // in (0,1)
};

struct BernoulliSpec {
  std::vector<char> letters;
  std::vector<double> probs;
};

struct SubstitutionSpec {
  SubstitutionRule rule;
};

// two-sided periodic extension of a finite word
struct ExplicitSpec {
  std::vector<char> letters;
  std::vector<Symbol> period;
};

class SystemSpec {
 public:
  using Variant = std::variant<FiniteCyclicSpec, RotationSpec, BernoulliSpec,
                               SubstitutionSpec, ExplicitSpec>;

  SystemSpec(Variant v, std::string name);

  static SystemSpec finite_cyclic(std::int64_t size, std::int64_t step = 1,
                                  std::vector<double> weights = {});
  static SystemSpec rotation(double alpha);
  static SystemSpec golden_rotation();  // alpha = (sqrt(5)-1)/2
  static SystemSpec bernoulli(std::vector<char> letters,
                              std::vector<double> probs);
  static SystemSpec substitution(SubstitutionRule rule, std::string name);
  static SystemSpec explicit_periodic(std::vector<char> letters,
                                      std::vector<Symbol> period);
  // fibonacci | thue-morse | period-doubling | rotation | bernoulli | cyclic
  static SystemSpec built_in(const std::string& name);
  static std::vector<std::string> built_in_names();

  const Variant& variant() const { return variant_; }
  const std::string& name() const { return name_; }

  bool is_finite_cyclic() const;
  bool is_rotation() const;
  bool is_symbolic() const;  // state reads from a symbol sequence

  // alphabet of symbolic systems; finite-cyclic states count as well
  // (their "letters" are the state indices)
  std::size_t alphabet_size() const;
  int symbol_index(char letter) const;  // -1 if unknown
  char letter_name(Symbol s) const;

  // invariant distribution over symbols / states. Throws for the rotation.
  std::vector<double> letter_frequencies() const;

 private:
  Variant variant_;
  std::string name_;
};

// ---------------------------------------------------------------------------
// states
// ---------------------------------------------------------------------------

// Immutable symbol source shared between the states of one orbit.
class SymbolSource {
 public:
  virtual ~SymbolSource() = default;
  virtual Symbol at(std::int64_t coord) const = 0;
  // inclusive coordinate bounds the source can serve
  virtual std::int64_t min_coord() const = 0;
  virtual std::int64_t max_coord() const = 0;
};

// state of a symbolic system: coordinate j evaluates source->at(shift + j)
struct SeqWindow {
  std::shared_ptr<const SymbolSource> source;
  std::int64_t shift = 0;
};

// state of the rotation: angle = frac(base_xi + shift * alpha); keeping the
// integer shift separate makes the action compose exactly
struct RotationState {
  double base_xi = 0.0;
  std::int64_t shift = 0;
};

class State {
 public:
  std::variant<std::int64_t, RotationState, SeqWindow> value;

  std::string describe(const SystemSpec& spec) const;
};

// the group action alpha_t; sampling evaluates f(alpha_{-n} x)
State apply_action(const SystemSpec& spec, const State& x, std::int64_t t);

// effective rotation angle in [0,1)
double rotation_angle(const SystemSpec& spec, const State& x);

// m-distributed state. `horizon` is the largest |coordinate| the caller will
// touch; substitution samplers size their supertile window by it.
State sample_invariant(const SystemSpec& spec, std::uint64_t seed,
                       std::int64_t horizon);

// canonical reference point: two-sided substitution fixed point, index 0,
// angle 0, seed-0 Bernoulli realization
State origin_state(const SystemSpec& spec, std::int64_t horizon);

// ---------------------------------------------------------------------------
// observables
// ---------------------------------------------------------------------------

class Observable {
 public:
  // f(x) = weights[symbol at coordinate 0] (or weights[state index] on the
  // finite cyclic system). `centered` subtracts the invariant mean.
  static Observable letter_weights(const SystemSpec& spec,
                                   std::vector<cplx> weights, bool centered,
                                   std::string name);
  // indicator of the pattern at coordinates anchor .. anchor+len-1
  static Observable cylinder(const SystemSpec& spec,
                             std::vector<Symbol> pattern, std::int64_t anchor,
                             std::string name);
  // rotation only: f(xi) = e^{2 pi i k xi}
  static Observable character(const SystemSpec& spec, std::int64_t k);
  // f == 1 on any system
  static Observable constant_one(const SystemSpec& spec);

  // CLI shorthands: "character", "character:k", "pm1", "origin",
  // "indicator:<letter>", "indicator-centered:<letter>", "constant",
  // "weights:w0,w1,..."
  static Observable parse(const SystemSpec& spec, const std::string& text);

  cplx eval(const State& x) const;
  double sup_bound() const { return sup_bound_; }
  bool is_real() const { return is_real_; }
  const std::string& name() const { return name_; }
  // widest coordinate the observable reads (cylinder patterns)
  std::int64_t coord_min() const { return coord_min_; }
  std::int64_t coord_max() const { return coord_max_; }

 private:
  enum class Kind { kLetterWeights, kCylinder, kCharacter };
  Kind kind_ = Kind::kLetterWeights;
  std::vector<cplx> weights_;  // centering is folded into the weights
  std::vector<Symbol> pattern_;
  std::int64_t anchor_ = 0;
  std::int64_t character_k_ = 0;
  double alpha_ = 0.0;  // rotation angle captured by character observables
  double sup_bound_ = 0.0;
  bool is_real_ = true;
  std::int64_t coord_min_ = 0;
  std::int64_t coord_max_ = 0;
  std::string name_;
};

// ---------------------------------------------------------------------------
// orbit sampling
// ---------------------------------------------------------------------------

// values[n] = f(alpha_{-n} x), n = 0..length-1
struct SampledSignal {
  std::vector<cplx> values;
  std::string origin;
};

SampledSignal orbit_samples(const SystemSpec& spec, const Observable& f,
                            const State& x, std::int64_t length);

// values[t + half] = f(alpha_{-t} x) for t in [-half, half]
std::vector<cplx> two_sided_samples(const SystemSpec& spec,
                                    const Observable& f, const State& x,
                                    std::int64_t half);

}  // namespace specdiff
