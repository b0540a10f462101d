#include <map>
#include <string>

#include "modalc/hilbert.hpp"
#include "modalc/parser.hpp"

namespace modalc {

namespace {

using P = HilbertProof;

std::vector<Formula> hypotheses(const DualContext& ctx) {
  std::vector<Formula> h;
  for (const auto& b : ctx.modal) h.push_back(Formula::box(formula_of(b.type)));
  for (const auto& b : ctx.intuitionistic) h.push_back(formula_of(b.type));
  return h;
}

class Translator {
 public:
  explicit Translator(SystemId sys) : logic_(logic_for(sys)) {}

  P run(const TypingDerivation& d) {
    const Judgment& j = d.conclusion;
    const std::size_t nd = j.ctx.modal.size();
    switch (d.rule) {
      case Rule::Var: return P::assn(nd + *j.ctx.intuitionistic.index_of(j.term.name()));
      case Rule::BoxVar: {
        std::size_t i = *j.ctx.modal.index_of(j.term.name());
        return P::mp(P::ax(Schema::T, {formula_of(j.ctx.modal[i].type)}), P::assn(i));
      }
      case Rule::ProdIntro:
        return P::mp(P::mp(P::ax(Schema::Pair, {formula_of(d.premises[0].conclusion.type),
                                                formula_of(d.premises[1].conclusion.type)}),
                           run(d.premises[0])),
                     run(d.premises[1]));
      case Rule::ProdElim1:
      case Rule::ProdElim2: {
        const Type& t = d.premises[0].conclusion.type;
        Schema s = d.rule == Rule::ProdElim1 ? Schema::Fst : Schema::Snd;
        return P::mp(P::ax(s, {formula_of(t.first()), formula_of(t.second())}), run(d.premises[0]));
      }
      case Rule::ArrowIntro: {
        const TypingDerivation& b = d.premises[0];
        return discharge_last(logic_, hypotheses(b.conclusion.ctx), run(b));
      }
      case Rule::ArrowElim: return P::mp(run(d.premises[0]), run(d.premises[1]));
      case Rule::BoxElim: {
        // The body lives under []Delta, []B, Gamma; move []B to the end.
        const TypingDerivation& body = d.premises[1];
        std::vector<Formula> h = hypotheses(j.ctx);
        const std::size_t n = h.size();
        std::vector<std::size_t> remap(n + 1);
        for (std::size_t i = 0; i < nd; ++i) remap[i] = i;
        remap[nd] = n;
        for (std::size_t i = nd; i < n; ++i) remap[i + 1] = i;
        h.push_back(Formula::box(formula_of(d.premises[0].conclusion.type.first())));
        P discharged = discharge_last(logic_, h, reindex(run(body), remap));
        return P::mp(discharged, run(d.premises[0]));
      }
      case Rule::BoxIntroK: return box_intro(d, 0);
      case Rule::BoxIntroS4: return box_intro(d, 1);
      case Rule::BoxIntroK4: return box_intro(d, 2);
      case Rule::BoxIntroGL: return box_intro(d, 3);
    }
    throw UnsupportedConstruct("unknown rule");
  }

 private:
  // mode 0: premise <.;Delta>, 1: <Delta;.>, 2: <Delta;Delta'>,
  // 3: <Delta;Delta',w:[]A> (GL).
  P box_intro(const TypingDerivation& d, int mode) {
    const TypingDerivation& prem = d.premises[0];
    const Context& delta = d.conclusion.ctx.modal;
    std::vector<Formula> h = hypotheses(prem.conclusion.ctx);
    Formula a = formula_of(prem.conclusion.type);
    P p = run(prem);
    if (mode == 3) {
      p = discharge_last(logic_, h, p);
      a = Formula::implies(h.back(), a);
      h.pop_back();
    }
    // Curry every hypothesis of the premise, then necessitate.
    Formula curried = a;
    while (!h.empty()) {
      p = discharge_last(logic_, h, p);
      curried = Formula::implies(h.back(), curried);
      h.pop_back();
    }
    p = P::nec(p);
    std::vector<P> feed;
    for (std::size_t i = 0; i < delta.size(); ++i) {
      Formula b = formula_of(delta[i].type);
      if (mode == 0) feed.push_back(P::assn(i));
      else if (mode == 3) feed.push_back(P::mp(four(b), P::assn(i)));
      else feed.push_back(P::mp(P::ax(Schema::Four, {b}), P::assn(i)));
    }
    if (mode >= 2)
      for (std::size_t i = 0; i < delta.size(); ++i) feed.push_back(P::assn(i));
    for (const P& arg : feed) {
      Formula dom = curried.first(), cod = curried.second();
      p = P::mp(P::mp(P::ax(Schema::K, {dom, cod}), p), arg);
      curried = cod;
    }
    if (mode == 3) p = P::mp(P::ax(Schema::GL, {curried.first().first()}), p);
    return p;
  }

  const P& four(const Formula& b) {
    std::string key = print_formula(b);
    auto it = fours_.find(key);
    if (it == fours_.end()) it = fours_.emplace(key, gl_four(b)).first;
    return it->second;
  }

  LogicId logic_;
  std::map<std::string, P> fours_;
};

}  // namespace

Translation translate(SystemId sys, const TypingDerivation& d) {
  DerivationVerdict v = check_derivation(d, sys);
  if (!v.ok) throw UnsupportedConstruct("derivation does not check: " + v.reason);
  Translation t;
  t.logic = logic_for(sys);
  t.assumptions = hypotheses(d.conclusion.ctx);
  t.goal = formula_of(d.conclusion.type);
  t.proof = Translator(sys).run(d);
  return t;
}

}  // namespace modalc
