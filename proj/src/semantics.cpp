#include "modalc/semantics.hpp"

#include <sstream>

#include "modalc/equality.hpp"
#include "modalc/parser.hpp"

namespace modalc {

namespace {

constexpr Elem kMaxSetSize = Elem{1} << 62;
// Largest table interp_term and the box maps will enumerate.
constexpr Elem kMaxTable = Elem{1} << 22;

Elem checked_mul(Elem a, Elem b) {
  if (a != 0 && b > kMaxSetSize / a) throw TooLarge("finite set too large to enumerate");
  return a * b;
}

Elem checked_pow(Elem base, Elem exp) {
  Elem out = 1;
  for (Elem i = 0; i < exp; ++i) {
    out = checked_mul(out, base);
    if (out == 0) return 0;
  }
  return out;
}

}  // namespace

FinSet FinSet::unit() { return FinSet(std::make_shared<const Node>(Node{SetKind::Unit, "1", 1, {}})); }
FinSet FinSet::atom(std::string name, Elem size) {
  return FinSet(std::make_shared<const Node>(Node{SetKind::Atom, std::move(name), size, {}}));
}
FinSet FinSet::prod(FinSet a, FinSet b) {
  Elem n = checked_mul(a.size(), b.size());
  return FinSet(std::make_shared<const Node>(Node{SetKind::Prod, {}, n, {std::move(a), std::move(b)}}));
}
FinSet FinSet::exp(FinSet dom, FinSet cod) {
  Elem n = checked_pow(cod.size(), dom.size());
  return FinSet(std::make_shared<const Node>(Node{SetKind::Exp, {}, n, {std::move(dom), std::move(cod)}}));
}

bool operator==(const FinSet& a, const FinSet& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case SetKind::Unit: return true;
    case SetKind::Atom: return a.name() == b.name();
    default: return a.first() == b.first() && a.second() == b.second();
  }
}

Elem FinSet::pair(Elem a, Elem b) const { return a * second().size() + b; }

std::pair<Elem, Elem> FinSet::unpair(Elem e) const {
  Elem n = second().size();
  return {e / n, e % n};
}

Elem FinSet::apply(Elem table, Elem arg) const {
  Elem c = second().size();
  Elem shift = 1;
  for (Elem i = arg + 1; i < first().size(); ++i) shift *= c;
  return (table / shift) % c;
}

Elem FinSet::tabulate(const std::function<Elem(Elem)>& f) const {
  Elem c = second().size();
  Elem idx = 0;
  for (Elem d = 0; d < first().size(); ++d) idx = idx * c + f(d);
  return idx;
}

std::string FinSet::show(Elem e) const {
  switch (kind()) {
    case SetKind::Unit: return "*";
    case SetKind::Atom: return std::to_string(e);
    case SetKind::Prod: {
      auto [a, b] = unpair(e);
      return "(" + first().show(a) + "," + second().show(b) + ")";
    }
    case SetKind::Exp: {
      if (first().size() > 16) return "#" + std::to_string(e);
      std::string out = "[";
      for (Elem d = 0; d < first().size(); ++d) {
        if (d) out += ",";
        out += second().show(apply(e, d));
      }
      return out + "]";
    }
  }
  return "?";
}

std::string FinSet::describe() const {
  switch (kind()) {
    case SetKind::Unit: return "1";
    case SetKind::Atom: return name() + "(" + std::to_string(size()) + ")";
    case SetKind::Prod: return "(" + first().describe() + " x " + second().describe() + ")";
    case SetKind::Exp: return "(" + first().describe() + " => " + second().describe() + ")";
  }
  return "?";
}

FinSet product_of(const std::vector<FinSet>& parts) {
  if (parts.empty()) return FinSet::unit();
  FinSet acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = FinSet::prod(acc, parts[i]);
  return acc;
}

std::vector<Elem> split(const std::vector<FinSet>& parts, Elem e) {
  std::vector<Elem> xs(parts.size());
  for (std::size_t i = parts.size(); i-- > 1;) {
    Elem n = parts[i].size();
    xs[i] = e % n;
    e /= n;
  }
  if (!parts.empty()) xs[0] = e;
  return xs;
}

Elem join(const std::vector<FinSet>& parts, const std::vector<Elem>& xs) {
  if (parts.empty()) return 0;
  Elem e = xs[0];
  for (std::size_t i = 1; i < parts.size(); ++i) e = e * parts[i].size() + xs[i];
  return e;
}

Elem Endofunctor::delta(const FinSet&, Elem) const { throw ModelMismatch(name() + " has no delta"); }
std::optional<Elem> Endofunctor::epsilon(const FinSet&, Elem) const {
  throw ModelMismatch(name() + " has no epsilon");
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

class IdentityFunctor : public Endofunctor {
 public:
  std::string name() const override { return "identity"; }
  FinSet apply(const FinSet& x) const override { return x; }
  Elem map(const FinSet&, const FinSet&, const ElemFn& f, Elem e) const override { return f(e); }
  Elem unit() const override { return 0; }
  Elem tensor(const FinSet&, const FinSet& b, Elem fa, Elem fb) const override { return fa * b.size() + fb; }
  bool has_delta() const override { return true; }
  bool has_epsilon() const override { return true; }
  Elem delta(const FinSet&, Elem e) const override { return e; }
  std::optional<Elem> epsilon(const FinSet&, Elem e) const override { return e; }
  std::set<SystemId> claims() const override { return {SystemId::K, SystemId::K4, SystemId::T, SystemId::S4}; }
};

// F X = 1. Its epsilon is only a candidate: it picks the first element,
// which is not natural and does not exist on the empty set.
class UnitFunctor : public Endofunctor {
 public:
  std::string name() const override { return "unit"; }
  FinSet apply(const FinSet&) const override { return FinSet::unit(); }
  Elem map(const FinSet&, const FinSet&, const ElemFn&, Elem) const override { return 0; }
  Elem unit() const override { return 0; }
  Elem tensor(const FinSet&, const FinSet&, Elem, Elem) const override { return 0; }
  bool has_delta() const override { return true; }
  bool has_epsilon() const override { return true; }
  Elem delta(const FinSet&, Elem) const override { return 0; }
  std::optional<Elem> epsilon(const FinSet& a, Elem) const override {
    if (a.size() == 0) return std::nullopt;
    return 0;
  }
  std::set<SystemId> claims() const override { return {SystemId::K, SystemId::K4}; }
};

// F X = X x X with delta (a,b) |-> ((a,b),(a,b)).
class DiagonalFunctor : public Endofunctor {
 public:
  explicit DiagonalFunctor(bool with_fst) : with_fst_(with_fst) {}
  std::string name() const override { return with_fst_ ? "diag-fst" : "diag"; }
  FinSet apply(const FinSet& x) const override { return FinSet::prod(x, x); }
  Elem map(const FinSet& x, const FinSet& y, const ElemFn& f, Elem e) const override {
    Elem n = x.size();
    return f(e / n) * y.size() + f(e % n);
  }
  Elem unit() const override { return 0; }
  Elem tensor(const FinSet& a, const FinSet& b, Elem fa, Elem fb) const override {
    Elem na = a.size(), nb = b.size();
    Elem first = (fa / na) * nb + fb / nb;
    Elem second = (fa % na) * nb + fb % nb;
    return first * (na * nb) + second;
  }
  bool has_delta() const override { return true; }
  bool has_epsilon() const override { return with_fst_; }
  Elem delta(const FinSet& a, Elem e) const override { return e * (a.size() * a.size()) + e; }
  std::optional<Elem> epsilon(const FinSet& a, Elem e) const override {
    if (!with_fst_) return Endofunctor::epsilon(a, e);
    return e / a.size();
  }
  std::set<SystemId> claims() const override {
    if (with_fst_) return {SystemId::K, SystemId::K4, SystemId::T, SystemId::S4};
    return {SystemId::K, SystemId::K4};
  }

 private:
  bool with_fst_;
};

}  // namespace

std::shared_ptr<const Endofunctor> make_functor(const std::string& name) {
  if (name == "identity") return std::make_shared<IdentityFunctor>();
  if (name == "unit") return std::make_shared<UnitFunctor>();
  if (name == "diag") return std::make_shared<DiagonalFunctor>(false);
  if (name == "diag-fst") return std::make_shared<DiagonalFunctor>(true);
  throw std::invalid_argument("unknown model '" + name + "'");
}

std::vector<std::string> functor_names() { return {"identity", "unit", "diag", "diag-fst"}; }

// ---------------------------------------------------------------------------
// Law verification

const LawResult* ModelReport::violation() const {
  for (const auto& l : laws)
    if (!l.ok) return &l;
  return nullptr;
}

namespace {

class LawChecker {
 public:
  LawChecker(const Endofunctor& f, Elem max_size) : f_(f) {
    for (Elem n = 0; n <= max_size; ++n) sets_.push_back(FinSet::atom("A", n));
    // Law references stay valid while later laws are added.
    report_.laws.reserve(32);
  }

  ModelReport run(SystemId sys) {
    functoriality();
    monoidal();
    bool four = sys == SystemId::K4 || sys == SystemId::S4;
    bool t = sys == SystemId::T || sys == SystemId::S4;
    if (four) {
      if (!f_.has_delta()) missing("delta");
      else delta_laws();
    }
    if (t) {
      if (!f_.has_epsilon()) missing("epsilon");
      else epsilon_laws();
    }
    if (sys == SystemId::S4 && f_.has_delta() && f_.has_epsilon()) counit_laws();
    for (const auto& l : report_.laws)
      if (!l.ok) report_.ok = false;
    return report_;
  }

 private:
  LawResult& law(const std::string& name) {
    report_.laws.push_back(LawResult{name, true, {}});
    return report_.laws.back();
  }

  static bool fail(LawResult& r, const std::string& witness) {
    if (r.ok) {
      r.ok = false;
      r.witness = witness;
    }
    return false;
  }

  void missing(const std::string& what) { fail(law(what + " exists"), f_.name() + " provides no " + what); }

  // Every function between the two sets, as tables of exp(a, b).
  template <typename Fn>
  bool for_functions(const FinSet& a, const FinSet& b, Fn&& fn) {
    FinSet e = FinSet::exp(a, b);
    for (Elem t = 0; t < e.size(); ++t) {
      if (!fn(e, t)) return false;
    }
    return true;
  }

  static std::string sz(const FinSet& s) { return std::to_string(s.size()); }

  void functoriality() {
    LawResult& id = law("F(id) = id");
    for (const auto& x : sets_) {
      FinSet fx = f_.apply(x);
      for (Elem e = 0; e < fx.size(); ++e) {
        Elem got = f_.map(x, x, [](Elem v) { return v; }, e);
        if (got != e) {
          fail(id, "|A| = " + sz(x) + ", x = " + fx.show(e) + ": got " + fx.show(got));
          break;
        }
      }
    }
    LawResult& comp = law("F(g . f) = F(g) . F(f)");
    for (const auto& x : sets_)
      for (const auto& y : sets_)
        for (const auto& z : sets_) {
          if (!comp.ok) return;
          FinSet fx = f_.apply(x), fz = f_.apply(z);
          for_functions(x, y, [&](const FinSet& exy, Elem fa) {
            return for_functions(y, z, [&](const FinSet& eyz, Elem ga) {
              auto f = [&](Elem v) { return exy.apply(fa, v); };
              auto g = [&](Elem v) { return eyz.apply(ga, v); };
              for (Elem e = 0; e < fx.size(); ++e) {
                Elem lhs = f_.map(x, z, [&](Elem v) { return g(f(v)); }, e);
                Elem rhs = f_.map(y, z, g, f_.map(x, y, f, e));
                if (lhs != rhs)
                  return fail(comp, "f = " + exy.show(fa) + ", g = " + eyz.show(ga) + ", x = " + fx.show(e) + ": " +
                                        fz.show(lhs) + " vs " + fz.show(rhs));
              }
              return true;
            });
          });
        }
  }

  void monoidal() {
    const FinSet one = FinSet::unit();
    LawResult& m0 = law("m0 iso");
    FinSet f1 = f_.apply(one);
    if (f1.size() != 1) fail(m0, "|F1| = " + sz(f1));

    LawResult& iso = law("m iso");
    for (const auto& a : sets_)
      for (const auto& b : sets_) {
        if (!iso.ok) break;
        FinSet fa = f_.apply(a), fb = f_.apply(b), fab = f_.apply(FinSet::prod(a, b));
        std::vector<bool> hit(fab.size(), false);
        Elem count = 0;
        for (Elem x = 0; x < fa.size() && iso.ok; ++x)
          for (Elem y = 0; y < fb.size(); ++y) {
            Elem r = f_.tensor(a, b, x, y);
            if (r >= fab.size() || hit[r]) {
              fail(iso, "|A| = " + sz(a) + ", |B| = " + sz(b) + ": m not injective at (" + fa.show(x) + "," +
                            fb.show(y) + ")");
              break;
            }
            hit[r] = true;
            ++count;
          }
        if (iso.ok && count != fab.size())
          fail(iso, "|A| = " + sz(a) + ", |B| = " + sz(b) + ": m not surjective");
      }

    LawResult& nat = law("m natural");
    for (const auto& a : sets_)
      for (const auto& a2 : sets_)
        for (const auto& b : sets_)
          for (const auto& b2 : sets_) {
            if (!nat.ok) break;
            FinSet fa = f_.apply(a), fb = f_.apply(b);
            FinSet ab = FinSet::prod(a, b), ab2 = FinSet::prod(a2, b2);
            for_functions(a, a2, [&](const FinSet& ea, Elem ft) {
              return for_functions(b, b2, [&](const FinSet& eb, Elem gt) {
                auto f = [&](Elem v) { return ea.apply(ft, v); };
                auto g = [&](Elem v) { return eb.apply(gt, v); };
                auto fg = [&](Elem v) {
                  auto [p, q] = ab.unpair(v);
                  return ab2.pair(f(p), g(q));
                };
                for (Elem x = 0; x < fa.size(); ++x)
                  for (Elem y = 0; y < fb.size(); ++y) {
                    Elem lhs = f_.map(ab, ab2, fg, f_.tensor(a, b, x, y));
                    Elem rhs = f_.tensor(a2, b2, f_.map(a, a2, f, x), f_.map(b, b2, g, y));
                    if (lhs != rhs)
                      return fail(nat, "f = " + ea.show(ft) + ", g = " + eb.show(gt) + " at (" + fa.show(x) + "," +
                                           fb.show(y) + ")");
                  }
                return true;
              });
            });
          }

    LawResult& assoc = law("m associative");
    for (const auto& a : sets_)
      for (const auto& b : sets_)
        for (const auto& c : sets_) {
          if (!assoc.ok) break;
          FinSet ab = FinSet::prod(a, b), bc = FinSet::prod(b, c);
          FinSet abc = FinSet::prod(ab, c), a_bc = FinSet::prod(a, bc);
          FinSet fa = f_.apply(a), fb = f_.apply(b), fc = f_.apply(c);
          auto alpha = [&](Elem v) {
            auto [pq, r] = abc.unpair(v);
            auto [p, q] = ab.unpair(pq);
            return a_bc.pair(p, bc.pair(q, r));
          };
          for (Elem x = 0; x < fa.size() && assoc.ok; ++x)
            for (Elem y = 0; y < fb.size() && assoc.ok; ++y)
              for (Elem z = 0; z < fc.size(); ++z) {
                Elem lhs = f_.map(abc, a_bc, alpha, f_.tensor(ab, c, f_.tensor(a, b, x, y), z));
                Elem rhs = f_.tensor(a, bc, x, f_.tensor(b, c, y, z));
                if (lhs != rhs) {
                  fail(assoc, "at (" + fa.show(x) + "," + fb.show(y) + "," + fc.show(z) + ")");
                  break;
                }
              }
        }

    LawResult& unit = law("m unital");
    if (f1.size() != 1) return;
    for (const auto& a : sets_) {
      FinSet fa = f_.apply(a);
      FinSet la = FinSet::prod(one, a), ra = FinSet::prod(a, one);
      for (Elem x = 0; x < fa.size(); ++x) {
        Elem left = f_.map(la, a, [&](Elem v) { return la.unpair(v).second; }, f_.tensor(one, a, f_.unit(), x));
        Elem right = f_.map(ra, a, [&](Elem v) { return ra.unpair(v).first; }, f_.tensor(a, one, x, f_.unit()));
        if (left != x || right != x) {
          fail(unit, "|A| = " + sz(a) + ", x = " + fa.show(x));
          break;
        }
      }
    }
  }

  void delta_laws() {
    LawResult& nat = law("delta natural");
    for (const auto& a : sets_)
      for (const auto& b : sets_) {
        if (!nat.ok) break;
        FinSet fa = f_.apply(a), fb = f_.apply(b);
        for_functions(a, b, [&](const FinSet& e, Elem ft) {
          auto f = [&](Elem v) { return e.apply(ft, v); };
          auto ff = [&](Elem v) { return f_.map(a, b, f, v); };
          for (Elem x = 0; x < fa.size(); ++x) {
            Elem lhs = f_.map(fa, fb, ff, f_.delta(a, x));
            Elem rhs = f_.delta(b, f_.map(a, b, f, x));
            if (lhs != rhs) return fail(nat, "f = " + e.show(ft) + ", x = " + fa.show(x));
          }
          return true;
        });
      }

    LawResult& mono = law("delta monoidal");
    const FinSet one = FinSet::unit();
    FinSet f1 = f_.apply(one);
    auto m0_map = [&](Elem) { return f_.unit(); };
    if (f_.delta(one, f_.unit()) != f_.map(one, f1, m0_map, f_.unit())) fail(mono, "at m0");
    for (const auto& a : sets_)
      for (const auto& b : sets_) {
        if (!mono.ok) break;
        FinSet fa = f_.apply(a), fb = f_.apply(b), ab = FinSet::prod(a, b);
        FinSet fafb = FinSet::prod(fa, fb);
        auto m = [&](Elem v) {
          auto [p, q] = fafb.unpair(v);
          return f_.tensor(a, b, p, q);
        };
        for (Elem x = 0; x < fa.size() && mono.ok; ++x)
          for (Elem y = 0; y < fb.size(); ++y) {
            Elem lhs = f_.delta(ab, f_.tensor(a, b, x, y));
            Elem rhs = f_.map(fafb, f_.apply(ab), m, f_.tensor(fa, fb, f_.delta(a, x), f_.delta(b, y)));
            if (lhs != rhs) {
              fail(mono, "|A| = " + sz(a) + ", |B| = " + sz(b) + " at (" + fa.show(x) + "," + fb.show(y) + ")");
              break;
            }
          }
      }

    LawResult& coassoc = law("delta coassociative");
    for (const auto& a : sets_) {
      FinSet fa = f_.apply(a), ffa = f_.apply(fa);
      for (Elem x = 0; x < fa.size(); ++x) {
        Elem d = f_.delta(a, x);
        Elem lhs = f_.map(fa, ffa, [&](Elem v) { return f_.delta(a, v); }, d);
        Elem rhs = f_.delta(fa, d);
        if (lhs != rhs) {
          fail(coassoc, "|A| = " + sz(a) + ", x = " + fa.show(x));
          break;
        }
      }
    }
  }

  void epsilon_laws() {
    LawResult& nat = law("epsilon natural");
    for (const auto& a : sets_)
      for (const auto& b : sets_) {
        if (!nat.ok) break;
        FinSet fa = f_.apply(a);
        for_functions(a, b, [&](const FinSet& e, Elem ft) {
          auto f = [&](Elem v) { return e.apply(ft, v); };
          for (Elem x = 0; x < fa.size(); ++x) {
            auto ea = f_.epsilon(a, x);
            auto eb = f_.epsilon(b, f_.map(a, b, f, x));
            if (!ea || !eb) continue;
            if (f(*ea) != *eb)
              return fail(nat, "|A| = " + sz(a) + ", |B| = " + sz(b) + ", f = " + e.show(ft) + ", x = " +
                                   fa.show(x) + ": f(eps x) = " + std::to_string(f(*ea)) + " but eps(F f x) = " +
                                   std::to_string(*eb));
          }
          return true;
        });
      }

    LawResult& mono = law("epsilon monoidal");
    const FinSet one = FinSet::unit();
    if (auto e1 = f_.epsilon(one, f_.unit()); !e1 || *e1 != 0) fail(mono, "at m0");
    for (const auto& a : sets_)
      for (const auto& b : sets_) {
        if (!mono.ok) break;
        FinSet fa = f_.apply(a), fb = f_.apply(b), ab = FinSet::prod(a, b);
        for (Elem x = 0; x < fa.size() && mono.ok; ++x)
          for (Elem y = 0; y < fb.size(); ++y) {
            auto lhs = f_.epsilon(ab, f_.tensor(a, b, x, y));
            auto ex = f_.epsilon(a, x), ey = f_.epsilon(b, y);
            if (!lhs || !ex || !ey) continue;
            if (*lhs != ab.pair(*ex, *ey)) {
              fail(mono, "|A| = " + sz(a) + ", |B| = " + sz(b) + " at (" + fa.show(x) + "," + fb.show(y) + ")");
              break;
            }
          }
      }

    LawResult& total = law("epsilon total");
    for (const auto& a : sets_) {
      FinSet fa = f_.apply(a);
      for (Elem x = 0; x < fa.size(); ++x)
        if (!f_.epsilon(a, x)) {
          fail(total, "no component at |A| = " + sz(a) + ", x = " + fa.show(x));
          break;
        }
    }
  }

  void counit_laws() {
    LawResult& left = law("eps_F . delta = id");
    LawResult& right = law("F(eps) . delta = id");
    for (const auto& a : sets_) {
      FinSet fa = f_.apply(a);
      for (Elem x = 0; x < fa.size(); ++x) {
        Elem d = f_.delta(a, x);
        auto l = f_.epsilon(fa, d);
        if (left.ok && (!l || *l != x)) fail(left, "|A| = " + sz(a) + ", x = " + fa.show(x));
        bool defined = true;
        Elem r = f_.map(fa, a,
                        [&](Elem v) {
                          auto e = f_.epsilon(a, v);
                          if (!e) defined = false;
                          return e.value_or(0);
                        },
                        d);
        if (right.ok && (!defined || r != x))
          fail(right, "|A| = " + sz(a) + ": " + fa.show(x) + " |-> " + (defined ? fa.show(r) : "undefined"));
      }
    }
  }

  const Endofunctor& f_;
  std::vector<FinSet> sets_;
  ModelReport report_;
};

}  // namespace

ModelReport verify_model(const Endofunctor& f, SystemId sys, Elem max_size) {
  if (sys == SystemId::GL) throw ModelMismatch("no finite models are provided for GL");
  return LawChecker(f, max_size).run(sys);
}

ModelReport verify_model(const FiniteModel& model, SystemId sys, Elem max_size) {
  return verify_model(*model.functor, sys, max_size);
}

// ---------------------------------------------------------------------------
// Denotations

FinSet interp_type(const FiniteModel& model, const Type& t) {
  switch (t.kind()) {
    case TypeKind::Atom: {
      auto it = model.atoms.find(t.name());
      if (it == model.atoms.end()) throw UnknownAtom("atom " + t.name() + " has no interpretation");
      return FinSet::atom(t.name(), it->second);
    }
    case TypeKind::Prod: return FinSet::prod(interp_type(model, t.first()), interp_type(model, t.second()));
    case TypeKind::Arrow: return FinSet::exp(interp_type(model, t.first()), interp_type(model, t.second()));
    case TypeKind::Box: return model.functor->apply(interp_type(model, t.first()));
  }
  return {};
}

namespace {

std::vector<FinSet> ctx_parts(const FiniteModel& model, const DualContext& ctx) {
  std::vector<FinSet> parts;
  for (const auto& b : ctx.modal) parts.push_back(model.functor->apply(interp_type(model, b.type)));
  for (const auto& b : ctx.intuitionistic) parts.push_back(interp_type(model, b.type));
  return parts;
}

void guard(Elem n) {
  if (n > kMaxTable) throw TooLarge("table of " + std::to_string(n) + " entries exceeds the enumeration limit");
}

std::vector<FinSet> boxed(const Endofunctor& f, const std::vector<FinSet>& a) {
  std::vector<FinSet> out;
  for (const auto& s : a) out.push_back(f.apply(s));
  return out;
}

// Common shape of the three box maps: for x_i in F a_i, feed m^(k) over
// `sets` with the elements `args(xs)`, then apply F g.
Denotation box_map(const Endofunctor& f, const std::vector<FinSet>& a, const Denotation& g,
                   const std::vector<FinSet>& sets,
                   const std::function<std::vector<Elem>(const std::vector<Elem>&)>& args) {
  if (!(g.dom == product_of(sets)))
    throw std::invalid_argument("box map: domain " + g.dom.describe() + " does not match " +
                                product_of(sets).describe());
  std::vector<FinSet> fa = boxed(f, a);
  Denotation out{product_of(fa), f.apply(g.cod), {}};
  guard(out.dom.size());
  FinSet inner = product_of(sets);
  out.table.reserve(out.dom.size());
  for (Elem e = 0; e < out.dom.size(); ++e) {
    Elem y = monoidal_n(f, sets, args(split(fa, e)));
    out.table.push_back(f.map(inner, g.cod, [&](Elem v) { return g.table[v]; }, y));
  }
  return out;
}

}  // namespace

FinSet interp_ctx(const FiniteModel& model, const DualContext& ctx) { return product_of(ctx_parts(model, ctx)); }

Elem monoidal_n(const Endofunctor& f, const std::vector<FinSet>& a, const std::vector<Elem>& xs) {
  if (a.empty()) return f.unit();
  Elem acc = xs[0];
  FinSet acc_set = a[0];
  for (std::size_t i = 1; i < a.size(); ++i) {
    acc = f.tensor(acc_set, a[i], acc, xs[i]);
    acc_set = FinSet::prod(acc_set, a[i]);
  }
  return acc;
}

Denotation box_bullet(const Endofunctor& f, const std::vector<FinSet>& a, const Denotation& g) {
  return box_map(f, a, g, a, [](const std::vector<Elem>& xs) { return xs; });
}

Denotation box_sharp(const Endofunctor& f, const std::vector<FinSet>& a, const Denotation& g) {
  std::vector<FinSet> sets = boxed(f, a);
  sets.insert(sets.end(), a.begin(), a.end());
  return box_map(f, a, g, sets, [&](const std::vector<Elem>& xs) {
    std::vector<Elem> out;
    for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(f.delta(a[i], xs[i]));
    out.insert(out.end(), xs.begin(), xs.end());
    return out;
  });
}

Denotation box_star(const Endofunctor& f, const std::vector<FinSet>& a, const Denotation& g) {
  return box_map(f, a, g, boxed(f, a), [&](const std::vector<Elem>& xs) {
    std::vector<Elem> out;
    for (std::size_t i = 0; i < xs.size(); ++i) out.push_back(f.delta(a[i], xs[i]));
    return out;
  });
}

namespace {

class Interpreter {
 public:
  explicit Interpreter(const FiniteModel& model) : model_(model), f_(*model.functor) {}

  Denotation tabulate(const TypingDerivation& d) {
    std::vector<FinSet> parts = ctx_parts(model_, d.conclusion.ctx);
    Denotation out{product_of(parts), type(d.conclusion.type), {}};
    guard(out.dom.size());
    out.table.reserve(out.dom.size());
    for (Elem e = 0; e < out.dom.size(); ++e) out.table.push_back(eval(d, split(parts, e)));
    return out;
  }

 private:
  FinSet type(const Type& t) {
    auto it = types_.find(t);
    if (it != types_.end()) return it->second;
    FinSet s = interp_type(model_, t);
    types_.emplace(t, s);
    return s;
  }

  Elem eval(const TypingDerivation& d, const std::vector<Elem>& env) {
    const Judgment& j = d.conclusion;
    const std::size_t nd = j.ctx.modal.size();
    switch (d.rule) {
      case Rule::Var: return env[nd + *j.ctx.intuitionistic.index_of(j.term.name())];
      case Rule::BoxVar: {
        std::size_t i = *j.ctx.modal.index_of(j.term.name());
        auto e = f_.epsilon(type(j.ctx.modal[i].type), env[i]);
        if (!e) throw ModelMismatch(f_.name() + " has no epsilon component here");
        return *e;
      }
      case Rule::ProdIntro: return type(j.type).pair(eval(d.premises[0], env), eval(d.premises[1], env));
      case Rule::ProdElim1:
      case Rule::ProdElim2: {
        auto [a, b] = type(d.premises[0].conclusion.type).unpair(eval(d.premises[0], env));
        return d.rule == Rule::ProdElim1 ? a : b;
      }
      case Rule::ArrowIntro: {
        FinSet fn = type(j.type);
        guard(fn.first().size());
        std::vector<Elem> inner = env;
        inner.push_back(0);
        return fn.tabulate([&](Elem a) {
          inner.back() = a;
          return eval(d.premises[0], inner);
        });
      }
      case Rule::ArrowElim: {
        FinSet fn = type(d.premises[0].conclusion.type);
        return fn.apply(eval(d.premises[0], env), eval(d.premises[1], env));
      }
      case Rule::BoxElim: {
        Elem m = eval(d.premises[0], env);
        std::vector<Elem> inner(env.begin(), env.begin() + static_cast<std::ptrdiff_t>(nd));
        inner.push_back(m);
        inner.insert(inner.end(), env.begin() + static_cast<std::ptrdiff_t>(nd), env.end());
        return eval(d.premises[1], inner);
      }
      case Rule::BoxIntroK:
      case Rule::BoxIntroK4:
      case Rule::BoxIntroS4: {
        const Denotation& boxd = box_table(d);
        std::vector<FinSet> fa;
        for (const auto& b : j.ctx.modal) fa.push_back(f_.apply(type(b.type)));
        std::vector<Elem> delta(env.begin(), env.begin() + static_cast<std::ptrdiff_t>(nd));
        return boxd.table[join(fa, delta)];
      }
      case Rule::BoxIntroGL: break;
    }
    throw ModelMismatch("no denotation for rule " + rule_name(d.rule));
  }

  const Denotation& box_table(const TypingDerivation& d) {
    auto it = boxes_.find(&d);
    if (it != boxes_.end()) return it->second;
    std::vector<FinSet> a;
    for (const auto& b : d.conclusion.ctx.modal) a.push_back(type(b.type));
    Denotation g = tabulate(d.premises[0]);
    Denotation out;
    if (d.rule == Rule::BoxIntroK) out = box_bullet(f_, a, g);
    else if (d.rule == Rule::BoxIntroK4) out = box_sharp(f_, a, g);
    else out = box_star(f_, a, g);
    return boxes_.emplace(&d, std::move(out)).first->second;
  }

  const FiniteModel& model_;
  const Endofunctor& f_;
  std::map<Type, FinSet> types_;
  std::map<const TypingDerivation*, Denotation> boxes_;
};

}  // namespace

Denotation interp_term(const FiniteModel& model, SystemId sys, const TypingDerivation& d) {
  if (sys == SystemId::GL) throw ModelMismatch("GL terms have no finite-model semantics here");
  if ((sys == SystemId::K4 || sys == SystemId::S4) && !model.functor->has_delta())
    throw ModelMismatch("model " + model.functor->name() + " has no delta, needed by " + system_name(sys));
  if ((sys == SystemId::T || sys == SystemId::S4) && !model.functor->has_epsilon())
    throw ModelMismatch("model " + model.functor->name() + " has no epsilon, needed by " + system_name(sys));
  return Interpreter(model).tabulate(d);
}

SoundnessVerdict check_soundness(const FiniteModel& model, SystemId sys, const DualContext& ctx, const Term& m,
                                 const Term& n, const Type& ty) {
  auto derive = [&](const Term& t) {
    TypingDerivation d;
    try {
      d = infer(sys, ctx, t);
    } catch (const TypeError& e) {
      throw IllTyped(print_term(t) + ": " + e.what());
    }
    if (!(d.conclusion.type == ty))
      throw IllTyped(print_term(t) + " has type " + print_type(d.conclusion.type) + ", not " + print_type(ty));
    return d;
  };
  TypingDerivation dm = derive(m), dn = derive(n);
  Denotation a = interp_term(model, sys, dm), b = interp_term(model, sys, dn);
  SoundnessVerdict v;
  for (Elem e = 0; e < a.table.size(); ++e)
    if (a.table[e] != b.table[e]) {
      v.witness = e;
      return v;
    }
  v.same = true;
  return v;
}

std::set<std::string> atoms_of(const Type& t) {
  std::set<std::string> out;
  for (const auto& s : subexpressions(t))
    if (s.is(TypeKind::Atom)) out.insert(s.name());
  return out;
}

std::set<std::string> atoms_of(const TypingDerivation& d) {
  std::set<std::string> out = atoms_of(d.conclusion.type);
  for (const auto* zone : {&d.conclusion.ctx.modal, &d.conclusion.ctx.intuitionistic})
    for (const auto& b : *zone) {
      auto s = atoms_of(b.type);
      out.insert(s.begin(), s.end());
    }
  for (const auto& p : d.premises) {
    auto s = atoms_of(p);
    out.insert(s.begin(), s.end());
  }
  return out;
}

}  // namespace modalc
