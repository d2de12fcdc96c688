#pragma once

// Lexer and recursive-descent parser for the surface syntax.
//
//   def    ::= NAME ':' term '=' term            (NAME at column 1)
//   term   ::= '\' x+ '->' term | '<' i+ '>' term | arrow
//   arrow  ::= '(' x ':' term ')' ('->' term | '*' star ...) | star ('->' term)?
//   star   ::= app ('*' star)?
//   app    ::= head (atom | '@' dimatom)*
//   head   ::= 'fst' atom | 'snd' atom | 'Path' ['^' i] atom atom atom
//            | 'hcomp' '^' i atom system atom
//            | 'trans' '^' i atom faceatom atom
//            | 'comp' | 'hfill' | 'transFill' | 'ctrans' | 'ctransFill'
//            | 'squeeze'                          (sugar, expanded here)
//            | 'elim' '(' x '.' term ')' '[' branch,* ']' atom
//            | ctor atom* dimatom* | hitty atom* | atom
//   atom   ::= IDENT | 'U' | '(' term (',' term | ':' term)? ')'
//   system ::= '[' (face '->' term),* ']'
//
// '--' starts a comment.  Dimension expressions use 0 1 /\ \/ @- and faces
// use 0F 1F (i=0) (i=1) /\ \/.  A definition body extends until the next
// token at column 1 outside brackets.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "chit/hit.hpp"
#include "chit/term.hpp"

namespace chit {

struct ParseError {
  Pos pos;
  std::string msg;
};

struct Def {
  std::string name;
  TermPtr type, body;
  Pos pos;
};

struct ParsedModule {
  std::vector<Def> defs;
};

class Parser {
 public:
  explicit Parser(const std::string& src) { lex(src); }

  ParsedModule module() {
    col1_stop_ = true;
    ParsedModule m;
    while (cur().k != Tk::End) {
      Def d = def();
      for (const auto& prev : m.defs)
        if (prev.name == d.name)
          fail(d.pos, "duplicate definition of '" + d.name + "'");
      globals_.insert(d.name);
      m.defs.push_back(std::move(d));
    }
    return m;
  }

  // a standalone expression; unbound dimension names are collected into
  // free_dims, which may be pre-seeded to share names across several parses
  TermPtr expr(const std::set<std::string>& globals,
               std::vector<std::pair<std::string, DimName>>& free_dims) {
    globals_ = globals;
    auto_dims_ = true;
    auto_map_ = free_dims;
    TermPtr t = term();
    expect(Tk::End, "end of input");
    free_dims = auto_map_;
    return t;
  }

  FaceFormula face_expr() {
    auto_dims_ = true;
    FaceFormula f = face();
    expect(Tk::End, "end of input");
    return f;
  }

 private:
  // -- tokens ---------------------------------------------------------------

  enum class Tk {
    Ident, Num, ZeroF, OneF, LParen, RParen, LBrack, RBrack, Comma, Colon,
    Equals, Arrow, Lambda, Lt, Gt, At, AtNeg, Meet, Join, Star, Dot, Caret, End
  };

  struct Tok {
    Tk k;
    std::string text;
    int num = 0;
    Pos pos;
    int depth = 0;
  };

  std::vector<Tok> toks_;
  std::size_t p_ = 0;

  void lex(const std::string& s) {
    int line = 1, col = 1, depth = 0;
    std::size_t i = 0;
    auto push = [&](Tk k, std::string text, int num = 0) {
      toks_.push_back(Tok{k, std::move(text), num, Pos{line, col}, depth});
    };
    auto adv = [&](std::size_t n) {
      for (std::size_t j = 0; j < n; ++j, ++i) {
        if (s[i] == '\n') { ++line; col = 1; } else { ++col; }
      }
    };
    while (i < s.size()) {
      char c = s[i];
      char d = i + 1 < s.size() ? s[i + 1] : '\0';
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { adv(1); continue; }
      if (c == '-' && d == '-') {
        while (i < s.size() && s[i] != '\n') adv(1);
        continue;
      }
      if (c == '-' && d == '>') { push(Tk::Arrow, "->"); adv(2); continue; }
      if (c == '\\' && d == '/') { push(Tk::Join, "\\/"); adv(2); continue; }
      if (c == '/' && d == '\\') { push(Tk::Meet, "/\\"); adv(2); continue; }
      if (c == '\\') { push(Tk::Lambda, "\\"); adv(1); continue; }
      if (c == '@' && d == '-') { push(Tk::AtNeg, "@-"); adv(2); continue; }
      if (c == '@') { push(Tk::At, "@"); adv(1); continue; }
      if (c == '(') { push(Tk::LParen, "("); adv(1); ++depth; continue; }
      if (c == ')') { --depth; push(Tk::RParen, ")"); adv(1); continue; }
      if (c == '[') { push(Tk::LBrack, "["); adv(1); ++depth; continue; }
      if (c == ']') { --depth; push(Tk::RBrack, "]"); adv(1); continue; }
      if (c == ',') { push(Tk::Comma, ","); adv(1); continue; }
      if (c == ':') { push(Tk::Colon, ":"); adv(1); continue; }
      if (c == '=') { push(Tk::Equals, "="); adv(1); continue; }
      if (c == '*') { push(Tk::Star, "*"); adv(1); continue; }
      if (c == '.') { push(Tk::Dot, "."); adv(1); continue; }
      if (c == '^') { push(Tk::Caret, "^"); adv(1); continue; }
      if (c == '<') { push(Tk::Lt, "<"); adv(1); continue; }
      if (c == '>') { push(Tk::Gt, ">"); adv(1); continue; }
      if (c == '0' || c == '1') {
        char e = i + 2 < s.size() ? s[i + 2] : '\0';
        if (d == 'F' && !isident(e)) {
          push(c == '0' ? Tk::ZeroF : Tk::OneF, std::string(1, c) + "F");
          adv(2);
        } else {
          push(Tk::Num, std::string(1, c), c - '0');
          adv(1);
        }
        continue;
      }
      if (isalpha_(c)) {
        std::size_t j = i;
        while (j < s.size() && isident(s[j])) ++j;
        push(Tk::Ident, s.substr(i, j - i));
        adv(j - i);
        continue;
      }
      throw ParseError{Pos{line, col}, std::string("unexpected character '") + c + "'"};
    }
    toks_.push_back(Tok{Tk::End, "", 0, Pos{line, col}, 0});
  }

  static bool isalpha_(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool isident(char c) { return isalpha_(c) || (c >= '0' && c <= '9') || c == '\''; }

  const Tok& cur() const { return toks_[p_]; }
  const Tok& peek(std::size_t n = 1) const {
    return toks_[p_ + n < toks_.size() ? p_ + n : toks_.size() - 1];
  }
  Tok next() { return toks_[p_++]; }

  [[noreturn]] void fail(Pos pos, const std::string& msg) const {
    throw ParseError{pos, msg};
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(cur().pos, msg); }

  void expect(Tk k, const std::string& what) {
    if (cur().k != k) fail("expected " + what + ", found '" + describe(cur()) + "'");
    ++p_;
  }

  static std::string describe(const Tok& t) {
    return t.k == Tk::End ? "end of input" : t.text;
  }

  // tokens at column 1 outside brackets end a definition body
  bool col1_stop_ = false;
  bool blocked(const Tok& t) const {
    return col1_stop_ && t.depth == 0 && t.pos.col == 1;
  }
  bool at(Tk k) const { return cur().k == k && !blocked(cur()); }

  // -- scope ----------------------------------------------------------------

  struct Binding {
    std::string name;
    bool is_dim;
    TermName var;
    DimName dim;
  };
  std::vector<Binding> scope_;
  std::set<std::string> globals_;
  bool auto_dims_ = false;
  std::vector<std::pair<std::string, DimName>> auto_map_;

  TermName bind_var(const std::string& n) {
    TermName v = fresh_var(n);
    scope_.push_back(Binding{n, false, v, DimName{}});
    return v;
  }
  DimName bind_dim(const std::string& n) {
    DimName d = fresh_dim(n);
    scope_.push_back(Binding{n, true, TermName{}, d});
    return d;
  }
  void pop_scope(std::size_t n) { scope_.resize(scope_.size() - n); }

  const Binding* lookup(const std::string& n) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == n) return &*it;
    return nullptr;
  }

  static const std::set<std::string>& head_keywords() {
    static const std::set<std::string> ks = {
        "fst", "snd",  "Path",   "hcomp",  "trans",      "comp",
        "hfill", "transFill", "ctrans", "ctransFill", "squeeze", "elim"};
    return ks;
  }

  // -- definitions ----------------------------------------------------------

  Def def() {
    if (cur().k != Tk::Ident || cur().pos.col != 1)
      fail("expected a definition starting at column 1");
    Tok name = next();
    if (head_keywords().count(name.text) || name.text == "U")
      fail(name.pos, "'" + name.text + "' is reserved");
    int idx;
    if (find_decl(name.text) || find_ctor(name.text, idx))
      fail(name.pos, "'" + name.text + "' collides with a built-in name");
    expect(Tk::Colon, "':' after definition name");
    TermPtr ty = term();
    expect(Tk::Equals, "'=' after definition type");
    TermPtr body = term();
    return Def{name.text, ty, body, name.pos};
  }

  // -- terms ----------------------------------------------------------------

  TermPtr term() {
    Pos pos = cur().pos;
    if (at(Tk::Lambda)) {
      next();
      std::vector<Tok> xs;
      while (cur().k == Tk::Ident) xs.push_back(next());
      if (xs.empty()) fail("expected binder after '\\'");
      expect(Tk::Arrow, "'->' after lambda binders");
      std::vector<TermName> vs;
      for (const auto& x : xs) vs.push_back(bind_var(x.text));
      TermPtr body = term();
      pop_scope(xs.size());
      for (auto it = vs.rbegin(); it != vs.rend(); ++it)
        body = mk(TLam{*it, body}, pos);
      return body;
    }
    if (at(Tk::Lt)) {
      next();
      std::vector<Tok> xs;
      while (cur().k == Tk::Ident) xs.push_back(next());
      if (xs.empty()) fail("expected dimension binder after '<'");
      expect(Tk::Gt, "'>' after path binders");
      std::vector<DimName> ds;
      for (const auto& x : xs) ds.push_back(bind_dim(x.text));
      TermPtr body = term();
      pop_scope(xs.size());
      for (auto it = ds.rbegin(); it != ds.rend(); ++it)
        body = mk(TPLam{*it, body}, pos);
      return body;
    }
    return arrow();
  }

  // '(' IDENT ':' ... ')' followed by '->' or '*' introduces a binder
  bool binder_ahead() const {
    if (!(at(Tk::LParen) && peek(1).k == Tk::Ident && peek(2).k == Tk::Colon))
      return false;
    int depth = 0;
    for (std::size_t q = p_; q < toks_.size(); ++q) {
      Tk k = toks_[q].k;
      if (k == Tk::LParen || k == Tk::LBrack) ++depth;
      if (k == Tk::RParen || k == Tk::RBrack) {
        --depth;
        if (depth == 0) {
          Tk after = toks_[q + 1 < toks_.size() ? q + 1 : q].k;
          return after == Tk::Arrow || after == Tk::Star;
        }
      }
      if (k == Tk::End) break;
    }
    return false;
  }

  TermPtr arrow() {
    Pos pos = cur().pos;
    if (binder_ahead()) {
      next();  // (
      Tok x = next();
      next();  // :
      TermPtr dom = term();
      expect(Tk::RParen, "')' after binder type");
      if (at(Tk::Arrow)) {
        next();
        TermName v = bind_var(x.text);
        TermPtr cod = term();
        pop_scope(1);
        return mk(TPi{v, dom, cod}, pos);
      }
      expect(Tk::Star, "'->' or '*' after binder");
      TermName v = bind_var(x.text);
      TermPtr snd = star();
      pop_scope(1);
      TermPtr sig = mk(TSigma{v, dom, snd}, pos);
      if (at(Tk::Arrow)) {
        next();
        return mk(TPi{fresh_var("_"), sig, term()}, pos);
      }
      return sig;
    }
    TermPtr lhs = star();
    if (at(Tk::Arrow)) {
      next();
      return mk(TPi{fresh_var("_"), lhs, term()}, pos);
    }
    return lhs;
  }

  TermPtr star() {
    Pos pos = cur().pos;
    TermPtr lhs = app();
    if (at(Tk::Star)) {
      next();
      return mk(TSigma{fresh_var("_"), lhs, star()}, pos);
    }
    return lhs;
  }

  bool atom_start() const {
    if (blocked(cur())) return false;
    if (cur().k == Tk::LParen) return true;
    if (cur().k != Tk::Ident) return false;
    return !head_keywords().count(cur().text);
  }

  TermPtr app() {
    TermPtr head = app_head();
    for (;;) {
      if (at(Tk::At)) {
        Pos pos = cur().pos;
        next();
        head = mk(TPApp{head, dim_atom_expr()}, pos);
      } else if (atom_start()) {
        Pos pos = cur().pos;
        head = mk(TApp{head, atom()}, pos);
      } else {
        return head;
      }
    }
  }

  TermPtr app_head() {
    Pos pos = cur().pos;
    if (cur().k == Tk::Ident) {
      const std::string& w = cur().text;
      if (w == "fst" || w == "snd") {
        next();
        TermPtr p = atom();
        return w == "fst" ? mk(TFst{p}, pos) : mk(TSnd{p}, pos);
      }
      if (w == "Path") return path_ty(pos);
      if (w == "hcomp") return hcomp_term(pos);
      if (w == "trans") return trans_term(pos);
      if (w == "comp") return comp_term(pos);
      if (w == "hfill") return hfill_term(pos);
      if (w == "transFill") return trans_fill_term(pos, false);
      if (w == "ctrans") return ctrans_term(pos);
      if (w == "ctransFill") return trans_fill_term(pos, true);
      if (w == "squeeze") return squeeze_term(pos);
      if (w == "elim") return elim_term(pos);
      // constructor or type-former heads consume their arity
      if (!lookup(w) && !globals_.count(w)) {
        int idx;
        if (const HITDecl* d = find_ctor(w, idx)) {
          next();
          return ctor_app(d, idx, pos);
        }
        if (const HITDecl* d = find_decl(w)) {
          next();
          std::vector<TermPtr> params;
          for (std::size_t k = 0; k < d->params.size(); ++k) params.push_back(atom());
          return mk(THitTy{d, std::move(params)}, pos);
        }
      }
    }
    return atom();
  }

  TermPtr ctor_app(const HITDecl* d, int idx, Pos pos) {
    const CtorDecl& c = d->ctors[idx];
    std::vector<TermPtr> args;
    std::vector<DimExpr> dims;
    for (std::size_t k = 0; k < c.args.size(); ++k) {
      if (!atom_start())
        fail(pos, "constructor '" + c.name + "' expects " +
                      std::to_string(c.args.size()) + " argument(s)");
      args.push_back(atom());
    }
    for (std::size_t k = 0; k < c.dims.size(); ++k)
      dims.push_back(dim_atom_expr());
    return mk(TCtor{d, idx, {}, std::move(args), std::move(dims)}, pos);
  }

  TermPtr path_ty(Pos pos) {
    next();
    DimName i = fresh_dim("_");
    TermPtr a;
    if (at(Tk::Caret)) {
      next();
      Tok x = next_ident("dimension binder after '^'");
      i = fresh_dim(x.text);
      push_dim(x.text, i);
      a = atom();
      pop_scope(1);
    } else {
      a = atom();
    }
    TermPtr lhs = atom();
    TermPtr rhs = atom();
    return mk(TPathP{i, a, lhs, rhs}, pos);
  }

  Tok next_ident(const std::string& what) {
    if (cur().k != Tk::Ident) fail("expected " + what);
    return next();
  }

  // consume '^' IDENT and make a fresh dimension; the caller decides where
  // the binder is in scope
  std::pair<std::string, DimName> caret_name() {
    expect(Tk::Caret, "'^' with a dimension binder");
    Tok x = next_ident("dimension binder after '^'");
    return {x.text, fresh_dim(x.text)};
  }

  void push_dim(const std::string& n, const DimName& d) {
    scope_.push_back(Binding{n, true, TermName{}, d});
  }

  TermPtr hcomp_term(Pos pos) {
    next();
    auto [n, i] = caret_name();
    TermPtr ty = atom();
    push_dim(n, i);
    System sides = system();
    pop_scope(1);
    TermPtr cap = atom();
    return mk(THcomp{i, ty, std::move(sides), cap}, pos);
  }

  TermPtr trans_term(Pos pos) {
    next();
    auto [n, i] = caret_name();
    push_dim(n, i);
    TermPtr ty = atom();
    pop_scope(1);
    FaceFormula phi = face_atom();
    TermPtr cap = atom();
    return mk(TTrans{i, ty, phi, cap}, pos);
  }

  // comp^i A [phi -> u] c: transport the cap and squeeze the sides, then hcomp
  TermPtr comp_term(Pos pos) {
    next();
    auto [n, i] = caret_name();
    push_dim(n, i);
    TermPtr ty = atom();
    System sides = system();
    pop_scope(1);
    TermPtr cap = atom();
    return comp_expansion(pos, i, ty, std::move(sides), cap);
  }

  TermPtr comp_expansion(Pos pos, DimName i, TermPtr ty, System sides, TermPtr cap) {
    TermPtr ty1 = term_dim_subst(ty, DimSubst::single(i, dim1()));
    System out;
    for (auto& [f, u] : sides) {
      DimName j = fresh_dim("j");
      TermPtr line = term_dim_subst(ty, DimSubst::single(i, dim_join(dim_atom(i), dim_atom(j))));
      out.emplace_back(f, mk(TTrans{j, line, FaceFormula::eq(i, true), u}, pos));
    }
    TermPtr cap2 = mk(TTrans{i, ty, FaceFormula::zero(), cap}, pos);
    return mk(THcomp{i, ty1, std::move(out), cap2}, pos);
  }

  // hfill^i A [phi -> u] c r: the filler of the corresponding hcomp at r
  TermPtr hfill_term(Pos pos) {
    next();
    auto [n, i] = caret_name();
    TermPtr ty = atom();
    push_dim(n, i);
    System sides = system();
    pop_scope(1);
    TermPtr cap = atom();
    DimExpr r = dim_atom_expr();
    DimName k = fresh_dim("k");
    System out;
    for (auto& [f, u] : sides)
      out.emplace_back(
          f, term_dim_subst(u, DimSubst::single(i, dim_meet(r, dim_atom(k)))));
    out.emplace_back(face_of_dim(r, false), cap);
    return mk(THcomp{k, ty, std::move(out), cap}, pos);
  }

  // transFill^i A phi c r / ctransFill^i A phi c r
  TermPtr trans_fill_term(Pos pos, bool constrained) {
    next();
    auto [n, i] = caret_name();
    push_dim(n, i);
    TermPtr ty = atom();
    pop_scope(1);
    FaceFormula phi = face_atom();
    TermPtr cap = atom();
    DimExpr r = dim_atom_expr();
    DimName j = fresh_dim("j");
    TermPtr line = term_dim_subst(ty, DimSubst::single(i, dim_meet(r, dim_atom(j))));
    FaceFormula phi2 = face_or(phi, face_of_dim(r, false));
    if (!constrained) return mk(TTrans{j, line, phi2, cap}, pos);
    System sides;
    sides.emplace_back(phi2, cap);
    return comp_expansion(pos, j, line, std::move(sides), cap);
  }

  // ctrans^i A phi c: comp with the cap itself on phi
  TermPtr ctrans_term(Pos pos) {
    next();
    auto [n, i] = caret_name();
    push_dim(n, i);
    TermPtr ty = atom();
    pop_scope(1);
    FaceFormula phi = face_atom();
    TermPtr cap = atom();
    System sides;
    sides.emplace_back(phi, cap);
    return comp_expansion(pos, i, ty, std::move(sides), cap);
  }

  // squeeze^i A phi c r: transport from r to 1 along A
  TermPtr squeeze_term(Pos pos) {
    next();
    auto [n, i] = caret_name();
    push_dim(n, i);
    TermPtr ty = atom();
    pop_scope(1);
    FaceFormula phi = face_atom();
    TermPtr cap = atom();
    DimExpr r = dim_atom_expr();
    DimName j = fresh_dim("j");
    TermPtr line = term_dim_subst(ty, DimSubst::single(i, dim_join(r, dim_atom(j))));
    return mk(TTrans{j, line, face_or(phi, face_of_dim(r, true)), cap}, pos);
  }

  TermPtr elim_term(Pos pos) {
    next();
    expect(Tk::LParen, "'(' before the motive");
    Tok z = next_ident("motive variable");
    expect(Tk::Dot, "'.' after motive variable");
    TermName mv = bind_var(z.text);
    TermPtr motive = term();
    pop_scope(1);
    expect(Tk::RParen, "')' after the motive");
    expect(Tk::LBrack, "'[' before the branches");
    const HITDecl* decl = nullptr;
    std::vector<ElimBranch> branches;
    if (cur().k != Tk::RBrack) {
      for (;;) {
        Tok cn = next_ident("constructor name");
        int idx;
        const HITDecl* d = find_ctor(cn.text, idx);
        if (!d) fail(cn.pos, "unknown constructor '" + cn.text + "'");
        if (decl && d != decl)
          fail(cn.pos, "constructor '" + cn.text + "' belongs to a different type");
        decl = d;
        const CtorDecl& c = d->ctors[idx];
        std::size_t rec = 0;
        for (const auto& a : c.args) rec += a.recursive ? 1 : 0;
        ElimBranch b{idx, {}, {}, {}, nullptr};
        std::size_t bound = 0;
        for (std::size_t k = 0; k < c.args.size(); ++k, ++bound)
          b.args.push_back(bind_var(next_ident("argument binder").text));
        for (std::size_t k = 0; k < rec; ++k, ++bound)
          b.ihs.push_back(bind_var(next_ident("induction hypothesis binder").text));
        for (std::size_t k = 0; k < c.dims.size(); ++k, ++bound)
          b.dims.push_back(bind_dim(next_ident("dimension binder").text));
        expect(Tk::Arrow, "'->' before the branch body");
        b.body = term();
        pop_scope(bound);
        branches.push_back(std::move(b));
        if (cur().k == Tk::Comma) { next(); continue; }
        break;
      }
    }
    expect(Tk::RBrack, "']' after the branches");
    if (!decl) fail(pos, "an eliminator needs at least one branch");
    TermPtr scrut = atom();
    return mk(TElim{decl, mv, motive, std::move(branches), scrut}, pos);
  }

  TermPtr atom() {
    Pos pos = cur().pos;
    if (at(Tk::LParen)) {
      next();
      TermPtr t = term();
      if (cur().k == Tk::Comma) {
        next();
        TermPtr u = term();
        expect(Tk::RParen, "')' after pair");
        return mk(TPair{t, u}, pos);
      }
      if (cur().k == Tk::Colon) {
        next();
        TermPtr ty = term();
        expect(Tk::RParen, "')' after ascription");
        return ascribe(t, ty, pos);
      }
      expect(Tk::RParen, "')'");
      return t;
    }
    if (cur().k != Tk::Ident || blocked(cur()))
      fail("expected a term, found '" + describe(cur()) + "'");
    Tok x = next();
    if (x.text == "U") return mk(TU{}, pos);
    if (const Binding* b = lookup(x.text)) {
      if (b->is_dim) fail(x.pos, "'" + x.text + "' is a dimension, not a term");
      return mk_var(b->var, pos);
    }
    if (globals_.count(x.text)) return mk(TGlobal{x.text}, pos);
    int idx;
    if (const HITDecl* d = find_ctor(x.text, idx)) {
      const CtorDecl& c = d->ctors[idx];
      if (!c.args.empty() || !c.dims.empty())
        fail(x.pos, "constructor '" + x.text + "' expects arguments; parenthesize the application");
      return mk(TCtor{d, idx, {}, {}, {}}, pos);
    }
    if (const HITDecl* d = find_decl(x.text)) {
      if (!d->params.empty())
        fail(x.pos, "type '" + x.text + "' expects parameters; parenthesize the application");
      return mk(THitTy{d, {}}, pos);
    }
    fail(x.pos, "unbound name '" + x.text + "'");
  }

  // an ascription fills in missing constructor parameters
  TermPtr ascribe(const TermPtr& t, const TermPtr& ty, Pos pos) {
    if (const auto* c = as<TCtor>(t))
      if (c->params.empty() && !c->decl->params.empty())
        if (const auto* h = as<THitTy>(ty); h && h->decl == c->decl) {
          TCtor filled = *c;
          filled.params = h->params;
          return mk(TAsc{mk(std::move(filled), t->pos), ty}, pos);
        }
    return mk(TAsc{t, ty}, pos);
  }

  // -- systems and faces ------------------------------------------------------

  System system() {
    expect(Tk::LBrack, "'['");
    System out;
    if (cur().k != Tk::RBrack) {
      for (;;) {
        FaceFormula f = face();
        expect(Tk::Arrow, "'->' after a face");
        out.emplace_back(f, term());
        if (cur().k == Tk::Comma) { next(); continue; }
        break;
      }
    }
    expect(Tk::RBrack, "']' after system");
    return out;
  }

  FaceFormula face() {
    FaceFormula f = face_conj();
    while (at(Tk::Join)) {
      next();
      f = face_or(f, face_conj());
    }
    return f;
  }

  FaceFormula face_conj() {
    FaceFormula f = face_atom();
    while (at(Tk::Meet)) {
      next();
      f = face_and(f, face_atom());
    }
    return f;
  }

  FaceFormula face_atom() {
    if (at(Tk::ZeroF)) { next(); return FaceFormula::zero(); }
    if (at(Tk::OneF)) { next(); return FaceFormula::one(); }
    if (at(Tk::LParen)) {
      next();
      if (cur().k == Tk::Ident && peek(1).k == Tk::Equals) {
        Tok x = next();
        next();  // =
        if (cur().k != Tk::Num) fail("expected 0 or 1 in a face");
        Tok v = next();
        expect(Tk::RParen, "')' after face");
        return FaceFormula::eq(resolve_dim(x), v.num == 1);
      }
      FaceFormula f = face();
      expect(Tk::RParen, "')' after face");
      return f;
    }
    fail("expected a face");
  }

  // -- dimension expressions --------------------------------------------------

  DimName resolve_dim(const Tok& x) {
    if (const Binding* b = lookup(x.text)) {
      if (!b->is_dim) fail(x.pos, "'" + x.text + "' is a term variable, not a dimension");
      return b->dim;
    }
    if (auto_dims_) {
      for (const auto& [n, d] : auto_map_)
        if (n == x.text) return d;
      DimName d = fresh_dim(x.text);
      auto_map_.emplace_back(x.text, d);
      return d;
    }
    fail(x.pos, "unbound dimension '" + x.text + "'");
  }

  DimExpr dim_atom_expr() {
    if (at(Tk::Num)) {
      Tok v = next();
      return v.num == 0 ? dim0() : dim1();
    }
    if (at(Tk::AtNeg)) {
      next();
      return dim_neg(dim_atom_expr());
    }
    if (at(Tk::LParen)) {
      next();
      DimExpr r = dim_expr();
      expect(Tk::RParen, "')' after dimension");
      return r;
    }
    if (cur().k == Tk::Ident && !blocked(cur())) return dim_atom(resolve_dim(next()));
    fail("expected a dimension");
  }

  DimExpr dim_expr() {
    DimExpr r = dim_meet_expr();
    while (at(Tk::Join)) {
      next();
      r = dim_join(r, dim_meet_expr());
    }
    return r;
  }

  DimExpr dim_meet_expr() {
    DimExpr r = dim_atom_expr();
    while (at(Tk::Meet)) {
      next();
      r = dim_meet(r, dim_atom_expr());
    }
    return r;
  }
};

inline ParsedModule parse_module(const std::string& src) {
  Parser p(src);
  return p.module();
}

inline TermPtr parse_expr(const std::string& src, const std::set<std::string>& globals,
                          std::vector<std::pair<std::string, DimName>>& free_dims) {
  Parser p(src);
  return p.expr(globals, free_dims);
}

}  // namespace chit
