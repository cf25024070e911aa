// Whole-program validation: naming, reference and structural rules that
// parse_program guarantees before any analysis runs.
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "petrilock/cfg.hpp"
#include "petrilock/mir.hpp"

namespace petrilock {

namespace detail {

struct TextPos {
  int block = -1;
  int item = -1;  // statement index; terminator sorts last
  bool operator<(const TextPos& o) const {
    return block != o.block ? block < o.block : item < o.item;
  }
};

constexpr int kTermItem = 1 << 20;

struct FunctionNames {
  std::map<std::string, TextPos> guards;   // acquisition dests
  std::map<std::string, TextPos> handles;  // spawn dests
  std::set<std::string> locals;            // statement dests
  std::set<std::string> params;
};

inline FunctionNames collect_names(const Function& f) {
  FunctionNames n;
  n.params.insert(f.params.begin(), f.params.end());
  for (const auto& b : f.blocks) {
    for (size_t i = 0; i < b.statements.size(); ++i) {
      const auto& s = b.statements[i];
      if (s.rvalue.kind == Rvalue::Kind::AcquireSugar)
        n.guards.emplace(s.dest, TextPos{b.id, static_cast<int>(i)});
      else
        n.locals.insert(s.dest);
    }
    TextPos tp{b.id, kTermItem};
    if (const auto* a = std::get_if<AcquireTerm>(&b.terminator.node))
      n.guards.emplace(a->guard, tp);
    if (const auto* s = std::get_if<SpawnTerm>(&b.terminator.node))
      n.handles.emplace(s->handle, tp);
  }
  return n;
}

}  // namespace detail

inline void validate_program(const Program& p) {
  // Global names.
  std::set<std::string> lock_names;
  for (const auto& d : p.lock_decls) {
    if (!lock_names.insert(d.name).second)
      throw ParseError(d.loc, "duplicate lock declaration '" + d.name + "'");
  }
  std::set<std::string> fn_names;
  for (const auto& f : p.functions) {
    if (!fn_names.insert(f.name).second)
      throw ParseError(f.loc, "duplicate function '" + f.name + "'");
    if (lock_names.count(f.name))
      throw ParseError(f.loc, "function '" + f.name + "' collides with a lock name");
  }
  const Function* main_fn = p.find_function(Program::kEntry);
  if (main_fn == nullptr) throw ParseError(SourceLoc{}, "no main function");
  if (!main_fn->params.empty())
    throw ParseError(main_fn->loc, "main must not take parameters");

  // Functions whose spawns would be re-executed because some call site into
  // them sits inside a loop; per-site net copies cannot model that.
  std::set<std::string> loop_tainted;
  {
    std::vector<std::string> work;
    for (const auto& f : p.functions) {
      auto loops = blocks_in_loops(f);
      for (const auto& b : f.blocks) {
        const auto* c = std::get_if<CallTerm>(&b.terminator.node);
        if (c && loops.count(b.id)) work.push_back(c->callee);
      }
    }
    while (!work.empty()) {
      std::string fn = work.back();
      work.pop_back();
      if (!loop_tainted.insert(fn).second) continue;
      const Function* f = p.find_function(fn);
      if (!f) continue;
      for (const auto& b : f->blocks)
        if (const auto* c = std::get_if<CallTerm>(&b.terminator.node))
          work.push_back(c->callee);
    }
  }

  for (const auto& f : p.functions) {
    std::set<std::string> param_set;
    for (const auto& prm : f.params) {
      if (!param_set.insert(prm).second)
        throw ParseError(f.loc, "duplicate parameter '" + prm + "' in " + f.name);
      if (lock_names.count(prm) || fn_names.count(prm))
        throw ParseError(f.loc, "parameter '" + prm + "' shadows a global name");
    }

    auto names = detail::collect_names(f);
    const int nblocks = static_cast<int>(f.blocks.size());

    auto check_target = [&](int t, SourceLoc loc) {
      if (t < 0 || t >= nblocks)
        throw ParseError(loc, "dangling block reference bb" + std::to_string(t) +
                                  " in " + f.name);
    };

    // Flow-insensitive resolution of a name to "may denote a lock".
    std::map<std::string, std::set<std::string>> def_sources;
    for (const auto& b : f.blocks)
      for (const auto& s : b.statements)
        if (s.rvalue.kind == Rvalue::Kind::Copy ||
            s.rvalue.kind == Rvalue::Kind::Move ||
            s.rvalue.kind == Rvalue::Kind::Ref ||
            s.rvalue.kind == Rvalue::Kind::Use)
          def_sources[s.dest].insert(s.rvalue.operand);

    auto resolves_to_lock = [&](const std::string& name) {
      std::set<std::string> seen;
      std::vector<std::string> stack{name};
      while (!stack.empty()) {
        std::string x = stack.back();
        stack.pop_back();
        if (!seen.insert(x).second) continue;
        if (lock_names.count(x) || param_set.count(x)) return true;
        auto it = def_sources.find(x);
        if (it != def_sources.end())
          for (const auto& src : it->second) stack.push_back(src);
      }
      return false;
    };

    auto check_operand = [&](const std::string& op, SourceLoc loc) {
      if (names.guards.count(op) || names.handles.count(op))
        throw ParseError(loc, "guard or handle '" + op +
                                  "' cannot be used as a value operand");
      if (lock_names.count(op) || param_set.count(op) || names.locals.count(op))
        return;
      throw ParseError(loc, "use of undefined name '" + op + "' in " + f.name);
    };

    auto loops = blocks_in_loops(f);

    for (const auto& b : f.blocks) {
      for (size_t i = 0; i < b.statements.size(); ++i) {
        const auto& s = b.statements[i];
        if (param_set.count(s.dest))
          throw ParseError(s.loc, "cannot assign to parameter '" + s.dest + "'");
        if (lock_names.count(s.dest) || fn_names.count(s.dest))
          throw ParseError(s.loc, "'" + s.dest + "' shadows a global name");
        const bool is_guard_def = s.rvalue.kind == Rvalue::Kind::AcquireSugar;
        if (is_guard_def) {
          auto it = names.guards.find(s.dest);
          if (it->second < detail::TextPos{b.id, static_cast<int>(i)} ||
              detail::TextPos{b.id, static_cast<int>(i)} < it->second)
            throw ParseError(s.loc, "guard '" + s.dest +
                                        "' acquired at more than one site");
          if (names.locals.count(s.dest) || names.handles.count(s.dest))
            throw ParseError(s.loc, "guard '" + s.dest + "' also assigned elsewhere");
          if (!resolves_to_lock(s.rvalue.operand) &&
              !lock_names.count(s.rvalue.operand))
            throw ParseError(s.loc, "lock operand '" + s.rvalue.operand +
                                        "' does not resolve to a declared lock");
          continue;
        }
        if (names.guards.count(s.dest) || names.handles.count(s.dest))
          throw ParseError(s.loc, "'" + s.dest +
                                      "' is a guard/handle and cannot be reassigned");
        if (s.rvalue.kind != Rvalue::Kind::Constant)
          check_operand(s.rvalue.operand, s.loc);
      }

      const auto& t = b.terminator;
      for (int tgt : successors(t)) check_target(tgt, t.loc);
      detail::TextPos here{b.id, detail::kTermItem};

      if (const auto* g = std::get_if<SwitchTerm>(&t.node)) {
        check_operand(g->scrutinee, t.loc);
      } else if (const auto* c = std::get_if<CallTerm>(&t.node)) {
        const Function* callee = p.find_function(c->callee);
        if (!callee)
          throw ParseError(t.loc, "call to undeclared function '" + c->callee + "'");
        if (c->args.size() != callee->params.size())
          throw ParseError(t.loc, "call to '" + c->callee + "' passes " +
                                      std::to_string(c->args.size()) +
                                      " args, expected " +
                                      std::to_string(callee->params.size()));
        for (const auto& a : c->args) check_operand(a, t.loc);
      } else if (const auto* a = std::get_if<AcquireTerm>(&t.node)) {
        auto it = names.guards.find(a->guard);
        if (it->second < here || here < it->second)
          throw ParseError(t.loc, "guard '" + a->guard +
                                      "' acquired at more than one site");
        if (names.locals.count(a->guard) || names.handles.count(a->guard) ||
            param_set.count(a->guard))
          throw ParseError(t.loc, "guard '" + a->guard + "' also assigned elsewhere");
        if (!lock_names.count(a->lock_operand) &&
            !resolves_to_lock(a->lock_operand))
          throw ParseError(t.loc, "lock operand '" + a->lock_operand +
                                      "' does not resolve to a declared lock");
      } else if (const auto* d = std::get_if<DropTerm>(&t.node)) {
        auto it = names.guards.find(d->guard);
        if (it == names.guards.end())
          throw ParseError(t.loc, "drop of '" + d->guard + "' which is not a guard");
        if (here < it->second)
          throw ParseError(t.loc, "guard '" + d->guard + "' used before definition");
      } else if (const auto* sp = std::get_if<SpawnTerm>(&t.node)) {
        const Function* callee = p.find_function(sp->callee);
        if (!callee)
          throw ParseError(t.loc, "spawn of undeclared function '" + sp->callee + "'");
        if (!callee->params.empty())
          throw ParseError(t.loc, "spawned function '" + sp->callee +
                                      "' must not take parameters");
        if (names.locals.count(sp->handle) || names.guards.count(sp->handle) ||
            param_set.count(sp->handle))
          throw ParseError(t.loc, "handle '" + sp->handle + "' also assigned elsewhere");
        if (loops.count(b.id))
          throw ParseError(t.loc, "spawn inside a loop is not supported");
        if (loop_tainted.count(f.name))
          throw ParseError(t.loc, "spawn in '" + f.name +
                                      "', which is callable from inside a loop");
      } else if (const auto* j = std::get_if<JoinTerm>(&t.node)) {
        auto it = names.handles.find(j->handle);
        if (it == names.handles.end())
          throw ParseError(t.loc, "join of '" + j->handle +
                                      "' which is not a spawn handle");
        if (here < it->second)
          throw ParseError(t.loc, "handle '" + j->handle + "' used before definition");
        if (loops.count(b.id))
          throw ParseError(t.loc, "join inside a loop is not supported");
      }
    }
  }
}

}  // namespace petrilock
