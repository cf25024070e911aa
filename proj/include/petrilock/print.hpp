// Canonical printer: one statement per line, two-space indentation.
// parse(print(p)) is structurally equal to p.
#pragma once

#include <sstream>
#include <string>

#include "petrilock/mir.hpp"

namespace petrilock {

namespace detail {

inline std::string bb(int id) { return "bb" + std::to_string(id); }

inline std::string print_statement(const Statement& s) {
  std::ostringstream os;
  os << s.dest << " = ";
  switch (s.rvalue.kind) {
    case Rvalue::Kind::Copy: os << "copy(" << s.rvalue.operand << ")"; break;
    case Rvalue::Kind::Move: os << "move(" << s.rvalue.operand << ")"; break;
    case Rvalue::Kind::Ref: os << "ref(" << s.rvalue.operand << ")"; break;
    case Rvalue::Kind::Use: os << "use(" << s.rvalue.operand << ")"; break;
    case Rvalue::Kind::Repeat: os << "repeat(" << s.rvalue.operand << ")"; break;
    case Rvalue::Kind::Constant: os << "const"; break;
    case Rvalue::Kind::AcquireSugar: {
      const char* fn = s.rvalue.mode == AcquireMode::MutexLock ? "lock"
                       : s.rvalue.mode == AcquireMode::RwRead  ? "read"
                                                               : "write";
      os << fn << "(" << s.rvalue.operand << ")";
      break;
    }
  }
  os << ";";
  return os.str();
}

inline std::string print_terminator(const Terminator& t) {
  std::ostringstream os;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, GotoTerm>) {
          os << "goto -> " << bb(n.target) << ";";
        } else if constexpr (std::is_same_v<T, SwitchTerm>) {
          os << "switchInt(" << n.scrutinee << ") -> [";
          for (int tgt : n.targets) os << bb(tgt) << ", ";
          os << "otherwise: " << bb(n.otherwise) << "];";
        } else if constexpr (std::is_same_v<T, CallTerm>) {
          os << "call " << n.callee << "(";
          for (size_t i = 0; i < n.args.size(); ++i)
            os << (i ? ", " : "") << n.args[i];
          os << ") -> ";
          if (n.unwind_target)
            os << "[return: " << bb(n.return_target)
               << ", unwind: " << bb(*n.unwind_target) << "];";
          else
            os << bb(n.return_target) << ";";
        } else if constexpr (std::is_same_v<T, AcquireTerm>) {
          const char* fn = n.mode == AcquireMode::MutexLock ? "lock"
                           : n.mode == AcquireMode::RwRead  ? "read"
                                                            : "write";
          os << n.guard << " = " << fn << "(" << n.lock_operand << ") -> "
             << bb(n.target) << ";";
        } else if constexpr (std::is_same_v<T, DropTerm>) {
          os << "drop(" << n.guard << ") -> " << bb(n.target) << ";";
        } else if constexpr (std::is_same_v<T, SpawnTerm>) {
          os << n.handle << " = spawn(" << n.callee << ") -> " << bb(n.target)
             << ";";
        } else if constexpr (std::is_same_v<T, JoinTerm>) {
          os << "join(" << n.handle << ") -> " << bb(n.target) << ";";
        } else {
          os << "return;";
        }
      },
      t.node);
  return os.str();
}

}  // namespace detail

inline std::string print_program(const Program& p) {
  std::ostringstream os;
  for (const auto& d : p.lock_decls)
    os << kind_name(d.kind) << " " << d.name << ";\n";
  for (const auto& f : p.functions) {
    if (!p.lock_decls.empty() || &f != &p.functions.front()) os << "\n";
    os << "fn " << f.name << "(";
    for (size_t i = 0; i < f.params.size(); ++i)
      os << (i ? ", " : "") << f.params[i];
    os << ") {\n";
    for (const auto& b : f.blocks) {
      os << "  " << detail::bb(b.id) << ": {\n";
      for (const auto& s : b.statements)
        os << "    " << detail::print_statement(s) << "\n";
      os << "    " << detail::print_terminator(b.terminator) << "\n";
      os << "  }\n";
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace petrilock
