// Mini-MIR program representation: lock declarations, functions, basic
// blocks, statements and terminators.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace petrilock {

struct SourceLoc {
  int file = -1;  // index into Program::files, -1 when unknown
  int line = 0;
  int col = 0;
};

namespace detail {
inline std::string loc_str(const SourceLoc& loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.col);
}
}  // namespace detail

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLoc where, const std::string& msg)
      : std::runtime_error(detail::loc_str(where) + ": " + msg), loc(where) {}
  SourceLoc loc;
};

class AnalysisError : public std::runtime_error {
 public:
  explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

class BuildError : public std::runtime_error {
 public:
  explicit BuildError(const std::string& msg) : std::runtime_error(msg) {}
};

class FireError : public std::runtime_error {
 public:
  explicit FireError(const std::string& msg) : std::runtime_error(msg) {}
};

class ExportError : public std::runtime_error {
 public:
  explicit ExportError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class LockKind { Mutex, RwLock };

enum class AcquireMode { MutexLock, RwRead, RwWrite };

inline LockKind kind_of(AcquireMode mode) {
  return mode == AcquireMode::MutexLock ? LockKind::Mutex : LockKind::RwLock;
}

inline const char* kind_name(LockKind k) {
  return k == LockKind::Mutex ? "mutex" : "rwlock";
}

inline const char* mode_name(AcquireMode m) {
  switch (m) {
    case AcquireMode::MutexLock: return "mutex";
    case AcquireMode::RwRead: return "read";
    case AcquireMode::RwWrite: return "write";
  }
  return "?";
}

struct LockDecl {
  std::string name;
  LockKind kind = LockKind::Mutex;
  SourceLoc loc;
};

// Right-hand sides of statements. Acquisition in statement position
// ("g = lock(m);") is accepted sugar and is split out by normalize_blocks;
// Repeat is parsed but carries no meaning for lock analysis.
struct Rvalue {
  enum class Kind { Copy, Move, Ref, Use, Constant, Repeat, AcquireSugar };
  Kind kind = Kind::Constant;
  std::string operand;                       // empty for Constant
  AcquireMode mode = AcquireMode::MutexLock;  // AcquireSugar only
};

struct Statement {
  std::string dest;
  Rvalue rvalue;
  SourceLoc loc;
};

struct GotoTerm {
  int target = -1;
};

struct SwitchTerm {
  std::string scrutinee;
  std::vector<int> targets;
  int otherwise = -1;
};

struct CallTerm {
  std::string callee;
  std::vector<std::string> args;
  int return_target = -1;
  std::optional<int> unwind_target;
};

struct AcquireTerm {
  std::string guard;
  std::string lock_operand;
  AcquireMode mode = AcquireMode::MutexLock;
  int target = -1;
};

struct DropTerm {
  std::string guard;
  int target = -1;
};

struct SpawnTerm {
  std::string handle;
  std::string callee;
  int target = -1;
};

struct JoinTerm {
  std::string handle;
  int target = -1;
};

struct ReturnTerm {};

using TerminatorNode = std::variant<GotoTerm, SwitchTerm, CallTerm, AcquireTerm,
                                    DropTerm, SpawnTerm, JoinTerm, ReturnTerm>;

struct Terminator {
  TerminatorNode node;
  SourceLoc loc;
};

// Successor block ids in a stable order. Unwind edges are CFG edges;
// callers that must ignore them pass include_unwind = false.
inline std::vector<int> successors(const Terminator& t,
                                   bool include_unwind = true) {
  std::vector<int> out;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, GotoTerm>) {
          out.push_back(n.target);
        } else if constexpr (std::is_same_v<T, SwitchTerm>) {
          out = n.targets;
          out.push_back(n.otherwise);
        } else if constexpr (std::is_same_v<T, CallTerm>) {
          out.push_back(n.return_target);
          if (include_unwind && n.unwind_target) out.push_back(*n.unwind_target);
        } else if constexpr (std::is_same_v<T, AcquireTerm> ||
                             std::is_same_v<T, DropTerm> ||
                             std::is_same_v<T, SpawnTerm> ||
                             std::is_same_v<T, JoinTerm>) {
          out.push_back(n.target);
        }
      },
      t.node);
  return out;
}

// Applies fn to every block-id slot of the terminator (for remapping).
template <typename Fn>
void for_each_target(Terminator& t, Fn&& fn) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, GotoTerm>) {
          fn(n.target);
        } else if constexpr (std::is_same_v<T, SwitchTerm>) {
          for (int& b : n.targets) fn(b);
          fn(n.otherwise);
        } else if constexpr (std::is_same_v<T, CallTerm>) {
          fn(n.return_target);
          if (n.unwind_target) fn(*n.unwind_target);
        } else if constexpr (std::is_same_v<T, AcquireTerm> ||
                             std::is_same_v<T, DropTerm> ||
                             std::is_same_v<T, SpawnTerm> ||
                             std::is_same_v<T, JoinTerm>) {
          fn(n.target);
        }
      },
      t.node);
}

struct BasicBlock {
  int id = 0;
  std::vector<Statement> statements;
  Terminator terminator;
  SourceLoc loc;
};

struct Function {
  std::string name;
  std::vector<std::string> params;
  std::vector<BasicBlock> blocks;
  SourceLoc loc;
};

struct Program {
  std::vector<std::string> files;  // for diagnostics only
  std::vector<LockDecl> lock_decls;
  std::vector<Function> functions;  // declaration order

  static constexpr const char* kEntry = "main";

  const Function* find_function(const std::string& name) const {
    for (const auto& f : functions)
      if (f.name == name) return &f;
    return nullptr;
  }
  Function* find_function(const std::string& name) {
    for (auto& f : functions)
      if (f.name == name) return &f;
    return nullptr;
  }
  const LockDecl* find_lock(const std::string& name) const {
    for (const auto& d : lock_decls)
      if (d.name == name) return &d;
    return nullptr;
  }
};

}  // namespace petrilock
