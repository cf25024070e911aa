// Parser for the textual mini-MIR syntax. Line comments start with "//";
// statements are semicolon-terminated; terminators carry "-> bbN" suffixes.
#pragma once

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "petrilock/mir.hpp"
#include "petrilock/validate.hpp"

namespace petrilock {

namespace detail {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  SourceLoc loc;
};

class Lexer {
 public:
  Lexer(const std::string& text, int file) : src_(text) { loc_.file = file; }

  Token next() {
    skip_ws();
    Token tok;
    tok.loc = loc_;
    if (pos_ >= src_.size()) return tok;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok.kind = Token::Kind::Ident;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        tok.text += advance();
      return tok;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      tok.kind = Token::Kind::Number;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_])))
        tok.text += advance();
      return tok;
    }
    if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      tok.kind = Token::Kind::Punct;
      tok.text = "->";
      advance();
      advance();
      return tok;
    }
    if (std::string(";:{}(),=[]").find(c) != std::string::npos) {
      tok.kind = Token::Kind::Punct;
      tok.text = std::string(1, advance());
      return tok;
    }
    throw ParseError(loc_, std::string("unexpected character '") + c + "'");
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++loc_.line;
      loc_.col = 1;
    } else {
      ++loc_.col;
    }
    return c;
  }

  void skip_ws() {
    for (;;) {
      while (pos_ < src_.size() &&
             std::isspace(static_cast<unsigned char>(src_[pos_])))
        advance();
      if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      break;
    }
  }

  const std::string& src_;
  size_t pos_ = 0;
  SourceLoc loc_{-1, 1, 1};
};

class Parser {
 public:
  Parser(const std::string& text, int file) : lex_(text, file) { bump(); }

  Program parse_unit() {
    Program p;
    while (!at_end()) {
      if (at_ident("mutex") || at_ident("rwlock")) {
        LockDecl d;
        d.kind = cur_.text == "mutex" ? LockKind::Mutex : LockKind::RwLock;
        d.loc = cur_.loc;
        bump();
        d.name = expect_ident("lock name");
        expect_punct(";");
        p.lock_decls.push_back(std::move(d));
      } else if (at_ident("fn")) {
        p.functions.push_back(parse_function());
      } else {
        throw ParseError(cur_.loc, "unknown keyword '" + cur_.text +
                                       "' (expected mutex, rwlock or fn)");
      }
    }
    return p;
  }

 private:
  Function parse_function() {
    Function f;
    f.loc = cur_.loc;
    bump();  // fn
    f.name = expect_ident("function name");
    expect_punct("(");
    if (!at_punct(")")) {
      for (;;) {
        f.params.push_back(expect_ident("parameter name"));
        if (at_punct(",")) {
          bump();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    expect_punct("{");
    std::map<int, BasicBlock> blocks;
    while (!at_punct("}")) {
      BasicBlock b = parse_block();
      if (blocks.count(b.id))
        throw ParseError(b.loc, "duplicate block label bb" + std::to_string(b.id));
      blocks.emplace(b.id, std::move(b));
    }
    expect_punct("}");
    // Labels must form the dense range bb0..bb(n-1).
    int expected = 0;
    for (auto& [id, b] : blocks) {
      if (id != expected)
        throw ParseError(b.loc, "block labels must be dense; expected bb" +
                                    std::to_string(expected) + ", got bb" +
                                    std::to_string(id));
      ++expected;
      f.blocks.push_back(std::move(b));
    }
    if (f.blocks.empty())
      throw ParseError(f.loc, "function '" + f.name + "' has no blocks");
    return f;
  }

  BasicBlock parse_block() {
    BasicBlock b;
    b.loc = cur_.loc;
    b.id = expect_block_label();
    expect_punct(":");
    expect_punct("{");
    bool have_term = false;
    while (!at_punct("}")) {
      if (parse_block_item(b)) {
        have_term = true;
        break;
      }
    }
    expect_punct("}");
    if (!have_term)
      throw ParseError(b.loc, "block bb" + std::to_string(b.id) +
                                  " has no terminator");
    return b;
  }

  // Returns true when the item was the block's terminator.
  bool parse_block_item(BasicBlock& b) {
    SourceLoc loc = cur_.loc;
    if (at_ident("goto")) {
      bump();
      GotoTerm t;
      expect_punct("->");
      t.target = expect_block_label();
      expect_punct(";");
      b.terminator = {TerminatorNode(t), loc};
      return true;
    }
    if (at_ident("switchInt")) {
      bump();
      SwitchTerm t;
      expect_punct("(");
      t.scrutinee = expect_ident("scrutinee");
      expect_punct(")");
      expect_punct("->");
      expect_punct("[");
      for (;;) {
        if (at_ident("otherwise")) {
          bump();
          expect_punct(":");
          t.otherwise = expect_block_label();
          break;
        }
        t.targets.push_back(expect_block_label());
        expect_punct(",");
      }
      expect_punct("]");
      expect_punct(";");
      if (t.otherwise < 0)
        throw ParseError(loc, "switchInt requires an otherwise target");
      b.terminator = {TerminatorNode(t), loc};
      return true;
    }
    if (at_ident("call")) {
      bump();
      CallTerm t;
      t.callee = expect_ident("callee name");
      expect_punct("(");
      if (!at_punct(")")) {
        for (;;) {
          t.args.push_back(expect_ident("argument"));
          if (at_punct(",")) {
            bump();
            continue;
          }
          break;
        }
      }
      expect_punct(")");
      expect_punct("->");
      if (at_punct("[")) {
        bump();
        expect_keyword("return");
        expect_punct(":");
        t.return_target = expect_block_label();
        if (at_punct(",")) {
          bump();
          expect_keyword("unwind");
          expect_punct(":");
          t.unwind_target = expect_block_label();
        }
        expect_punct("]");
      } else {
        t.return_target = expect_block_label();
      }
      expect_punct(";");
      b.terminator = {TerminatorNode(t), loc};
      return true;
    }
    if (at_ident("drop")) {
      bump();
      DropTerm t;
      expect_punct("(");
      t.guard = expect_ident("guard name");
      expect_punct(")");
      expect_punct("->");
      t.target = expect_block_label();
      expect_punct(";");
      b.terminator = {TerminatorNode(t), loc};
      return true;
    }
    if (at_ident("join")) {
      bump();
      JoinTerm t;
      expect_punct("(");
      t.handle = expect_ident("handle name");
      expect_punct(")");
      expect_punct("->");
      t.target = expect_block_label();
      expect_punct(";");
      b.terminator = {TerminatorNode(t), loc};
      return true;
    }
    if (at_ident("return")) {
      bump();
      expect_punct(";");
      b.terminator = {TerminatorNode(ReturnTerm{}), loc};
      return true;
    }
    // Assignment form: "<dest> = <rvalue or acquisition or spawn> ..."
    if (cur_.kind != Token::Kind::Ident)
      throw ParseError(loc, "unknown keyword '" + cur_.text + "'");
    std::string dest = cur_.text;
    bump();
    expect_punct("=");
    if (at_ident("lock") || at_ident("read") || at_ident("write")) {
      AcquireMode mode = cur_.text == "lock"   ? AcquireMode::MutexLock
                         : cur_.text == "read" ? AcquireMode::RwRead
                                               : AcquireMode::RwWrite;
      bump();
      expect_punct("(");
      std::string operand = expect_ident("lock operand");
      expect_punct(")");
      if (at_punct("->")) {
        bump();
        AcquireTerm t;
        t.guard = dest;
        t.lock_operand = operand;
        t.mode = mode;
        t.target = expect_block_label();
        expect_punct(";");
        b.terminator = {TerminatorNode(t), loc};
        return true;
      }
      expect_punct(";");
      Statement s;
      s.dest = dest;
      s.rvalue = {Rvalue::Kind::AcquireSugar, operand, mode};
      s.loc = loc;
      b.statements.push_back(std::move(s));
      return false;
    }
    if (at_ident("spawn")) {
      bump();
      SpawnTerm t;
      t.handle = dest;
      expect_punct("(");
      t.callee = expect_ident("spawned function");
      expect_punct(")");
      expect_punct("->");
      t.target = expect_block_label();
      expect_punct(";");
      b.terminator = {TerminatorNode(t), loc};
      return true;
    }
    Statement s;
    s.dest = dest;
    s.loc = loc;
    if (at_ident("copy") || at_ident("move") || at_ident("ref") ||
        at_ident("use") || at_ident("repeat")) {
      Rvalue::Kind k = cur_.text == "copy"   ? Rvalue::Kind::Copy
                       : cur_.text == "move" ? Rvalue::Kind::Move
                       : cur_.text == "ref"  ? Rvalue::Kind::Ref
                       : cur_.text == "use"  ? Rvalue::Kind::Use
                                             : Rvalue::Kind::Repeat;
      bump();
      expect_punct("(");
      s.rvalue.kind = k;
      s.rvalue.operand = expect_ident("operand");
      expect_punct(")");
    } else if (at_ident("const")) {
      bump();
      s.rvalue.kind = Rvalue::Kind::Constant;
      if (cur_.kind == Token::Kind::Number) bump();  // value is opaque
    } else {
      throw ParseError(cur_.loc, "unknown keyword '" + cur_.text +
                                     "' in statement right-hand side");
    }
    expect_punct(";");
    b.statements.push_back(std::move(s));
    return false;
  }

  int expect_block_label() {
    if (cur_.kind != Token::Kind::Ident || cur_.text.size() < 3 ||
        cur_.text.compare(0, 2, "bb") != 0)
      throw ParseError(cur_.loc, "expected block label bbN, got '" + cur_.text + "'");
    for (size_t i = 2; i < cur_.text.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(cur_.text[i])))
        throw ParseError(cur_.loc, "malformed block label '" + cur_.text + "'");
    int id = std::stoi(cur_.text.substr(2));
    bump();
    return id;
  }

  std::string expect_ident(const char* what) {
    if (cur_.kind != Token::Kind::Ident)
      throw ParseError(cur_.loc, std::string("expected ") + what + ", got '" +
                                     cur_.text + "'");
    std::string s = cur_.text;
    bump();
    return s;
  }

  void expect_keyword(const char* kw) {
    if (!at_ident(kw))
      throw ParseError(cur_.loc, std::string("expected '") + kw + "', got '" +
                                     cur_.text + "'");
    bump();
  }

  void expect_punct(const char* p) {
    if (!at_punct(p))
      throw ParseError(cur_.loc, std::string("expected '") + p + "', got '" +
                                     (cur_.kind == Token::Kind::End ? "<eof>"
                                                                    : cur_.text) +
                                     "'");
    bump();
  }

  bool at_ident(const char* s) const {
    return cur_.kind == Token::Kind::Ident && cur_.text == s;
  }
  bool at_punct(const char* s) const {
    return cur_.kind == Token::Kind::Punct && cur_.text == s;
  }
  bool at_end() const { return cur_.kind == Token::Kind::End; }
  void bump() { cur_ = lex_.next(); }

  Lexer lex_;
  Token cur_;
};

}  // namespace detail

// Syntactic parse of one file; no cross-declaration validation. Used by the
// driver to merge multiple inputs before validating the whole unit.
inline Program parse_unit(const std::string& text, int file_index = -1) {
  detail::Parser p(text, file_index);
  return p.parse_unit();
}

// Parses and validates a complete program.
inline Program parse_program(const std::string& text) {
  Program p = parse_unit(text);
  validate_program(p);
  return p;
}

}  // namespace petrilock
