#pragma once

// Cooling-sequence DSL (.acs files).
//
//   line := "swap" INT INT | "comp" INT INT INT | "not" INT
//         | "perm" (INT ":" INT)+ | "wait" (FLOAT | "auto" IDENT)
//
// One operation per line, whitespace-separated tokens, '#' starts a comment.
// Qubit arguments are 0-based qubit indices; perm pairs are basis indices.

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hbac/config.hpp"

namespace hbac {

struct SwapOp {
  int i = 0;
  int j = 0;
  friend bool operator==(const SwapOp&, const SwapOp&) = default;
};

struct CompOp {
  int target = 0;
  int a = 0;
  int b = 0;
  friend bool operator==(const CompOp&, const CompOp&) = default;
};

struct NotOp {
  int i = 0;
  friend bool operator==(const NotOp&, const NotOp&) = default;
};

struct PermOp {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  friend bool operator==(const PermOp&, const PermOp&) = default;
};

struct WaitOp {
  double seconds = 0.0;    // meaningful when auto_label is empty
  std::string auto_label;  // non-empty for `wait auto <label>`

  bool is_auto() const noexcept { return !auto_label.empty(); }
  friend bool operator==(const WaitOp&, const WaitOp&) = default;
};

using OpKind = std::variant<SwapOp, CompOp, NotOp, PermOp, WaitOp>;

struct SeqOp {
  OpKind kind;
  int source_line = 0;

  // Structural equality; source_line is provenance only.
  friend bool operator==(const SeqOp& l, const SeqOp& r) { return l.kind == r.kind; }
};

struct Sequence {
  std::vector<SeqOp> ops;

  /// Auto-wait labels in order of appearance.
  std::vector<std::string> auto_labels() const;
  bool has_auto_waits() const;

  friend bool operator==(const Sequence&, const Sequence&) = default;
};

enum class ParseErrc { unknown_keyword, arity_mismatch, malformed_number, invalid_value, duplicate_label };

const char* to_string(ParseErrc kind);

struct ParseDiagnostic {
  ParseErrc kind;
  int line = 0;
  std::string message;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(ParseDiagnostic d);

  const ParseDiagnostic& diagnostic() const noexcept { return diag_; }
  ParseErrc kind() const noexcept { return diag_.kind; }
  int line() const noexcept { return diag_.line; }

 private:
  ParseDiagnostic diag_;
};

struct ParseResult {
  Sequence sequence;  // only meaningful when diagnostics is empty
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const noexcept { return diagnostics.empty(); }
};

/// Parses every line and reports every error; never throws.
ParseResult parse_sequence_all(std::string_view text);

/// Throws ParseError carrying the first error.
Sequence parse_sequence(std::string_view text);

/// Canonical text; parse_sequence(format_sequence(s)) == s.
std::string format_sequence(const Sequence& seq);

std::string format_op(const OpKind& op);

enum class Severity { warning, error };

struct Diagnostic {
  Severity severity = Severity::error;
  int line = 0;
  std::string message;
};

/// Range checks against the configured system, plus adjacency warnings when
/// the config declares a coupling graph.
std::vector<Diagnostic> validate(const Sequence& seq, const SystemConfig& config);

bool has_errors(const std::vector<Diagnostic>& diags);

/// Replaces auto waits, in order of appearance, by the given durations.
Sequence resolve_auto_waits(Sequence seq, const std::vector<double>& durations);

/// Replaces the auto wait with `label` by a literal duration.
Sequence resolve_auto_wait(Sequence seq, std::string_view label, double seconds);

}  // namespace hbac
