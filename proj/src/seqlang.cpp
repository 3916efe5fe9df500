#include "hbac/seqlang.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include <fmt/format.h>

namespace hbac {

const char* to_string(ParseErrc kind) {
  switch (kind) {
    case ParseErrc::unknown_keyword: return "unknown keyword";
    case ParseErrc::arity_mismatch: return "arity mismatch";
    case ParseErrc::malformed_number: return "malformed number";
    case ParseErrc::invalid_value: return "invalid value";
    case ParseErrc::duplicate_label: return "duplicate label";
  }
  return "parse error";
}

ParseError::ParseError(ParseDiagnostic d)
    : std::runtime_error(fmt::format("line {}: {}: {}", d.line, to_string(d.kind), d.message)),
      diag_(std::move(d)) {}

std::vector<std::string> Sequence::auto_labels() const {
  std::vector<std::string> out;
  for (const auto& op : ops) {
    if (const auto* w = std::get_if<WaitOp>(&op.kind); w && w->is_auto()) out.push_back(w->auto_label);
  }
  return out;
}

bool Sequence::has_auto_waits() const { return !auto_labels().empty(); }

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const char c = line[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else if (c == ':') {
      tokens.push_back(line.substr(pos, 1));
      ++pos;
    } else {
      std::size_t end = pos;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end])) && line[end] != ':') ++end;
      tokens.push_back(line.substr(pos, end - pos));
      pos = end;
    }
  }
  return tokens;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view tok) {
  Int value{};
  if (tok.empty() || !std::isdigit(static_cast<unsigned char>(tok.front()))) return std::nullopt;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_float(std::string_view tok) {
  double value = 0.0;
  if (tok.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

bool is_ident(std::string_view tok) {
  if (tok.empty() || !(std::isalpha(static_cast<unsigned char>(tok.front())) || tok.front() == '_')) return false;
  return std::all_of(tok.begin(), tok.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// Parses one non-empty token list into an op, or returns a diagnostic.
std::variant<OpKind, ParseDiagnostic> parse_line(const std::vector<std::string_view>& tok, int line) {
  auto fail = [line](ParseErrc kind, std::string msg) -> ParseDiagnostic { return {kind, line, std::move(msg)}; };
  const std::string_view kw = tok.front();
  const std::size_t nargs = tok.size() - 1;

  auto qubits = [&](std::size_t expected, const char* usage) -> std::variant<std::vector<int>, ParseDiagnostic> {
    if (nargs != expected) {
      return fail(ParseErrc::arity_mismatch, fmt::format("expected '{}', got {} argument(s)", usage, nargs));
    }
    std::vector<int> out;
    for (std::size_t k = 1; k < tok.size(); ++k) {
      auto v = parse_int<int>(tok[k]);
      if (!v) return fail(ParseErrc::malformed_number, fmt::format("expected qubit index, got '{}'", tok[k]));
      out.push_back(*v);
    }
    return out;
  };

  if (kw == "swap" || kw == "comp" || kw == "not") {
    const std::size_t arity = kw == "swap" ? 2 : kw == "comp" ? 3 : 1;
    const char* usage = kw == "swap" ? "swap INT INT" : kw == "comp" ? "comp INT INT INT" : "not INT";
    auto r = qubits(arity, usage);
    if (auto* d = std::get_if<ParseDiagnostic>(&r)) return *d;
    const auto& q = std::get<std::vector<int>>(r);
    if (kw == "swap") return OpKind{SwapOp{q[0], q[1]}};
    if (kw == "not") return OpKind{NotOp{q[0]}};
    if (q[0] == q[1] || q[0] == q[2] || q[1] == q[2]) {
      return fail(ParseErrc::invalid_value, fmt::format("comp qubits must be distinct, got {} {} {}", q[0], q[1], q[2]));
    }
    return OpKind{CompOp{q[0], q[1], q[2]}};
  }

  if (kw == "perm") {
    if (nargs == 0 || nargs % 3 != 0) {
      return fail(ParseErrc::arity_mismatch, "expected 'perm INT:INT [INT:INT ...]'");
    }
    PermOp op;
    for (std::size_t k = 1; k < tok.size(); k += 3) {
      if (tok[k + 1] != ":") {
        return fail(ParseErrc::arity_mismatch, fmt::format("expected ':' between basis indices, got '{}'", tok[k + 1]));
      }
      auto x = parse_int<std::uint64_t>(tok[k]);
      auto y = parse_int<std::uint64_t>(tok[k + 2]);
      if (!x || !y) {
        return fail(ParseErrc::malformed_number,
                    fmt::format("expected basis index pair, got '{}:{}'", tok[k], tok[k + 2]));
      }
      op.pairs.emplace_back(*x, *y);
    }
    return OpKind{std::move(op)};
  }

  if (kw == "wait") {
    if (nargs == 2 && tok[1] == "auto") {
      if (!is_ident(tok[2])) return fail(ParseErrc::invalid_value, fmt::format("'{}' is not a valid label", tok[2]));
      return OpKind{WaitOp{0.0, std::string(tok[2])}};
    }
    if (nargs != 1) return fail(ParseErrc::arity_mismatch, "expected 'wait FLOAT' or 'wait auto IDENT'");
    auto v = parse_float(tok[1]);
    if (!v) return fail(ParseErrc::malformed_number, fmt::format("expected duration, got '{}'", tok[1]));
    if (*v < 0.0) return fail(ParseErrc::invalid_value, fmt::format("wait duration {} is negative", *v));
    return OpKind{WaitOp{*v, {}}};
  }

  return fail(ParseErrc::unknown_keyword,
              fmt::format("unknown keyword '{}', expected one of swap, comp, not, perm, wait", kw));
}

}  // namespace

ParseResult parse_sequence_all(std::string_view text) {
  ParseResult result;
  std::set<std::string> labels;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    auto parsed = parse_line(tokens, line_no);
    if (auto* d = std::get_if<ParseDiagnostic>(&parsed)) {
      result.diagnostics.push_back(std::move(*d));
      continue;
    }
    auto& op = std::get<OpKind>(parsed);
    if (const auto* w = std::get_if<WaitOp>(&op); w && w->is_auto()) {
      if (!labels.insert(w->auto_label).second) {
        result.diagnostics.push_back(
            {ParseErrc::duplicate_label, line_no, fmt::format("auto label '{}' already used", w->auto_label)});
        continue;
      }
    }
    result.sequence.ops.push_back({std::move(op), line_no});
  }
  if (!result.ok()) result.sequence.ops.clear();
  return result;
}

Sequence parse_sequence(std::string_view text) {
  auto result = parse_sequence_all(text);
  if (!result.ok()) throw ParseError(result.diagnostics.front());
  return std::move(result.sequence);
}

std::string format_op(const OpKind& op) {
  struct Formatter {
    std::string operator()(const SwapOp& o) const { return fmt::format("swap {} {}", o.i, o.j); }
    std::string operator()(const CompOp& o) const { return fmt::format("comp {} {} {}", o.target, o.a, o.b); }
    std::string operator()(const NotOp& o) const { return fmt::format("not {}", o.i); }
    std::string operator()(const PermOp& o) const {
      std::string s = "perm";
      for (const auto& [x, y] : o.pairs) s += fmt::format(" {}:{}", x, y);
      return s;
    }
    std::string operator()(const WaitOp& o) const {
      // Shortest representation that parses back to the same double.
      return o.is_auto() ? fmt::format("wait auto {}", o.auto_label) : fmt::format("wait {}", o.seconds);
    }
  };
  return std::visit(Formatter{}, op);
}

std::string format_sequence(const Sequence& seq) {
  std::string out;
  for (const auto& op : seq.ops) {
    out += format_op(op.kind);
    out += '\n';
  }
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const auto& d) { return d.severity == Severity::error; });
}

std::vector<Diagnostic> validate(const Sequence& seq, const SystemConfig& config) {
  std::vector<Diagnostic> out;
  const int n = config.n_qubits();
  const std::uint64_t dim = n >= 1 && n <= kMaxQubits ? (std::uint64_t{1} << n) : 0;

  for (const auto& op : seq.ops) {
    const int line = op.source_line;
    auto error = [&](std::string msg) { out.push_back({Severity::error, line, std::move(msg)}); };
    auto warn = [&](std::string msg) { out.push_back({Severity::warning, line, std::move(msg)}); };
    auto in_range = [&](int q) {
      if (q < 0 || q >= n) {
        error(fmt::format("qubit index {} out of range for {} qubits", q, n));
        return false;
      }
      return true;
    };
    auto name = [&](int q) { return config.qubits[static_cast<std::size_t>(q)].name; };

    if (const auto* s = std::get_if<SwapOp>(&op.kind)) {
      const bool ok = in_range(s->i) & in_range(s->j);
      if (!ok) continue;
      if (s->i == s->j) {
        warn(fmt::format("swap {} {} is a no-op", s->i, s->j));
      } else if (!config.adjacent(s->i, s->j)) {
        warn(fmt::format("swap between non-adjacent qubits {} and {}", name(s->i), name(s->j)));
      }
    } else if (const auto* c = std::get_if<CompOp>(&op.kind)) {
      const bool ok = in_range(c->target) & in_range(c->a) & in_range(c->b);
      if (!ok) continue;
      if (c->target == c->a || c->target == c->b || c->a == c->b) {
        error("comp qubits must be distinct");
        continue;
      }
      // Three qubits are connected iff at least two of the three pairs are edges.
      const int edges = int(config.adjacent(c->target, c->a)) + int(config.adjacent(c->target, c->b)) +
                        int(config.adjacent(c->a, c->b));
      if (edges < 2) {
        warn(fmt::format("comp over qubits {}, {}, {} that are not connected in the coupling graph",
                         name(c->target), name(c->a), name(c->b)));
      }
    } else if (const auto* x = std::get_if<NotOp>(&op.kind)) {
      in_range(x->i);
    } else if (const auto* p = std::get_if<PermOp>(&op.kind)) {
      for (const auto& [a, b] : p->pairs) {
        if (a >= dim || b >= dim) error(fmt::format("basis index pair {}:{} out of range for {} states", a, b, dim));
      }
    } else if (const auto* w = std::get_if<WaitOp>(&op.kind)) {
      if (!w->is_auto() && !(w->seconds >= 0.0)) error("wait duration must be >= 0");
    }
  }
  return out;
}

Sequence resolve_auto_waits(Sequence seq, const std::vector<double>& durations) {
  std::size_t k = 0;
  for (auto& op : seq.ops) {
    auto* w = std::get_if<WaitOp>(&op.kind);
    if (!w || !w->is_auto()) continue;
    if (k >= durations.size()) {
      throw Error(Errc::invalid_parameter, fmt::format("only {} durations for more auto waits", durations.size()));
    }
    *w = WaitOp{durations[k++], {}};
  }
  if (k != durations.size()) {
    throw Error(Errc::invalid_parameter, fmt::format("{} durations for {} auto waits", durations.size(), k));
  }
  return seq;
}

Sequence resolve_auto_wait(Sequence seq, std::string_view label, double seconds) {
  for (auto& op : seq.ops) {
    if (auto* w = std::get_if<WaitOp>(&op.kind); w && w->auto_label == label) {
      *w = WaitOp{seconds, {}};
      return seq;
    }
  }
  throw Error(Errc::unknown_parameter_path, fmt::format("no auto wait labelled '{}'", label));
}

}  // namespace hbac
