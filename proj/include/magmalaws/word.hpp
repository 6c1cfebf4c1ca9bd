#ifndef MAGMALAWS_WORD_HPP
#define MAGMALAWS_WORD_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace magmalaws {

using Var = std::uint8_t;

/// Marker byte for an internal node in the preorder encoding of a word.
inline constexpr std::uint8_t kOp = 0xFF;

/// Largest variable index a word may carry (kOp is reserved).
inline constexpr Var kMaxVar = 0xFE;

/// Number of variables with a printable single-letter name.
inline constexpr int kNamedVars = 9;

inline constexpr std::string_view kVarNames = "xyzwuvrst";

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

// One past the last byte of the subterm starting at `pos`.
inline std::size_t subterm_end(std::span<const std::uint8_t> code,
                               std::size_t pos) {
  std::size_t need = 1;
  while (need > 0) {
    need += code[pos] == kOp ? 1 : std::size_t(-1);
    ++pos;
  }
  return pos;
}

}  // namespace detail

/// An element of the free magma: a binary tree over variable indices, stored
/// as a flat preorder byte string (kOp for a node, otherwise a variable).
class Word {
 public:
  Word() : code_{0} {}

  static Word var(Var v) {
    if (v > kMaxVar) throw std::out_of_range("variable index too large");
    Word w;
    w.code_[0] = v;
    return w;
  }

  static Word op(const Word& l, const Word& r) {
    Word w;
    w.code_.clear();
    w.code_.reserve(1 + l.code_.size() + r.code_.size());
    w.code_.push_back(kOp);
    w.code_.insert(w.code_.end(), l.code_.begin(), l.code_.end());
    w.code_.insert(w.code_.end(), r.code_.begin(), r.code_.end());
    return w;
  }

  /// Builds a word from a preorder encoding; throws if it is not exactly one
  /// well-formed tree.
  static Word from_code(std::vector<std::uint8_t> code) {
    if (code.empty()) throw std::invalid_argument("empty word encoding");
    std::size_t need = 1, i = 0;
    for (; i < code.size() && need > 0; ++i) need += code[i] == kOp ? 1 : -1;
    if (need != 0 || i != code.size())
      throw std::invalid_argument("malformed word encoding");
    Word w;
    w.code_ = std::move(code);
    return w;
  }

  bool is_var() const noexcept { return code_[0] != kOp; }
  Var var_index() const noexcept { return code_[0]; }

  Word left() const { return at(1); }
  Word right() const { return at(detail::subterm_end(code_, 1)); }

  /// Subterm rooted at preorder offset `pos`.
  Word at(std::size_t pos) const {
    Word w;
    w.code_.assign(code_.begin() + pos,
                   code_.begin() + detail::subterm_end(code_, pos));
    return w;
  }

  /// Copy of this word with the subterm at `pos` replaced by `by`.
  Word replaced(std::size_t pos, const Word& by) const {
    const std::size_t end = detail::subterm_end(code_, pos);
    Word w;
    w.code_.clear();
    w.code_.reserve(code_.size() - (end - pos) + by.code_.size());
    w.code_.insert(w.code_.end(), code_.begin(), code_.begin() + pos);
    w.code_.insert(w.code_.end(), by.code_.begin(), by.code_.end());
    w.code_.insert(w.code_.end(), code_.begin() + end, code_.end());
    return w;
  }

  std::size_t order() const noexcept {
    return static_cast<std::size_t>(std::count(code_.begin(), code_.end(), kOp));
  }
  std::size_t leaves() const noexcept { return order() + 1; }
  std::size_t size() const noexcept { return code_.size(); }

  std::span<const std::uint8_t> code() const noexcept { return code_; }

  /// Variables in left-to-right leaf order (with repetitions).
  std::vector<Var> leaf_vars() const {
    std::vector<Var> out;
    for (auto c : code_)
      if (c != kOp) out.push_back(c);
    return out;
  }

  /// One past the largest variable index occurring in the word.
  int var_bound() const noexcept {
    int m = 0;
    for (auto c : code_)
      if (c != kOp) m = std::max(m, int(c) + 1);
    return m;
  }

  bool contains_var(Var v) const noexcept {
    return std::find(code_.begin(), code_.end(), v) != code_.end();
  }

  /// Applies `f` to every leaf, in place.
  template <class F>
  Word map_vars(F&& f) const {
    Word w = *this;
    for (auto& c : w.code_)
      if (c != kOp) c = static_cast<std::uint8_t>(f(Var(c)));
    return w;
  }

  /// The word with every node's children swapped.
  Word mirrored() const {
    if (is_var()) return *this;
    return op(right().mirrored(), left().mirrored());
  }

  /// Preorder offsets of all subterms (offset 0 is the whole word).
  std::vector<std::size_t> positions() const {
    std::vector<std::size_t> out(code_.size());
    for (std::size_t i = 0; i < code_.size(); ++i) out[i] = i;
    return out;
  }

  /// Converts an `L`/`R` path to a preorder offset. Throws std::out_of_range
  /// when the path descends through a leaf or contains another character.
  std::size_t offset_of_path(std::string_view path) const {
    std::size_t pos = 0;
    for (char c : path) {
      if (code_[pos] != kOp) throw std::out_of_range("path descends into a leaf");
      if (c == 'L')
        pos = pos + 1;
      else if (c == 'R')
        pos = detail::subterm_end(code_, pos + 1);
      else
        throw std::out_of_range("path character must be L or R");
    }
    return pos;
  }

  /// Inverse of offset_of_path.
  std::string path_of_offset(std::size_t target) const {
    std::string path;
    std::size_t pos = 0;
    while (pos != target) {
      const std::size_t right = detail::subterm_end(code_, pos + 1);
      if (target < right) {
        path.push_back('L');
        pos = pos + 1;
      } else {
        path.push_back('R');
        pos = right;
      }
    }
    return path;
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    return a.code_ <=> b.code_;
  }

 private:
  std::vector<std::uint8_t> code_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    auto c = w.code();
    return std::hash<std::string_view>{}(std::string_view(
        reinterpret_cast<const char*>(c.data()), c.size()));
  }
};

inline Word operator*(const Word& l, const Word& r) { return Word::op(l, r); }

/// Single-indeterminate view: the tree structure with variable identity erased.
inline Word shape_of(const Word& w) {
  return w.map_vars([](Var) { return Var{0}; });
}

namespace detail {

inline std::strong_ordering compare_shape_code(std::span<const std::uint8_t> a,
                                               std::span<const std::uint8_t> b) {
  const auto ord = [](std::span<const std::uint8_t> s) {
    return std::count(s.begin(), s.end(), kOp);
  };
  if (auto c = ord(a) <=> ord(b); c != 0) return c;
  if (a[0] != kOp) return std::strong_ordering::equal;
  const std::size_t al = subterm_end(a, 1), bl = subterm_end(b, 1);
  if (auto c = compare_shape_code(a.subspan(1, al - 1), b.subspan(1, bl - 1));
      c != 0)
    return c;
  return compare_shape_code(a.subspan(al), b.subspan(bl));
}

}  // namespace detail

/// Well-ordering on single-indeterminate words: by order, then left subtree,
/// then right subtree. Variable identity is ignored.
inline std::strong_ordering compare_shapes(const Word& a, const Word& b) {
  return detail::compare_shape_code(a.code(), b.code());
}

/// Replaces each variable v of w that `sub` maps by sub[v].
inline Word substitute(const Word& w, const std::map<Var, Word>& sub) {
  if (w.is_var()) {
    auto it = sub.find(w.var_index());
    return it == sub.end() ? w : it->second;
  }
  return Word::op(substitute(w.left(), sub), substitute(w.right(), sub));
}

inline std::string var_name(Var v) {
  if (v < kNamedVars) return std::string(1, kVarNames[v]);
  return "v" + std::to_string(int(v));
}

namespace detail {

inline void render_into(const Word& w, std::string& out, bool top) {
  if (w.is_var()) {
    out += var_name(w.var_index());
    return;
  }
  if (!top) out += '(';
  render_into(w.left(), out, false);
  out += " * ";
  render_into(w.right(), out, false);
  if (!top) out += ')';
}

class WordParser {
 public:
  explicit WordParser(std::string_view text) : text_(text) {}

  Word parse_top() {
    Word w = parse_operand();
    skip_ws();
    if (at_op()) {
      consume_op();
      Word r = parse_operand();
      w = Word::op(w, r);
      skip_ws();
      if (at_op())
        throw ParseError("ambiguous product; parenthesize explicitly", pos_);
    }
    return w;
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n'))
      ++pos_;
  }

  bool done() {
    skip_ws();
    return pos_ >= text_.size();
  }

  bool try_consume(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_).starts_with(tok)) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  std::size_t pos() const { return pos_; }

 private:
  static constexpr std::string_view kDiamond = "⋄";
  static constexpr std::string_view kWhiteDiamond = "◇";

  bool at_op() {
    skip_ws();
    auto rest = text_.substr(pos_);
    return rest.starts_with("*") || rest.starts_with(kDiamond) ||
           rest.starts_with(kWhiteDiamond);
  }

  void consume_op() {
    auto rest = text_.substr(pos_);
    if (rest.starts_with("*"))
      pos_ += 1;
    else
      pos_ += kDiamond.size();  // both diamonds are 3 bytes in UTF-8
  }

  Word parse_operand() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Word l = parse_operand();
      if (!at_op()) throw ParseError("expected '*'", pos_);
      consume_op();
      Word r = parse_operand();
      skip_ws();
      if (at_op())
        throw ParseError("ambiguous product; parenthesize explicitly", pos_);
      if (pos_ >= text_.size() || text_[pos_] != ')')
        throw ParseError("expected ')'", pos_);
      ++pos_;
      return Word::op(l, r);
    }
    if (c >= '0' && c <= '9') {
      // numeric variables, as in 0 * 1 = 1
      const std::size_t start = pos_;
      int v = 0;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
        v = std::min(v * 10 + (text_[pos_] - '0'), 1000);
        ++pos_;
      }
      if (v >= kNamedVars)
        throw ParseError("at most 9 distinct variables are supported", start);
      return Word::var(static_cast<Var>(v));
    }
    const auto idx = kVarNames.find(c);
    if (idx == std::string_view::npos)
      throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    ++pos_;
    return Word::var(static_cast<Var>(idx));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Renders with `*`, fully parenthesized except at the outermost level.
inline std::string render_word(const Word& w) {
  std::string out;
  detail::render_into(w, out, true);
  return out;
}

inline Word parse_word(std::string_view text) {
  detail::WordParser p(text);
  Word w = p.parse_top();
  if (!p.done()) throw ParseError("trailing input", p.pos());
  return w;
}

}  // namespace magmalaws

#endif  // MAGMALAWS_WORD_HPP
