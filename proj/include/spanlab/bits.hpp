#pragma once

// Word-level helpers for fixed-length bitsets stored as little-endian
// arrays of 64-bit words. Bit i lives in word i / 64 at position i % 64.

#include <bit>
#include <cstdint>
#include <span>

namespace spanlab::bits {

using Word = std::uint64_t;
inline constexpr int kWordBits = 64;

constexpr int words_for(int nbits) { return (nbits + kWordBits - 1) / kWordBits; }

inline bool test(const Word* w, int i) { return (w[i >> 6] >> (i & 63)) & 1u; }
inline void set(Word* w, int i) { w[i >> 6] |= Word{1} << (i & 63); }
inline void reset(Word* w, int i) { w[i >> 6] &= ~(Word{1} << (i & 63)); }

inline Word last_word_mask(int nbits) {
  const int r = nbits & 63;
  return r == 0 ? ~Word{0} : (Word{1} << r) - 1;
}

inline int popcount(const Word* w, int nwords) {
  int c = 0;
  for (int i = 0; i < nwords; ++i) c += std::popcount(w[i]);
  return c;
}

/// Number of set bits at positions >= from.
inline int popcount_from(const Word* w, int nwords, int from) {
  int wi = from >> 6;
  if (wi >= nwords) return 0;
  int c = std::popcount(w[wi] & (~Word{0} << (from & 63)));
  for (int i = wi + 1; i < nwords; ++i) c += std::popcount(w[i]);
  return c;
}

/// Index of the first set bit at position >= from, or -1.
inline int next_set(const Word* w, int nwords, int from) {
  int wi = from >> 6;
  if (wi >= nwords) return -1;
  Word cur = w[wi] & (~Word{0} << (from & 63));
  while (true) {
    if (cur) return wi * kWordBits + std::countr_zero(cur);
    if (++wi >= nwords) return -1;
    cur = w[wi];
  }
}

/// Index of the first clear bit below nbits, or -1.
inline int first_clear(const Word* w, int nbits) {
  const int nw = words_for(nbits);
  for (int i = 0; i < nw; ++i) {
    Word inv = ~w[i];
    if (i == nw - 1) inv &= last_word_mask(nbits);
    if (inv) return i * kWordBits + std::countr_zero(inv);
  }
  return -1;
}

/// Clears every bit at position <= pos.
inline void clear_through(Word* w, int nwords, int pos) {
  const int wi = pos >> 6;
  for (int i = 0; i < wi && i < nwords; ++i) w[i] = 0;
  if (wi < nwords) {
    const int b = pos & 63;
    w[wi] &= b == 63 ? Word{0} : (~Word{0} << (b + 1));
  }
}

/// out |= in << s (bits pushed past the last word are dropped).
inline void shift_left_or(const Word* in, Word* out, int nwords, int s) {
  const int ws = s >> 6, bs = s & 63;
  for (int i = nwords - 1; i >= ws; --i) {
    Word v = in[i - ws] << bs;
    if (bs && i - ws - 1 >= 0) v |= in[i - ws - 1] >> (kWordBits - bs);
    out[i] |= v;
  }
}

/// out |= in >> s.
inline void shift_right_or(const Word* in, Word* out, int nwords, int s) {
  const int ws = s >> 6, bs = s & 63;
  for (int i = 0; i + ws < nwords; ++i) {
    Word v = in[i + ws] >> bs;
    if (bs && i + ws + 1 < nwords) v |= in[i + ws + 1] << (kWordBits - bs);
    out[i] |= v;
  }
}

/// out |= in rotated by s within an nbits-long cyclic buffer: bit i moves
/// to (i + s) mod nbits. in must be clean above nbits.
inline void rotate_or(const Word* in, Word* out, int nbits, int s) {
  const int nw = words_for(nbits);
  if (s == 0) {
    for (int i = 0; i < nw; ++i) out[i] |= in[i];
    return;
  }
  if (nw == 1) {
    const Word x = in[0];
    out[0] |= ((x << s) | (x >> (nbits - s))) & last_word_mask(nbits);
    return;
  }
  // The left shift may spill bits past nbits inside the last word; mask them
  // after both halves are in place, preserving whatever out already held.
  const Word keep = out[nw - 1];
  shift_left_or(in, out, nw, s);
  shift_right_or(in, out, nw, nbits - s);
  out[nw - 1] = (out[nw - 1] & last_word_mask(nbits)) | keep;
}

}  // namespace spanlab::bits
