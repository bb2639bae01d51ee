//! Packed, most-significant-bit-first bit strings.
//!
//! Binary expansions of tuned angles routinely run to thousands of digits, so
//! the digit words are stored 64 to a machine word. Unused trailing bits of the
//! last word are always zero, which keeps the derived `Eq` and `Hash` exact.

use std::fmt;

use num_bigint::BigUint;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitString {
            words: Vec::with_capacity(bits.div_ceil(64)),
            len: 0,
        }
    }

    /// The `n` low bits of `value`, most significant first.
    pub fn from_bits(value: u64, n: usize) -> Self {
        let mut s = Self::with_capacity(n);
        s.push_bits(value, n);
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (63 - i % 64)) & 1 == 1
    }

    pub fn first(&self) -> Option<bool> {
        (!self.is_empty()).then(|| self.get(0))
    }

    pub fn last(&self) -> Option<bool> {
        (!self.is_empty()).then(|| self.get(self.len - 1))
    }

    pub fn push(&mut self, bit: bool) {
        self.push_bits(bit as u64, 1);
    }

    /// Appends the `n` low bits of `value` (`n <= 64`), most significant first.
    pub fn push_bits(&mut self, value: u64, n: usize) {
        debug_assert!(n <= 64);
        if n == 0 {
            return;
        }
        let value = value & low_mask(n);
        let offset = self.len % 64;
        if offset == 0 {
            self.words.push(value << (64 - n));
        } else {
            let free = 64 - offset;
            let last = self.words.last_mut().expect("non-empty when offset > 0");
            if n <= free {
                *last |= value << (free - n);
            } else {
                *last |= value >> (n - free);
                self.words.push(value << (64 - (n - free)));
            }
        }
        self.len += n;
    }

    /// Reads `n <= 64` bits starting at `start`, right-aligned in the result.
    #[inline]
    pub fn extract(&self, start: usize, n: usize) -> u64 {
        debug_assert!(n <= 64 && start + n <= self.len);
        if n == 0 {
            return 0;
        }
        let w = start / 64;
        let o = start % 64;
        let mut hi = self.words[w] << o;
        if o + n > 64 {
            hi |= self.words[w + 1] >> (64 - o);
        }
        hi >> (64 - n)
    }

    pub fn extend_range(&mut self, other: &BitString, start: usize, end: usize) {
        debug_assert!(start <= end && end <= other.len);
        let mut pos = start;
        while pos < end {
            let n = (end - pos).min(64);
            self.push_bits(other.extract(pos, n), n);
            pos += n;
        }
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.extend_range(other, 0, other.len);
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        let mut out = BitString::with_capacity(end - start);
        out.extend_range(self, start, end);
        out
    }

    /// Cyclic left rotation by `k` positions.
    pub fn rotate_left(&self, k: usize) -> BitString {
        if self.is_empty() {
            return self.clone();
        }
        let k = k % self.len;
        if k == 0 {
            return self.clone();
        }
        let mut out = BitString::with_capacity(self.len);
        out.extend_range(self, k, self.len);
        out.extend_range(self, 0, k);
        out
    }

    pub fn rotate_right(&self, k: usize) -> BitString {
        if self.is_empty() {
            return self.clone();
        }
        let k = k % self.len;
        self.rotate_left(self.len - k)
    }

    pub fn truncate(&mut self, len: usize) {
        if len >= self.len {
            return;
        }
        self.len = len;
        self.words.truncate(len.div_ceil(64));
        let offset = len % 64;
        if offset != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= !(u64::MAX >> offset);
            }
        }
    }

    pub fn pop(&mut self) -> Option<bool> {
        let bit = self.last()?;
        self.truncate(self.len - 1);
        Some(bit)
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (63 - i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Whether `self[a..a+len] == other[b..b+len]`.
    pub fn ranges_equal(&self, a: usize, other: &BitString, b: usize, len: usize) -> bool {
        let mut i = 0;
        while i < len {
            let n = (len - i).min(64);
            if self.extract(a + i, n) != other.extract(b + i, n) {
                return false;
            }
            i += n;
        }
        true
    }

    /// Whether the string has period `d`, i.e. `s[i] == s[i + d]` throughout.
    pub fn has_period(&self, d: usize) -> bool {
        d >= self.len || self.ranges_equal(0, self, d, self.len - d)
    }

    /// Length of the shortest word `w` with `self = w^k`.
    pub fn primitive_root_len(&self) -> usize {
        let n = self.len;
        let mut root = n;
        let mut rest = n;
        let mut p = 2;
        while rest > 1 {
            if p * p > rest {
                p = rest;
            }
            if rest.is_multiple_of(p) {
                while rest.is_multiple_of(p) {
                    rest /= p;
                }
                while root.is_multiple_of(p) && self.has_period(root / p) {
                    root /= p;
                }
            }
            p += 1;
        }
        root
    }

    pub fn all(&self, bit: bool) -> bool {
        let mut i = 0;
        let want = if bit { u64::MAX } else { 0 };
        while i < self.len {
            let n = (self.len - i).min(64);
            if self.extract(i, n) != want & low_mask(n) {
                return false;
            }
            i += n;
        }
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// The string read as a binary integer.
    pub fn to_biguint(&self) -> BigUint {
        if self.is_empty() {
            return BigUint::default();
        }
        let mut digits = Vec::with_capacity(self.words.len() * 2);
        for w in self.words.iter().rev() {
            digits.push(*w as u32);
            digits.push((*w >> 32) as u32);
        }
        let padding = self.words.len() * 64 - self.len;
        BigUint::from_slice(&digits) >> padding
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut s = BitString::new();
        for b in iter {
            s.push(b);
        }
        s
    }
}

impl std::str::FromStr for BitString {
    type Err = char;

    /// Parses a word of `0`/`1` characters; the error is the first bad character.
    fn from_str(s: &str) -> Result<Self, char> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(other),
            })
            .collect()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn push_and_extract_across_word_boundaries() {
        let mut s = BitString::new();
        for i in 0..200u64 {
            s.push_bits(i % 7, 3);
        }
        assert_eq!(s.len(), 600);
        for i in 0..200usize {
            assert_eq!(s.extract(3 * i, 3), (i as u64) % 7);
        }
        assert_eq!(s.extract(61, 5), (s.extract(61, 3) << 2) | s.extract(64, 2));
    }

    #[test]
    fn rotation_and_periods() {
        let w = bs("0110");
        assert_eq!(w.rotate_left(1), bs("1100"));
        assert_eq!(w.rotate_right(1), bs("0011"));
        assert_eq!(bs("010101").primitive_root_len(), 2);
        assert_eq!(bs("0110").primitive_root_len(), 4);
        assert_eq!(bs("111").primitive_root_len(), 1);
    }

    #[test]
    fn truncate_keeps_tail_zeroed() {
        let mut a = bs("1111111");
        a.truncate(3);
        assert_eq!(a, bs("111"));
        assert_eq!(a.pop(), Some(true));
        assert_eq!(a, bs("11"));
    }

    #[test]
    fn primitive_root_matches_naive_search() {
        for len in 1..=12 {
            for v in 0..(1u64 << len) {
                let s = BitString::from_bits(v, len);
                let naive = (1..=len)
                    .find(|&d| len % d == 0 && s.has_period(d))
                    .unwrap();
                assert_eq!(s.primitive_root_len(), naive, "{s}");
            }
        }
    }

    #[test]
    fn integer_value() {
        assert_eq!(bs("0110").to_biguint(), BigUint::from(6u32));
        let long: BitString = std::iter::repeat_n(true, 130).collect();
        assert_eq!(long.to_biguint(), (BigUint::from(1u32) << 130usize) - 1u32);
    }
}
