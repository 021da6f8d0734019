// Copyright 2026 The qexam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::fmt;

use smallvec::SmallVec;

/// A computational-basis label. Position `i` is the value of qubit `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    words: SmallVec<[u64; 2]>,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            words: SmallVec::from_elem(0, len.div_ceil(64)),
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut out = BitString::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            out.set(i, b);
        }
        out
    }

    /// Parses a string of `0` and `1` characters.
    pub fn parse(s: &str) -> Option<Self> {
        let bits: Option<Vec<bool>> = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        bits.map(|b| BitString::from_bits(&b))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = BitString::zeros(self.len + other.len);
        for (i, b) in self.iter().chain(other.iter()).enumerate() {
            if b {
                out.set(i, true);
            }
        }
        out
    }

    /// Returns the bit at `i` and the string with that position deleted.
    pub fn remove(&self, i: usize) -> (bool, BitString) {
        let mut out = BitString::zeros(self.len - 1);
        let mut j = 0;
        for (pos, b) in self.iter().enumerate() {
            if pos == i {
                continue;
            }
            if b {
                out.set(j, true);
            }
            j += 1;
        }
        (self.get(i), out)
    }

    /// Returns the string with `value` inserted at position `i`.
    pub fn insert(&self, i: usize, value: bool) -> BitString {
        let mut out = BitString::zeros(self.len + 1);
        for pos in 0..out.len {
            let b = match pos.cmp(&i) {
                std::cmp::Ordering::Less => self.get(pos),
                std::cmp::Ordering::Equal => value,
                std::cmp::Ordering::Greater => self.get(pos - 1),
            };
            if b {
                out.set(pos, true);
            }
        }
        out
    }

    /// Dense-vector index with qubit 0 as the most significant bit.
    pub fn to_index(&self) -> usize {
        self.iter().fold(0usize, |acc, b| (acc << 1) | b as usize)
    }

    pub fn from_index(index: usize, len: usize) -> Self {
        let mut out = BitString::zeros(len);
        for i in 0..len {
            if (index >> (len - 1 - i)) & 1 == 1 {
                out.set(i, true);
            }
        }
        out
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
        write!(f, "|{self}>")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remove_and_insert_are_inverse() {
        let s = BitString::parse("1011001").unwrap();
        for i in 0..s.len() {
            let (b, rest) = s.remove(i);
            assert_eq!(b, s.get(i));
            assert_eq!(rest.insert(i, b), s);
        }
    }

    #[test]
    fn index_is_big_endian_in_qubit_order() {
        let s = BitString::parse("001").unwrap();
        assert_eq!(s.to_index(), 1);
        assert_eq!(BitString::from_index(6, 3).to_string(), "110");
    }

    #[test]
    fn spans_word_boundary() {
        let mut s = BitString::zeros(130);
        s.set(64, true);
        s.flip(129);
        assert!(s.get(64) && s.get(129) && !s.get(63));
        let (b, rest) = s.remove(0);
        assert!(!b);
        assert!(rest.get(63) && rest.get(128));
        assert_eq!(s.concat(&BitString::parse("1").unwrap()).len(), 131);
    }
}
