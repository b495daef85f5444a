//! Fixed-length GF(2) vectors.
//!
//! A [`BitVec`] holds between 1 and 128 bits. Positions are 1-based and
//! position 1 is the leftmost bit in every printed form, so the string
//! `"1011"` has bit 1 = 1, bit 2 = 0, bit 3 = 1, bit 4 = 1.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Gf2Error;

/// Largest supported vector length (and code length `n`).
pub const MAX_LEN: usize = 128;

/// A fixed-length vector over GF(2), packed into a single machine word.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    word: u128,
}

impl BitVec {
    /// The all-zero vector of length `len`.
    pub fn zeros(len: usize) -> Result<Self, Gf2Error> {
        if len == 0 || len > MAX_LEN {
            return Err(Gf2Error::LengthOutOfRange { len });
        }
        Ok(BitVec { len, word: 0 })
    }

    /// The unit vector of length `len` with a single 1 at `pos` (1-based).
    pub fn unit(len: usize, pos: usize) -> Result<Self, Gf2Error> {
        let mut v = Self::zeros(len)?;
        if pos == 0 || pos > len {
            return Err(Gf2Error::PositionOutOfRange { pos, len });
        }
        v.word = 1u128 << (pos - 1);
        Ok(v)
    }

    /// Builds a vector from 0/1 values, index 0 of the slice = position 1.
    pub fn from_bits(bits: &[u8]) -> Result<Self, Gf2Error> {
        let mut v = Self::zeros(bits.len())?;
        for (i, &b) in bits.iter().enumerate() {
            if b > 1 {
                return Err(Gf2Error::NotABit { value: b as char });
            }
            if b == 1 {
                v.word |= 1u128 << i;
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false // length 1..=128 by construction
    }

    /// Bit at 1-based `pos`. Panics if `pos` is out of range.
    pub fn get(&self, pos: usize) -> bool {
        assert!(pos >= 1 && pos <= self.len, "bit position {pos} out of 1..={}", self.len);
        (self.word >> (pos - 1)) & 1 == 1
    }

    /// Sets the bit at 1-based `pos`. Panics if `pos` is out of range.
    pub fn set(&mut self, pos: usize, value: bool) {
        assert!(pos >= 1 && pos <= self.len, "bit position {pos} out of 1..={}", self.len);
        if value {
            self.word |= 1u128 << (pos - 1);
        } else {
            self.word &= !(1u128 << (pos - 1));
        }
    }

    /// Flips the bit at 1-based `pos`. Panics if `pos` is out of range.
    pub fn flip(&mut self, pos: usize) {
        assert!(pos >= 1 && pos <= self.len, "bit position {pos} out of 1..={}", self.len);
        self.word ^= 1u128 << (pos - 1);
    }

    /// Number of 1 bits.
    pub fn weight(&self) -> usize {
        self.word.count_ones() as usize
    }

    pub fn is_zero(&self) -> bool {
        self.word == 0
    }

    /// Bitwise XOR; errors if the lengths differ.
    pub fn xor(&self, other: &BitVec) -> Result<BitVec, Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::LengthMismatch { expected: self.len, got: other.len });
        }
        Ok(BitVec { len: self.len, word: self.word ^ other.word })
    }

    /// Positions (1-based, ascending) of the 1 bits.
    pub fn ones(&self) -> Vec<usize> {
        (1..=self.len).filter(|&p| self.get(p)).collect()
    }

    /// Raw packed word: bit `pos` lives at word bit `pos - 1`.
    pub(crate) fn word(&self) -> u128 {
        self.word
    }

    /// Builds a vector from a packed word, position `j` at word bit
    /// `j - 1`; bits beyond `len` are dropped. Panics if `len` is not in
    /// 1..=128.
    pub fn from_word(len: usize, word: u128) -> Self {
        assert!((1..=MAX_LEN).contains(&len), "unsupported length {len}");
        let mask = if len == MAX_LEN { u128::MAX } else { (1u128 << len) - 1 };
        BitVec { len, word: word & mask }
    }
}

/// Panicking XOR for call sites where equal lengths hold by construction.
/// Use [`BitVec::xor`] when the lengths come from external input.
impl BitXor for BitVec {
    type Output = BitVec;

    fn bitxor(self, rhs: BitVec) -> BitVec {
        assert_eq!(self.len, rhs.len, "BitVec xor length mismatch");
        BitVec { len: self.len, word: self.word ^ rhs.word }
    }
}

impl BitXorAssign for BitVec {
    fn bitxor_assign(&mut self, rhs: BitVec) {
        assert_eq!(self.len, rhs.len, "BitVec xor length mismatch");
        self.word ^= rhs.word;
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 1..=self.len {
            f.write_str(if self.get(pos) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl FromStr for BitVec {
    type Err = Gf2Error;

    fn from_str(s: &str) -> Result<Self, Gf2Error> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                c if c.is_whitespace() => {}
                c => return Err(Gf2Error::NotABit { value: c }),
            }
        }
        Self::from_bits(&bits)
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn xor_identity_and_self_inverse() {
        let a: BitVec = "1011".parse().unwrap();
        let zero = BitVec::zeros(4).unwrap();
        assert_eq!(a.xor(&zero).unwrap(), a);
        assert!(a.xor(&a).unwrap().is_zero());
    }

    #[test]
    fn xor_length_mismatch_is_an_error() {
        let a: BitVec = "1011".parse().unwrap();
        let b: BitVec = "10110".parse().unwrap();
        assert!(matches!(a.xor(&b), Err(Gf2Error::LengthMismatch { expected: 4, got: 5 })));
    }

    #[test]
    fn position_one_is_leftmost() {
        let v: BitVec = "1000".parse().unwrap();
        assert!(v.get(1));
        assert!(!v.get(4));
        assert_eq!(v.to_string(), "1000");
        assert_eq!(v.ones(), vec![1]);
    }

    #[test]
    fn length_bounds_enforced() {
        assert!(BitVec::zeros(0).is_err());
        assert!(BitVec::zeros(129).is_err());
        assert!(BitVec::zeros(128).is_ok());
        assert!(BitVec::unit(128, 128).unwrap().get(128));
    }

    #[test]
    fn rejects_non_binary_characters() {
        assert!(matches!("1021".parse::<BitVec>(), Err(Gf2Error::NotABit { value: '2' })));
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(word in any::<u128>(), len in 1usize..=128) {
            let v = BitVec::from_word(len, word);
            let back: BitVec = v.to_string().parse().unwrap();
            prop_assert_eq!(v, back);
        }

        #[test]
        fn xor_of_self_is_zero(word in any::<u128>(), len in 1usize..=128) {
            let v = BitVec::from_word(len, word);
            prop_assert!(v.xor(&v).unwrap().is_zero());
        }
    }
}
