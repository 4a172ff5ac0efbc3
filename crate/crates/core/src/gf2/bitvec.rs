use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitXor, BitXorAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Maximum number of coordinates a packed vector can hold.
pub const MAX_BITS: usize = 128;

/// A vector over F2 packed into a single `u128`.
///
/// Coordinate `i` lives in bit `i` of the word. Printing and ordering follow
/// coordinate order, so `"0110"` has coordinate 0 equal to `0` and the total
/// order is the lexicographic order of the printed strings.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitVector {
    bits: u128,
    len: usize,
}

#[inline]
fn mask(len: usize) -> u128 {
    if len >= 128 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_BITS, "BitVector length {len} exceeds {MAX_BITS}");
        BitVector { bits: 0, len }
    }

    /// Builds a vector from a raw word; bits beyond `len` are discarded.
    pub fn from_bits(bits: u128, len: usize) -> Self {
        assert!(len <= MAX_BITS, "BitVector length {len} exceeds {MAX_BITS}");
        BitVector { bits: bits & mask(len), len }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        assert!(index < len);
        BitVector::from_bits(1u128 << index, len)
    }

    pub fn ones(len: usize) -> Self {
        BitVector::from_bits(u128::MAX, len)
    }

    pub fn from_bools(values: &[bool]) -> Self {
        let mut v = BitVector::zeros(values.len());
        for (i, &b) in values.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Concatenation `(a | b)`.
    pub fn concat(a: &BitVector, b: &BitVector) -> Self {
        let len = a.len + b.len;
        assert!(len <= MAX_BITS);
        BitVector { bits: a.bits | (b.bits << a.len), len }
    }

    #[inline]
    pub fn bits(&self) -> u128 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.bits >> i) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        if value {
            self.bits |= 1u128 << i;
        } else {
            self.bits &= !(1u128 << i);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.bits ^= 1u128 << i;
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Euclidean inner product over F2.
    #[inline]
    pub fn dot(&self, other: &BitVector) -> bool {
        (self.bits & other.bits).count_ones() & 1 == 1
    }

    /// Number of coordinates where both vectors are one, as an integer.
    #[inline]
    pub fn overlap(&self, other: &BitVector) -> u32 {
        (self.bits & other.bits).count_ones()
    }

    /// Coordinates `start..start + len`.
    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len);
        BitVector::from_bits(self.bits >> start, len)
    }

    /// Splits `(a | b)` into its two halves.
    pub fn halves(&self) -> (BitVector, BitVector) {
        let m = self.len / 2;
        (self.slice(0, m), self.slice(m, m))
    }

    /// Swaps the two halves, i.e. right multiplication by the symplectic form.
    pub fn swap_halves(&self) -> BitVector {
        let (a, b) = self.halves();
        BitVector::concat(&b, &a)
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Index of the first coordinate equal to one.
    pub fn leading_index(&self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(self.bits.trailing_zeros() as usize)
        }
    }

    fn check_len(&self, other: &BitVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch { left: self.len, right: other.len });
        }
        Ok(())
    }

    /// All vectors of the given length in lexicographic order (`len <= 20`).
    pub fn all(len: usize) -> impl Iterator<Item = BitVector> {
        assert!(len <= 20, "refusing to enumerate 2^{len} vectors");
        (0u32..(1u32 << len)).map(move |k| {
            // k read with coordinate 0 as its most significant bit
            let mut v = BitVector::zeros(len);
            for i in 0..len {
                if (k >> (len - 1 - i)) & 1 == 1 {
                    v.set(i, true);
                }
            }
            v
        })
    }
}

/// The symplectic inner product `a d^t + b c^t` of `u = (a|b)` and `v = (c|d)`.
pub fn symplectic_inner(u: &BitVector, v: &BitVector) -> Result<bool> {
    u.check_len(v)?;
    if u.len % 2 != 0 {
        return Err(Error::OddLength(u.len));
    }
    Ok(u.dot(&v.swap_halves()))
}

/// Unchecked variant used on hot paths where lengths are known to agree.
#[inline]
pub(crate) fn sinner(u: &BitVector, v: &BitVector) -> bool {
    debug_assert_eq!(u.len, v.len);
    u.dot(&v.swap_halves())
}

impl BitXor for BitVector {
    type Output = BitVector;
    fn bitxor(self, rhs: BitVector) -> BitVector {
        assert_eq!(self.len, rhs.len, "BitVector length mismatch");
        BitVector { bits: self.bits ^ rhs.bits, len: self.len }
    }
}

impl BitXorAssign for BitVector {
    fn bitxor_assign(&mut self, rhs: BitVector) {
        assert_eq!(self.len, rhs.len, "BitVector length mismatch");
        self.bits ^= rhs.bits;
    }
}

impl BitAnd for BitVector {
    type Output = BitVector;
    fn bitand(self, rhs: BitVector) -> BitVector {
        assert_eq!(self.len, rhs.len, "BitVector length mismatch");
        BitVector { bits: self.bits & rhs.bits, len: self.len }
    }
}

impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        // coordinate 0 is the most significant position
        self.len.cmp(&other.len).then_with(|| self.bits.reverse_bits().cmp(&other.bits.reverse_bits()))
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses a string of `0`/`1` characters; `|`, `_` and spaces are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut values = Vec::new();
        for ch in s.chars() {
            match ch {
                '0' => values.push(false),
                '1' => values.push(true),
                '|' | '_' | ' ' => {}
                other => return Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            }
        }
        if values.len() > MAX_BITS {
            return Err(Error::TooLong(values.len()));
        }
        Ok(BitVector::from_bools(&values))
    }
}
