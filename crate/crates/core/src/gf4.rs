//! Arithmetic in GF(4) = {0, 1, ω, ω²} with ω² = ω + 1.
//!
//! Elements are stored as 2-bit codes `0 → 0`, `1 → 1`, `ω → 2`, `ω² → 3`.
//! Bit 0 is the coefficient of 1 and bit 1 the coefficient of ω, so field
//! addition is XOR of the codes. Numeric order on the codes (0 < 1 < ω < ω²)
//! is the element order used for every lexicographic comparison in the crate.
//!
//! # Packed vectors
//!
//! A coordinate vector `(x₀, …, x_r)` with `r ≤ 4` packs into a `u16` with
//! coordinate `xᵢ` in bits `2(r−i)..2(r−i)+2`, i.e. `x₀` is the most significant
//! pair. Comparing packed codes numerically is therefore the same as comparing
//! the vectors lexicographically. Example for `r = 4`: `(0, 1, ω², 0, 0)` is
//! `0b00_01_11_00_00 = 0x70`.
//!
//! ```text
//! + | 0  1  ω  ω²        × | 0  1  ω  ω²
//! --+------------        --+------------
//! 0 | 0  1  ω  ω²        0 | 0  0  0  0
//! 1 | 1  0  ω² ω         1 | 0  1  ω  ω²
//! ω | ω  ω² 0  1         ω | 0  ω  ω² 1
//! ω²| ω² ω  1  0         ω²| 0  ω² 1  ω
//! ```

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

const MUL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
const INV: [u8; 4] = [0, 1, 3, 2];
const CONJ: [u8; 4] = [0, 1, 3, 2];

/// An element of GF(4).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Gf4(u8);

impl Gf4 {
    pub const ZERO: Gf4 = Gf4(0);
    pub const ONE: Gf4 = Gf4(1);
    /// The primitive element ω.
    pub const OMEGA: Gf4 = Gf4(2);
    /// ω² = ω + 1.
    pub const OMEGA2: Gf4 = Gf4(3);

    /// All four elements in canonical order.
    pub const ELEMENTS: [Gf4; 4] = [Gf4(0), Gf4(1), Gf4(2), Gf4(3)];
    /// The multiplicative group {1, ω, ω²}.
    pub const NONZERO: [Gf4; 3] = [Gf4(1), Gf4(2), Gf4(3)];

    /// Builds an element from its 2-bit code.
    pub fn from_code(code: u8) -> Result<Gf4> {
        if code < 4 {
            Ok(Gf4(code))
        } else {
            Err(Error::Domain(format!("{code} is not a GF(4) code")))
        }
    }

    #[inline]
    pub(crate) const fn from_bits(code: u8) -> Gf4 {
        Gf4(code & 3)
    }

    #[inline]
    pub const fn code(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub const fn add(self, other: Gf4) -> Gf4 {
        Gf4(self.0 ^ other.0)
    }

    #[inline]
    pub const fn mul(self, other: Gf4) -> Gf4 {
        Gf4(MUL[self.0 as usize][other.0 as usize])
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(self) -> Result<Gf4> {
        if self.0 == 0 {
            Err(Error::Domain("zero has no inverse in GF(4)".into()))
        } else {
            Ok(Gf4(INV[self.0 as usize]))
        }
    }

    /// Inverse of a value already known to be nonzero.
    #[inline]
    pub(crate) const fn inv_nonzero(self) -> Gf4 {
        Gf4(INV[self.0 as usize])
    }

    /// Frobenius conjugation `a ↦ a²`.
    #[inline]
    pub const fn conj(self) -> Gf4 {
        Gf4(CONJ[self.0 as usize])
    }

    /// Text symbol: `0`, `1`, `w` (ω) or `W` (ω²).
    pub const fn symbol(self) -> char {
        match self.0 {
            0 => '0',
            1 => '1',
            2 => 'w',
            _ => 'W',
        }
    }

    pub fn from_symbol(c: char) -> Result<Gf4> {
        match c {
            '0' => Ok(Gf4::ZERO),
            '1' => Ok(Gf4::ONE),
            'w' => Ok(Gf4::OMEGA),
            'W' => Ok(Gf4::OMEGA2),
            other => Err(Error::Parse(format!("invalid GF(4) symbol {other:?}"))),
        }
    }
}

pub fn gf4_add(a: Gf4, b: Gf4) -> Gf4 {
    a.add(b)
}

pub fn gf4_mul(a: Gf4, b: Gf4) -> Gf4 {
    a.mul(b)
}

pub fn gf4_inv(a: Gf4) -> Result<Gf4> {
    a.inv()
}

pub fn gf4_conj(a: Gf4) -> Gf4 {
    a.conj()
}

impl Add for Gf4 {
    type Output = Gf4;
    #[inline]
    fn add(self, rhs: Gf4) -> Gf4 {
        Gf4::add(self, rhs)
    }
}

impl AddAssign for Gf4 {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: Gf4) {
        self.0 ^= rhs.0;
    }
}

impl Mul for Gf4 {
    type Output = Gf4;
    #[inline]
    fn mul(self, rhs: Gf4) -> Gf4 {
        Gf4::mul(self, rhs)
    }
}

impl MulAssign for Gf4 {
    #[inline]
    fn mul_assign(&mut self, rhs: Gf4) {
        *self = Gf4::mul(*self, rhs);
    }
}

impl fmt::Debug for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl fmt::Display for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A coordinate vector over GF(4).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Gf4Vector(Vec<Gf4>);

impl Gf4Vector {
    pub fn new(coords: Vec<Gf4>) -> Self {
        Gf4Vector(coords)
    }

    pub fn zeros(len: usize) -> Self {
        Gf4Vector(vec![Gf4::ZERO; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Gf4] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: Gf4) -> Gf4Vector {
        Gf4Vector(self.0.iter().map(|&x| x * c).collect())
    }

    pub fn conj(&self) -> Gf4Vector {
        Gf4Vector(self.0.iter().map(|x| x.conj()).collect())
    }

    /// Componentwise sum; lengths must agree.
    pub fn try_add(&self, other: &Gf4Vector) -> Result<Gf4Vector> {
        check_len(self, other)?;
        Ok(Gf4Vector(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect()))
    }

    /// Bilinear form `Σ uᵢ vᵢ` (hyperplane incidence).
    pub fn dot(&self, other: &Gf4Vector) -> Result<Gf4> {
        check_len(self, other)?;
        Ok(self.0.iter().zip(&other.0).fold(Gf4::ZERO, |acc, (&a, &b)| acc + a * b))
    }

    /// Packs into the 2-bit-per-coordinate code described in the module docs.
    pub fn pack(&self) -> u16 {
        pack(&self.0)
    }

    pub fn unpack(code: u16, len: usize) -> Gf4Vector {
        Gf4Vector(unpack(code, len))
    }
}

impl From<Vec<Gf4>> for Gf4Vector {
    fn from(v: Vec<Gf4>) -> Self {
        Gf4Vector(v)
    }
}

impl std::ops::Index<usize> for Gf4Vector {
    type Output = Gf4;
    fn index(&self, i: usize) -> &Gf4 {
        &self.0[i]
    }
}

impl fmt::Debug for Gf4Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl fmt::Display for Gf4Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{}", c.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Gf4Vector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars().map(Gf4::from_symbol).collect::<Result<Vec<_>>>().map(Gf4Vector)
    }
}

fn check_len(u: &Gf4Vector, v: &Gf4Vector) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::Contract(format!(
            "vector length mismatch: {} vs {}",
            u.len(),
            v.len()
        )));
    }
    Ok(())
}

/// Hermitian form `Σ uᵢ · conj(vᵢ)`.
pub fn hermitian_dot(u: &Gf4Vector, v: &Gf4Vector) -> Result<Gf4> {
    check_len(u, v)?;
    Ok(u.0.iter().zip(&v.0).fold(Gf4::ZERO, |acc, (&a, &b)| acc + a * b.conj()))
}

pub(crate) fn pack(coords: &[Gf4]) -> u16 {
    coords.iter().fold(0u16, |acc, c| (acc << 2) | c.code() as u16)
}

pub(crate) fn unpack(code: u16, len: usize) -> Vec<Gf4> {
    (0..len).map(|i| packed_coord(code, len, i)).collect()
}

#[inline]
pub(crate) fn packed_coord(code: u16, len: usize, i: usize) -> Gf4 {
    Gf4::from_bits((code >> (2 * (len - 1 - i))) as u8)
}

const LO: u16 = 0x5555;
const HI: u16 = 0xAAAA;

/// Multiplies every coordinate of a packed vector by ω.
#[inline]
pub(crate) const fn packed_mul_omega(v: u16) -> u16 {
    // (a + bω)ω = b + (a + b)ω
    ((v & HI) >> 1) | (((v & LO) << 1) ^ (v & HI))
}

#[inline]
pub(crate) const fn packed_scale(v: u16, c: Gf4) -> u16 {
    match c.code() {
        0 => 0,
        1 => v,
        2 => packed_mul_omega(v),
        _ => packed_mul_omega(packed_mul_omega(v)),
    }
}

/// Componentwise conjugation of a packed vector.
#[inline]
pub(crate) const fn packed_conj(v: u16) -> u16 {
    // conj(a + bω) = (a + b) + bω
    v ^ ((v & HI) >> 1)
}
