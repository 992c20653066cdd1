//! Sparse univariate polynomials in `q` with arbitrary-precision integer coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial `sum c_d q^d` stored as a sparse map from degree to a nonzero coefficient.
///
/// The zero polynomial is the empty map; its degree is `None`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: BTreeMap<u32, BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::monomial(c, 0)
    }

    /// `c * q^degree`
    pub fn monomial(c: BigInt, degree: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(degree, c);
        }
        IntPoly { coeffs }
    }

    /// Builds a polynomial from dense little-endian coefficients.
    pub fn from_dense<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let coeffs = coeffs
            .into_iter()
            .enumerate()
            .map(|(d, c)| (d as u32, c.into()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        IntPoly { coeffs }
    }

    /// Dense little-endian coefficients; empty for the zero polynomial.
    pub fn to_dense(&self) -> Vec<BigInt> {
        match self.degree() {
            None => Vec::new(),
            Some(deg) => (0..=deg).map(|d| self.coeff(d)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn low_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, degree: u32) -> BigInt {
        self.coeffs.get(&degree).cloned().unwrap_or_default()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.values().next_back()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &BigInt)> + '_ {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Returns `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.degree() {
            None => Some(BigInt::zero()),
            Some(0) => Some(self.coeff(0)),
            _ => None,
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut coeffs = self.coeffs.clone();
        for (d, c) in &other.coeffs {
            let entry = coeffs.entry(*d).or_default();
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(d);
            }
        }
        IntPoly { coeffs }
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut coeffs: BTreeMap<u32, BigInt> = BTreeMap::new();
        for (d1, c1) in &self.coeffs {
            for (d2, c2) in &other.coeffs {
                *coeffs.entry(d1 + d2).or_default() += c1 * c2;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        IntPoly { coeffs }
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        if k.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, c * k)).collect(),
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift_up(&self, k: u32) -> IntPoly {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| (d + k, c.clone()))
                .collect(),
        }
    }

    /// Divides by `q^k`; the caller guarantees `k <= low_degree`.
    fn shift_down(&self, k: u32) -> IntPoly {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| (d - k, c.clone()))
                .collect(),
        }
    }

    /// Nonnegative gcd of all coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Exact division of every coefficient by `k`.
    pub fn div_scalar_exact(&self, k: &BigInt) -> IntPoly {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, c)| {
                    debug_assert!((c % k).is_zero());
                    (*d, c / k)
                })
                .collect(),
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading_coeff().is_some_and(|lc| lc.is_negative()) {
            c = -c;
        }
        self.div_scalar_exact(&c)
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("pseudo_rem by zero polynomial");
        let lb = b.leading_coeff().unwrap().clone();
        let mut r = self.clone();
        let mut steps = match r.degree() {
            Some(dr) if dr >= db => dr - db + 1,
            _ => return r,
        };
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading_coeff().unwrap().clone();
            r = r.scale(&lb).sub(&b.shift_up(dr - db).scale(&lr));
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&num_traits::pow(lb, steps as usize));
        }
        r
    }

    /// Quotient `self / b` in `Z[q]`, or `None` when the division is not exact.
    pub fn div_exact(&self, b: &IntPoly) -> Option<IntPoly> {
        let db = b.degree()?;
        let lb = b.leading_coeff().unwrap();
        let mut r = self.clone();
        let mut quot = IntPoly::zero();
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let (t, rem) = r.leading_coeff().unwrap().div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            let term = IntPoly::monomial(t, dr - db);
            r = r.sub(&b.mul(&term));
            quot = quot.add(&term);
        }
        Some(quot)
    }

    /// Primitive gcd (positive leading coefficient) of two polynomials, ignoring integer content.
    ///
    /// Powers of `q` are split off first, the rest runs a primitive pseudo-remainder sequence.
    pub fn primitive_gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let la = self.low_degree().unwrap();
        let lb = other.low_degree().unwrap();
        let shift = la.min(lb);
        let mut a = self.shift_down(la).primitive_part();
        let mut b = other.shift_down(lb).primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        let g = loop {
            if b.degree() == Some(0) {
                break IntPoly::one();
            }
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                break b;
            }
            a = b;
            b = r.primitive_part();
        };
        g.shift_up(shift)
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        // Horner over the sparse degrees, highest first.
        let mut acc = BigRational::zero();
        let mut prev: Option<u32> = None;
        for (d, c) in self.coeffs.iter().rev() {
            if let Some(p) = prev {
                acc *= num_traits::pow(at.clone(), (p - d) as usize);
            }
            acc += BigRational::from_integer(c.clone());
            prev = Some(*d);
        }
        if let Some(p) = prev {
            acc *= num_traits::pow(at.clone(), p as usize);
        }
        acc
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

/// Ascending-degree text, e.g. `1 - 3 * q^2`.
impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (d, c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            match (*d, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{mag} * q")?,
                (d, true) => write!(f, "q^{d}")?,
                (d, false) => write!(f, "{mag} * q^{d}")?,
            }
        }
        Ok(())
    }
}
