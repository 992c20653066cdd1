//! Exact arithmetic in the field `Q(q)` of rational functions in the deformation parameter.
//!
//! A [`QScalar`] is always stored fully reduced: numerator and denominator are coprime in
//! `Q[q]`, their integer contents are coprime, and the denominator has a positive leading
//! coefficient. Two scalars are equal as rational functions iff they are structurally equal.

mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use poly::IntPoly;

use crate::error::{QError, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ScalarRepr", into = "ScalarRepr")]
pub struct QScalar {
    num: IntPoly,
    den: IntPoly,
}

impl QScalar {
    /// Builds `num / den` and reduces it to canonical form.
    pub fn from_parts(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(QError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return QScalar::zero();
        }
        let (mut num, mut den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let g = num.primitive_gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.div_exact(&g).expect("gcd divides numerator"),
                    den.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        let mut c = num.content().gcd(&den.content());
        if den.leading_coeff().is_some_and(|lc| lc.is_negative()) {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        QScalar { num, den }
    }

    pub fn zero() -> Self {
        QScalar {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::q_power(1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        QScalar {
            num: IntPoly::constant(n.into()),
            den: IntPoly::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::reduce(
            IntPoly::constant(r.numer().clone()),
            IntPoly::constant(r.denom().clone()),
        )
    }

    /// Integer-coefficient polynomial in `q`, dense little-endian.
    pub fn from_poly_coeffs(coeffs: &[i64]) -> Self {
        QScalar {
            num: IntPoly::from_dense(coeffs.iter().copied()),
            den: IntPoly::one(),
        }
    }

    pub fn from_poly(p: IntPoly) -> Self {
        QScalar {
            num: p,
            den: IntPoly::one(),
        }
    }

    /// `q^k` for any integer `k`; negative powers live in the denominator.
    pub fn q_power(k: i64) -> Self {
        let mono = IntPoly::monomial(BigInt::one(), k.unsigned_abs() as u32);
        if k >= 0 {
            QScalar {
                num: mono,
                den: IntPoly::one(),
            }
        } else {
            QScalar {
                num: IntPoly::one(),
                den: mono,
            }
        }
    }

    /// The q-integer `(1 - q^(2n)) / (1 - q^2)`, defined for every integer `n`.
    pub fn q_int(n: i64) -> Self {
        if n >= 0 {
            // 1 + q^2 + ... + q^(2n-2)
            let coeffs = (0..n).map(|k| (2 * k as u32, BigInt::one()));
            let mut p = IntPoly::zero();
            for (d, c) in coeffs {
                p = p.add(&IntPoly::monomial(c, d));
            }
            QScalar::from_poly(p)
        } else {
            // [-m] = -q^(-2m) [m]
            -(Self::q_power(2 * n) * Self::q_int(-n))
        }
    }

    pub fn numer(&self) -> &IntPoly {
        &self.num
    }

    pub fn denom(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// `Some(r)` when the scalar does not depend on `q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(BigRational::new(n, d))
    }

    /// `Some(k)` when the scalar is exactly `q^k`.
    pub fn as_q_power(&self) -> Option<i64> {
        let single = |p: &IntPoly| -> Option<i64> {
            let (d, c) = p.terms().next()?;
            (p.num_terms() == 1 && c.is_one()).then_some(d as i64)
        };
        Some(single(&self.num)? - single(&self.den)?)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(QError::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &QScalar) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = QScalar::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact value at `q = q0`.
    pub fn eval_at(&self, q0: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(QError::PoleAtPoint { point: q0.clone() });
        }
        Ok(self.num.eval(q0) / d)
    }

    /// Limit as `q -> 1`. Removable singularities are already cancelled by reduction,
    /// so a vanishing denominator at 1 is a genuine pole.
    pub fn limit_at_one(&self) -> Result<BigRational> {
        self.eval_at(&BigRational::one())
            .map_err(|_| QError::PoleAtOne { monomial: None })
    }
}

impl Default for QScalar {
    fn default() -> Self {
        QScalar::zero()
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QScalar({self})")
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::shell::print::scalar_text(self))
    }
}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        QScalar::from_int(n)
    }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return QScalar {
                    num: self.num.add(&rhs.num),
                    den: IntPoly::one(),
                };
            }
            return QScalar::reduce(self.num.add(&rhs.num), self.den.clone());
        }
        QScalar::reduce(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        if self.is_zero() || rhs.is_zero() {
            return QScalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return QScalar {
                num: self.num.mul(&rhs.num),
                den: IntPoly::one(),
            };
        }
        QScalar::reduce(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: QScalar) -> QScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: &QScalar) -> QScalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

/// JSON shape: `{"num": ["c0", ...], "den": ["d0", ...]}`, little-endian, decimal strings.
#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    num: Vec<String>,
    den: Vec<String>,
}

impl From<QScalar> for ScalarRepr {
    fn from(s: QScalar) -> Self {
        let dense = |p: &IntPoly| p.to_dense().iter().map(|c| c.to_string()).collect();
        ScalarRepr {
            num: dense(&s.num),
            den: dense(&s.den),
        }
    }
}

impl TryFrom<ScalarRepr> for QScalar {
    type Error = String;
    fn try_from(r: ScalarRepr) -> std::result::Result<Self, String> {
        let parse = |v: &[String]| -> std::result::Result<IntPoly, String> {
            let coeffs = v
                .iter()
                .map(|s| {
                    s.parse::<BigInt>()
                        .map_err(|e| format!("bad integer {s:?}: {e}"))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok(IntPoly::from_dense(coeffs))
        };
        QScalar::from_parts(parse(&r.num)?, parse(&r.den)?).map_err(|e| e.to_string())
    }
}
