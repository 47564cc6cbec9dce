//! Exact Clebsch–Gordan coefficients.
//!
//! Coefficients use the Condon–Shortley phase convention and are evaluated
//! with Racah's closed-form sum in arbitrary-precision rational arithmetic.
//! Only the final square root happens in floating point.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An integer or half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(v: i32) -> Self {
        HalfInt { twice: 2 * v }
    }

    pub const fn twice(self) -> i32 {
        self.twice
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Allowed projections `j, j-1, ..., -j` in descending order.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let j = self.twice;
        (0..=j.max(-1)).map(move |k| HalfInt::from_twice(j - 2 * k))
    }

    /// Number of projections `2j + 1`.
    pub fn multiplicity(self) -> usize {
        (self.twice + 1).max(0) as usize
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `"3"`, `"5/2"`, `"2.5"` or `"-1/2"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidLabel(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "2" => Ok(HalfInt::from_twice(num)),
                "1" => Ok(HalfInt::from_int(num)),
                _ => Err(bad()),
            };
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        let twice = 2.0 * v;
        if (twice - twice.round()).abs() > 1e-12 {
            return Err(bad());
        }
        Ok(HalfInt::from_twice(twice.round() as i32))
    }
}

/// The coupling `<j1 m1; j2 m2 | J M>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CgQuery {
    pub j1: HalfInt,
    pub m1: HalfInt,
    pub j2: HalfInt,
    pub m2: HalfInt,
    pub j: HalfInt,
    pub m: HalfInt,
}

impl CgQuery {
    pub fn new(j1: HalfInt, m1: HalfInt, j2: HalfInt, m2: HalfInt, j: HalfInt, m: HalfInt) -> Self {
        CgQuery { j1, m1, j2, m2, j, m }
    }

    fn validate(&self) -> Result<()> {
        for (j, m) in [(self.j1, self.m1), (self.j2, self.m2), (self.j, self.m)] {
            if j.twice < 0 || m.twice.abs() > j.twice || (j.twice - m.twice).rem_euclid(2) != 0 {
                return Err(Error::InvalidLabel(format!("(j={j}, m={m})")));
            }
        }
        if (self.j1.twice + self.j2.twice + self.j.twice) % 2 != 0 {
            return Err(Error::InvalidLabel(format!(
                "j1 + j2 + J = {} + {} + {} is not an integer",
                self.j1, self.j2, self.j
            )));
        }
        Ok(())
    }

    fn selection_rules_hold(&self) -> bool {
        let (a, b, c) = (self.j1.twice, self.j2.twice, self.j.twice);
        self.m1.twice + self.m2.twice == self.m.twice && c >= (a - b).abs() && c <= a + b
    }
}

/// An exact coefficient `sign * sqrt(square)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactCg {
    pub negative: bool,
    pub square: BigRational,
}

impl ExactCg {
    pub fn zero() -> Self {
        ExactCg {
            negative: false,
            square: BigRational::zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        let mag = self.square.to_f64().unwrap_or(f64::NAN).sqrt();
        if self.negative {
            -mag
        } else {
            mag
        }
    }
}

fn factorial(n: i32) -> BigUint {
    debug_assert!(n >= 0);
    (1..=n as u32).fold(BigUint::one(), |acc, k| acc * k)
}

/// Exact coefficient via Racah's formula.
pub fn clebsch_gordan_exact(q: &CgQuery) -> Result<ExactCg> {
    q.validate()?;
    if !q.selection_rules_hold() {
        return Ok(ExactCg::zero());
    }
    // integer arguments, all halved from twice-values
    let h = |t: i32| t / 2;
    let (j1, j2, j) = (q.j1.twice, q.j2.twice, q.j.twice);
    let (m1, m2, m) = (q.m1.twice, q.m2.twice, q.m.twice);

    let a = h(j + j1 - j2);
    let b = h(j - j1 + j2);
    let c = h(j1 + j2 - j);
    let d = h(j1 + j2 + j) + 1;

    let num = BigUint::from((j + 1) as u32)
        * factorial(a)
        * factorial(b)
        * factorial(c)
        * factorial(h(j + m))
        * factorial(h(j - m))
        * factorial(h(j1 - m1))
        * factorial(h(j1 + m1))
        * factorial(h(j2 - m2))
        * factorial(h(j2 + m2));
    let den = factorial(d);

    // sum_k (-1)^k / [k! (j1+j2-J-k)! (j1-m1-k)! (j2+m2-k)! (J-j2+m1+k)! (J-j1-m2+k)!]
    let kmin = 0.max(h(j2 - j - m1)).max(h(j1 - j + m2));
    let kmax = c.min(h(j1 - m1)).min(h(j2 + m2));
    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let den_k = factorial(k)
            * factorial(c - k)
            * factorial(h(j1 - m1) - k)
            * factorial(h(j2 + m2) - k)
            * factorial(h(j - j2 + m1) + k)
            * factorial(h(j - j1 - m2) + k);
        let term = BigRational::new(BigInt::one(), BigInt::from(den_k));
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return Ok(ExactCg::zero());
    }
    let negative = sum.is_negative();
    let square = BigRational::new(BigInt::from(num), BigInt::from(den)) * &sum * &sum;
    Ok(ExactCg { negative, square })
}

/// `<j1 m1; j2 m2 | J M>` as a float; exactly zero when selection rules fail.
pub fn clebsch_gordan(q: &CgQuery) -> Result<f64> {
    clebsch_gordan_exact(q).map(|c| c.to_f64())
}

/// Convenience wrapper taking twice-values `(2j1, 2m1, 2j2, 2m2, 2J, 2M)`.
pub fn cg_twice(j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> Result<f64> {
    clebsch_gordan(&CgQuery::new(
        HalfInt::from_twice(j1),
        HalfInt::from_twice(m1),
        HalfInt::from_twice(j2),
        HalfInt::from_twice(m2),
        HalfInt::from_twice(j),
        HalfInt::from_twice(m),
    ))
}

/// `<S S; S -S | lambda 0>`, the single coefficient fixing the spin-S `tau_lambda`.
pub fn cg_hw_zero(spin: HalfInt, lambda: u32) -> Result<f64> {
    if spin.twice < 0 || lambda as i32 > spin.twice {
        return Err(Error::LabelOutOfRange {
            label: lambda.to_string(),
            model: format!("spin {spin}"),
        });
    }
    clebsch_gordan(&CgQuery::new(
        spin,
        spin,
        spin,
        -spin,
        HalfInt::from_int(lambda as i32),
        HalfInt::ZERO,
    ))
}
