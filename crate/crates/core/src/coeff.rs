//! Scalar coefficients: exact rationals by default, floating opt-in.
//!
//! Mixing the two modes is a structural error. Public operations check modes
//! up front; once a computation is known to be homogeneous, the arithmetic
//! helpers here panic on a mix (that would be an internal invariant breach,
//! not a user error).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which coefficient ring a value (or container) lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// A scalar coefficient in one of the two modes.
#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Rat(BigRational),
    F64(f64),
}

impl Coeff {
    pub fn mode(&self) -> Mode {
        match self {
            Coeff::Rat(_) => Mode::Exact,
            Coeff::F64(_) => Mode::Float,
        }
    }

    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Coeff::Rat(BigRational::zero()),
            Mode::Float => Coeff::F64(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Coeff::Rat(BigRational::one()),
            Mode::Float => Coeff::F64(1.0),
        }
    }

    pub fn from_i64(v: i64, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Coeff::Rat(BigRational::from_integer(BigInt::from(v))),
            Mode::Float => Coeff::F64(v as f64),
        }
    }

    pub fn from_ratio(num: i64, den: i64, mode: Mode) -> Self {
        assert!(den != 0, "zero denominator");
        match mode {
            Mode::Exact => Coeff::Rat(BigRational::new(BigInt::from(num), BigInt::from(den))),
            Mode::Float => Coeff::F64(num as f64 / den as f64),
        }
    }

    pub fn rat(r: BigRational) -> Self {
        Coeff::Rat(r)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rat(r) => r.is_zero(),
            Coeff::F64(x) => *x == 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coeff::Rat(r) => r.to_f64().unwrap_or_else(|| {
                // Fall back to a quotient of leading digits for huge rationals.
                let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
                let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
                n / d
            }),
            Coeff::F64(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Rat(r) => Some(r),
            Coeff::F64(_) => None,
        }
    }

    pub fn abs_f64(&self) -> f64 {
        match self {
            Coeff::Rat(r) => Coeff::Rat(r.abs()).to_f64(),
            Coeff::F64(x) => x.abs(),
        }
    }

    pub fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a + b),
            (Coeff::F64(a), Coeff::F64(b)) => Coeff::F64(a + b),
            _ => panic!("internal invariant breach: mixed coefficient modes"),
        }
    }

    pub fn sub(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a - b),
            (Coeff::F64(a), Coeff::F64(b)) => Coeff::F64(a - b),
            _ => panic!("internal invariant breach: mixed coefficient modes"),
        }
    }

    pub fn mul(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a * b),
            (Coeff::F64(a), Coeff::F64(b)) => Coeff::F64(a * b),
            _ => panic!("internal invariant breach: mixed coefficient modes"),
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Rat(a) => Coeff::Rat(-a),
            Coeff::F64(a) => Coeff::F64(-a),
        }
    }

    /// Divide by a nonzero integer.
    pub fn div_int(&self, d: i64) -> Coeff {
        assert!(d != 0, "division by zero");
        match self {
            Coeff::Rat(a) => Coeff::Rat(a / BigRational::from_integer(BigInt::from(d))),
            Coeff::F64(a) => Coeff::F64(a / d as f64),
        }
    }

    pub fn mul_int(&self, d: i64) -> Coeff {
        match self {
            Coeff::Rat(a) => Coeff::Rat(a * BigRational::from_integer(BigInt::from(d))),
            Coeff::F64(a) => Coeff::F64(a * d as f64),
        }
    }
}

/// Check that two modes agree, as a structured error.
pub fn ensure_same_mode(a: Mode, b: Mode) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ModeMismatch)
    }
}

/// Generalized binomial coefficient C(gamma, k) for rational gamma, exact.
pub fn binomial_rational(gamma: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        let factor = gamma - BigRational::from_integer(BigInt::from(i));
        acc = acc * factor / BigRational::from_integer(BigInt::from(i as i64 + 1));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_half() {
        // C(1/2, 2) = (1/2)(-1/2)/2 = -1/8  [TRIVIAL]
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(
            binomial_rational(&half, 2),
            BigRational::new(BigInt::from(-1), BigInt::from(8))
        );
    }

    #[test]
    fn binomial_integer_exponent() {
        // C(5, 3) = 10  [TRIVIAL]
        let five = BigRational::from_integer(BigInt::from(5));
        assert_eq!(
            binomial_rational(&five, 3),
            BigRational::from_integer(BigInt::from(10))
        );
    }

    #[test]
    fn mode_checks() {
        assert!(ensure_same_mode(Mode::Exact, Mode::Exact).is_ok());
        assert!(ensure_same_mode(Mode::Exact, Mode::Float).is_err());
    }
}
