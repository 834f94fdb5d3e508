//! Decimal floating point with a fixed number of significant digits:
//! `mant · 10^exp`, mantissa rounded half away from zero after every
//! operation.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigDec {
    mant: BigInt,
    exp: i64,
}

fn pow10(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), n as usize)
}

fn digits(m: &BigInt) -> u32 {
    if m.is_zero() {
        0
    } else {
        m.magnitude().to_string().len() as u32
    }
}

/// Divides by 10^n, rounding half away from zero.
fn shift_down(m: &BigInt, n: u32) -> BigInt {
    let d = pow10(n);
    let (q, r) = (m / &d, m % &d);
    if r.abs() * 2u32 >= d {
        q + if m.sign() == Sign::Minus { -1 } else { 1 }
    } else {
        q
    }
}

impl BigDec {
    pub fn zero() -> Self {
        BigDec {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "BigDec::from_f64 needs a finite value");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        let m = BigInt::from(m) * sign;
        if e >= 0 {
            BigDec {
                mant: m * num_traits::pow(BigInt::from(2u32), e as usize),
                exp: 0,
            }
        } else {
            // m·2^e = m·5^{−e}·10^e
            BigDec {
                mant: m * num_traits::pow(BigInt::from(5u32), (-e) as usize),
                exp: e,
            }
        }
    }

    pub fn from_i64(n: i64) -> Self {
        BigDec {
            mant: BigInt::from(n),
            exp: 0,
        }
    }

    /// Nearest double.
    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        format!("{}e{}", self.mant, self.exp)
            .parse()
            .expect("decimal literal")
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn abs(&self) -> Self {
        BigDec {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Rounds to `p` significant digits.
    pub fn rounded(mut self, p: u32) -> Self {
        let d = digits(&self.mant);
        if d > p {
            self.mant = shift_down(&self.mant, d - p);
            self.exp += (d - p) as i64;
        }
        self
    }

    pub fn add(&self, other: &Self, p: u32) -> Self {
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.exp - lo.exp) as u32;
        BigDec {
            mant: &hi.mant * pow10(shift) + &lo.mant,
            exp: lo.exp,
        }
        .rounded(p)
    }

    pub fn mul(&self, other: &Self, p: u32) -> Self {
        BigDec {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
        .rounded(p)
    }

    pub fn div(&self, other: &Self, p: u32) -> Self {
        assert!(!other.is_zero(), "BigDec division by zero");
        let scale = (p + 2 + digits(&other.mant)).saturating_sub(digits(&self.mant));
        BigDec {
            mant: &self.mant * pow10(scale) / &other.mant,
            exp: self.exp - other.exp - scale as i64,
        }
        .rounded(p)
    }

    /// Base-10 logarithm of the magnitude, approximately.
    pub fn log10_abs(&self) -> f64 {
        if self.mant.is_zero() {
            return f64::NEG_INFINITY;
        }
        let d = digits(&self.mant);
        let lead = if d > 17 {
            shift_down(&self.mant, d - 17).abs()
        } else {
            self.mant.abs()
        };
        let shift = d.saturating_sub(17) as f64;
        lead.to_f64().expect("17 digits fit").log10() + shift + self.exp as f64
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        self.log10_abs()
            .partial_cmp(&other.log10_abs())
            .unwrap_or(Ordering::Equal)
    }
}
