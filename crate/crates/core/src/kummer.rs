//! Kummer's confluent hypergeometric function M(a, b, z) and the repeated
//! integrals of the complementary error function.
//!
//! M is summed from its Taylor series
//!
//! ```text
//! M(a, b, z) = Σ (a)_n / (b)_n · zⁿ / n!
//! ```
//!
//! in double-double arithmetic. Negative arguments are always mapped through
//! the Kummer transformation `M(a, b, z) = e^z M(b − a, b, −z)` so the series
//! is only ever summed at a non-negative argument. For the parameter families
//! used by the similarity solutions (`a = ±α/2 + {0, ½, 1, 3/2}`,
//! `b ∈ {½, 3/2}`) this leaves a series of positive terms, and the result is
//! close to correctly rounded.

use crate::error::{Error, Result};

/// Relative size below which a series term counts as negligible.
const TERM_CUTOFF: f64 = 1e-17;
/// Consecutive negligible terms required before the series is truncated.
const NEGLIGIBLE_RUN: usize = 3;
const MAX_TERMS: usize = 500;
/// e^z is not representable as a normal double below this.
const MIN_EXP_ARG: f64 = -708.0;

/// Arguments of M(a, b, z). `b` must not be a non-positive integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerParams {
    pub a: f64,
    pub b: f64,
    pub z: f64,
}

impl KummerParams {
    pub fn new(a: f64, b: f64, z: f64) -> Result<Self> {
        check_params(a, b, z)?;
        Ok(Self { a, b, z })
    }

    pub fn eval(&self) -> Result<f64> {
        kummer_m(self.a, self.b, self.z)
    }

    pub fn derivative(&self) -> Result<f64> {
        kummer_m_derivative(self.a, self.b, self.z)
    }
}

fn check_params(a: f64, b: f64, z: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "M({a}, {b}, {z}) needs finite arguments"
        )));
    }
    if b <= 0.0 && b == b.floor() {
        return Err(Error::InvalidParameter(format!(
            "b = {b} is a non-positive integer"
        )));
    }
    Ok(())
}

/// M(a, b, z).
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<f64> {
    check_params(a, b, z)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    let value = if z > 0.0 {
        series(Dd::from(a), b, z).to_f64()
    } else {
        if z < MIN_EXP_ARG {
            return Err(Error::Overflow(format!("e^{z} is not representable")));
        }
        exp_dd(z).mul(series(Dd::sum(b, -a), b, -z)).to_f64()
    };
    if !value.is_finite() {
        return Err(Error::Overflow(format!("M({a}, {b}, {z}) is not representable")));
    }
    Ok(value)
}

/// dM/dz = (a/b) M(a + 1, b + 1, z).
pub fn kummer_m_derivative(a: f64, b: f64, z: f64) -> Result<f64> {
    check_params(a, b, z)?;
    Ok(a / b * kummer_m(a + 1.0, b + 1.0, z)?)
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Γ(x) for real x.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// Forward recurrence is used up to this argument; beyond it the wanted
/// solution is the recessive one and Miller's backward scheme takes over.
const INERFC_FORWARD_MAX: f64 = 1.0;
const INERFC_BACKWARD_EXTRA: usize = 200;

/// Repeated integral of erfc: `i⁰erfc = erfc`, `iⁿerfc(z) = ∫_z^∞ iⁿ⁻¹erfc(t) dt`.
///
/// Uses `n·iⁿerfc(z) = −z·iⁿ⁻¹erfc(z) + ½·iⁿ⁻²erfc(z)` with
/// `i⁻¹erfc(z) = 2e^{−z²}/√π`. The recurrence is run forward for `z ≤ 1`; for
/// larger `z` it is run backward from a high order and normalised by
/// `erfc(z)`.
pub fn inerfc(n: i32, z: f64) -> Result<f64> {
    if n < 0 {
        return Err(Error::Domain(format!("inerfc order n = {n} must be >= 0")));
    }
    if !z.is_finite() {
        return Err(Error::Domain("inerfc argument must be finite".into()));
    }
    let n = n as usize;
    let i0 = erfc(z);
    if n == 0 {
        return Ok(i0);
    }
    if z <= INERFC_FORWARD_MAX {
        let mut prev = std::f64::consts::FRAC_2_SQRT_PI * (-z * z).exp();
        let mut cur = i0;
        for k in 1..=n {
            let next = (-z * cur + 0.5 * prev) / k as f64;
            prev = cur;
            cur = next;
        }
        return Ok(cur);
    }
    if i0 == 0.0 {
        return Ok(0.0);
    }

    // i^{k-2} = 2 (k i^k + z i^{k-1}), started from i^{N+1} = 0, i^N = 1.
    let top = n + INERFC_BACKWARD_EXTRA;
    let mut upper = 0.0_f64;
    let mut lower = 1.0_f64;
    let mut at_n = if top == n { lower } else { 0.0 };
    let mut k = top + 1;
    while k >= 2 {
        let next = 2.0 * (k as f64 * upper + z * lower);
        upper = lower;
        lower = next;
        k -= 1;
        // `lower` now holds i^{k-1}
        if k - 1 == n {
            at_n = lower;
        }
        if lower.abs() > 1e250 {
            upper *= 1e-250;
            lower *= 1e-250;
            at_n *= 1e-250;
        }
    }
    Ok(at_n * i0 / lower)
}

fn series(a: Dd, b: f64, x: f64) -> Dd {
    debug_assert!(x >= 0.0);
    let mut sum = Dd::from(1.0);
    let mut term = Dd::from(1.0);
    let mut negligible = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let num = a.add(Dd::from(nf)).mul_f64(x);
        let den = Dd::sum(b, nf).mul_f64(nf + 1.0);
        term = term.mul(num).div(den);
        sum = sum.add(term);
        if term.hi.abs() < TERM_CUTOFF * sum.hi.abs() {
            negligible += 1;
            if negligible == NEGLIGIBLE_RUN {
                break;
            }
        } else {
            negligible = 0;
        }
        if !sum.hi.is_finite() {
            break;
        }
    }
    sum
}

/// e^x as a double-double.
fn exp_dd(x: f64) -> Dd {
    const LN2: Dd = Dd {
        hi: std::f64::consts::LN_2,
        lo: 2.319_046_813_846_299_6e-17,
    };
    let k = (x / LN2.hi).round();
    let r = Dd::from(x).sub(LN2.mul_f64(k));
    // |r| <= ln2/2; 27 Taylor terms are far below double-double resolution.
    let mut term = Dd::from(1.0);
    let mut sum = Dd::from(1.0);
    for n in 1..28 {
        term = term.mul(r).div_f64(n as f64);
        sum = sum.add(term);
    }
    let scale = 2f64.powi(k as i32);
    Dd {
        hi: sum.hi * scale,
        lo: sum.lo * scale,
    }
}

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl From<f64> for Dd {
    fn from(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    /// Exact a + b.
    fn sum(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        Dd { hi, lo }
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(Dd {
            hi: -o.hi,
            lo: -o.lo,
        })
    }

    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = fast_two_sum(p, e);
        Dd { hi, lo }
    }

    fn mul_f64(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = fast_two_sum(p, e + self.lo * b);
        Dd { hi, lo }
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = fast_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from(q3))
    }

    fn div_f64(self, b: f64) -> Dd {
        self.div(Dd::from(b))
    }
}
