//! Exact Gaussian-rational arithmetic and rational square-root bounds.
//!
//! Every value the library manipulates is a complex number with rational
//! real and imaginary parts. Magnitudes are never materialized (they are
//! generally irrational); all comparisons go through squared magnitudes,
//! which stay rational. When a rational stand-in for a magnitude is
//! unavoidable (certificate constants), the `rat_sqrt_*` helpers produce
//! exact one-sided rational bounds.
//!
//! Window audits evaluate expressions at hundreds of thousands of points,
//! so the rational backend keeps machine-word values out of the heap: a
//! reduced `i64/u64` fast path with exact promotion to `BigRational` on
//! overflow. Promotion is value-canonical (big storage is used only for
//! values that do not fit), so equality and hashing stay structural.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Parse a canonical rational string: `"p"` or `"p/q"` with `q != 0`.
pub fn rat_from_str(s: &str) -> Result<BigRational> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.parse::<BigInt>()
            .map_err(|_| Error::parse("", format!("invalid integer `{t}`")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s.trim())?)),
        Some((num, den)) => {
            let den = parse_int(den.trim())?;
            if den.is_zero() {
                return Err(Error::parse("", "rational with zero denominator"));
            }
            Ok(BigRational::new(parse_int(num.trim())?, den))
        }
    }
}

/// Canonical lowest-terms rendering: `"p"` when the denominator is 1, else `"p/q"`.
pub fn rat_to_string(r: &BigRational) -> String {
    r.to_string()
}

/// Floor of the integer square root.
pub fn int_sqrt_floor(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// Ceiling of the integer square root.
pub fn int_sqrt_ceil(n: &BigUint) -> BigUint {
    let floor = n.sqrt();
    if &(&floor * &floor) == n {
        floor
    } else {
        floor + BigUint::one()
    }
}

fn to_biguint(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}

/// Largest `u/den` with `(u/den)^2 <= r`, where `den` is `r`'s denominator
/// after scaling. A rational lower bound on `sqrt(r)`; exact when `r` is a
/// perfect square of a rational. Requires `r >= 0`.
pub fn rat_sqrt_lower(r: &BigRational) -> BigRational {
    assert!(!r.is_negative(), "rat_sqrt_lower on negative rational");
    // sqrt(p/q) = sqrt(p*q)/q
    let scaled = to_biguint(r.numer()) * to_biguint(r.denom());
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, int_sqrt_floor(&scaled)),
        r.denom().clone(),
    )
}

/// Smallest `u/den` (same scaling as [`rat_sqrt_lower`]) with `(u/den)^2 >= r`.
pub fn rat_sqrt_upper(r: &BigRational) -> BigRational {
    assert!(!r.is_negative(), "rat_sqrt_upper on negative rational");
    let scaled = to_biguint(r.numer()) * to_biguint(r.denom());
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, int_sqrt_ceil(&scaled)),
        r.denom().clone(),
    )
}

/// Exact rational square root, when one exists.
pub fn rat_sqrt_exact(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = to_biguint(r.numer());
    let den = to_biguint(r.denom());
    let sn = int_sqrt_floor(&num);
    let sd = int_sqrt_floor(&den);
    if &sn * &sn == num && &sd * &sd == den {
        Some(BigRational::new(
            BigInt::from_biguint(Sign::Plus, sn),
            BigInt::from_biguint(Sign::Plus, sd),
        ))
    } else {
        None
    }
}

/// Two-sided rational enclosure of `sqrt(r)` with width shrinking as
/// `2^-bits`. Requires `r >= 0`.
pub fn rat_sqrt_bounds(r: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!r.is_negative(), "rat_sqrt_bounds on negative rational");
    if r.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    // sqrt(p/q) = sqrt(p*q*4^bits) / (q*2^bits)
    let shift = BigUint::one() << (2 * bits as usize);
    let scaled = to_biguint(r.numer()) * to_biguint(r.denom()) * shift;
    let root = int_sqrt_floor(&scaled);
    let denom = r.denom() * (BigInt::one() << bits as usize);
    let lower = BigRational::new(
        BigInt::from_biguint(Sign::Plus, root.clone()),
        denom.clone(),
    );
    let upper = BigRational::new(
        BigInt::from_biguint(Sign::Plus, root + BigUint::one()),
        denom,
    );
    (lower, upper)
}

/// `(1 + norm)^exp` as an exact integer.
pub fn one_plus_norm_pow(norm: u64, exp: u32) -> BigInt {
    BigInt::from(norm + 1).pow(exp)
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

/// Crate-internal exact rational: reduced `i64/u64` with promotion to
/// `BigRational` strictly for values outside the machine range.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) enum Rat {
    Small { num: i64, den: u64 },
    Big(Box<BigRational>),
}

impl Rat {
    pub(crate) const ZERO: Rat = Rat::Small { num: 0, den: 1 };
    pub(crate) const ONE: Rat = Rat::Small { num: 1, den: 1 };

    pub(crate) fn from_int(n: i64) -> Rat {
        Rat::Small { num: n, den: 1 }
    }

    /// Reduce and normalize from signed 128-bit parts. `den != 0`.
    fn from_parts(num: i128, den: i128) -> Rat {
        debug_assert!(den != 0);
        let negative = (num < 0) != (den < 0);
        let n = num.unsigned_abs();
        let d = den.unsigned_abs();
        if n == 0 {
            return Rat::ZERO;
        }
        let g = gcd_u128(n, d);
        let (n, d) = (n / g, d / g);
        if d <= u64::MAX as u128 && n <= i64::MAX as u128 {
            let num = if negative { -(n as i64) } else { n as i64 };
            Rat::Small { num, den: d as u64 }
        } else {
            let mut numer = BigInt::from(n);
            if negative {
                numer = -numer;
            }
            Rat::Big(Box::new(BigRational::new(numer, BigInt::from(d))))
        }
    }

    pub(crate) fn from_big(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_u64()) {
            (Some(num), Some(den)) => Rat::Small { num, den },
            _ => Rat::Big(Box::new(r)),
        }
    }

    pub(crate) fn to_big(&self) -> BigRational {
        match self {
            Rat::Small { num, den } => BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)),
            Rat::Big(b) => (**b).clone(),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        matches!(self, Rat::Small { num: 0, .. })
    }

    pub(crate) fn add(&self, rhs: &Rat) -> Rat {
        if let (Rat::Small { num: a, den: b }, Rat::Small { num: c, den: d }) = (self, rhs) {
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(l), Some(r), Some(den)) =
                (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d))
            {
                if let Some(num) = l.checked_add(r) {
                    return Rat::from_parts(num, den);
                }
            }
        }
        Rat::from_big(self.to_big() + rhs.to_big())
    }

    pub(crate) fn sub(&self, rhs: &Rat) -> Rat {
        self.add(&rhs.neg())
    }

    pub(crate) fn mul(&self, rhs: &Rat) -> Rat {
        if let (Rat::Small { num: a, den: b }, Rat::Small { num: c, den: d }) = (self, rhs) {
            // cross-reduce to keep intermediates small
            let g1 = gcd_u128(a.unsigned_abs() as u128, *d as u128);
            let g2 = gcd_u128(c.unsigned_abs() as u128, *b as u128);
            let a = *a as i128 / g1 as i128;
            let d = (*d as u128 / g1) as i128;
            let c = *c as i128 / g2 as i128;
            let b = (*b as u128 / g2) as i128;
            if let (Some(num), Some(den)) = (a.checked_mul(c), b.checked_mul(d)) {
                return Rat::from_parts(num, den);
            }
        }
        Rat::from_big(self.to_big() * rhs.to_big())
    }

    pub(crate) fn neg(&self) -> Rat {
        match self {
            Rat::Small { num, den } => {
                if *num == i64::MIN {
                    Rat::from_parts(-(*num as i128), *den as i128)
                } else {
                    Rat::Small {
                        num: -num,
                        den: *den,
                    }
                }
            }
            Rat::Big(b) => Rat::from_big(-(**b).clone()),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub(crate) fn recip(&self) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rat::Small { num, den } => Rat::from_parts(
                *den as i128 * num.signum() as i128,
                num.unsigned_abs() as i128,
            ),
            Rat::Big(b) => Rat::from_big(BigRational::one() / (**b).clone()),
        })
    }

    pub(crate) fn div(&self, rhs: &Rat) -> Option<Rat> {
        rhs.recip().map(|inv| self.mul(&inv))
    }

    pub(crate) fn cmp(&self, rhs: &Rat) -> Ordering {
        if let (Rat::Small { num: a, den: b }, Rat::Small { num: c, den: d }) = (self, rhs) {
            // i64 * u64 fits in i128 exactly
            return (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128));
        }
        self.to_big().cmp(&rhs.to_big())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small { num, den } => {
                if *den == 1 {
                    write!(f, "{num}")
                } else {
                    write!(f, "{num}/{den}")
                }
            }
            Rat::Big(b) => write!(f, "{b}"),
        }
    }
}

/// A complex number with exact rational real and imaginary parts.
///
/// Addition, subtraction, multiplication, conjugation and squared magnitude
/// are exact and closed; division by a nonzero value is exact as well.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: Rat,
    im: Rat,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational {
            re: Rat::from_big(re),
            im: Rat::from_big(im),
        }
    }

    pub(crate) fn from_rats(re: Rat, im: Rat) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational {
            re: Rat::from_int(n),
            im: Rat::ZERO,
        }
    }

    pub fn from_real(re: BigRational) -> Self {
        GaussianRational {
            re: Rat::from_big(re),
            im: Rat::ZERO,
        }
    }

    pub fn zero() -> Self {
        GaussianRational {
            re: Rat::ZERO,
            im: Rat::ZERO,
        }
    }

    pub fn one() -> Self {
        GaussianRational {
            re: Rat::ONE,
            im: Rat::ZERO,
        }
    }

    pub fn i() -> Self {
        GaussianRational {
            re: Rat::ZERO,
            im: Rat::ONE,
        }
    }

    pub fn re(&self) -> BigRational {
        self.re.to_big()
    }

    pub fn im(&self) -> BigRational {
        self.im.to_big()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: self.im.neg(),
        }
    }

    /// `re^2 + im^2`: the exact, nonnegative rational squared magnitude.
    pub fn magnitude_sq(&self) -> BigRational {
        self.magnitude_sq_rat().to_big()
    }

    pub(crate) fn magnitude_sq_rat(&self) -> Rat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let m = self.magnitude_sq_rat();
        let inv = m.recip().expect("nonzero magnitude");
        Some(GaussianRational {
            re: self.re.mul(&inv),
            im: self.im.neg().mul(&inv),
        })
    }

    /// Exact quotient `self / rhs`; `None` when `rhs` is zero.
    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|inv| self * &inv)
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: GaussianRational) -> GaussianRational {
        &self + &rhs
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: GaussianRational) -> GaussianRational {
        &self - &rhs
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: GaussianRational) -> GaussianRational {
        &self * &rhs
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}
