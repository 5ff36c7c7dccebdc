//! Approximate evaluation with certified error bounds.
//!
//! Only formal square roots force approximation; everything else stays
//! exact. Roots are computed by rational enclosure of the principal branch
//! (magnitude `sqrt(|z|)`, half the phase taken in `(-pi, pi]`), so the
//! returned midpoint comes with a sound rational bound on the absolute
//! error. Precision retries until the requested relative error is met.

use super::{eval, is_zero_at, Node, SeqExpr};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::number::{rat_sqrt_bounds, rat_sqrt_lower, rat_sqrt_upper, GaussianRational};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A complex midpoint with a bound on the absolute error `|true - mid|`.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxValue {
    pub value: GaussianRational,
    pub abs_err: BigRational,
}

impl ApproxValue {
    fn exact(value: GaussianRational) -> Self {
        ApproxValue {
            value,
            abs_err: BigRational::zero(),
        }
    }

    /// Rational upper bound on the magnitude of the true value.
    fn mag_upper(&self) -> BigRational {
        rat_sqrt_upper(&self.value.magnitude_sq()) + &self.abs_err
    }
}

fn pow2_inv(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits as usize)
}

/// Evaluate to relative error `2^-precision_bits` (absolute near zero).
pub fn eval_approx(
    expr: &SeqExpr,
    point: &LatticePoint,
    precision_bits: u32,
) -> Result<ApproxValue> {
    point.check_dim(expr.dim())?;
    if precision_bits == 0 {
        return Err(Error::Unsupported("precision_bits must be >= 1".into()));
    }
    let goal = pow2_inv(precision_bits);
    let mut working = precision_bits.saturating_add(32);
    let mut best: Option<ApproxValue> = None;
    for _ in 0..5 {
        let v = approx_inner(expr, point, working)?;
        let ok = if v.abs_err.is_zero() {
            true
        } else {
            let mag_lower = rat_sqrt_lower(&v.value.magnitude_sq());
            // relative goal when the value is clearly nonzero; absolute otherwise
            if mag_lower > &v.abs_err + &v.abs_err {
                v.abs_err <= &goal * &(mag_lower - &v.abs_err)
            } else {
                v.abs_err <= goal
            }
        };
        if ok {
            return Ok(v);
        }
        best = Some(v);
        working = working.saturating_mul(2);
    }
    Ok(best.expect("at least one approximation attempt"))
}

fn approx_inner(expr: &SeqExpr, point: &LatticePoint, working: u32) -> Result<ApproxValue> {
    if !expr.contains_half_root() {
        return Ok(ApproxValue::exact(eval(expr, point)?));
    }
    match expr.node() {
        Node::Sum(l, r) => {
            let a = approx_inner(l, point, working)?;
            let b = approx_inner(r, point, working)?;
            Ok(ApproxValue {
                value: &a.value + &b.value,
                abs_err: a.abs_err + b.abs_err,
            })
        }
        Node::Product(l, r) => {
            let a = approx_inner(l, point, working)?;
            let b = approx_inner(r, point, working)?;
            Ok(mul_balls(&a, &b))
        }
        Node::Conj(e) => {
            let a = approx_inner(e, point, working)?;
            Ok(ApproxValue {
                value: a.value.conj(),
                abs_err: a.abs_err,
            })
        }
        Node::ScalarMul(c, e) => {
            let a = approx_inner(e, point, working)?;
            Ok(mul_balls(&ApproxValue::exact(c.clone()), &a))
        }
        Node::Shift(v, e) => {
            let shifted = point
                .sub(v)
                .ok_or_else(|| Error::CoordinateOverflow(point.clone()))?;
            approx_inner(e, &shifted, working)
        }
        Node::Quotient(num, den) => {
            if is_zero_at(den, point)? {
                return Ok(ApproxValue::exact(GaussianRational::zero()));
            }
            let n = approx_inner(num, point, working)?;
            let d = approx_inner(den, point, working)?;
            div_balls(&n, &d)
        }
        Node::MagnitudeMaxSq(args) => {
            let mut mid = BigRational::zero();
            let mut err = BigRational::zero();
            let mut first = true;
            for a in args {
                let v = approx_inner(a, point, working)?;
                let m = v.value.magnitude_sq();
                // | |z|^2 - |m|^2 | <= (2|m| + err) err
                let e = (&(rat_sqrt_upper(&m) + rat_sqrt_upper(&m)) + &v.abs_err) * &v.abs_err;
                if first || m > mid {
                    mid = m;
                    first = false;
                }
                if e > err {
                    err = e;
                }
            }
            Ok(ApproxValue {
                value: GaussianRational::from_real(mid),
                abs_err: err,
            })
        }
        Node::HalfRoot(e) => {
            if is_zero_at(e, point).unwrap_or(false) {
                return Ok(ApproxValue::exact(GaussianRational::zero()));
            }
            let inner = approx_inner(e, point, working)?;
            half_root_ball(&inner, working)
        }
        // exact leaves with roots below them cannot occur; anything else
        // containing a root was matched above
        _ => Ok(ApproxValue::exact(eval(expr, point)?)),
    }
}

fn mul_balls(a: &ApproxValue, b: &ApproxValue) -> ApproxValue {
    let value = &a.value * &b.value;
    let ma = rat_sqrt_upper(&a.value.magnitude_sq());
    let mb = rat_sqrt_upper(&b.value.magnitude_sq());
    let abs_err = &ma * &b.abs_err + &mb * &a.abs_err + &a.abs_err * &b.abs_err;
    ApproxValue { value, abs_err }
}

fn div_balls(n: &ApproxValue, d: &ApproxValue) -> Result<ApproxValue> {
    let d_mag_lower = rat_sqrt_lower(&d.value.magnitude_sq()) - &d.abs_err;
    if !d_mag_lower.is_positive() {
        return Err(Error::Unsupported(
            "denominator enclosure cannot be separated from zero".into(),
        ));
    }
    let value = n
        .value
        .div(&d.value)
        .expect("midpoint denominator is nonzero");
    // |n/d - n^/d^| <= err_n/|d^| + |n| err_d / (|d||d^|)
    let dm = rat_sqrt_lower(&d.value.magnitude_sq());
    let n_upper = n.mag_upper();
    let abs_err = &n.abs_err / &dm + &n_upper * &d.abs_err / (&d_mag_lower * &dm);
    Ok(ApproxValue { value, abs_err })
}

/// Principal square root of a complex ball.
fn half_root_ball(inner: &ApproxValue, working: u32) -> Result<ApproxValue> {
    let m2 = inner.value.magnitude_sq();
    let mag_lower = rat_sqrt_lower(&m2) - &inner.abs_err;
    if !mag_lower.is_positive() {
        // the ball may contain zero: return the origin with a sound radius
        let radius = rat_sqrt_upper(&(rat_sqrt_upper(&m2) + &inner.abs_err));
        return Ok(ApproxValue {
            value: GaussianRational::zero(),
            abs_err: radius,
        });
    }
    // principal sqrt of the midpoint: re = sqrt((s+re)/2), im = +/- sqrt((s-re)/2)
    let (s_lo, s_hi) = rat_sqrt_bounds(&m2, working);
    let re = inner.value.re().clone();
    let im = inner.value.im().clone();
    let two = BigRational::from_integer(2.into());
    let clamp = |r: BigRational| {
        if r.is_negative() {
            BigRational::zero()
        } else {
            r
        }
    };
    let re_arg_lo = clamp((&s_lo + &re) / &two);
    let re_arg_hi = clamp((&s_hi + &re) / &two);
    let im_arg_lo = clamp((&s_lo - &re) / &two);
    let im_arg_hi = clamp((&s_hi - &re) / &two);
    let (re_lo, _) = rat_sqrt_bounds(&re_arg_lo, working);
    let (_, re_hi) = rat_sqrt_bounds(&re_arg_hi, working);
    let (im_lo, _) = rat_sqrt_bounds(&im_arg_lo, working);
    let (_, im_hi) = rat_sqrt_bounds(&im_arg_hi, working);

    // sign of the imaginary part: the half phase lies in (-pi/2, pi/2],
    // so re_out >= 0 and im_out carries the sign of im (with im = 0, re < 0
    // mapping to the positive branch).
    let sign_pos = if im.is_zero() {
        !re.is_positive()
    } else {
        im.is_positive()
    };
    // the error bound below breaks down if the enclosure can cross the
    // branch cut (the closed negative real axis)
    if !inner.abs_err.is_zero() && im.abs() <= inner.abs_err && re <= inner.abs_err {
        return Err(Error::Unsupported(
            "phase of the square root cannot be resolved at this precision".into(),
        ));
    }

    let re_mid = (&re_lo + &re_hi) / &two;
    let im_abs_mid = (&im_lo + &im_hi) / &two;
    let rounding = (&re_hi - &re_lo) / &two + (&im_hi - &im_lo) / &two;
    // |sqrt(z) - sqrt(z^)| = |z - z^| / |sqrt(z) + sqrt(z^)|, and away from
    // the branch cut |sqrt(z) + sqrt(z^)| >= sqrt(|z^|)
    let prop = if inner.abs_err.is_zero() {
        BigRational::zero()
    } else {
        let denom = rat_sqrt_lower(&s_lo);
        if !denom.is_positive() {
            return Err(Error::Unsupported(
                "square-root error propagation requires separation from zero".into(),
            ));
        }
        &inner.abs_err / &denom
    };
    let im_mid = if im.is_zero() && !sign_pos {
        BigRational::zero()
    } else if sign_pos {
        im_abs_mid
    } else {
        -im_abs_mid
    };
    Ok(ApproxValue {
        value: GaussianRational::new(re_mid, im_mid),
        abs_err: rounding + prop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::SeqExpr;
    use num_bigint::BigInt;

    fn pt(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn assert_close(v: &ApproxValue, re: BigRational, im: BigRational, tol: BigRational) {
        let diff = &v.value - &GaussianRational::new(re, im);
        let dist_sq = diff.magnitude_sq();
        let allowed = &tol + &v.abs_err;
        assert!(
            dist_sq <= &allowed * &allowed,
            "value {:?} too far (err bound {})",
            v.value,
            v.abs_err
        );
    }

    #[test]
    fn sqrt_of_four_is_two() {
        let h = SeqExpr::half_root(SeqExpr::constant(1, GaussianRational::from_int(4)));
        let v = eval_approx(&h, &pt(&[7]), 64).unwrap();
        assert_close(&v, rat(2, 1), rat(0, 1), pow2_inv(64));
        assert!(v.abs_err <= pow2_inv(60));
    }

    #[test]
    fn sqrt_of_minus_one_is_i() {
        // arg(-1) = pi, half phase pi/2
        let h = SeqExpr::half_root(SeqExpr::constant(1, GaussianRational::from_int(-1)));
        let v = eval_approx(&h, &pt(&[0]), 80).unwrap();
        assert_close(&v, rat(0, 1), rat(1, 1), pow2_inv(70));
    }

    #[test]
    fn sqrt_of_dirac_is_indicator() {
        let k = pt(&[3]);
        let h = SeqExpr::half_root(SeqExpr::dirac(k.clone()));
        let at_k = eval_approx(&h, &k, 64).unwrap();
        assert_close(&at_k, rat(1, 1), rat(0, 1), pow2_inv(60));
        let off = eval_approx(&h, &pt(&[0]), 64).unwrap();
        assert_eq!(off.value, GaussianRational::zero());
        assert!(off.abs_err.is_zero());
    }

    #[test]
    fn half_root_squares_back() {
        // |approx(root(e))^2 - e| small, mirroring the square-root contract
        let cases = [
            GaussianRational::from_int(9),
            GaussianRational::new(rat(3, 1), rat(4, 1)),
            GaussianRational::new(rat(-2, 1), rat(5, 7)),
            GaussianRational::new(rat(0, 1), rat(-3, 1)),
        ];
        for c in cases {
            let h = SeqExpr::half_root(SeqExpr::constant(1, c.clone()));
            let v = eval_approx(&h, &pt(&[0]), 100).unwrap();
            let sq = &v.value * &v.value;
            let diff = (&sq - &c).magnitude_sq();
            let tol = pow2_inv(90);
            assert!(diff <= &tol * &tol, "square check failed for {c:?}");
        }
    }

    #[test]
    fn principal_branch_signs() {
        // sqrt(-4 - 0i) has arg pi -> result 2i (positive branch)
        let h = SeqExpr::half_root(SeqExpr::constant(1, GaussianRational::from_int(-4)));
        let v = eval_approx(&h, &pt(&[0]), 64).unwrap();
        assert!(v.value.im().is_positive());
        // sqrt of a fourth-quadrant value keeps a negative imaginary part
        let z = GaussianRational::new(rat(1, 1), rat(-1, 1));
        let h2 = SeqExpr::half_root(SeqExpr::constant(1, z));
        let v2 = eval_approx(&h2, &pt(&[0]), 64).unwrap();
        assert!(v2.value.im().is_negative());
    }

    #[test]
    fn nested_roots_converge() {
        // sqrt(sqrt(16)) = 2
        let h = SeqExpr::half_root(SeqExpr::half_root(SeqExpr::constant(
            1,
            GaussianRational::from_int(16),
        )));
        let v = eval_approx(&h, &pt(&[0]), 64).unwrap();
        assert_close(&v, rat(2, 1), rat(0, 1), pow2_inv(50));
    }

    #[test]
    fn sums_with_roots_propagate_errors() {
        // sqrt(4) + sqrt(9) = 5
        let a = SeqExpr::half_root(SeqExpr::constant(1, GaussianRational::from_int(4)));
        let b = SeqExpr::half_root(SeqExpr::constant(1, GaussianRational::from_int(9)));
        let v = eval_approx(&SeqExpr::sum(a, b).unwrap(), &pt(&[0]), 64).unwrap();
        assert_close(&v, rat(5, 1), rat(0, 1), pow2_inv(50));
    }
}
