//! Exact pointwise evaluation, exact zero tests, and exact squared
//! magnitudes.
//!
//! `eval` refuses formal square roots. Zero tests and squared-magnitude
//! comparisons still work in their presence: zeros of a root are zeros of
//! its radicand, and `|root(e)|^2 = |e|` is compared by squaring the other
//! side of the inequality.

use super::{Node, SeqExpr};
use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::number::GaussianRational;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

/// Exact value of `expr` at `point`. Errors on dimension mismatch or on any
/// formal square root in the tree.
pub fn eval(expr: &SeqExpr, point: &LatticePoint) -> Result<GaussianRational> {
    point.check_dim(expr.dim())?;
    eval_inner(expr, point)
}

fn eval_inner(expr: &SeqExpr, point: &LatticePoint) -> Result<GaussianRational> {
    match expr.node() {
        Node::Const(c) => Ok(c.clone()),
        Node::CoordPoly(p) => Ok(p.eval(point)),
        Node::Dirac(k) => Ok(if point == k {
            GaussianRational::one()
        } else {
            GaussianRational::zero()
        }),
        Node::DiracComplement(k) => Ok(if point == k {
            GaussianRational::zero()
        } else {
            GaussianRational::one()
        }),
        Node::FiniteSupport(map) => Ok(map
            .get(point)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)),
        Node::PatternMask(order) => Ok(
            if super::pattern::mask_zero_contains(*order, point.coords()) {
                GaussianRational::zero()
            } else {
                GaussianRational::one()
            },
        ),
        Node::InvNormPower(power) => Ok(GaussianRational::from_rats(
            inv_norm_value(point.norm1(), *power),
            crate::number::Rat::ZERO,
        )),
        Node::Sum(l, r) => Ok(&eval_inner(l, point)? + &eval_inner(r, point)?),
        Node::Product(l, r) => Ok(&eval_inner(l, point)? * &eval_inner(r, point)?),
        Node::Conj(e) => Ok(eval_inner(e, point)?.conj()),
        Node::ScalarMul(c, e) => Ok(c * &eval_inner(e, point)?),
        Node::Shift(v, e) => {
            let shifted = point
                .sub(v)
                .ok_or_else(|| Error::CoordinateOverflow(point.clone()))?;
            eval_inner(e, &shifted)
        }
        Node::Quotient(num, den) => {
            let d = eval_inner(den, point)?;
            if d.is_zero() {
                Ok(GaussianRational::zero())
            } else {
                let n = eval_inner(num, point)?;
                Ok(n.div(&d).expect("nonzero denominator"))
            }
        }
        Node::MagnitudeMaxSq(args) => {
            let mut best = crate::number::Rat::ZERO;
            let mut first = true;
            for a in args {
                let m = eval_inner(a, point)?.magnitude_sq_rat();
                if first || m.cmp(&best) == Ordering::Greater {
                    best = m;
                    first = false;
                }
            }
            Ok(GaussianRational::from_rats(best, crate::number::Rat::ZERO))
        }
        Node::HalfRoot(_) => Err(Error::HalfRootNotExact),
    }
}

/// `1 / (1 + norm)^power` without leaving machine words when possible.
fn inv_norm_value(norm: u64, power: u32) -> crate::number::Rat {
    let base = (norm as u128).saturating_add(1);
    let mut acc: u128 = 1;
    for _ in 0..power {
        match acc.checked_mul(base) {
            Some(next) if next <= i64::MAX as u128 => acc = next,
            _ => {
                return crate::number::Rat::from_big(BigRational::new(
                    1.into(),
                    crate::number::one_plus_norm_pow(norm, power),
                ))
            }
        }
    }
    crate::number::Rat::from_int(acc as i64)
        .recip()
        .expect("positive denominator")
}

/// A per-point evaluator that memoizes shared subtrees (keyed by `Arc`
/// identity). Witness constructions share generator subtrees aggressively,
/// so window verifications benefit a lot.
pub struct Evaluator {
    memo: HashMap<usize, GaussianRational>,
}

impl Evaluator {
    pub fn new() -> Self {
        Evaluator {
            memo: HashMap::new(),
        }
    }

    /// Evaluate several expressions at one point, sharing work across them.
    pub fn eval_all(
        &mut self,
        exprs: &[&SeqExpr],
        point: &LatticePoint,
    ) -> Result<Vec<GaussianRational>> {
        self.memo.clear();
        exprs
            .iter()
            .map(|e| {
                point.check_dim(e.dim())?;
                self.eval_node(e, point)
            })
            .collect()
    }

    fn eval_shared(
        &mut self,
        expr: &Arc<SeqExpr>,
        point: &LatticePoint,
    ) -> Result<GaussianRational> {
        let key = Arc::as_ptr(expr) as usize;
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let v = self.eval_node(expr, point)?;
        self.memo.insert(key, v.clone());
        Ok(v)
    }

    fn eval_node(&mut self, expr: &SeqExpr, point: &LatticePoint) -> Result<GaussianRational> {
        match expr.node() {
            Node::Sum(l, r) => Ok(&self.eval_shared(l, point)? + &self.eval_shared(r, point)?),
            Node::Product(l, r) => Ok(&self.eval_shared(l, point)? * &self.eval_shared(r, point)?),
            Node::Conj(e) => Ok(self.eval_shared(e, point)?.conj()),
            Node::ScalarMul(c, e) => Ok(c * &self.eval_shared(e, point)?),
            Node::Quotient(num, den) => {
                let d = self.eval_shared(den, point)?;
                if d.is_zero() {
                    Ok(GaussianRational::zero())
                } else {
                    let n = self.eval_shared(num, point)?;
                    Ok(n.div(&d).expect("nonzero denominator"))
                }
            }
            Node::MagnitudeMaxSq(args) => {
                let mut best = crate::number::Rat::ZERO;
                let mut first = true;
                for a in args {
                    let m = self.eval_shared(a, point)?.magnitude_sq_rat();
                    if first || m.cmp(&best) == Ordering::Greater {
                        best = m;
                        first = false;
                    }
                }
                Ok(GaussianRational::from_rats(best, crate::number::Rat::ZERO))
            }
            // Shift changes the evaluation point, so its subtree bypasses the
            // per-point memo.
            Node::Shift(_, _) | Node::HalfRoot(_) => eval_inner(expr, point),
            _ => eval_inner(expr, point),
        }
    }
}

impl Default for Evaluator {
    fn default() -> Self {
        Self::new()
    }
}

/// Exact zero test at a point, defined wherever zeroness is structurally
/// decidable even through formal square roots.
pub fn is_zero_at(expr: &SeqExpr, point: &LatticePoint) -> Result<bool> {
    point.check_dim(expr.dim())?;
    zero_at_inner(expr, point)
}

fn zero_at_inner(expr: &SeqExpr, point: &LatticePoint) -> Result<bool> {
    match expr.node() {
        Node::HalfRoot(e) => zero_at_inner(e, point),
        Node::Product(l, r) => match zero_at_inner(l, point) {
            Ok(true) => Ok(true),
            Ok(false) => zero_at_inner(r, point),
            Err(e) => match zero_at_inner(r, point) {
                Ok(true) => Ok(true),
                _ => Err(e),
            },
        },
        Node::Conj(e) => zero_at_inner(e, point),
        Node::ScalarMul(c, e) => {
            if c.is_zero() {
                Ok(true)
            } else {
                zero_at_inner(e, point)
            }
        }
        Node::Shift(v, e) => {
            let shifted = point
                .sub(v)
                .ok_or_else(|| Error::CoordinateOverflow(point.clone()))?;
            zero_at_inner(e, &shifted)
        }
        Node::Quotient(num, den) => Ok(zero_at_inner(den, point)? || zero_at_inner(num, point)?),
        Node::MagnitudeMaxSq(args) => {
            for a in args {
                if !zero_at_inner(a, point)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Ok(eval_inner(expr, point)?.is_zero()),
    }
}

/// Exact representation of a squared magnitude `|f(n)|^2`: either a rational
/// or an iterated square root of one (formal roots halve the exponent).
#[derive(Clone, Debug, PartialEq)]
pub enum AbsSq {
    Exact(BigRational),
    /// `base^(1 / 2^log2_root)` with `base >= 0` and `log2_root >= 1`.
    Root {
        base: BigRational,
        log2_root: u32,
    },
}

impl AbsSq {
    fn parts(&self) -> (BigRational, u32) {
        match self {
            AbsSq::Exact(r) => (r.clone(), 0),
            AbsSq::Root { base, log2_root } => (base.clone(), *log2_root),
        }
    }

    fn from_parts(base: BigRational, log2_root: u32) -> AbsSq {
        let mut base = base;
        let mut j = log2_root;
        // peel off exact square roots so values stay Exact where possible
        while j > 0 {
            if base.is_zero() || base.is_one() {
                j = 0;
                break;
            }
            match crate::number::rat_sqrt_exact(&base) {
                Some(root) => {
                    base = root;
                    j -= 1;
                }
                None => break,
            }
        }
        if j == 0 {
            AbsSq::Exact(base)
        } else {
            AbsSq::Root { base, log2_root: j }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AbsSq::Exact(r) => r.is_zero(),
            AbsSq::Root { base, .. } => base.is_zero(),
        }
    }

    fn square_iter(r: &BigRational, times: u32) -> BigRational {
        let mut acc = r.clone();
        for _ in 0..times {
            acc = &acc * &acc;
        }
        acc
    }

    /// The represented value squared.
    fn squared(&self) -> AbsSq {
        let (base, j) = self.parts();
        if j == 0 {
            AbsSq::Exact(Self::square_iter(&base, 1))
        } else {
            AbsSq::from_parts(base, j - 1)
        }
    }

    fn mul(&self, rhs: &AbsSq) -> AbsSq {
        let (a, ja) = self.parts();
        let (b, jb) = rhs.parts();
        let j = ja.max(jb);
        let base = Self::square_iter(&a, j - ja) * Self::square_iter(&b, j - jb);
        AbsSq::from_parts(base, j)
    }

    fn div(&self, rhs: &AbsSq) -> AbsSq {
        let (b, jb) = rhs.parts();
        assert!(!b.is_zero(), "division of squared magnitudes by zero");
        self.mul(&AbsSq::from_parts(BigRational::one() / b, jb))
    }

    /// Compare the represented value against a rational bound, exactly.
    pub fn cmp_rational(&self, bound: &BigRational) -> Ordering {
        let (base, j) = self.parts();
        if j == 0 {
            return base.cmp(bound);
        }
        if bound.is_negative() {
            return Ordering::Greater;
        }
        base.cmp(&Self::square_iter(bound, j))
    }

    fn cmp(&self, other: &AbsSq) -> Ordering {
        let (a, ja) = self.parts();
        let (b, jb) = other.parts();
        let j = ja.max(jb);
        Self::square_iter(&a, j - ja).cmp(&Self::square_iter(&b, j - jb))
    }

    /// A rational upper bound on the value (exact for `Exact`).
    pub fn upper_rational(&self) -> BigRational {
        match self {
            AbsSq::Exact(r) => r.clone(),
            AbsSq::Root { base, log2_root } => {
                let mut acc = base.clone();
                for _ in 0..*log2_root {
                    acc = crate::number::rat_sqrt_upper(&acc);
                }
                acc
            }
        }
    }

    /// A rational lower bound on the value (exact for `Exact`).
    pub fn lower_rational(&self) -> BigRational {
        match self {
            AbsSq::Exact(r) => r.clone(),
            AbsSq::Root { base, log2_root } => {
                let mut acc = base.clone();
                for _ in 0..*log2_root {
                    acc = crate::number::rat_sqrt_lower(&acc);
                }
                acc
            }
        }
    }
}

/// Exact `|expr(point)|^2`, tolerating formal square roots wherever the
/// squared magnitude has an iterated-root closed form.
pub fn abs_sq(expr: &SeqExpr, point: &LatticePoint) -> Result<AbsSq> {
    point.check_dim(expr.dim())?;
    abs_sq_inner(expr, point)
}

fn abs_sq_inner(expr: &SeqExpr, point: &LatticePoint) -> Result<AbsSq> {
    match expr.node() {
        Node::HalfRoot(e) => {
            // |root(e)|^2 = |e| = (|e|^2)^(1/2)
            let (base, j) = abs_sq_inner(e, point)?.parts();
            Ok(AbsSq::from_parts(base, j + 1))
        }
        Node::Product(l, r) => Ok(abs_sq_inner(l, point)?.mul(&abs_sq_inner(r, point)?)),
        Node::Conj(e) => abs_sq_inner(e, point),
        Node::ScalarMul(c, e) => Ok(AbsSq::Exact(c.magnitude_sq()).mul(&abs_sq_inner(e, point)?)),
        Node::Shift(v, e) => {
            let shifted = point
                .sub(v)
                .ok_or_else(|| Error::CoordinateOverflow(point.clone()))?;
            abs_sq_inner(e, &shifted)
        }
        Node::Quotient(num, den) => {
            if zero_at_inner(den, point)? {
                Ok(AbsSq::Exact(BigRational::zero()))
            } else {
                Ok(abs_sq_inner(num, point)?.div(&abs_sq_inner(den, point)?))
            }
        }
        Node::MagnitudeMaxSq(args) => {
            // node value v = max_k |arg_k|^2 (real, >= 0); result is v^2
            let mut best: Option<AbsSq> = None;
            for a in args {
                let m = abs_sq_inner(a, point)?;
                best = Some(match best {
                    None => m,
                    Some(b) => {
                        if m.cmp(&b) == Ordering::Greater {
                            m
                        } else {
                            b
                        }
                    }
                });
            }
            let v = best.expect("magnitude max over nonempty list");
            Ok(v.squared())
        }
        _ => Ok(AbsSq::Exact(eval_inner(expr, point)?.magnitude_sq())),
    }
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

    #[test]
    fn eval_const_and_dirac() {
        let one = SeqExpr::one(2);
        assert_eq!(eval(&one, &pt(&[5, -3])).unwrap(), GaussianRational::one());
        let d = SeqExpr::dirac(pt(&[2, 2]));
        assert_eq!(eval(&d, &pt(&[2, 2])).unwrap(), GaussianRational::one());
        assert_eq!(eval(&d, &pt(&[0, 0])).unwrap(), GaussianRational::zero());
    }

    #[test]
    fn eval_pattern_mask_at_dyadic() {
        let f = SeqExpr::pattern_mask(1, 1).unwrap();
        assert_eq!(eval(&f, &pt(&[32])).unwrap(), GaussianRational::zero());
        assert_eq!(eval(&f, &pt(&[58])).unwrap(), GaussianRational::one());
    }

    #[test]
    fn eval_inv_norm_power() {
        let f = SeqExpr::inv_norm_power(2, 3);
        let v = eval(&f, &pt(&[1, -2])).unwrap();
        assert_eq!(v, GaussianRational::from_real(rat(1, 64)));
    }

    #[test]
    fn quotient_fills_zero_at_denominator_zeros() {
        let dim = 1;
        let num = SeqExpr::one(dim);
        let den = SeqExpr::dirac(pt(&[0]));
        let q = SeqExpr::quotient(num, den).unwrap();
        assert_eq!(eval(&q, &pt(&[0])).unwrap(), GaussianRational::one());
        assert_eq!(eval(&q, &pt(&[3])).unwrap(), GaussianRational::zero());
    }

    #[test]
    fn quotient_fill_contract_on_window() {
        // f/g with g = dirac complement: f/g = f off k, 0 at k
        let k = pt(&[1, 0]);
        let g = SeqExpr::dirac_complement(k.clone());
        let f = SeqExpr::coord(2, 0);
        let q = SeqExpr::quotient(f.clone(), g.clone()).unwrap();
        for n in crate::lattice::Window::new(2, 4).points() {
            let qv = eval(&q, &n).unwrap();
            let gv = eval(&g, &n).unwrap();
            let fv = eval(&f, &n).unwrap();
            if gv.is_zero() {
                assert!(qv.is_zero());
            } else {
                assert_eq!(&qv * &gv, fv);
            }
        }
    }

    #[test]
    fn eval_rejects_half_root() {
        let h = SeqExpr::half_root(SeqExpr::one(1));
        assert_eq!(eval(&h, &pt(&[0])), Err(Error::HalfRootNotExact));
    }

    #[test]
    fn zero_test_through_roots_and_products() {
        let k = pt(&[2]);
        let h = SeqExpr::half_root(SeqExpr::dirac_complement(k.clone()));
        assert!(is_zero_at(&h, &k).unwrap());
        assert!(!is_zero_at(&h, &pt(&[0])).unwrap());
        let prod = SeqExpr::product(h, SeqExpr::one(1)).unwrap();
        assert!(is_zero_at(&prod, &k).unwrap());
    }

    #[test]
    fn abs_sq_of_half_root_compares_exactly() {
        // |root(4)|^2 = |4| = 4 exactly
        let h = SeqExpr::half_root(SeqExpr::constant(1, GaussianRational::from_int(4)));
        let a = abs_sq(&h, &pt(&[0])).unwrap();
        assert_eq!(a.cmp_rational(&rat(4, 1)), Ordering::Equal);
        assert_eq!(a.cmp_rational(&rat(5, 1)), Ordering::Less);
        // |root(root(2))|^2 = sqrt(2): strictly between 1.414 and 1.415
        let h2 = SeqExpr::half_root(SeqExpr::half_root(SeqExpr::constant(
            1,
            GaussianRational::from_int(2),
        )));
        let a2 = abs_sq(&h2, &pt(&[0])).unwrap();
        assert_eq!(a2.cmp_rational(&rat(1414, 1000)), Ordering::Greater);
        assert_eq!(a2.cmp_rational(&rat(1415, 1000)), Ordering::Less);
    }

    #[test]
    fn magnitude_max_sq_value_and_abs_sq() {
        let a = SeqExpr::constant(1, GaussianRational::from_int(3));
        let b = SeqExpr::constant(1, GaussianRational::from_int(-2));
        let m = SeqExpr::magnitude_max_sq(vec![a, b]).unwrap();
        assert_eq!(
            eval(&m, &pt(&[0])).unwrap(),
            GaussianRational::from_real(rat(9, 1))
        );
        // |m|^2 = 81
        let s = abs_sq(&m, &pt(&[0])).unwrap();
        assert_eq!(s.cmp_rational(&rat(81, 1)), Ordering::Equal);
    }

    #[test]
    fn evaluator_memoizes_shared_subtrees() {
        let base = SeqExpr::coord(1, 0);
        let sum = SeqExpr::sum(base.clone(), base.clone()).unwrap();
        let prod = SeqExpr::product(sum.clone(), sum.clone()).unwrap();
        let mut ev = Evaluator::new();
        let vals = ev.eval_all(&[&prod, &sum], &pt(&[3])).unwrap();
        assert_eq!(vals[0], GaussianRational::from_int(36));
        assert_eq!(vals[1], GaussianRational::from_int(6));
    }
}
