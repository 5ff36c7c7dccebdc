//! The finite symbolic expression language.
//!
//! A closed `SeqExpr` denotes a complex-valued function on `Z^d`. Every node
//! is exactly evaluable at every lattice point, with one exception: formal
//! square roots (`HalfRoot`) support exact zero tests and approximate
//! numeric evaluation only. The ambient dimension is fixed at construction
//! time; mixing dimensions is a hard error.

mod approx;
mod eval;
mod json;
mod pattern;
mod zeroset;

pub use approx::{eval_approx, ApproxValue};
pub use eval::{abs_sq, eval, is_zero_at, AbsSq, Evaluator};
pub use json::{expr_from_json, expr_from_str, expr_to_json, expr_to_string, infer_dim};
pub use pattern::{mask_zero_contains, run_bound as mask_run_bound};
pub use zeroset::{zero_set, FirstZero, PatternZeros, ZeroSetInfo};

use crate::error::{Error, Result};
use crate::lattice::LatticePoint;
use crate::number::GaussianRational;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Serialization refuses coordinate polynomials above this total degree, to
/// keep certificate arithmetic desk-sized.
pub const MAX_SERIALIZED_POLY_DEGREE: u32 = 64;

/// A symbolic expression over `Z^d`, immutable and cheap to share.
#[derive(Clone, PartialEq, Eq)]
pub struct SeqExpr {
    dim: usize,
    node: Node,
}

/// Expression node kinds.
#[derive(Clone, PartialEq, Eq)]
pub enum Node {
    /// Constant function.
    Const(GaussianRational),
    /// Multivariate polynomial in the coordinates `n_1, ..., n_d`.
    CoordPoly(CoordPolynomial),
    /// 1 at the given point, 0 elsewhere.
    Dirac(LatticePoint),
    /// 0 at the given point, 1 elsewhere.
    DiracComplement(LatticePoint),
    /// Finitely supported function; the map holds the nonzero values.
    FiniteSupport(BTreeMap<LatticePoint, GaussianRational>),
    /// The 0/1 mask family with prescribed zero runs at dyadic points (see
    /// [`mask_zero_contains`] for the decidable zero pattern).
    PatternMask(u32),
    /// `1 / (1 + |n|_1)^power`.
    InvNormPower(u32),
    Sum(Arc<SeqExpr>, Arc<SeqExpr>),
    Product(Arc<SeqExpr>, Arc<SeqExpr>),
    Conj(Arc<SeqExpr>),
    ScalarMul(GaussianRational, Arc<SeqExpr>),
    /// `n -> inner(n - offset)`.
    Shift(LatticePoint, Arc<SeqExpr>),
    /// `num(n)/den(n)` where `den(n) != 0`, and 0 where `den(n) = 0`.
    Quotient(Arc<SeqExpr>, Arc<SeqExpr>),
    /// `n -> max_k |arg_k(n)|^2` — the exact-rational GCD representative.
    MagnitudeMaxSq(Vec<Arc<SeqExpr>>),
    /// Formal square root: magnitude `sqrt(|inner(n)|)`, half the phase.
    HalfRoot(Arc<SeqExpr>),
}

impl SeqExpr {
    fn wrap(dim: usize, node: Node) -> Self {
        SeqExpr { dim, node }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn constant(dim: usize, value: GaussianRational) -> Self {
        Self::wrap(dim, Node::Const(value))
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(dim, GaussianRational::zero())
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, GaussianRational::one())
    }

    pub fn coord_poly(poly: CoordPolynomial) -> Self {
        Self::wrap(poly.dim(), Node::CoordPoly(poly))
    }

    /// The monomial `n_axis` (axis is 0-based).
    pub fn coord(dim: usize, axis: usize) -> Self {
        let mut exps = vec![0u32; dim];
        exps[axis] = 1;
        Self::coord_poly(CoordPolynomial::from_terms(
            dim,
            vec![(exps, GaussianRational::one())],
        ))
    }

    pub fn dirac(point: LatticePoint) -> Self {
        Self::wrap(point.dim(), Node::Dirac(point))
    }

    pub fn dirac_complement(point: LatticePoint) -> Self {
        Self::wrap(point.dim(), Node::DiracComplement(point))
    }

    /// Zero values are dropped so the support map is canonical.
    pub fn finite_support(
        dim: usize,
        values: impl IntoIterator<Item = (LatticePoint, GaussianRational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, v) in values {
            p.check_dim(dim)?;
            if !v.is_zero() {
                map.insert(p, v);
            }
        }
        Ok(Self::wrap(dim, Node::FiniteSupport(map)))
    }

    pub fn pattern_mask(dim: usize, order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::Unsupported("pattern mask order must be >= 1".into()));
        }
        Ok(Self::wrap(dim, Node::PatternMask(order)))
    }

    pub fn inv_norm_power(dim: usize, power: u32) -> Self {
        Self::wrap(dim, Node::InvNormPower(power))
    }

    pub fn sum(left: SeqExpr, right: SeqExpr) -> Result<Self> {
        Self::sum_shared(Arc::new(left), Arc::new(right))
    }

    pub fn product(left: SeqExpr, right: SeqExpr) -> Result<Self> {
        Self::product_shared(Arc::new(left), Arc::new(right))
    }

    /// Sum that keeps existing sharing (memoized evaluation relies on it).
    pub fn sum_shared(left: Arc<SeqExpr>, right: Arc<SeqExpr>) -> Result<Self> {
        let dim = same_dim(&left, &right)?;
        Ok(Self::wrap(dim, Node::Sum(left, right)))
    }

    /// Product that keeps existing sharing.
    pub fn product_shared(left: Arc<SeqExpr>, right: Arc<SeqExpr>) -> Result<Self> {
        let dim = same_dim(&left, &right)?;
        Ok(Self::wrap(dim, Node::Product(left, right)))
    }

    /// Conjugate that keeps existing sharing.
    pub fn conj_shared(inner: Arc<SeqExpr>) -> Self {
        let dim = inner.dim;
        Self::wrap(dim, Node::Conj(inner))
    }

    /// Quotient that keeps existing sharing.
    pub fn quotient_shared(num: Arc<SeqExpr>, den: Arc<SeqExpr>) -> Result<Self> {
        let dim = same_dim(&num, &den)?;
        Ok(Self::wrap(dim, Node::Quotient(num, den)))
    }

    pub fn conj(inner: SeqExpr) -> Self {
        let dim = inner.dim;
        Self::wrap(dim, Node::Conj(Arc::new(inner)))
    }

    pub fn scalar_mul(scalar: GaussianRational, inner: SeqExpr) -> Self {
        let dim = inner.dim;
        Self::wrap(dim, Node::ScalarMul(scalar, Arc::new(inner)))
    }

    pub fn shift(offset: LatticePoint, inner: SeqExpr) -> Result<Self> {
        offset.check_dim(inner.dim)?;
        let dim = inner.dim;
        Ok(Self::wrap(dim, Node::Shift(offset, Arc::new(inner))))
    }

    pub fn quotient(num: SeqExpr, den: SeqExpr) -> Result<Self> {
        let dim = same_dim(&num, &den)?;
        Ok(Self::wrap(
            dim,
            Node::Quotient(Arc::new(num), Arc::new(den)),
        ))
    }

    pub fn magnitude_max_sq(args: Vec<SeqExpr>) -> Result<Self> {
        let mut iter = args.iter();
        let first = iter.next().ok_or(Error::EmptyList)?;
        let dim = first.dim;
        for e in iter {
            if e.dim != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.dim,
                });
            }
        }
        Ok(Self::wrap(
            dim,
            Node::MagnitudeMaxSq(args.into_iter().map(Arc::new).collect()),
        ))
    }

    pub fn half_root(inner: SeqExpr) -> Self {
        let dim = inner.dim;
        Self::wrap(dim, Node::HalfRoot(Arc::new(inner)))
    }

    /// Difference `left - right`, as `Sum(left, (-1) * right)`.
    pub fn difference(left: SeqExpr, right: SeqExpr) -> Result<Self> {
        let minus_one = GaussianRational::from_int(-1);
        Self::sum(left, Self::scalar_mul(minus_one, right))
    }

    pub fn contains_half_root(&self) -> bool {
        match &self.node {
            Node::HalfRoot(_) => true,
            Node::Const(_)
            | Node::CoordPoly(_)
            | Node::Dirac(_)
            | Node::DiracComplement(_)
            | Node::FiniteSupport(_)
            | Node::PatternMask(_)
            | Node::InvNormPower(_) => false,
            Node::Sum(l, r) | Node::Product(l, r) | Node::Quotient(l, r) => {
                l.contains_half_root() || r.contains_half_root()
            }
            Node::Conj(e) | Node::ScalarMul(_, e) | Node::Shift(_, e) => e.contains_half_root(),
            Node::MagnitudeMaxSq(es) => es.iter().any(|e| e.contains_half_root()),
        }
    }

    pub fn contains_quotient(&self) -> bool {
        match &self.node {
            Node::Quotient(_, _) => true,
            Node::Const(_)
            | Node::CoordPoly(_)
            | Node::Dirac(_)
            | Node::DiracComplement(_)
            | Node::FiniteSupport(_)
            | Node::PatternMask(_)
            | Node::InvNormPower(_) => false,
            Node::Sum(l, r) | Node::Product(l, r) => l.contains_quotient() || r.contains_quotient(),
            Node::Conj(e) | Node::ScalarMul(_, e) | Node::Shift(_, e) | Node::HalfRoot(e) => {
                e.contains_quotient()
            }
            Node::MagnitudeMaxSq(es) => es.iter().any(|e| e.contains_quotient()),
        }
    }

    /// Decompose the expression as a constant background value plus finitely
    /// many exceptional point values, when that shape is derivable.
    ///
    /// The returned map may contain entries equal to the background value;
    /// callers that need the exact exceptional set should filter.
    pub fn eventually_constant(
        &self,
    ) -> Option<(GaussianRational, BTreeMap<LatticePoint, GaussianRational>)> {
        match &self.node {
            Node::Const(c) => Some((c.clone(), BTreeMap::new())),
            Node::CoordPoly(p) => p.constant_value().map(|c| (c, BTreeMap::new())),
            Node::Dirac(k) => Some((
                GaussianRational::zero(),
                [(k.clone(), GaussianRational::one())].into(),
            )),
            Node::DiracComplement(k) => Some((
                GaussianRational::one(),
                [(k.clone(), GaussianRational::zero())].into(),
            )),
            Node::FiniteSupport(map) => Some((GaussianRational::zero(), map.clone())),
            Node::PatternMask(_) | Node::InvNormPower(_) => None,
            Node::Sum(l, r) => {
                let (cl, ml) = l.eventually_constant()?;
                let (cr, mr) = r.eventually_constant()?;
                let mut out = BTreeMap::new();
                for p in ml.keys().chain(mr.keys()) {
                    let a = ml.get(p).unwrap_or(&cl);
                    let b = mr.get(p).unwrap_or(&cr);
                    out.insert(p.clone(), a + b);
                }
                Some((&cl + &cr, out))
            }
            Node::Product(l, r) => {
                let (cl, ml) = l.eventually_constant()?;
                let (cr, mr) = r.eventually_constant()?;
                let mut out = BTreeMap::new();
                for p in ml.keys().chain(mr.keys()) {
                    let a = ml.get(p).unwrap_or(&cl);
                    let b = mr.get(p).unwrap_or(&cr);
                    out.insert(p.clone(), a * b);
                }
                Some((&cl * &cr, out))
            }
            Node::Conj(e) => {
                let (c, m) = e.eventually_constant()?;
                Some((
                    c.conj(),
                    m.into_iter().map(|(p, v)| (p, v.conj())).collect(),
                ))
            }
            Node::ScalarMul(s, e) => {
                let (c, m) = e.eventually_constant()?;
                Some((s * &c, m.into_iter().map(|(p, v)| (p, s * &v)).collect()))
            }
            Node::Shift(v, e) => {
                let (c, m) = e.eventually_constant()?;
                let moved = m
                    .into_iter()
                    .map(|(p, val)| {
                        let coords = p
                            .coords()
                            .iter()
                            .zip(v.coords())
                            .map(|(a, b)| a.checked_add(*b))
                            .collect::<Option<Vec<_>>>()?;
                        Some((LatticePoint::new(coords), val))
                    })
                    .collect::<Option<BTreeMap<_, _>>>()?;
                Some((c, moved))
            }
            Node::Quotient(num, den) => {
                let (cn, mn) = num.eventually_constant()?;
                let (cd, md) = den.eventually_constant()?;
                let fill = |n: &GaussianRational, d: &GaussianRational| {
                    d.recip()
                        .map(|inv| n * &inv)
                        .unwrap_or_else(GaussianRational::zero)
                };
                let mut out = BTreeMap::new();
                for p in mn.keys().chain(md.keys()) {
                    let a = mn.get(p).unwrap_or(&cn);
                    let b = md.get(p).unwrap_or(&cd);
                    out.insert(p.clone(), fill(a, b));
                }
                Some((fill(&cn, &cd), out))
            }
            Node::MagnitudeMaxSq(args) => {
                let parts = args
                    .iter()
                    .map(|a| a.eventually_constant())
                    .collect::<Option<Vec<_>>>()?;
                let max_of = |values: Vec<GaussianRational>| {
                    let best = values
                        .iter()
                        .map(|v| v.magnitude_sq())
                        .max()
                        .expect("nonempty argument list");
                    GaussianRational::from_real(best)
                };
                let background = max_of(parts.iter().map(|(c, _)| c.clone()).collect());
                let mut out = BTreeMap::new();
                let keys: BTreeSet<_> = parts.iter().flat_map(|(_, m)| m.keys().cloned()).collect();
                for p in keys {
                    let vals = parts
                        .iter()
                        .map(|(c, m)| m.get(&p).unwrap_or(c).clone())
                        .collect();
                    out.insert(p, max_of(vals));
                }
                Some((background, out))
            }
            Node::HalfRoot(_) => None,
        }
    }

    /// Does `|f(n)|` take values only in `{0, 1}`? (Sound, not complete.)
    pub fn is_unit_magnitude(&self) -> bool {
        let unit = |c: &GaussianRational| {
            c.magnitude_sq() == num_rational::BigRational::from_integer(1.into())
        };
        let unit_or_zero = |c: &GaussianRational| c.is_zero() || unit(c);
        match &self.node {
            Node::Const(c) => unit_or_zero(c),
            Node::Dirac(_) | Node::DiracComplement(_) | Node::PatternMask(_) => true,
            Node::FiniteSupport(map) => map.values().all(unit),
            Node::Product(l, r) => l.is_unit_magnitude() && r.is_unit_magnitude(),
            Node::Conj(e) | Node::Shift(_, e) | Node::HalfRoot(e) => e.is_unit_magnitude(),
            Node::ScalarMul(c, e) => unit(c) && e.is_unit_magnitude(),
            _ => match self.eventually_constant() {
                Some((c, map)) => unit_or_zero(&c) && map.values().all(unit_or_zero),
                None => false,
            },
        }
    }
}

impl std::fmt::Debug for SeqExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}",
            expr_to_string(self).unwrap_or_else(|_| "<expr>".into())
        )
    }
}

fn same_dim(a: &SeqExpr, b: &SeqExpr) -> Result<usize> {
    if a.dim == b.dim {
        Ok(a.dim)
    } else {
        Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        })
    }
}

/// A multivariate polynomial in the lattice coordinates with Gaussian
/// rational coefficients. Terms are kept sorted by (total degree, exponent
/// vector) with zero coefficients dropped, so equal polynomials compare
/// equal structurally.
#[derive(Clone, PartialEq, Eq)]
pub struct CoordPolynomial {
    dim: usize,
    terms: Vec<(Vec<u32>, GaussianRational)>,
}

impl CoordPolynomial {
    pub fn from_terms(dim: usize, terms: Vec<(Vec<u32>, GaussianRational)>) -> Self {
        let mut map: BTreeMap<(u64, Vec<u32>), GaussianRational> = BTreeMap::new();
        for (exps, coeff) in terms {
            assert_eq!(exps.len(), dim, "exponent vector length must equal dim");
            let degree: u64 = exps.iter().map(|&e| e as u64).sum();
            let entry = map
                .entry((degree, exps))
                .or_insert_with(GaussianRational::zero);
            *entry = &*entry + &coeff;
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((_, exps), c)| (exps, c))
            .collect();
        CoordPolynomial { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Vec<u32>, GaussianRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (possibly zero).
    pub fn constant_value(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 if self.terms[0].0.iter().all(|&e| e == 0) => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(exps, _)| exps.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, point: &LatticePoint) -> GaussianRational {
        use crate::number::Rat;
        let mut acc = GaussianRational::zero();
        for (exps, coeff) in &self.terms {
            let mono = match monomial_i128(point.coords(), exps) {
                Some(v) if v >= i64::MIN as i128 && v <= i64::MAX as i128 => {
                    Rat::from_int(v as i64)
                }
                _ => Rat::from_big(num_rational::BigRational::from_integer(monomial_big(
                    point.coords(),
                    exps,
                ))),
            };
            let mono = GaussianRational::from_rats(mono, Rat::ZERO);
            acc = &acc + &(&mono * coeff);
        }
        acc
    }
}

impl std::fmt::Debug for CoordPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CoordPolynomial(dim={}, {} terms)",
            self.dim,
            self.terms.len()
        )
    }
}

fn monomial_i128(coords: &[i64], exps: &[u32]) -> Option<i128> {
    let mut acc: i128 = 1;
    for (coord, &e) in coords.iter().zip(exps) {
        for _ in 0..e {
            acc = acc.checked_mul(*coord as i128)?;
        }
    }
    Some(acc)
}

fn monomial_big(coords: &[i64], exps: &[u32]) -> num_bigint::BigInt {
    let mut acc = num_bigint::BigInt::from(1);
    for (coord, &e) in coords.iter().zip(exps) {
        if e > 0 {
            acc *= num_bigint::BigInt::from(*coord).pow(e);
        }
    }
    acc
}
