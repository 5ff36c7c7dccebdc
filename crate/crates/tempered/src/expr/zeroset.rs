//! Structural zero-set information.
//!
//! Where the rules apply, the zero set of an expression is computed as an
//! exact finite set, the complement of an exact finite set, or a patched
//! dyadic mask pattern. Exact information makes membership of any point
//! decidable without scanning; everything else degrades to `Unknown`.

use super::pattern::mask_zero_contains;
use super::{Node, SeqExpr};
use crate::lattice::{canonical_points, LatticePoint};
use std::collections::BTreeSet;

/// Zero set of a mask, adjusted by finitely many explicit corrections.
///
/// The represented set is `(mask(order) ∪ plus) \ minus`, normalized so that
/// `plus` is disjoint from the mask and `minus` is contained in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternZeros {
    order: u32,
    dim: usize,
    plus: BTreeSet<LatticePoint>,
    minus: BTreeSet<LatticePoint>,
}

impl PatternZeros {
    fn new(
        order: u32,
        dim: usize,
        plus: BTreeSet<LatticePoint>,
        minus: BTreeSet<LatticePoint>,
    ) -> Self {
        let plus: BTreeSet<_> = plus
            .into_iter()
            .filter(|p| !mask_zero_contains(order, p.coords()))
            .collect();
        let minus = minus
            .into_iter()
            .filter(|p| mask_zero_contains(order, p.coords()) && !plus.contains(p))
            .collect();
        PatternZeros {
            order,
            dim,
            plus,
            minus,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        if self.minus.contains(p) {
            return false;
        }
        self.plus.contains(p) || mask_zero_contains(self.order, p.coords())
    }

    fn exceptional_points(&self) -> impl Iterator<Item = &LatticePoint> {
        self.plus.iter().chain(self.minus.iter())
    }

    /// The finitely many patch points where this set differs from the plain
    /// mask pattern.
    pub fn exception_points(&self) -> impl Iterator<Item = LatticePoint> + '_ {
        self.exceptional_points().cloned()
    }
}

/// What is known, exactly, about the zero set of an expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZeroSetInfo {
    /// The zero set is exactly this finite set.
    ExactFinite(BTreeSet<LatticePoint>),
    /// The zero set is the complement of this finite set (which holds the
    /// points where the expression is nonzero).
    ExactCofinite(BTreeSet<LatticePoint>),
    /// A patched dyadic mask pattern; membership is decidable.
    Pattern(PatternZeros),
    Unknown,
}

/// Outcome of asking for the canonically first zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FirstZero {
    NoZeros,
    First(LatticePoint),
    Undecided,
}

impl ZeroSetInfo {
    pub fn is_exact(&self) -> bool {
        matches!(
            self,
            ZeroSetInfo::ExactFinite(_) | ZeroSetInfo::ExactCofinite(_)
        )
    }

    pub fn is_decidable(&self) -> bool {
        !matches!(self, ZeroSetInfo::Unknown)
    }

    /// Membership of `p` in the zero set; `None` when unknown.
    pub fn contains(&self, p: &LatticePoint) -> Option<bool> {
        match self {
            ZeroSetInfo::ExactFinite(s) => Some(s.contains(p)),
            ZeroSetInfo::ExactCofinite(nonzero) => Some(!nonzero.contains(p)),
            ZeroSetInfo::Pattern(pat) => Some(pat.contains(p)),
            ZeroSetInfo::Unknown => None,
        }
    }

    /// The canonically first zero, when the zero set is decidable.
    pub fn first_zero(&self, dim: usize) -> FirstZero {
        match self {
            ZeroSetInfo::ExactFinite(s) => match s.iter().next() {
                Some(p) => FirstZero::First(p.clone()),
                None => FirstZero::NoZeros,
            },
            ZeroSetInfo::ExactCofinite(nonzero) => {
                // the complement of a finite set is never empty
                let p = canonical_points(dim)
                    .find(|p| !nonzero.contains(p))
                    .expect("cofinite sets are nonempty");
                FirstZero::First(p)
            }
            ZeroSetInfo::Pattern(pat) => {
                if pat.minus.len() > 16 {
                    return FirstZero::Undecided;
                }
                // Some dyadic 2^k e_1 with k <= |minus| is unpatched, which
                // bounds the norm of the first zero; enumerate every mask
                // point up to that bound and take the canonical minimum.
                let k_star = (0..=pat.minus.len() as u32)
                    .find(|&k| {
                        let p = LatticePoint::axis(dim, 0, 1i64 << k);
                        pat.contains(&p)
                    })
                    .expect("pigeonhole over dyadic points");
                let bound = 1u64 << k_star;
                let mut best: Option<LatticePoint> = pat.plus.iter().next().cloned();
                let mut consider = |p: LatticePoint| {
                    if pat.contains(&p) && best.as_ref().is_none_or(|b| p < *b) {
                        best = Some(p);
                    }
                };
                let mut k = 0u32;
                while (1u64 << k) <= bound {
                    let base = 1i64 << k;
                    let run = super::pattern::run_bound(k, pat.order).unwrap_or(u64::MAX);
                    let jmax = run.min(bound - (1u64 << k));
                    for i in 0..dim {
                        for j in 0..=jmax {
                            let mut coords = vec![0i64; dim];
                            coords[0] = base;
                            coords[i] += j as i64;
                            consider(LatticePoint::new(coords));
                        }
                    }
                    k += 1;
                }
                match best {
                    Some(p) => FirstZero::First(p),
                    None => FirstZero::Undecided,
                }
            }
            ZeroSetInfo::Unknown => FirstZero::Undecided,
        }
    }

    /// Zero set of a product: the union.
    pub fn union(&self, other: &ZeroSetInfo) -> ZeroSetInfo {
        use ZeroSetInfo::*;
        match (self, other) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (ExactFinite(a), ExactFinite(b)) => ExactFinite(a.union(b).cloned().collect()),
            (ExactFinite(a), ExactCofinite(nz)) | (ExactCofinite(nz), ExactFinite(a)) => {
                // (Z \ nz) ∪ a = Z \ (nz \ a)
                ExactCofinite(nz.iter().filter(|p| !a.contains(p)).cloned().collect())
            }
            (ExactCofinite(a), ExactCofinite(b)) => {
                ExactCofinite(a.intersection(b).cloned().collect())
            }
            (Pattern(pat), ExactFinite(a)) | (ExactFinite(a), Pattern(pat)) => {
                let mut plus = pat.plus.clone();
                plus.extend(a.iter().cloned());
                let minus = pat
                    .minus
                    .iter()
                    .filter(|p| !a.contains(p))
                    .cloned()
                    .collect();
                ZeroSetInfo::Pattern(PatternZeros::new(pat.order, pat.dim, plus, minus))
            }
            (Pattern(pat), ExactCofinite(nz)) | (ExactCofinite(nz), Pattern(pat)) => {
                // (Z \ nz) ∪ P = Z \ (nz \ P)
                ExactCofinite(nz.iter().filter(|p| !pat.contains(p)).cloned().collect())
            }
            (Pattern(a), Pattern(b)) => {
                let order = a.order.max(b.order);
                let in_either = |p: &LatticePoint| a.contains(p) || b.contains(p);
                let mut plus = BTreeSet::new();
                let mut minus = BTreeSet::new();
                for p in a.exceptional_points().chain(b.exceptional_points()) {
                    if in_either(p) {
                        plus.insert(p.clone());
                    } else {
                        minus.insert(p.clone());
                    }
                }
                ZeroSetInfo::Pattern(PatternZeros::new(order, a.dim, plus, minus))
            }
        }
    }

    /// Zero set of a magnitude max: the intersection.
    pub fn intersect(&self, other: &ZeroSetInfo) -> ZeroSetInfo {
        use ZeroSetInfo::*;
        match (self, other) {
            (Unknown, _) | (_, Unknown) => Unknown,
            (ExactFinite(a), other) => ExactFinite(
                a.iter()
                    .filter(|p| other.contains(p) == Some(true))
                    .cloned()
                    .collect(),
            ),
            (_, ExactFinite(_)) => other.intersect(self),
            (ExactCofinite(a), ExactCofinite(b)) => ExactCofinite(a.union(b).cloned().collect()),
            (ExactCofinite(nz), Pattern(pat)) | (Pattern(pat), ExactCofinite(nz)) => {
                // P \ nz
                let mut minus = pat.minus.clone();
                minus.extend(nz.iter().cloned());
                let plus = pat
                    .plus
                    .iter()
                    .filter(|p| !nz.contains(p))
                    .cloned()
                    .collect();
                ZeroSetInfo::Pattern(PatternZeros::new(pat.order, pat.dim, plus, minus))
            }
            (Pattern(a), Pattern(b)) => {
                let order = a.order.min(b.order);
                let in_both = |p: &LatticePoint| a.contains(p) && b.contains(p);
                let mut plus = BTreeSet::new();
                let mut minus = BTreeSet::new();
                for p in a.exceptional_points().chain(b.exceptional_points()) {
                    if in_both(p) {
                        plus.insert(p.clone());
                    } else {
                        minus.insert(p.clone());
                    }
                }
                ZeroSetInfo::Pattern(PatternZeros::new(order, a.dim, plus, minus))
            }
        }
    }

    /// Translate the zero set by `offset` (for shifted expressions).
    fn translate(&self, offset: &LatticePoint) -> ZeroSetInfo {
        let move_set = |s: &BTreeSet<LatticePoint>| -> Option<BTreeSet<LatticePoint>> {
            s.iter()
                .map(|p| {
                    let coords = p
                        .coords()
                        .iter()
                        .zip(offset.coords())
                        .map(|(a, b)| a.checked_add(*b))
                        .collect::<Option<Vec<_>>>()?;
                    Some(LatticePoint::new(coords))
                })
                .collect()
        };
        match self {
            ZeroSetInfo::ExactFinite(s) => match move_set(s) {
                Some(t) => ZeroSetInfo::ExactFinite(t),
                None => ZeroSetInfo::Unknown,
            },
            ZeroSetInfo::ExactCofinite(s) => match move_set(s) {
                Some(t) => ZeroSetInfo::ExactCofinite(t),
                None => ZeroSetInfo::Unknown,
            },
            ZeroSetInfo::Pattern(pat) if offset.is_origin() => ZeroSetInfo::Pattern(pat.clone()),
            _ => ZeroSetInfo::Unknown,
        }
    }
}

/// Structural zero-set rules.
pub fn zero_set(expr: &SeqExpr) -> ZeroSetInfo {
    match expr.node() {
        Node::Const(c) => {
            if c.is_zero() {
                ZeroSetInfo::ExactCofinite(BTreeSet::new())
            } else {
                ZeroSetInfo::ExactFinite(BTreeSet::new())
            }
        }
        Node::CoordPoly(p) => match p.constant_value() {
            Some(c) if c.is_zero() => ZeroSetInfo::ExactCofinite(BTreeSet::new()),
            Some(_) => ZeroSetInfo::ExactFinite(BTreeSet::new()),
            None => ZeroSetInfo::Unknown,
        },
        Node::Dirac(k) => ZeroSetInfo::ExactCofinite([k.clone()].into()),
        Node::DiracComplement(k) => ZeroSetInfo::ExactFinite([k.clone()].into()),
        Node::FiniteSupport(map) => ZeroSetInfo::ExactCofinite(map.keys().cloned().collect()),
        Node::PatternMask(order) => ZeroSetInfo::Pattern(PatternZeros::new(
            *order,
            expr.dim(),
            BTreeSet::new(),
            BTreeSet::new(),
        )),
        Node::InvNormPower(_) => ZeroSetInfo::ExactFinite(BTreeSet::new()),
        Node::Sum(_, _) => match expr.eventually_constant() {
            Some((background, overrides)) => {
                if background.is_zero() {
                    ZeroSetInfo::ExactCofinite(
                        overrides
                            .into_iter()
                            .filter(|(_, v)| !v.is_zero())
                            .map(|(p, _)| p)
                            .collect(),
                    )
                } else {
                    ZeroSetInfo::ExactFinite(
                        overrides
                            .into_iter()
                            .filter(|(_, v)| v.is_zero())
                            .map(|(p, _)| p)
                            .collect(),
                    )
                }
            }
            None => ZeroSetInfo::Unknown,
        },
        Node::Product(l, r) => zero_set(l).union(&zero_set(r)),
        Node::Conj(e) | Node::HalfRoot(e) => zero_set(e),
        Node::ScalarMul(c, e) => {
            if c.is_zero() {
                ZeroSetInfo::ExactCofinite(BTreeSet::new())
            } else {
                zero_set(e)
            }
        }
        Node::Shift(v, e) => zero_set(e).translate(v),
        Node::Quotient(num, den) => zero_set(den).union(&zero_set(num)),
        Node::MagnitudeMaxSq(args) => {
            let mut acc: Option<ZeroSetInfo> = None;
            for a in args {
                let z = zero_set(a);
                acc = Some(match acc {
                    None => z,
                    Some(prev) => prev.intersect(&z),
                });
            }
            acc.expect("nonempty argument list")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{eval, SeqExpr};
    use crate::lattice::Window;
    use crate::number::GaussianRational;

    fn pt(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    #[test]
    fn dirac_complement_zero_set() {
        let k = pt(&[1, -2]);
        let z = zero_set(&SeqExpr::dirac_complement(k.clone()));
        assert_eq!(z, ZeroSetInfo::ExactFinite([k].into()));
    }

    #[test]
    fn product_of_complements_unions() {
        let k1 = pt(&[0]);
        let k2 = pt(&[3]);
        let f = SeqExpr::product(
            SeqExpr::dirac_complement(k1.clone()),
            SeqExpr::dirac_complement(k2.clone()),
        )
        .unwrap();
        assert_eq!(zero_set(&f), ZeroSetInfo::ExactFinite([k1, k2].into()));
    }

    #[test]
    fn const_zero_is_cofinite_empty() {
        let z = zero_set(&SeqExpr::zero(2));
        assert_eq!(z, ZeroSetInfo::ExactCofinite(BTreeSet::new()));
        assert_eq!(z.contains(&pt(&[7, 9])), Some(true));
    }

    #[test]
    fn first_zero_cases() {
        let z = zero_set(&SeqExpr::dirac(pt(&[2, 0])));
        // zero everywhere except (2,0): first canonical zero is the origin
        assert_eq!(z.first_zero(2), FirstZero::First(pt(&[0, 0])));
        let z2 = zero_set(&SeqExpr::one(1));
        assert_eq!(z2.first_zero(1), FirstZero::NoZeros);
        let mask = SeqExpr::pattern_mask(1, 1).unwrap();
        // first mask zero is 2^0 = 1
        assert_eq!(zero_set(&mask).first_zero(1), FirstZero::First(pt(&[1])));
    }

    // Oracle: exact-info membership must agree with evaluation everywhere.
    fn check_agreement(f: &SeqExpr, radius: u64) {
        let z = zero_set(f);
        if !z.is_decidable() {
            return;
        }
        for n in Window::new(f.dim(), radius).points() {
            let val_zero = eval(f, &n).unwrap().is_zero();
            assert_eq!(z.contains(&n), Some(val_zero), "disagreement at {n:?}");
        }
    }

    #[test]
    fn zero_sets_agree_with_eval_on_windows() {
        let k1 = pt(&[1, 0]);
        let k2 = pt(&[-1, 2]);
        let cases = vec![
            SeqExpr::dirac(k1.clone()),
            SeqExpr::dirac_complement(k2.clone()),
            SeqExpr::product(
                SeqExpr::dirac(k1.clone()),
                SeqExpr::dirac_complement(k2.clone()),
            )
            .unwrap(),
            SeqExpr::finite_support(
                2,
                vec![
                    (k1.clone(), GaussianRational::from_int(3)),
                    (k2.clone(), GaussianRational::from_int(-1)),
                ],
            )
            .unwrap(),
            SeqExpr::magnitude_max_sq(vec![
                SeqExpr::dirac_complement(k1.clone()),
                SeqExpr::dirac_complement(k2.clone()),
            ])
            .unwrap(),
            SeqExpr::scalar_mul(
                GaussianRational::from_int(5),
                SeqExpr::conj(SeqExpr::dirac(k1.clone())),
            ),
        ];
        for f in &cases {
            check_agreement(f, 4);
        }
    }

    #[test]
    fn mask_pattern_composition_with_dirac() {
        let mask = SeqExpr::pattern_mask(1, 1).unwrap();
        // product with a complement at a mask zero keeps the pattern
        let f = SeqExpr::product(mask.clone(), SeqExpr::dirac_complement(pt(&[58]))).unwrap();
        let z = zero_set(&f);
        assert_eq!(z.contains(&pt(&[58])), Some(true));
        assert_eq!(z.contains(&pt(&[32])), Some(true));
        assert_eq!(z.contains(&pt(&[59])), Some(false));
        for n in Window::new(1, 70).points() {
            let val_zero = eval(&f, &n).unwrap().is_zero();
            assert_eq!(z.contains(&n), Some(val_zero), "disagreement at {n:?}");
        }
    }

    #[test]
    fn mask_intersection_with_dirac_support() {
        // magnitude max of mask and a point mass at a mask zero: common zeros
        let mask = SeqExpr::pattern_mask(1, 1).unwrap();
        let g = SeqExpr::dirac(pt(&[4]));
        let f = SeqExpr::magnitude_max_sq(vec![mask, g]).unwrap();
        let z = zero_set(&f);
        // zero set of the dirac is everything except 4; mask zeros minus {4}...
        // 4 is a mask zero and dirac(4) = 1 there, so 4 is not a common zero
        assert_eq!(z.contains(&pt(&[4])), Some(false));
        assert_eq!(z.contains(&pt(&[2])), Some(true));
        for n in Window::new(1, 70).points() {
            let val_zero = eval(&f, &n).unwrap().is_zero();
            assert_eq!(z.contains(&n), Some(val_zero), "disagreement at {n:?}");
        }
    }
}
