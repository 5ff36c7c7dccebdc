//! Fixed maximal ideals, the diagonal decay ideal, the classifier for
//! finitely generated proper prime ideals, and the separator witnessing
//! that distinct fixed maximal ideals are incomparable.

use crate::error::{Error, Result};
use crate::expr::{eval, is_zero_at, zero_set, Node, SeqExpr, ZeroSetInfo};
use crate::growth::{fit_upper_from_shells, FitOutcome, ShellExtremes};
use crate::lattice::{canonical_points, LatticePoint, Window};
use crate::number::GaussianRational;
use crate::ring::{is_invertible, InvertibilityVerdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Membership in the fixed maximal ideal at `k`: is `f(k) = 0`?
pub fn fixed_maximal_member(f: &SeqExpr, k: &LatticePoint) -> Result<bool> {
    is_zero_at(f, k)
}

/// For `f` with `f(k) != 0`, the complementary element `g = 1 - f/f(k)`,
/// which lies in the ideal at `k` and reconstructs the unit together with
/// `f/f(k)`. The boolean reports the exact window check of that identity.
pub fn maximality_witness(
    k: &LatticePoint,
    f: &SeqExpr,
    window: &Window,
) -> Result<(SeqExpr, bool)> {
    let c = eval(f, k)?;
    if c.is_zero() {
        return Err(Error::VanishesAt(k.clone()));
    }
    let inv_c = c.recip().expect("nonzero value");
    let g = SeqExpr::sum(
        SeqExpr::one(f.dim()),
        SeqExpr::scalar_mul(-&inv_c, f.clone()),
    )?;
    let mut unit_check = matches!(is_zero_at(&g, k), Ok(true));
    for n in window.points() {
        let lhs = &eval(&g, &n)? + &(&inv_c * &eval(f, &n)?);
        if lhs != GaussianRational::one() {
            unit_check = false;
            break;
        }
    }
    Ok((g, unit_check))
}

/// Verdict for membership in the ideal of functions with
/// `e^(k_j) f(k_j, ..., k_j) -> 0` along a diagonal subsequence.
#[derive(Clone, Debug, PartialEq)]
pub enum NonfixedVerdict {
    CertifiedYes {
        rule: String,
    },
    CertifiedNo {
        rule: String,
        /// 1-based index of the first probed term provably above 1, when one
        /// lies within the horizon.
        witness_index: Option<usize>,
    },
    EmpiricalYes {
        trend: Vec<(u64, BigRational)>,
    },
    EmpiricalNo {
        trend: Vec<(u64, BigRational)>,
    },
}

const E_LOWER: (i64, i64) = (2_718_281, 1_000_000);
const E_UPPER: (i64, i64) = (2_718_282, 1_000_000);
const MAX_SUBSEQ_TERM: u64 = 1 << 14;
const MAX_SUBSEQ_LEN: usize = 256;

fn diag_point(dim: usize, k: u64) -> LatticePoint {
    LatticePoint::new(vec![k as i64; dim])
}

/// Structural evidence that `|f| >= delta (1 + |n|)^-p` at all diagonal
/// points `(k, ..., k)` with `k >= from`.
fn diagonal_lower_bound(f: &SeqExpr) -> Option<(BigRational, u32, u64)> {
    if let Some(c) = crate::growth::infer_lower_certificate(f) {
        return Some((c.delta, c.degree, 1));
    }
    match f.node() {
        // for dim >= 2 the diagonal leaves the mask's zero pattern once
        // 2^l > l^(order+1), after which the mask is 1 on the diagonal
        Node::PatternMask(order) if f.dim() >= 2 => {
            let threshold = (0..=64u32)
                .filter(|&l| {
                    crate::expr::mask_run_bound(l, *order).is_none_or(|b| (1u128 << l) <= b as u128)
                })
                .max()
                .unwrap_or(0);
            Some((
                BigRational::one(),
                0,
                (1u64 << (threshold.min(62) + 1)).max(2),
            ))
        }
        Node::Product(l, r) => {
            let (da, pa, ka) = diagonal_lower_bound(l)?;
            let (db, pb, kb) = diagonal_lower_bound(r)?;
            Some((da * db, pa + pb, ka.max(kb)))
        }
        Node::Conj(e) => diagonal_lower_bound(e),
        Node::ScalarMul(c, e) => {
            if c.is_zero() {
                return None;
            }
            let scale = crate::number::rat_sqrt_lower(&c.magnitude_sq());
            if scale == BigRational::from_integer(0.into()) {
                return None;
            }
            let (d, p, k) = diagonal_lower_bound(e)?;
            Some((scale * d, p, k))
        }
        _ => None,
    }
}

/// Membership test for the diagonal decay ideal along `subsequence`
/// (strictly increasing positive integers; the probe horizon is its length).
///
/// Certified verdicts use exact structure; empirical verdicts compare
/// `e^(2 k_j) |f(k_j)|^2` against 1 using exact rational bounds on `e`.
pub fn nonfixed_ideal_member(f: &SeqExpr, subsequence: &[u64]) -> Result<NonfixedVerdict> {
    if subsequence.is_empty() {
        return Err(Error::EmptyList);
    }
    if subsequence.len() > MAX_SUBSEQ_LEN {
        return Err(Error::BudgetExceeded(format!(
            "subsequence horizon capped at {MAX_SUBSEQ_LEN}"
        )));
    }
    for pair in subsequence.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::Unsupported(
                "subsequence must be strictly increasing".into(),
            ));
        }
    }
    if subsequence[0] == 0 || *subsequence.last().unwrap() > MAX_SUBSEQ_TERM {
        return Err(Error::BudgetExceeded(format!(
            "subsequence terms must lie in 1..={MAX_SUBSEQ_TERM}"
        )));
    }
    let dim = f.dim();

    // certified membership: the zero set covers all but finitely many points
    if matches!(zero_set(f), ZeroSetInfo::ExactCofinite(_)) {
        return Ok(NonfixedVerdict::CertifiedYes {
            rule: "vanishes off a finite set, hence eventually on every diagonal subsequence"
                .into(),
        });
    }

    let e_lower = BigRational::new(BigInt::from(E_LOWER.0), BigInt::from(E_LOWER.1));
    let e_upper = BigRational::new(BigInt::from(E_UPPER.0), BigInt::from(E_UPPER.1));

    // certified non-membership: a diagonal lower bound makes the scaled
    // sequence diverge; report the first probed index provably above 1
    if let Some((delta, degree, from_k)) = diagonal_lower_bound(f) {
        let delta_sq = &delta * &delta;
        let mut witness_index = None;
        for (j, &k) in subsequence.iter().enumerate() {
            if k < from_k {
                continue;
            }
            let norm = (dim as u64) * k;
            let scaled = &e_lower.pow(2 * k as i32) * &delta_sq
                / BigRational::from_integer(crate::number::one_plus_norm_pow(norm, 2 * degree));
            if scaled > BigRational::one() {
                witness_index = Some(j + 1);
                break;
            }
        }
        return Ok(NonfixedVerdict::CertifiedNo {
            rule: format!(
                "bounded below by {delta} (1+|n|)^-{degree} on the diagonal from k = {from_k}, so the scaled terms diverge"
            ),
            witness_index,
        });
    }

    // empirical probe: exact upper bounds on e^(2 k_j) |f(k_j)|^2
    let mut trend = Vec::with_capacity(subsequence.len());
    let mut all_exact = true;
    for &k in subsequence {
        let p = diag_point(dim, k);
        let v = match crate::expr::abs_sq(f, &p) {
            Ok(a) => a.upper_rational(),
            Err(_) => {
                all_exact = false;
                break;
            }
        };
        let scaled = &e_upper.pow(2 * k as i32) * &v;
        trend.push((k, scaled));
    }
    if !all_exact {
        return Ok(NonfixedVerdict::EmpiricalNo { trend });
    }
    let last = &trend.last().expect("nonempty").1;
    let first = &trend[0].1;
    let yes = *last < BigRational::one() && last <= first;
    if yes {
        Ok(NonfixedVerdict::EmpiricalYes { trend })
    } else {
        Ok(NonfixedVerdict::EmpiricalNo { trend })
    }
}

/// Classification of the principal ideal generated by `d`.
#[derive(Clone, Debug)]
pub enum PrimeClassification {
    /// Exactly one zero: the ideal is the fixed maximal ideal at that point,
    /// with a window fit of `1/|d| <= M (1+|n|)^m` off the zero as evidence.
    FixedMaximal {
        point: LatticePoint,
        reciprocal_fit: FitOutcome,
    },
    /// Two or more zeros: witnesses `a, b` with `a b = d` exactly while
    /// neither is a multiple of `d`, refuted at the recorded points.
    NotPrime {
        witness_a: SeqExpr,
        witness_b: SeqExpr,
        obstruction_a: LatticePoint,
        obstruction_b: LatticePoint,
        product_checked: bool,
    },
    /// No zeros: `d` is invertible, so the ideal is the whole ring.
    NotProper {
        invertibility: InvertibilityVerdict,
    },
    Inconclusive {
        reason: String,
    },
}

/// Classify `<d>` following the zero count of `d`.
///
/// Requires an exactly finite or cofinite zero set; anything else is
/// reported as inconclusive rather than scanned, since a clean window proves
/// nothing about zero-freeness.
pub fn classify_principal_prime(
    d: &SeqExpr,
    window: &Window,
    m_cap: u32,
) -> Result<PrimeClassification> {
    let dim = d.dim();
    let zeros: Vec<LatticePoint> = match zero_set(d) {
        ZeroSetInfo::ExactFinite(set) => set.into_iter().take(2).collect(),
        ZeroSetInfo::ExactCofinite(nonzero) => canonical_points(dim)
            .filter(|p| !nonzero.contains(p))
            .take(2)
            .collect(),
        ZeroSetInfo::Pattern(_) | ZeroSetInfo::Unknown => {
            return Ok(PrimeClassification::Inconclusive {
                reason: "the zero set is not exactly finite or cofinite".into(),
            })
        }
    };
    match zeros.len() {
        0 => match is_invertible(d, window, m_cap)? {
            verdict @ InvertibilityVerdict::Invertible { .. } => {
                Ok(PrimeClassification::NotProper {
                    invertibility: verdict,
                })
            }
            InvertibilityVerdict::NotInvertible { zero } => Ok(PrimeClassification::Inconclusive {
                reason: format!("zero-set analysis found no zeros but a scan hit one at {zero:?}"),
            }),
            InvertibilityVerdict::Inconclusive { .. } => Ok(PrimeClassification::Inconclusive {
                reason: "zero-free on the window but no lower bound stabilized".into(),
            }),
        },
        1 => {
            let point = zeros[0].clone();
            // window fit for 1/|d| <= M (1+|n|)^m off the zero
            let mut samples = Vec::new();
            for n in window.points() {
                if n == point {
                    samples.push((n, None));
                    continue;
                }
                let a = crate::expr::abs_sq(d, &n)?.lower_rational();
                let sample = if a == BigRational::from_integer(0.into()) {
                    None
                } else {
                    Some(BigRational::one() / a)
                };
                samples.push((n, sample));
            }
            let stats = ShellExtremes::collect_max(window.radius(), samples.into_iter());
            Ok(PrimeClassification::FixedMaximal {
                point,
                reciprocal_fit: fit_upper_from_shells(&stats, m_cap),
            })
        }
        _ => {
            let first = zeros[0].clone();
            let second = zeros[1].clone();
            // a vanishes only at the second zero; b patches d to 1 there
            let witness_a = SeqExpr::dirac_complement(second.clone());
            let witness_b = SeqExpr::sum(d.clone(), SeqExpr::dirac(second.clone()))?;
            let product = SeqExpr::product(witness_a.clone(), witness_b.clone())?;
            let mut product_checked = true;
            if !d.contains_half_root() {
                for n in window.points() {
                    if eval(&product, &n)? != eval(d, &n)? {
                        product_checked = false;
                        break;
                    }
                }
            }
            Ok(PrimeClassification::NotPrime {
                witness_a,
                witness_b,
                obstruction_a: first,
                obstruction_b: second,
                product_checked,
            })
        }
    }
}

/// The separator witnessing that the fixed maximal ideals at two distinct
/// points are incomparable: zero everywhere except `n2`, hence in the ideal
/// at `n1` but not in the ideal at `n2`.
pub fn separator(n1: &LatticePoint, n2: &LatticePoint) -> Result<SeqExpr> {
    if n1.dim() != n2.dim() {
        return Err(Error::DimensionMismatch {
            expected: n1.dim(),
            found: n2.dim(),
        });
    }
    if n1 == n2 {
        return Err(Error::EqualPoints);
    }
    Ok(SeqExpr::dirac(n2.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::GrowthCertificate;

    fn pt(coords: &[i64]) -> LatticePoint {
        LatticePoint::new(coords.to_vec())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn maximal_membership_basics() {
        let k = pt(&[1, -2]);
        assert!(!fixed_maximal_member(&SeqExpr::dirac(k.clone()), &k).unwrap());
        assert!(fixed_maximal_member(&SeqExpr::dirac_complement(k.clone()), &k).unwrap());
    }

    #[test]
    fn proof_pattern_element_lies_in_the_ideal() {
        // g = 1 - f/f(k) vanishes at k for any f with f(k) != 0
        let k = pt(&[2]);
        let f = SeqExpr::sum(SeqExpr::coord(1, 0), SeqExpr::one(1)).unwrap();
        let (g, unit_check) = maximality_witness(&k, &f, &Window::new(1, 20)).unwrap();
        assert!(unit_check);
        assert!(fixed_maximal_member(&g, &k).unwrap());
    }

    #[test]
    fn witness_for_constants_and_point_masses() {
        let k = pt(&[0]);
        let two = SeqExpr::constant(1, GaussianRational::from_int(2));
        let (g, ok) = maximality_witness(&k, &two, &Window::new(1, 10)).unwrap();
        assert!(ok);
        // g = 1 - 2/2 = 0 everywhere
        for n in Window::new(1, 5).points() {
            assert!(eval(&g, &n).unwrap().is_zero());
        }
        let dirac = SeqExpr::dirac(k.clone());
        let (g2, ok2) = maximality_witness(&k, &dirac, &Window::new(1, 10)).unwrap();
        assert!(ok2);
        // g2 agrees with the complement pointwise
        let dc = SeqExpr::dirac_complement(k.clone());
        for n in Window::new(1, 10).points() {
            assert_eq!(eval(&g2, &n).unwrap(), eval(&dc, &n).unwrap());
        }
        // vanishing input is rejected
        let err = maximality_witness(&k, &dc, &Window::new(1, 5)).unwrap_err();
        assert!(matches!(err, Error::VanishesAt(_)));
    }

    #[test]
    fn point_mass_is_in_the_decay_ideal() {
        let f = SeqExpr::dirac(pt(&[2, 2]));
        match nonfixed_ideal_member(&f, &[1, 2, 3, 4, 5]).unwrap() {
            NonfixedVerdict::CertifiedYes { .. } => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unit_is_certified_out_at_the_first_index() {
        let f = SeqExpr::one(2);
        match nonfixed_ideal_member(&f, &[1, 2, 3]).unwrap() {
            NonfixedVerdict::CertifiedNo { witness_index, .. } => {
                assert_eq!(witness_index, Some(1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn finite_diagonal_support_is_certified() {
        let f = SeqExpr::finite_support(
            2,
            vec![
                (pt(&[1, 1]), GaussianRational::from_int(5)),
                (pt(&[2, 2]), GaussianRational::from_int(-1)),
                (pt(&[3, 3]), GaussianRational::from_int(7)),
            ],
        )
        .unwrap();
        match nonfixed_ideal_member(&f, &[1, 2, 3, 4, 5, 6]).unwrap() {
            NonfixedVerdict::CertifiedYes { .. } => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empirical_paths_for_opaque_expressions() {
        // identically zero, but written so no structural rule applies
        let x = SeqExpr::coord(1, 0);
        let zero = SeqExpr::sum(
            x.clone(),
            SeqExpr::scalar_mul(GaussianRational::from_int(-1), x.clone()),
        )
        .unwrap();
        match nonfixed_ideal_member(&zero, &[1, 2, 3, 4]).unwrap() {
            NonfixedVerdict::EmpiricalYes { trend } => {
                assert!(trend
                    .iter()
                    .all(|(_, v)| v == &BigRational::from_integer(0.into())));
            }
            other => panic!("unexpected {other:?}"),
        }
        // growing values along the diagonal with an opaque zero set
        let grow = SeqExpr::sum(x.clone(), x).unwrap();
        match nonfixed_ideal_member(&grow, &[1, 2, 3, 4]).unwrap() {
            NonfixedVerdict::EmpiricalNo { trend } => assert_eq!(trend.len(), 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_subsequences() {
        let f = SeqExpr::one(1);
        assert!(nonfixed_ideal_member(&f, &[]).is_err());
        assert!(nonfixed_ideal_member(&f, &[2, 2]).is_err());
        assert!(nonfixed_ideal_member(&f, &[0, 1]).is_err());
    }

    #[test]
    fn classifier_not_proper_for_units() {
        match classify_principal_prime(&SeqExpr::one(1), &Window::new(1, 20), 8).unwrap() {
            PrimeClassification::NotProper { .. } => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classifier_splits_two_zeros() {
        let k1 = pt(&[0]);
        let k2 = pt(&[3]);
        let d = SeqExpr::product(
            SeqExpr::dirac_complement(k1.clone()),
            SeqExpr::dirac_complement(k2.clone()),
        )
        .unwrap();
        match classify_principal_prime(&d, &Window::new(1, 50), 8).unwrap() {
            PrimeClassification::NotPrime {
                witness_a,
                witness_b,
                obstruction_a,
                obstruction_b,
                product_checked,
            } => {
                assert!(product_checked);
                assert_eq!(obstruction_a, k1);
                assert_eq!(obstruction_b, k2);
                // a(k1) = 1 while d(k1) = 0; b(k2) = 1 while d(k2) = 0
                assert_eq!(eval(&witness_a, &k1).unwrap(), GaussianRational::one());
                assert_eq!(eval(&witness_b, &k2).unwrap(), GaussianRational::one());
                // the product recovers d on a window
                let prod = SeqExpr::product(witness_a, witness_b).unwrap();
                for n in Window::new(1, 50).points() {
                    assert_eq!(eval(&prod, &n).unwrap(), eval(&d, &n).unwrap());
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classifier_single_zero_is_fixed_maximal() {
        let n_star = pt(&[1, 0]);
        let d = SeqExpr::dirac_complement(n_star.clone());
        match classify_principal_prime(&d, &Window::new(2, 20), 8).unwrap() {
            PrimeClassification::FixedMaximal {
                point,
                reciprocal_fit,
            } => {
                assert_eq!(point, n_star);
                // |d| = 1 off the zero, so the reciprocal fits (1, 0)
                match reciprocal_fit {
                    FitOutcome::Fitted(c) => {
                        assert_eq!(c, GrowthCertificate::new(rat(1, 1), 0));
                    }
                    other => panic!("unexpected {other:?}"),
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn classifier_requires_exact_zero_sets() {
        let poly = SeqExpr::coord(1, 0);
        match classify_principal_prime(&poly, &Window::new(1, 10), 8).unwrap() {
            PrimeClassification::Inconclusive { .. } => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn separator_memberships() {
        let n1 = pt(&[0, 0]);
        let n2 = pt(&[1, 0]);
        let s = separator(&n1, &n2).unwrap();
        assert!(fixed_maximal_member(&s, &n1).unwrap());
        assert!(!fixed_maximal_member(&s, &n2).unwrap());
        let mirrored = separator(&n2, &n1).unwrap();
        assert!(fixed_maximal_member(&mirrored, &n2).unwrap());
        assert!(!fixed_maximal_member(&mirrored, &n1).unwrap());
        assert!(matches!(separator(&n1, &n1), Err(Error::EqualPoints)));
    }
}
