//! Ring-theoretic decision procedures: divisibility with cofactors,
//! invertibility, magnitude-max GCDs, ideal membership with explicit
//! cofactor witnesses, and principalization.
//!
//! Verdicts are three-valued. Negative answers (`RefutedAtZero`,
//! `NotMember`, `NotInvertible`) are exact, window-independent disproofs.
//! Positive answers carry a scope tag: `global` only when a structural rule
//! certifies the bound on all of `Z^d`, otherwise `window`.

use crate::error::{Error, Result};
use crate::expr::{abs_sq, is_zero_at, zero_set, Evaluator, FirstZero, Node, SeqExpr, ZeroSetInfo};
use crate::growth::{
    fit_lower_from_shells, fit_upper_from_shells, infer_certificate, infer_lower_certificate,
    FitOutcome, GrowthCertificate, LowerCertificate, LowerFitOutcome, Scope, ShellExtremes,
};
use crate::lattice::{canonical_points, LatticePoint, Window};
use num_rational::BigRational;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub enum DivisibilityVerdict {
    Divides {
        cofactor: SeqExpr,
        certificate: GrowthCertificate,
        scope: Scope,
    },
    /// Exact disproof: the candidate divisor vanishes here but the dividend
    /// does not.
    RefutedAtZero { point: LatticePoint },
    /// The ratio grows past every degree up to the cap on the window.
    RefutedEmpirically {
        trend: Vec<(LatticePoint, BigRational)>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum InvertibilityVerdict {
    Invertible {
        certificate: LowerCertificate,
        inverse: SeqExpr,
        scope: Scope,
    },
    NotInvertible {
        zero: LatticePoint,
    },
    Inconclusive {
        trend: Vec<(LatticePoint, BigRational)>,
    },
}

/// Cofactors witnessing `f = sum_k g_k f_k`, with the membership growth
/// certificate for `|f| <= M (1+|n|)^m sum_k |f_k|`.
#[derive(Clone, Debug, PartialEq)]
pub struct BezoutWitness {
    pub cofactors: Vec<SeqExpr>,
    pub certificate: GrowthCertificate,
    pub scope: Scope,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MembershipVerdict {
    Member(BezoutWitness),
    /// Exact disproof: every generator vanishes here but `f` does not.
    NotMember {
        point: LatticePoint,
    },
    Inconclusive {
        reason: String,
    },
}

/// Principalization report: the magnitude-max generator, the divisibility of
/// each input by it, and its membership in the input ideal.
#[derive(Clone, Debug)]
pub struct PrincipalReport {
    pub generator: SeqExpr,
    pub forward: Vec<DivisibilityVerdict>,
    pub reverse: MembershipVerdict,
}

/// The division cofactor `f/g` with zero fill at zeros of `g`.
pub fn cofactor(f: &SeqExpr, g: &SeqExpr) -> Result<SeqExpr> {
    SeqExpr::quotient(f.clone(), g.clone())
}

/// Outcome of checking that `f` vanishes on a decidable zero set.
enum VanishCheck {
    Proven,
    Refuted(LatticePoint),
    Undecided,
}

/// Does `f` vanish everywhere `zs` does? Exact where decidable.
fn vanishes_on(zs: &ZeroSetInfo, f: &SeqExpr) -> VanishCheck {
    let dim = f.dim();
    match zs {
        ZeroSetInfo::ExactFinite(points) => {
            let mut undecided = false;
            for p in points {
                match is_zero_at(f, p) {
                    Ok(true) => {}
                    Ok(false) => return VanishCheck::Refuted(p.clone()),
                    Err(_) => undecided = true,
                }
            }
            if undecided {
                VanishCheck::Undecided
            } else {
                VanishCheck::Proven
            }
        }
        ZeroSetInfo::ExactCofinite(nonzero_of_g) => match zero_set(f) {
            ZeroSetInfo::ExactCofinite(nonzero_of_f) => {
                match nonzero_of_f.iter().find(|p| !nonzero_of_g.contains(*p)) {
                    Some(p) => VanishCheck::Refuted(p.clone()),
                    None => VanishCheck::Proven,
                }
            }
            zf @ (ZeroSetInfo::ExactFinite(_) | ZeroSetInfo::Pattern(_)) => {
                // the zero set of f misses cofinitely many points of g's
                // zero set; exhibit the first one
                let p = canonical_points(dim)
                    .find(|p| !nonzero_of_g.contains(p) && zf.contains(p) == Some(false))
                    .expect("a cofinite set meets the complement of a sparse set");
                VanishCheck::Refuted(p)
            }
            ZeroSetInfo::Unknown => VanishCheck::Undecided,
        },
        ZeroSetInfo::Pattern(pat) => match zero_set(f) {
            ZeroSetInfo::ExactCofinite(nonzero_of_f) => {
                match nonzero_of_f.iter().find(|p| pat.contains(p)) {
                    Some(p) => VanishCheck::Refuted(p.clone()),
                    None => VanishCheck::Proven,
                }
            }
            ZeroSetInfo::Pattern(pf) => {
                if pat.order() <= pf.order() {
                    // differences are confined to the finitely many patches
                    for p in pat.exception_points().chain(pf.exception_points()) {
                        if pat.contains(&p) && !pf.contains(&p) {
                            return VanishCheck::Refuted(p);
                        }
                    }
                    VanishCheck::Proven
                } else {
                    // a higher-order pattern has strictly longer runs; look
                    // for a run point just past the lower order's bound
                    for k in 1..=62u32 {
                        let base = 1i64 << k;
                        let Some(short) = crate::expr::mask_run_bound(k, pf.order()) else {
                            continue;
                        };
                        let Some(j) = short.checked_add(1) else {
                            continue;
                        };
                        if j > i64::MAX as u64 || base.checked_add(j as i64).is_none() {
                            continue;
                        }
                        let p = LatticePoint::axis(dim, 0, base + j as i64);
                        if pat.contains(&p) && !pf.contains(&p) {
                            return VanishCheck::Refuted(p);
                        }
                    }
                    VanishCheck::Undecided
                }
            }
            ZeroSetInfo::ExactFinite(zf) => {
                // f vanishes only finitely often while the pattern is infinite
                for k in 0..=62u32 {
                    let p = LatticePoint::axis(dim, 0, 1i64 << k);
                    if pat.contains(&p) && !zf.contains(&p) {
                        return VanishCheck::Refuted(p);
                    }
                }
                VanishCheck::Undecided
            }
            ZeroSetInfo::Unknown => VanishCheck::Undecided,
        },
        ZeroSetInfo::Unknown => VanishCheck::Undecided,
    }
}

/// Window fallback: the first window point where `g` vanishes and `f` does
/// not (an exact refutation even though it was found by scanning).
fn scan_refutation(g: &SeqExpr, f: &SeqExpr, window: &Window) -> Option<LatticePoint> {
    let chunks = crate::lattice::map_window_chunks(window, |chunk| {
        chunk
            .iter()
            .find(|n| matches!(is_zero_at(g, n), Ok(true)) && matches!(is_zero_at(f, n), Ok(false)))
            .cloned()
    });
    chunks.into_iter().flatten().next()
}

/// Does `g` divide `f`? Positive verdicts carry the quotient cofactor and a
/// growth certificate for the ratio.
pub fn divides(
    g: &SeqExpr,
    f: &SeqExpr,
    window: &Window,
    m_cap: u32,
) -> Result<DivisibilityVerdict> {
    if g.dim() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: f.dim(),
        });
    }
    let zs_g = zero_set(g);
    let vanish = vanishes_on(&zs_g, f);
    match vanish {
        VanishCheck::Refuted(p) => return Ok(DivisibilityVerdict::RefutedAtZero { point: p }),
        VanishCheck::Undecided => {
            if let Some(p) = scan_refutation(g, f, window) {
                return Ok(DivisibilityVerdict::RefutedAtZero { point: p });
            }
        }
        VanishCheck::Proven => {}
    }
    let cofactor = SeqExpr::quotient(f.clone(), g.clone())?;

    // structural global certificates
    let zero_side_proven = matches!(vanish, VanishCheck::Proven);
    if let Ok(f_cert) = infer_certificate(f) {
        if let Some(lower) = infer_lower_certificate(g) {
            // |f/g| <= (M_f / delta) (1+|n|)^(m_f + p)
            let bound = f_cert.bound / lower.delta;
            return Ok(DivisibilityVerdict::Divides {
                cofactor,
                certificate: GrowthCertificate::new(bound, f_cert.degree + lower.degree),
                scope: Scope::Global,
            });
        }
        if zero_side_proven && g.is_unit_magnitude() {
            // off the zeros of g the ratio is |f| itself
            return Ok(DivisibilityVerdict::Divides {
                cofactor,
                certificate: f_cert,
                scope: Scope::Global,
            });
        }
    }

    // window fit of the squared ratio |f|^2 / |g|^2 over points with g != 0
    let chunk_results = crate::lattice::map_window_chunks(window, |chunk| {
        chunk
            .iter()
            .map(|n| -> Result<(LatticePoint, Option<BigRational>)> {
                let sample = match is_zero_at(g, n) {
                    Ok(true) => None,
                    Ok(false) => {
                        let fa = abs_sq(f, n)?.upper_rational();
                        let ga = abs_sq(g, n)?.lower_rational();
                        Some(fa / ga)
                    }
                    Err(_) => None,
                };
                Ok((n.clone(), sample))
            })
            .collect::<Result<Vec<_>>>()
    });
    let mut samples = Vec::new();
    for chunk in chunk_results {
        samples.extend(chunk?);
    }
    let stats = ShellExtremes::collect_max(window.radius(), samples.into_iter());
    match fit_upper_from_shells(&stats, m_cap) {
        FitOutcome::Fitted(certificate) => Ok(DivisibilityVerdict::Divides {
            cofactor,
            certificate,
            scope: Scope::Window(window.radius()),
        }),
        FitOutcome::NoFit { trend } => Ok(DivisibilityVerdict::RefutedEmpirically { trend }),
    }
}

/// Invertibility test, with the reciprocal expression on success.
pub fn is_invertible(f: &SeqExpr, window: &Window, m_cap: u32) -> Result<InvertibilityVerdict> {
    let zs = zero_set(f);
    match zs.first_zero(f.dim()) {
        FirstZero::First(p) => return Ok(InvertibilityVerdict::NotInvertible { zero: p }),
        FirstZero::NoZeros => {}
        FirstZero::Undecided => {
            for n in window.points() {
                if matches!(is_zero_at(f, &n), Ok(true)) {
                    return Ok(InvertibilityVerdict::NotInvertible { zero: n });
                }
            }
        }
    }
    let inverse = SeqExpr::quotient(SeqExpr::one(f.dim()), f.clone())?;
    if let Some(certificate) = infer_lower_certificate(f) {
        return Ok(InvertibilityVerdict::Invertible {
            certificate,
            inverse,
            scope: Scope::Global,
        });
    }
    let mut samples = Vec::new();
    for n in window.points() {
        samples.push((n.clone(), Some(abs_sq(f, &n)?.lower_rational())));
    }
    let stats = ShellExtremes::collect_min(window.radius(), samples.into_iter());
    match fit_lower_from_shells(&stats, m_cap) {
        LowerFitOutcome::Fitted(certificate) => Ok(InvertibilityVerdict::Invertible {
            certificate,
            inverse,
            scope: Scope::Window(window.radius()),
        }),
        LowerFitOutcome::NoFit { trend } => Ok(InvertibilityVerdict::Inconclusive { trend }),
    }
}

/// The magnitude-max greatest common divisor representative.
pub fn gcd(generators: &[SeqExpr]) -> Result<SeqExpr> {
    SeqExpr::magnitude_max_sq(generators.to_vec())
}

/// Ideal membership with explicit cofactors.
///
/// On `Member`, the witness satisfies `sum_k g_k f_k = f` with exact rational
/// equality at every window point (verified here before returning).
pub fn ideal_member(
    f: &SeqExpr,
    generators: &[SeqExpr],
    window: &Window,
    m_cap: u32,
) -> Result<MembershipVerdict> {
    if generators.is_empty() {
        return Err(Error::EmptyList);
    }
    let dim = f.dim();
    for g in generators {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
    }

    // exact disproof search on the common zero set
    let mut common = zero_set(&generators[0]);
    for g in &generators[1..] {
        common = common.intersect(&zero_set(g));
    }
    match vanishes_on(&common, f) {
        VanishCheck::Refuted(p) => return Ok(MembershipVerdict::NotMember { point: p }),
        VanishCheck::Undecided => {
            let chunks = crate::lattice::map_window_chunks(window, |chunk| {
                chunk
                    .iter()
                    .find(|n| {
                        generators
                            .iter()
                            .all(|g| matches!(is_zero_at(g, n), Ok(true)))
                            && matches!(is_zero_at(f, n), Ok(false))
                    })
                    .cloned()
            });
            if let Some(n) = chunks.into_iter().flatten().next() {
                return Ok(MembershipVerdict::NotMember { point: n });
            }
        }
        VanishCheck::Proven => {}
    }

    // cofactors g_k = conj(f_k) f / Q with Q = sum_j conj(f_j) f_j, shared
    // so the verification pass can memoize
    let f_arc = Arc::new(f.clone());
    let gen_arcs: Vec<Arc<SeqExpr>> = generators.iter().map(|g| Arc::new(g.clone())).collect();
    let mut q_terms: Vec<Arc<SeqExpr>> = Vec::new();
    for g in &gen_arcs {
        q_terms.push(Arc::new(SeqExpr::product_shared(
            Arc::new(SeqExpr::conj_shared(g.clone())),
            g.clone(),
        )?));
    }
    let mut q = q_terms[0].clone();
    for t in &q_terms[1..] {
        q = Arc::new(SeqExpr::sum_shared(q, t.clone())?);
    }
    let cofactors: Vec<SeqExpr> = gen_arcs
        .iter()
        .map(|g| {
            let numerator =
                SeqExpr::product_shared(Arc::new(SeqExpr::conj_shared(g.clone())), f_arc.clone())?;
            SeqExpr::quotient_shared(Arc::new(numerator), q.clone())
        })
        .collect::<Result<_>>()?;

    // exact verification of the identity on the window, collecting squared
    // ratio samples |f|^2 / Q for the certificate fit in the same pass;
    // chunks run in parallel and merge in canonical order
    let mut refs: Vec<&SeqExpr> = Vec::with_capacity(1 + 2 * generators.len());
    refs.push(&f_arc);
    for g in &gen_arcs {
        refs.push(g);
    }
    for c in &cofactors {
        refs.push(c);
    }
    let k = generators.len();
    type ChunkResult = Result<(
        Option<LatticePoint>,
        Vec<(LatticePoint, Option<BigRational>)>,
    )>;
    let chunk_results = crate::lattice::map_window_chunks(window, |chunk| -> ChunkResult {
        let mut evaluator = Evaluator::new();
        let mut local = Vec::with_capacity(chunk.len());
        for n in chunk {
            let vals = evaluator.eval_all(&refs, n)?;
            let f_val = &vals[0];
            let mut lhs = crate::number::GaussianRational::zero();
            let mut q_val = crate::number::Rat::ZERO;
            for i in 0..k {
                lhs = &lhs + &(&vals[1 + i] * &vals[1 + k + i]);
                q_val = q_val.add(&vals[1 + i].magnitude_sq_rat());
            }
            if &lhs != f_val {
                return Ok((Some(n.clone()), local));
            }
            let sample = f_val
                .magnitude_sq_rat()
                .div(&q_val)
                .map(|ratio| ratio.to_big());
            local.push((n.clone(), sample));
        }
        Ok((None, local))
    });
    let mut samples = Vec::new();
    for chunk in chunk_results {
        let (mismatch, local) = chunk?;
        samples.extend(local);
        if let Some(n) = mismatch {
            return Ok(MembershipVerdict::Inconclusive {
                reason: format!("cofactor identity failed at {n:?}"),
            });
        }
    }

    // membership certificate: structural global cases first
    if let Some(certificate) = global_membership_certificate(f, generators) {
        return Ok(MembershipVerdict::Member(BezoutWitness {
            cofactors,
            certificate,
            scope: Scope::Global,
        }));
    }
    let stats = ShellExtremes::collect_max(window.radius(), samples.into_iter());
    match fit_upper_from_shells(&stats, m_cap) {
        FitOutcome::Fitted(certificate) => Ok(MembershipVerdict::Member(BezoutWitness {
            cofactors,
            certificate,
            scope: Scope::Window(window.radius()),
        })),
        FitOutcome::NoFit { trend } => Ok(MembershipVerdict::Inconclusive {
            reason: format!(
                "no membership bound up to degree {m_cap} stabilized on the window; boundary ratios {:?}",
                trend
                    .iter()
                    .map(|(p, r)| format!("{p:?}: {r}"))
                    .collect::<Vec<_>>()
            ),
        }),
    }
}

/// Structural cases where `|f| <= M (1+|n|)^m sum_k |f_k|` holds globally.
fn global_membership_certificate(f: &SeqExpr, generators: &[SeqExpr]) -> Option<GrowthCertificate> {
    let one = BigRational::from_integer(1.into());
    if generators.iter().any(|g| g == f) {
        return Some(GrowthCertificate::new(one, 0));
    }
    if matches!(f.node(), Node::Const(c) if c.is_zero()) {
        return Some(GrowthCertificate::new(one, 0));
    }
    // f is the magnitude-max of the generators:
    // max_j |f_j|^2 <= (max_j M_j) (1+|n|)^(max_j m_j) sum_k |f_k|
    if let Node::MagnitudeMaxSq(args) = f.node() {
        if args.len() == generators.len()
            && args.iter().zip(generators).all(|(a, g)| a.as_ref() == g)
        {
            let mut bound = one.clone();
            let mut degree = 0;
            for g in generators {
                let c = infer_certificate(g).ok()?;
                bound = bound.max(c.bound);
                degree = degree.max(c.degree);
            }
            return Some(GrowthCertificate::new(bound, degree));
        }
    }
    // some generator is structurally bounded below
    let f_cert = infer_certificate(f).ok()?;
    for g in generators {
        if let Some(lower) = infer_lower_certificate(g) {
            return Some(GrowthCertificate::new(
                f_cert.bound / lower.delta,
                f_cert.degree + lower.degree,
            ));
        }
    }
    None
}

/// Principalize a finitely generated ideal via the magnitude-max GCD.
pub fn principal_generator(
    generators: &[SeqExpr],
    window: &Window,
    m_cap: u32,
) -> Result<PrincipalReport> {
    let generator = gcd(generators)?;
    let forward = generators
        .iter()
        .map(|g| divides(&generator, g, window, m_cap))
        .collect::<Result<Vec<_>>>()?;
    let reverse = ideal_member(&generator, generators, window, m_cap)?;
    Ok(PrincipalReport {
        generator,
        forward,
        reverse,
    })
}
