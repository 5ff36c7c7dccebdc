//! Growth certificates and their audits.
//!
//! An upper certificate `(M, m)` claims `|f(n)| <= M (1 + |n|_1)^m` for all
//! `n`; a lower certificate `(delta, m)` claims `|f(n)| >= delta (1 + |n|_1)^-m`.
//! Both are checked in squared form so every comparison stays rational.
//! Structural inference produces certificates valid on all of `Z^d`;
//! window fits produce certificates that are explicitly window-scoped and
//! never silently promoted to global claims.

use crate::error::{Error, Result};
use crate::expr::{abs_sq, Node, SeqExpr};
use crate::lattice::{LatticePoint, Window};
use crate::number::{one_plus_norm_pow, rat_sqrt_lower, rat_sqrt_upper};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Whether a claim holds on all of `Z^d` or only on an audited window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Global,
    Window(u64),
}

impl Scope {
    pub fn is_global(&self) -> bool {
        matches!(self, Scope::Global)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Scope::Global => "global",
            Scope::Window(_) => "window",
        }
    }
}

/// Upper growth certificate: `|f(n)| <= bound * (1 + |n|_1)^degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthCertificate {
    pub bound: BigRational,
    pub degree: u32,
}

impl GrowthCertificate {
    pub fn new(bound: BigRational, degree: u32) -> Self {
        assert!(bound.is_positive(), "certificate bound must be positive");
        GrowthCertificate { bound, degree }
    }

    /// `bound^2 * (1 + norm)^(2 * degree)`: the squared right-hand side.
    pub fn rhs_sq(&self, norm: u64) -> BigRational {
        &(&self.bound * &self.bound)
            * &BigRational::from_integer(one_plus_norm_pow(norm, 2 * self.degree))
    }
}

/// Lower certificate: `|f(n)| >= delta * (1 + |n|_1)^-degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerCertificate {
    pub delta: BigRational,
    pub degree: u32,
}

impl LowerCertificate {
    pub fn new(delta: BigRational, degree: u32) -> Self {
        assert!(delta.is_positive(), "certificate delta must be positive");
        LowerCertificate { delta, degree }
    }

    /// `delta^2 / (1 + norm)^(2 * degree)`.
    pub fn rhs_sq(&self, norm: u64) -> BigRational {
        &(&self.delta * &self.delta)
            / &BigRational::from_integer(one_plus_norm_pow(norm, 2 * self.degree))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AuditVerdict {
    Validated,
    Falsified {
        point: LatticePoint,
        lhs_sq: BigRational,
        rhs_sq: BigRational,
    },
}

/// Outcome of checking a certificate at every point of a window. The
/// reported counterexample is always the first in canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub verdict: AuditVerdict,
    pub samples: u64,
    pub window: u64,
}

impl AuditReport {
    pub fn validated(&self) -> bool {
        matches!(self.verdict, AuditVerdict::Validated)
    }
}

/// Structural certificate inference, valid on all of `Z^d`.
///
/// Quotients are refused: their growth is conditional and must come from an
/// audit or a divisibility witness.
pub fn infer_certificate(f: &SeqExpr) -> Result<GrowthCertificate> {
    let one = BigRational::one();
    let cert = match f.node() {
        Node::Const(c) => GrowthCertificate::new(rat_sqrt_upper(&c.magnitude_sq()).max(one), 0),
        Node::CoordPoly(p) => {
            let mut sum = BigRational::zero();
            for (_, coeff) in p.terms() {
                sum += rat_sqrt_upper(&coeff.magnitude_sq());
            }
            GrowthCertificate::new(sum.max(one), p.total_degree())
        }
        Node::Dirac(_)
        | Node::DiracComplement(_)
        | Node::PatternMask(_)
        | Node::InvNormPower(_) => GrowthCertificate::new(one, 0),
        Node::FiniteSupport(map) => {
            let mut best = BigRational::zero();
            for v in map.values() {
                best = best.max(rat_sqrt_upper(&v.magnitude_sq()));
            }
            GrowthCertificate::new(best.max(one), 0)
        }
        Node::Sum(l, r) => {
            let a = infer_certificate(l)?;
            let b = infer_certificate(r)?;
            GrowthCertificate::new(a.bound + b.bound, a.degree.max(b.degree))
        }
        Node::Product(l, r) => {
            let a = infer_certificate(l)?;
            let b = infer_certificate(r)?;
            GrowthCertificate::new(a.bound * b.bound, a.degree + b.degree)
        }
        Node::Conj(e) => infer_certificate(e)?,
        Node::ScalarMul(c, e) => {
            if c.is_zero() {
                GrowthCertificate::new(one, 0)
            } else {
                let inner = infer_certificate(e)?;
                GrowthCertificate::new(
                    rat_sqrt_upper(&c.magnitude_sq()) * inner.bound,
                    inner.degree,
                )
            }
        }
        Node::Shift(v, e) => {
            let inner = infer_certificate(e)?;
            let inflate = BigRational::from_integer(one_plus_norm_pow(v.norm1(), inner.degree));
            GrowthCertificate::new(inner.bound * inflate, inner.degree)
        }
        Node::Quotient(_, _) => return Err(Error::QuotientNotInferable),
        Node::MagnitudeMaxSq(args) => {
            // node values are squared magnitudes, so the bound squares and
            // the degree doubles
            let mut bound = one.clone();
            let mut degree = 0u32;
            for a in args {
                let c = infer_certificate(a)?;
                bound = bound.max(c.bound);
                degree = degree.max(c.degree);
            }
            GrowthCertificate::new(&bound * &bound, 2 * degree)
        }
        Node::HalfRoot(e) => {
            let inner = infer_certificate(e)?;
            GrowthCertificate::new(inner.bound.max(one), inner.degree.div_ceil(2))
        }
    };
    Ok(cert)
}

/// Structural lower-bound inference, valid on all of `Z^d`; `None` when the
/// expression class admits zeros or no rule applies.
pub fn infer_lower_certificate(f: &SeqExpr) -> Option<LowerCertificate> {
    let one = BigRational::one;
    match f.node() {
        Node::Const(c) => {
            if c.is_zero() {
                None
            } else {
                let delta = rat_sqrt_lower(&c.magnitude_sq());
                delta.is_positive().then(|| LowerCertificate::new(delta, 0))
            }
        }
        Node::CoordPoly(p) => {
            let c = p.constant_value()?;
            if c.is_zero() {
                return None;
            }
            let delta = rat_sqrt_lower(&c.magnitude_sq());
            delta.is_positive().then(|| LowerCertificate::new(delta, 0))
        }
        Node::InvNormPower(power) => Some(LowerCertificate::new(one(), *power)),
        Node::Product(l, r) => {
            let a = infer_lower_certificate(l)?;
            let b = infer_lower_certificate(r)?;
            Some(LowerCertificate::new(
                a.delta * b.delta,
                a.degree + b.degree,
            ))
        }
        Node::Conj(e) => infer_lower_certificate(e),
        Node::ScalarMul(c, e) => {
            if c.is_zero() {
                return None;
            }
            let scale = rat_sqrt_lower(&c.magnitude_sq());
            if !scale.is_positive() {
                return None;
            }
            let inner = infer_lower_certificate(e)?;
            Some(LowerCertificate::new(scale * inner.delta, inner.degree))
        }
        Node::Shift(v, e) => {
            let inner = infer_lower_certificate(e)?;
            let inflate = BigRational::from_integer(one_plus_norm_pow(v.norm1(), inner.degree));
            Some(LowerCertificate::new(inner.delta / inflate, inner.degree))
        }
        Node::HalfRoot(e) => {
            let inner = infer_lower_certificate(e)?;
            Some(LowerCertificate::new(
                inner.delta.min(one()),
                inner.degree.div_ceil(2),
            ))
        }
        Node::MagnitudeMaxSq(args) => {
            // value >= |arg_k|^2 for every k; pick the best available arm
            let mut best: Option<LowerCertificate> = None;
            for a in args {
                if let Some(c) = infer_lower_certificate(a) {
                    let squared = LowerCertificate::new(&c.delta * &c.delta, 2 * c.degree);
                    best = Some(match best {
                        None => squared,
                        Some(b) => {
                            if (squared.degree, &b.delta) < (b.degree, &squared.delta) {
                                squared
                            } else {
                                b
                            }
                        }
                    });
                }
            }
            best
        }
        _ => None,
    }
}

/// Check `|f(n)|^2 <= M^2 (1+|n|)^(2m)` at every window point.
pub fn audit_upper(f: &SeqExpr, cert: &GrowthCertificate, window: &Window) -> Result<AuditReport> {
    let mut samples = 0u64;
    for n in window.points() {
        samples += 1;
        let lhs = abs_sq(f, &n)?;
        let rhs = cert.rhs_sq(n.norm1());
        if lhs.cmp_rational(&rhs) == Ordering::Greater {
            return Ok(AuditReport {
                verdict: AuditVerdict::Falsified {
                    lhs_sq: lhs.upper_rational(),
                    rhs_sq: rhs,
                    point: n,
                },
                samples,
                window: window.radius(),
            });
        }
    }
    Ok(AuditReport {
        verdict: AuditVerdict::Validated,
        samples,
        window: window.radius(),
    })
}

/// Check `|f(n)|^2 >= delta^2 (1+|n|)^(-2m)` at every window point.
pub fn audit_lower(f: &SeqExpr, cert: &LowerCertificate, window: &Window) -> Result<AuditReport> {
    let mut samples = 0u64;
    for n in window.points() {
        samples += 1;
        let lhs = abs_sq(f, &n)?;
        let rhs = cert.rhs_sq(n.norm1());
        if lhs.cmp_rational(&rhs) == Ordering::Less {
            return Ok(AuditReport {
                verdict: AuditVerdict::Falsified {
                    lhs_sq: lhs.upper_rational(),
                    rhs_sq: rhs,
                    point: n,
                },
                samples,
                window: window.radius(),
            });
        }
    }
    Ok(AuditReport {
        verdict: AuditVerdict::Validated,
        samples,
        window: window.radius(),
    })
}

/// Per-shell extremes of a nonnegative rational sample stream.
#[derive(Clone, Debug)]
pub struct ShellExtremes {
    radius: u64,
    /// for each norm `t <= radius`: the extreme sampled value and its
    /// canonically first witness, or `None` when the shell had no samples
    shells: Vec<Option<(BigRational, LatticePoint)>>,
    samples: u64,
}

impl ShellExtremes {
    /// Collect per-shell maxima. `None` samples are skipped.
    pub fn collect_max(
        radius: u64,
        samples: impl Iterator<Item = (LatticePoint, Option<BigRational>)>,
    ) -> Self {
        Self::collect(radius, samples, Ordering::Greater)
    }

    /// Collect per-shell minima.
    pub fn collect_min(
        radius: u64,
        samples: impl Iterator<Item = (LatticePoint, Option<BigRational>)>,
    ) -> Self {
        Self::collect(radius, samples, Ordering::Less)
    }

    fn collect(
        radius: u64,
        samples: impl Iterator<Item = (LatticePoint, Option<BigRational>)>,
        keep: Ordering,
    ) -> Self {
        let mut shells: Vec<Option<(BigRational, LatticePoint)>> = vec![None; radius as usize + 1];
        let mut count = 0u64;
        for (p, v) in samples {
            let Some(v) = v else { continue };
            count += 1;
            let slot = &mut shells[p.norm1() as usize];
            match slot {
                None => *slot = Some((v, p)),
                Some((cur, _)) => {
                    if v.cmp(cur) == keep {
                        *slot = Some((v, p));
                    }
                }
            }
        }
        ShellExtremes {
            radius,
            shells,
            samples: count,
        }
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    fn extreme_scaled<F>(
        &self,
        up_to: u64,
        scale: F,
        keep: Ordering,
    ) -> Option<(BigRational, &LatticePoint)>
    where
        F: Fn(u64, &BigRational) -> BigRational,
    {
        let mut best: Option<(BigRational, &LatticePoint)> = None;
        for (t, slot) in self.shells.iter().enumerate().take(up_to as usize + 1) {
            let Some((v, p)) = slot else { continue };
            let scaled = scale(t as u64, v);
            match &best {
                None => best = Some((scaled, p)),
                Some((cur, _)) => {
                    if scaled.cmp(cur) == keep {
                        best = Some((scaled, p));
                    }
                }
            }
        }
        best
    }
}

/// Result of an empirical certificate fit. Fits are window-scoped by
/// construction; a trend of scaled boundary samples is reported when no
/// degree up to the cap stabilizes.
#[derive(Clone, Debug, PartialEq)]
pub enum FitOutcome {
    Fitted(GrowthCertificate),
    NoFit {
        trend: Vec<(LatticePoint, BigRational)>,
    },
}

/// Result of an empirical lower-bound fit.
#[derive(Clone, Debug, PartialEq)]
pub enum LowerFitOutcome {
    Fitted(LowerCertificate),
    NoFit {
        trend: Vec<(LatticePoint, BigRational)>,
    },
}

/// Fit `(M, m)` to per-shell maxima of squared samples: the smallest
/// `m <= m_cap` whose maximal squared ratio is either at most 1 or not
/// boundary-driven (at most twice the inner-half maximum), with `M` the
/// exact maximal ratio rounded up to a rational square root.
pub fn fit_upper_from_shells(stats: &ShellExtremes, m_cap: u32) -> FitOutcome {
    let radius = stats.radius;
    let one = BigRational::one();
    for degree in 0..=m_cap {
        let scale = |t: u64, v: &BigRational| -> BigRational {
            v / BigRational::from_integer(one_plus_norm_pow(t, 2 * degree))
        };
        let Some((full, _)) = stats.extreme_scaled(radius, scale, Ordering::Greater) else {
            // no samples at all: the trivial certificate fits
            return FitOutcome::Fitted(GrowthCertificate::new(one, 0));
        };
        let half = stats
            .extreme_scaled(radius / 2, scale, Ordering::Greater)
            .map(|(v, _)| v)
            .unwrap_or_else(BigRational::zero);
        let threshold = one.clone().max(&half + &half);
        if full <= threshold {
            let bound = if full.is_zero() {
                one
            } else {
                rat_sqrt_upper(&full)
            };
            return FitOutcome::Fitted(GrowthCertificate::new(bound, degree));
        }
    }
    FitOutcome::NoFit {
        trend: trend_of(stats, m_cap, Ordering::Greater),
    }
}

/// Fit `(delta, m)`: the smallest `m <= m_cap` whose minimal scaled value is
/// either at least 1 or not boundary-driven (at least half the inner-half
/// minimum), with `delta` the exact minimum rounded down.
pub fn fit_lower_from_shells(stats: &ShellExtremes, m_cap: u32) -> LowerFitOutcome {
    let radius = stats.radius;
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    for degree in 0..=m_cap {
        let scale = |t: u64, v: &BigRational| -> BigRational {
            v * BigRational::from_integer(one_plus_norm_pow(t, 2 * degree))
        };
        let Some((full, _)) = stats.extreme_scaled(radius, scale, Ordering::Less) else {
            break;
        };
        if full.is_zero() {
            break; // a zero sample defeats every lower bound
        }
        let half = stats
            .extreme_scaled(radius / 2, scale, Ordering::Less)
            .map(|(v, _)| v)
            .unwrap_or_else(|| full.clone());
        let threshold = one.clone().min(half / &two);
        if full >= threshold {
            let delta = rat_sqrt_lower(&full);
            if delta.is_positive() {
                return LowerFitOutcome::Fitted(LowerCertificate::new(delta, degree));
            }
        }
    }
    LowerFitOutcome::NoFit {
        trend: trend_of(stats, m_cap, Ordering::Less),
    }
}

fn trend_of(
    stats: &ShellExtremes,
    degree: u32,
    keep: Ordering,
) -> Vec<(LatticePoint, BigRational)> {
    let mut out = Vec::new();
    for (t, slot) in stats.shells.iter().enumerate().rev().take(8) {
        let Some((v, p)) = slot else { continue };
        let scaled = match keep {
            Ordering::Greater => {
                v / BigRational::from_integer(one_plus_norm_pow(t as u64, 2 * degree))
            }
            _ => v * BigRational::from_integer(one_plus_norm_pow(t as u64, 2 * degree)),
        };
        out.push((p.clone(), scaled));
    }
    out.reverse();
    out
}

/// Empirical upper fit for the expression itself over a window.
pub fn fit_certificate(f: &SeqExpr, window: &Window, m_cap: u32) -> Result<FitOutcome> {
    let mut samples = Vec::new();
    for n in window.points() {
        let v = abs_sq(f, &n)?.upper_rational();
        samples.push((n, Some(v)));
    }
    let stats = ShellExtremes::collect_max(window.radius(), samples.into_iter());
    Ok(fit_upper_from_shells(&stats, m_cap))
}

/// Empirical lower fit over a window, optionally excluding one point.
pub fn fit_lower(
    f: &SeqExpr,
    window: &Window,
    m_cap: u32,
    exclude: Option<&LatticePoint>,
) -> Result<LowerFitOutcome> {
    let mut samples = Vec::new();
    for n in window.points() {
        if exclude == Some(&n) {
            continue;
        }
        let v = abs_sq(f, &n)?.upper_rational();
        samples.push((n, Some(v)));
    }
    let stats = ShellExtremes::collect_min(window.radius(), samples.into_iter());
    Ok(fit_lower_from_shells(&stats, m_cap))
}
