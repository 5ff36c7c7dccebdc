//! Shared test support: a deterministic RNG and expression pools.
#![allow(dead_code)] // each test target uses a different slice of this module

use num_bigint::BigInt;
use num_rational::BigRational;
use tempered::expr::SeqExpr;
use tempered::lattice::LatticePoint;
use tempered::number::GaussianRational;

/// SplitMix64: tiny, seedable, and stable across platforms, so fixture
/// streams never drift.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn point(rng: &mut Rng, dim: usize, span: i64) -> LatticePoint {
    LatticePoint::new((0..dim).map(|_| rng.int(-span, span)).collect())
}

/// Small nonzero Gaussian rational, occasionally complex.
pub fn value(rng: &mut Rng) -> GaussianRational {
    let num = rng.int(-4, 4);
    let den = rng.int(1, 3);
    let re = rat(if num == 0 { 1 } else { num }, den);
    if rng.chance(1, 4) {
        GaussianRational::new(re, rat(rng.int(-3, 3), 1))
    } else {
        GaussianRational::from_real(re)
    }
}

/// A leaf expression from the documented pool classes.
pub fn leaf(rng: &mut Rng, dim: usize) -> SeqExpr {
    match rng.below(7) {
        0 => SeqExpr::constant(dim, value(rng)),
        1 => SeqExpr::dirac(point(rng, dim, 4)),
        2 => SeqExpr::dirac_complement(point(rng, dim, 4)),
        3 => {
            let entries = (0..=rng.below(2))
                .map(|_| (point(rng, dim, 4), value(rng)))
                .collect::<Vec<_>>();
            SeqExpr::finite_support(dim, entries).expect("dims agree")
        }
        4 => {
            // affine coordinate polynomial c0 + c1 * n_axis
            let axis = rng.below(dim as u64) as usize;
            let mut exps = vec![0u32; dim];
            exps[axis] = 1;
            let poly = tempered::expr::CoordPolynomial::from_terms(
                dim,
                vec![(vec![0; dim], value(rng)), (exps, value(rng))],
            );
            SeqExpr::coord_poly(poly)
        }
        5 => SeqExpr::inv_norm_power(dim, rng.below(3) as u32),
        _ => SeqExpr::pattern_mask(dim, 1 + rng.below(3) as u32).expect("valid order"),
    }
}

/// Pool expression with bounded depth: leaves composed by sums, products,
/// conjugates, scalar multiples, and small shifts.
pub fn pool_expr(rng: &mut Rng, dim: usize, depth: u32) -> SeqExpr {
    if depth == 0 {
        return leaf(rng, dim);
    }
    match rng.below(8) {
        0 | 1 => SeqExpr::sum(
            pool_expr(rng, dim, depth - 1),
            pool_expr(rng, dim, depth - 1),
        )
        .expect("dims agree"),
        2 | 3 => SeqExpr::product(
            pool_expr(rng, dim, depth - 1),
            pool_expr(rng, dim, depth - 1),
        )
        .expect("dims agree"),
        4 => SeqExpr::conj(pool_expr(rng, dim, depth - 1)),
        5 => SeqExpr::scalar_mul(value(rng), pool_expr(rng, dim, depth - 1)),
        6 => {
            SeqExpr::shift(point(rng, dim, 2), pool_expr(rng, dim, depth - 1)).expect("dims agree")
        }
        _ => leaf(rng, dim),
    }
}

/// Assert a pointwise predicate at every window point, in parallel chunks;
/// panics with the canonically first failing point.
pub fn assert_on_window<F>(window: &tempered::lattice::Window, check: F)
where
    F: Fn(&mut tempered::expr::Evaluator, &LatticePoint) -> bool + Sync,
{
    let failures = tempered::lattice::map_window_chunks(window, |chunk| {
        let mut evaluator = tempered::expr::Evaluator::new();
        chunk.iter().find(|n| !check(&mut evaluator, n)).cloned()
    });
    if let Some(point) = failures.into_iter().flatten().next() {
        panic!("window check failed at {point:?}");
    }
}

/// Finitely supported expression with entries near a base point (dense
/// enough that zero-order scans see real runs).
pub fn finite_support_near(rng: &mut Rng, dim: usize, base: &LatticePoint) -> SeqExpr {
    let count = 1 + rng.below(5);
    let entries = (0..count)
        .map(|_| {
            let coords = base
                .coords()
                .iter()
                .map(|c| c + rng.int(0, 4))
                .collect::<Vec<_>>();
            (LatticePoint::new(coords), value(rng))
        })
        .collect::<Vec<_>>();
    SeqExpr::finite_support(dim, entries).expect("dims agree")
}
