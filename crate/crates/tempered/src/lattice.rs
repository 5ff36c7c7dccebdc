//! Lattice points, the 1-norm, and deterministic window enumeration.
//!
//! The canonical point order — increasing 1-norm, then lexicographic on
//! coordinates — is baked into `LatticePoint`'s `Ord`, so ordered sets and
//! "first counterexample" reports agree everywhere in the library.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// A point of `Z^d`, `d >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        assert!(!coords.is_empty(), "lattice points need dimension >= 1");
        LatticePoint { coords }
    }

    pub fn origin(dim: usize) -> Self {
        Self::new(vec![0; dim])
    }

    /// `scale * e_axis` (axis is 0-based).
    pub fn axis(dim: usize, axis: usize, scale: i64) -> Self {
        assert!(axis < dim);
        let mut coords = vec![0; dim];
        coords[axis] = scale;
        Self::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// `|n_1| + ... + |n_d|`.
    pub fn norm1(&self) -> u64 {
        self.coords.iter().map(|c| c.unsigned_abs()).sum()
    }

    pub fn is_origin(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The point moved by `delta` along `axis`; `None` on overflow.
    pub fn step(&self, axis: usize, delta: i64) -> Option<Self> {
        let mut coords = self.coords.clone();
        coords[axis] = coords[axis].checked_add(delta)?;
        Some(Self::new(coords))
    }

    /// Componentwise difference `self - other`; `None` on overflow.
    pub fn sub(&self, other: &Self) -> Option<Self> {
        if self.dim() != other.dim() {
            return None;
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::new(coords))
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            })
        }
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Ord for LatticePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm1()
            .cmp(&other.norm1())
            .then_with(|| self.coords.cmp(&other.coords))
    }
}

impl PartialOrd for LatticePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The finite ball `{n : |n|_1 <= radius}` with canonical enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    dim: usize,
    radius: u64,
}

impl Window {
    pub fn new(dim: usize, radius: u64) -> Self {
        assert!(dim >= 1, "window dimension must be >= 1");
        assert!(radius <= i64::MAX as u64, "window radius out of range");
        Window { dim, radius }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> u64 {
        self.radius
    }

    /// All points with `|n|_1 <= radius` in canonical order.
    pub fn points(&self) -> WindowIter {
        WindowIter {
            window: *self,
            norm: 0,
            shell: Vec::new(),
            pos: 0,
            done: false,
        }
    }

    /// Number of lattice points in the window (crosspolytope count).
    pub fn count(&self) -> u128 {
        let d = self.dim as u128;
        let r = self.radius as u128;
        // sum over k of 2^k * C(d,k) * C(r,k)
        let mut total = 0u128;
        let kmax = d.min(r);
        for k in 0..=kmax {
            let mut term = 1u128 << k;
            for i in 0..k {
                term = term * (d - i) / (i + 1);
            }
            // C(r,k), computed with running division to stay integral
            let mut binom = 1u128;
            for i in 0..k {
                binom = binom * (r - i) / (i + 1);
            }
            total += term * binom;
        }
        total
    }
}

/// Iterator over a window's points in canonical order.
pub struct WindowIter {
    window: Window,
    norm: u64,
    shell: Vec<LatticePoint>,
    pos: usize,
    done: bool,
}

impl Iterator for WindowIter {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        loop {
            if self.done {
                return None;
            }
            if self.pos < self.shell.len() {
                let p = self.shell[self.pos].clone();
                self.pos += 1;
                return Some(p);
            }
            if self.norm > self.window.radius {
                self.done = true;
                return None;
            }
            self.shell = shell_points(self.window.dim, self.norm);
            self.pos = 0;
            self.norm += 1;
        }
    }
}

/// Points with exact 1-norm `norm`, in lexicographic order.
pub fn shell_points(dim: usize, norm: u64) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(dim);
    fill_shell(dim, norm as i64, &mut prefix, &mut out);
    out
}

fn fill_shell(
    remaining_dims: usize,
    remaining_norm: i64,
    prefix: &mut Vec<i64>,
    out: &mut Vec<LatticePoint>,
) {
    if remaining_dims == 1 {
        if remaining_norm == 0 {
            prefix.push(0);
            out.push(LatticePoint::new(prefix.clone()));
            prefix.pop();
        } else {
            for c in [-remaining_norm, remaining_norm] {
                prefix.push(c);
                out.push(LatticePoint::new(prefix.clone()));
                prefix.pop();
            }
        }
        return;
    }
    for c in -remaining_norm..=remaining_norm {
        prefix.push(c);
        fill_shell(remaining_dims - 1, remaining_norm - c.abs(), prefix, out);
        prefix.pop();
    }
}

/// Canonical enumeration of all of `Z^d`, shell by shell (unbounded).
pub fn canonical_points(dim: usize) -> impl Iterator<Item = LatticePoint> {
    (0u64..).flat_map(move |norm| shell_points(dim, norm))
}

/// Map a function over contiguous canonical-order chunks of a window on
/// scoped threads, returning the per-chunk results in canonical chunk
/// order. Callers merge chunk results positionally, which keeps
/// first-counterexample reports canonical regardless of scheduling.
pub fn map_window_chunks<T, F>(window: &Window, per_chunk: F) -> Vec<T>
where
    T: Send,
    F: Fn(&[LatticePoint]) -> T + Sync,
{
    let points: Vec<LatticePoint> = window.points().collect();
    let threads = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(points.len().max(1));
    if threads <= 1 || points.len() < 4096 {
        return vec![per_chunk(&points)];
    }
    let chunk_size = points.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = points
            .chunks(chunk_size)
            .map(|chunk| scope.spawn(|| per_chunk(chunk)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("window chunk worker"))
            .collect()
    })
}
