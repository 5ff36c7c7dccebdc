//! The decidable zero pattern behind `PatternMask`.
//!
//! The mask of order `n` vanishes exactly on
//! `{2^k e_1 + j e_i : k >= 0, 1 <= i <= d, 0 <= j <= k^(n+1)}`
//! and equals 1 everywhere else. Membership is decided by probing the
//! finitely many `k` with `2^k <= |m|_1`.

use num_bigint::BigUint;

/// `k^(order+1)` when it fits in `u64`; `None` means the bound exceeds every
/// representable coordinate offset and the run constraint is vacuously true.
pub fn run_bound(k: u32, order: u32) -> Option<u64> {
    let exp = order as u64 + 1;
    match k {
        0 => Some(0),
        1 => Some(1),
        _ => {
            // 2^63 <= k^exp iff exp*log2(k) >= 63; cheap cutoff before BigUint
            let log2k = 64 - u64::from(k).leading_zeros() as u64; // upper bound on log2(k)+1
            if exp * (log2k - 1) >= 64 {
                return None;
            }
            let big = BigUint::from(k).pow(exp as u32);
            u64::try_from(&big).ok()
        }
    }
}

/// Does the order-`order` mask vanish at `coords`?
pub fn mask_zero_contains(order: u32, coords: &[i64]) -> bool {
    debug_assert!(order >= 1);
    if coords.iter().any(|&c| c < 0) {
        return false;
    }
    let first = coords[0];
    let tail_nonzero: Vec<usize> = (1..coords.len()).filter(|&i| coords[i] != 0).collect();
    match tail_nonzero.len() {
        0 => {
            // m = (m1, 0, ..., 0): need m1 = 2^k + j with 0 <= j <= k^(n+1)
            if first < 1 {
                return false;
            }
            let m1 = first as u64;
            let mut k = 0u32;
            while 1u64.checked_shl(k).is_some_and(|p| p <= m1) {
                let j = m1 - (1u64 << k);
                match run_bound(k, order) {
                    None => return true,
                    Some(bound) if j <= bound => return true,
                    Some(_) => {}
                }
                k += 1;
            }
            false
        }
        1 => {
            // m = 2^k e_1 + j e_i with i > 1: first coordinate must be an
            // exact power of two and j within the run bound for that k.
            if first < 1 || (first & (first - 1)) != 0 {
                return false;
            }
            let k = first.trailing_zeros();
            let j = coords[tail_nonzero[0]] as u64;
            match run_bound(k, order) {
                None => true,
                Some(bound) => j <= bound,
            }
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_bound_edges() {
        assert_eq!(run_bound(0, 1), Some(0));
        assert_eq!(run_bound(1, 7), Some(1));
        assert_eq!(run_bound(5, 1), Some(25));
        assert_eq!(run_bound(12, 3), Some(20736));
        // 3^200 does not fit in u64
        assert_eq!(run_bound(3, 199), None);
    }

    #[test]
    fn dyadic_points_always_vanish() {
        for k in 0..20 {
            assert!(mask_zero_contains(1, &[1i64 << k]));
            assert!(mask_zero_contains(3, &[1i64 << k, 0]));
        }
    }

    #[test]
    fn order_one_boundary_cases() {
        // k = 5 run covers j = 0..=25
        assert!(mask_zero_contains(1, &[32]));
        assert!(mask_zero_contains(1, &[32 + 25]));
        // 58 = 32 + 26 is past the k=5 run and below 64
        assert!(!mask_zero_contains(1, &[58]));
    }

    // Oracle: direct search over all (k, i, j) with 2^k <= limit.
    fn oracle(order: u32, coords: &[i64], limit: u32) -> bool {
        if coords.iter().any(|&c| c < 0) {
            return false;
        }
        for k in 0..=limit {
            let base = 1i64 << k;
            for i in 0..coords.len() {
                let bound = run_bound(k, order).unwrap_or(u64::MAX);
                for j in 0..=bound.min(300) {
                    let mut pt = vec![0i64; coords.len()];
                    pt[0] = base;
                    pt[i] += j as i64;
                    if pt == coords {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn membership_matches_enumeration_oracle() {
        for order in 1..=3u32 {
            for x in -2..=80i64 {
                assert_eq!(
                    mask_zero_contains(order, &[x]),
                    oracle(order, &[x], 8),
                    "order={order} x={x}"
                );
            }
            for x in 0..=20i64 {
                for y in -2..=30i64 {
                    assert_eq!(
                        mask_zero_contains(order, &[x, y]),
                        oracle(order, &[x, y], 6),
                        "order={order} p=({x},{y})"
                    );
                }
            }
        }
    }

    #[test]
    fn off_axis_points_need_power_of_two_head() {
        // (3, 5): 3 is not a power of two
        assert!(!mask_zero_contains(1, &[3, 5]));
        // (4, 4): k=2, run bound 2^(1+1) = 4, j = 4 <= 4
        assert!(mask_zero_contains(1, &[4, 4]));
        // (4, 5): j = 5 > 4
        assert!(!mask_zero_contains(1, &[4, 5]));
        // two nonzero tail coordinates never match
        assert!(!mask_zero_contains(1, &[4, 1, 1]));
    }
}
