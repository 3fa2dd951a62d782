//! Independent oracles for the feasible-interval calculators.
//!
//! * exhaustive enumeration of every ±1 triple of length 5;
//! * exact linear programming over joint laws on the 8 / 16 sign patterns,
//!   solved by enumerating basic feasible solutions;
//! * a rational grid on the 16-outcome simplex.

use std::collections::HashMap;

use bell_core::corrcore::{
    correlate, fourth_correlation_bounds, third_correlation_bounds, BinaryStream,
};

/// Solves `m · p = rhs` by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let piv =
            (col..n).max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())?;
        if m[piv][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col {
                let k = m[r][col] / m[col][col];
                for c in col..n {
                    m[r][c] -= k * m[col][c];
                }
                rhs[r] -= k * rhs[col];
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Min and max of `objective` over probability vectors on the outcomes
/// whose constraint features average to `targets`. `None` if infeasible.
fn lp_range(features: &[Vec<f64>], objective: &[f64], targets: &[f64]) -> Option<(f64, f64)> {
    let rows = targets.len() + 1;
    let mut rhs = vec![1.0];
    rhs.extend_from_slice(targets);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for basis in combinations(features.len(), rows) {
        let m: Vec<Vec<f64>> = (0..rows)
            .map(|r| {
                basis
                    .iter()
                    .map(|&o| if r == 0 { 1.0 } else { features[o][r - 1] })
                    .collect()
            })
            .collect();
        if let Some(p) = solve(m, rhs.clone()) {
            if p.iter().all(|&x| x >= -1e-10) {
                let v: f64 = basis.iter().zip(&p).map(|(&o, &q)| q * objective[o]).sum();
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
    }
    lo.is_finite().then_some((lo, hi))
}

fn signs(k: usize) -> Vec<Vec<f64>> {
    (0..1usize << k)
        .map(|m| {
            (0..k)
                .map(|i| if m >> i & 1 == 1 { 1.0 } else { -1.0 })
                .collect()
        })
        .collect()
}

fn third_lp(x: f64, y: f64) -> Option<(f64, f64)> {
    // outcome = (a, b, b')
    let outs = signs(3);
    let feats: Vec<Vec<f64>> = outs
        .iter()
        .map(|o| vec![o[0] * o[1], o[0] * o[2]])
        .collect();
    let obj: Vec<f64> = outs.iter().map(|o| o[1] * o[2]).collect();
    lp_range(&feats, &obj, &[x, y])
}

fn fourth_lp(x: f64, y: f64, z: f64) -> Option<(f64, f64)> {
    // outcome = (a, a', b, b')
    let outs = signs(4);
    let feats: Vec<Vec<f64>> = outs
        .iter()
        .map(|o| vec![o[0] * o[2], o[0] * o[3], o[1] * o[2]])
        .collect();
    let obj: Vec<f64> = outs.iter().map(|o| o[1] * o[3]).collect();
    lp_range(&feats, &obj, &[x, y, z])
}

#[test]
fn third_bounds_match_exhaustive_length_five_enumeration() {
    const N: usize = 5;
    let streams: Vec<BinaryStream> = (0..1u64 << N)
        .map(|m| BinaryStream::from_mask(m, N).unwrap())
        .collect();
    let mut seen: HashMap<(i64, i64), (i64, i64)> = HashMap::new();
    for a in &streams {
        for b in &streams {
            let ab = correlate(a, b).unwrap().sum;
            for b2 in &streams {
                let ab2 = correlate(a, b2).unwrap().sum;
                let bb2 = correlate(b, b2).unwrap().sum;
                let e = seen.entry((ab, ab2)).or_insert((bb2, bb2));
                e.0 = e.0.min(bb2);
                e.1 = e.1.max(bb2);
            }
        }
    }
    let grain = 2.0 / N as f64;
    for (&(ab, ab2), &(lo, hi)) in &seen {
        let iv = third_correlation_bounds(ab as f64 / N as f64, ab2 as f64 / N as f64).unwrap();
        let (alo, ahi) = (iv.lower().unwrap(), iv.upper().unwrap());
        let (lo, hi) = (lo as f64 / N as f64, hi as f64 / N as f64);
        // finite data can never leave the analytic interval
        assert!(alo - 1e-12 <= lo && hi <= ahi + 1e-12);
        assert!(lo - alo <= grain + 1e-12 && ahi - hi <= grain + 1e-12);
    }
    // every achievable pair appeared; with odd N that is all sums of matching parity
    assert_eq!(seen.len(), (N + 1) * (N + 1));
}

#[test]
fn third_bounds_match_lp_oracle() {
    let ticks: Vec<f64> = (0..=20).map(|k| -1.0 + 0.1 * k as f64).collect();
    for &x in &ticks {
        for &y in &ticks {
            let (lo, hi) = third_lp(x, y).expect("every pair in the box is achievable");
            let iv = third_correlation_bounds(x, y).unwrap();
            assert!((iv.lower().unwrap() - lo).abs() < 1e-9, "{x} {y}");
            assert!((iv.upper().unwrap() - hi).abs() < 1e-9, "{x} {y}");
        }
    }
}

#[test]
fn fourth_bounds_match_lp_oracle() {
    let ticks = [-1.0, -0.8, -0.5, -0.1, 0.0, 0.3, 0.7, 1.0];
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut cases: Vec<[f64; 3]> = Vec::new();
    for &x in &ticks {
        for &y in &ticks {
            for &z in &ticks {
                cases.push([x, y, z]);
            }
        }
    }
    cases.push([-h, -h, h]);
    for [x, y, z] in cases {
        let (lo, hi) = fourth_lp(x, y, z).expect("tree-structured triples are always achievable");
        let iv = fourth_correlation_bounds(x, y, z).unwrap();
        assert!(
            (iv.lower().unwrap() - lo).abs() < 1e-9,
            "{x} {y} {z}: {iv:?} vs {lo}"
        );
        assert!(
            (iv.upper().unwrap() - hi).abs() < 1e-9,
            "{x} {y} {z}: {iv:?} vs {hi}"
        );
    }
    let (lo, _) = fourth_lp(-h, -h, h).unwrap();
    assert!((lo - (3.0 * h - 2.0)).abs() < 1e-9);
}

#[test]
fn fourth_bounds_match_simplex_grid() {
    const K: i64 = 6;
    let outs = signs(4);
    let feats: Vec<[i64; 4]> = outs
        .iter()
        .map(|o| {
            let o: Vec<i64> = o.iter().map(|&v| v as i64).collect();
            [o[0] * o[2], o[0] * o[3], o[1] * o[2], o[1] * o[3]]
        })
        .collect();
    let mut seen: HashMap<[i64; 3], (i64, i64)> = HashMap::new();
    let mut weights = [0i64; 16];
    fn walk(
        slot: usize,
        left: i64,
        weights: &mut [i64; 16],
        feats: &[[i64; 4]],
        seen: &mut HashMap<[i64; 3], (i64, i64)>,
    ) {
        if slot == 15 {
            weights[15] = left;
            let mut acc = [0i64; 4];
            for (w, f) in weights.iter().zip(feats) {
                for k in 0..4 {
                    acc[k] += w * f[k];
                }
            }
            let e = seen
                .entry([acc[0], acc[1], acc[2]])
                .or_insert((acc[3], acc[3]));
            e.0 = e.0.min(acc[3]);
            e.1 = e.1.max(acc[3]);
            return;
        }
        for w in 0..=left {
            weights[slot] = w;
            walk(slot + 1, left - w, weights, feats, seen);
        }
    }
    walk(0, K, &mut weights, &feats, &mut seen);
    assert_eq!(seen.len(), 7 * 7 * 7);
    let grain = 2.0 / K as f64;
    for (key, (lo, hi)) in seen {
        let [x, y, z] = key.map(|v| v as f64 / K as f64);
        let iv = fourth_correlation_bounds(x, y, z).unwrap();
        let (lo, hi) = (lo as f64 / K as f64, hi as f64 / K as f64);
        assert!(iv.lower().unwrap() - 1e-12 <= lo && hi <= iv.upper().unwrap() + 1e-12);
        assert!(lo - iv.lower().unwrap() <= grain + 1e-12);
        assert!(iv.upper().unwrap() - hi <= grain + 1e-12);
    }
}
