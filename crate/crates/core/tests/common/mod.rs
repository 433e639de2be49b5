//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// Persistence pairs for dims 0 and 1 by full Z/2 reduction of the boundary
/// matrix of the complete Rips filtration (all edges and triangles), simplices
/// ordered by (value, dimension, vertex tuple). Zero-length pairs dropped.
pub fn brute_rips(points: &[Vec<f64>]) -> (Vec<(f64, f64)>, Vec<(f64, f64)>) {
    let n = points.len();
    let dist = |a: usize, b: usize| -> f64 {
        points[a].iter().zip(&points[b]).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    };
    let mut simplices: Vec<(f64, usize, Vec<usize>)> = Vec::new();
    for v in 0..n {
        simplices.push((0.0, 0, vec![v]));
    }
    for a in 0..n {
        for b in a + 1..n {
            simplices.push((dist(a, b), 1, vec![a, b]));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let d = dist(a, b).max(dist(a, c)).max(dist(b, c));
                simplices.push((d, 2, vec![a, b, c]));
            }
        }
    }
    simplices.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let index = |s: &[usize]| simplices.iter().position(|t| t.2 == s).unwrap();
    let mut columns: Vec<BTreeSet<usize>> = simplices
        .iter()
        .map(|(_, dim, verts)| {
            let mut col = BTreeSet::new();
            if *dim > 0 {
                for skip in 0..verts.len() {
                    let face: Vec<usize> =
                        verts.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect();
                    col.insert(index(&face));
                }
            }
            col
        })
        .collect();
    let mut low_owner: Vec<Option<usize>> = vec![None; simplices.len()];
    let (mut h0, mut h1) = (Vec::new(), Vec::new());
    for j in 0..columns.len() {
        while let Some(&low) = columns[j].iter().next_back() {
            match low_owner[low] {
                Some(k) => {
                    let other = columns[k].clone();
                    for r in other {
                        if !columns[j].remove(&r) {
                            columns[j].insert(r);
                        }
                    }
                }
                None => {
                    low_owner[low] = Some(j);
                    let (birth, death) = (simplices[low].0, simplices[j].0);
                    if death > birth {
                        if simplices[low].1 == 0 {
                            h0.push((birth, death));
                        } else {
                            h1.push((birth, death));
                        }
                    }
                    break;
                }
            }
        }
    }
    (sorted(h0), sorted(h1))
}

pub fn sorted(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    v
}

/// Multiset equality of interval lists to an absolute tolerance.
pub fn same_pairs(a: &[(f64, f64)], b: &[(f64, f64)], tol: f64) -> bool {
    let (a, b) = (sorted(a.to_vec()), sorted(b.to_vec()));
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x.0 - y.0).abs() <= tol && (x.1 - y.1).abs() <= tol)
}

/// Sublevel H0 by sweeping thresholds over the distinct values and tracking
/// maximal index runs of `{i : x_i <= t}`. A run is identified with its
/// oldest point (lowest value, then lowest index); when runs merge all but
/// the oldest die. The last survivor is closed at the global maximum.
/// `sign = -1` sweeps superlevel sets instead (on `-x`), reporting intervals
/// as (low, high).
pub fn sweep_levelset(x: &[f64], sign: f64) -> Vec<(f64, f64)> {
    let y: Vec<f64> = x.iter().map(|v| sign * v).collect();
    let mut thresholds = y.clone();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let older = |a: usize, b: usize| y[a] < y[b] || (y[a] == y[b] && a < b);
    // Previous runs as (oldest index, members).
    let mut prev: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut out = Vec::new();
    for &t in &thresholds {
        let mut runs: Vec<Vec<usize>> = Vec::new();
        for i in 0..y.len() {
            if y[i] <= t {
                match runs.last_mut() {
                    Some(r) if *r.last().unwrap() + 1 == i => r.push(i),
                    _ => runs.push(vec![i]),
                }
            }
        }
        let mut next = Vec::new();
        for r in runs {
            let mut roots: Vec<usize> = prev.iter().filter(|(_, m)| m.iter().all(|i| r.contains(i))).map(|(o, _)| *o).collect();
            let oldest = r.iter().copied().fold(r[0], |a, b| if older(b, a) { b } else { a });
            roots.sort_by(|&a, &b| if older(a, b) { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater });
            for &dead in roots.iter().skip(1) {
                out.push((y[dead], t));
            }
            next.push((oldest, r));
        }
        prev = next;
    }
    let max = thresholds.last().copied().unwrap_or(0.0);
    let min = thresholds.first().copied().unwrap_or(0.0);
    out.push((min, max));
    let mapped = out
        .into_iter()
        .map(|(b, d)| if sign > 0.0 { (b, d) } else { (-d, -b) })
        .collect();
    sorted(mapped)
}

/// Dense quadrature of the Betti curve and first landscape of a diagram
/// whose endpoints lie on the lattice `k * h`, given as lattice indices.
///
/// The Betti curve jumps only at lattice nodes. The composite trapezoid rule
/// with node values set to the mean of the one-sided limits integrates such a
/// step function exactly, provided it vanishes at both ends. The landscape is
/// piecewise linear with kinks on multiples of `h / 2`, so composite Simpson
/// on panels of width `h / 2` integrates it and its square exactly.
/// Returns (betti_l1, betti_l2, landscape_l1, landscape_l2).
pub fn lattice_quadrature(bars: &[(u64, u64)], h: f64, nodes: usize, lam: &mut Vec<f64>) -> [f64; 4] {
    let n = nodes;
    let mut starts = vec![0i64; n + 1];
    let mut ends = vec![0i64; n + 1];
    // Landscape samples on the (h / 4)-grid.
    let fine = 4 * (n - 1) + 1;
    let g = h / 4.0;
    lam.clear();
    lam.resize(fine, 0.0);
    for &(kb, kd) in bars {
        starts[kb as usize] += 1;
        ends[kd as usize] += 1;
        let (b, d) = (kb as f64 * h, kd as f64 * h);
        for (k, slot) in lam.iter_mut().enumerate().take(4 * kd as usize + 1).skip(4 * kb as usize) {
            let t = k as f64 * g;
            let v = (t - b).min(d - t);
            if v > *slot {
                *slot = v;
            }
        }
    }
    let mut alive = 0i64;
    let (mut b1, mut b2) = (0.0, 0.0);
    for k in 0..n {
        // Left limit #{b < t_k <= d}, then right limit #{b <= t_k < d}.
        let left = alive as f64;
        alive += starts[k] - ends[k];
        let right = alive as f64;
        let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
        b1 += w * 0.5 * (left + right);
        b2 += w * 0.5 * (left * left + right * right);
    }
    let (mut l1, mut l2) = (0.0, 0.0);
    for p in (0..fine - 1).step_by(2) {
        let (a, m, c) = (lam[p], lam[p + 1], lam[p + 2]);
        l1 += (a + 4.0 * m + c) * g / 3.0;
        l2 += (a * a + 4.0 * m * m + c * c) * g / 3.0;
    }
    [b1 * h, (b2 * h).sqrt(), l1, l2.sqrt()]
}

/// Max-margin dual by accelerated projected gradient on
/// `{0 <= a <= C, y'a = 0}`; the projection solves for the multiplier of the
/// equality constraint by bisection. Returns the dual variables.
pub fn qp_dual(x: &[Vec<f64>], y: &[f64], c: f64, iters: usize) -> Vec<f64> {
    let n = x.len();
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| y[i] * y[j] * x[i].iter().zip(&x[j]).map(|(a, b)| a * b).sum::<f64>()).collect())
        .collect();
    // Power iteration for the Lipschitz constant.
    let mut v = vec![1.0; n];
    let mut lip = 1.0;
    for _ in 0..200 {
        let w: Vec<f64> = (0..n).map(|i| q[i].iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        lip = w.iter().map(|a| a * a).sum::<f64>().sqrt();
        v = w.iter().map(|a| a / lip).collect();
    }
    let step = 1.0 / (lip * 1.01);
    let project = |z: &[f64]| -> Vec<f64> {
        let f = |mu: f64| -> f64 { z.iter().zip(y).map(|(zi, yi)| yi * (zi - mu * yi).clamp(0.0, c)).sum() };
        let (mut lo, mut hi) = (-1e6, 1e6);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mu = 0.5 * (lo + hi);
        z.iter().zip(y).map(|(zi, yi)| (zi - mu * yi).clamp(0.0, c)).collect()
    };
    let mut a = vec![0.0; n];
    let mut prev = a.clone();
    let mut tk = 1.0f64;
    for _ in 0..iters {
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * tk * tk).sqrt());
        let beta = (tk - 1.0) / t_next;
        let zeta: Vec<f64> = a.iter().zip(&prev).map(|(ai, pi)| ai + beta * (ai - pi)).collect();
        let grad: Vec<f64> = (0..n).map(|i| q[i].iter().zip(&zeta).map(|(p, z)| p * z).sum::<f64>() - 1.0).collect();
        let z: Vec<f64> = zeta.iter().zip(&grad).map(|(zi, g)| zi - step * g).collect();
        prev = a;
        a = project(&z);
        tk = t_next;
    }
    a
}

/// Solve `A x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Mean and population variance by two passes.
pub fn two_pass(w: &[f64]) -> (f64, f64) {
    let m = w.iter().sum::<f64>() / w.len() as f64;
    (m, w.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / w.len() as f64)
}
