#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use smop::{Dataset, SparseMatrix};

/// Gaussian design with roughly `density` nonzeros, response from a sparse
/// signal plus noise.
pub fn random_dataset(m: usize, n: usize, density: f64, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols = Vec::with_capacity(n);
    for _ in 0..n {
        let mut col = Vec::new();
        for i in 0..m {
            if rng.random::<f64>() < density {
                col.push((i, rng.sample::<f64, _>(StandardNormal)));
            }
        }
        cols.push(col);
    }
    let a = SparseMatrix::from_columns(m, cols).unwrap();
    let mut x = vec![0.0; n];
    for _ in 0..(n / 10).max(1) {
        x[rng.random_range(0..n)] = rng.random_range(-2.0..2.0);
    }
    let mut b = a.matvec(&x).unwrap();
    for v in &mut b {
        *v += 0.1 * rng.sample::<f64, _>(StandardNormal);
    }
    if b.iter().all(|v| *v == 0.0) {
        b[0] = 1.0;
    }
    Dataset::new(a, b).unwrap()
}

/// Cyclic coordinate descent for `½‖Ax − b‖² + λ‖x‖₁` on dense columns,
/// run until a full sweep moves no coordinate by more than `tol`.
pub fn lasso_cd(a: &SparseMatrix, b: &[f64], lambda: f64, tol: f64) -> Vec<f64> {
    let d = a.to_dense();
    let (m, n) = (d.len(), d[0].len());
    let colsq: Vec<f64> = (0..n).map(|j| (0..m).map(|i| d[i][j] * d[i][j]).sum()).collect();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    for _ in 0..1_000_000 {
        let mut moved = 0.0f64;
        for j in 0..n {
            if colsq[j] == 0.0 {
                continue;
            }
            let rho: f64 = (0..m).map(|i| d[i][j] * r[i]).sum::<f64>() + colsq[j] * x[j];
            let new = rho.signum() * (rho.abs() - lambda).max(0.0) / colsq[j];
            let delta = new - x[j];
            if delta != 0.0 {
                for i in 0..m {
                    r[i] -= d[i][j] * delta;
                }
                x[j] = new;
            }
            moved = moved.max(delta.abs());
        }
        if moved <= tol {
            break;
        }
    }
    x
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sorted-l1 value computed without the library.
pub fn slope_value(x: &[f64], w: &[f64]) -> f64 {
    let mut m: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    m.sort_by(|a, b| b.total_cmp(a));
    m.iter().zip(w).map(|(a, b)| a * b).sum()
}

pub fn prox_objective(z: &[f64], v: &[f64], t: f64, w: &[f64]) -> f64 {
    t * slope_value(z, w) + 0.5 * z.iter().zip(v).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Exhaustive sorted-l1 prox: for every magnitude ordering and every split of
/// the sorted positions into contiguous equal-value blocks (optionally with
/// a zero tail), the block values are the block means of `|v| − tγ`. Every
/// feasible candidate is scored with the true objective; the minimizer is
/// the prox point.
pub fn brute_slope_prox(v: &[f64], t: f64, w: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut best = vec![0.0; n];
    let mut best_obj = prox_objective(&best, v, t, w);
    for perm in permutations(n) {
        let a: Vec<f64> = perm.iter().enumerate().map(|(k, &i)| v[i].abs() - t * w[k]).collect();
        for mask in 0..(1u32 << (n - 1)) {
            let mut bounds = vec![0];
            for k in 1..n {
                if mask & (1 << (k - 1)) != 0 {
                    bounds.push(k);
                }
            }
            bounds.push(n);
            let nblocks = bounds.len() - 1;
            for zero_tail in [false, true] {
                let mut u = vec![0.0; n];
                for bl in 0..nblocks {
                    let (s, e) = (bounds[bl], bounds[bl + 1]);
                    let val = if zero_tail && bl == nblocks - 1 {
                        0.0
                    } else {
                        a[s..e].iter().sum::<f64>() / (e - s) as f64
                    };
                    u[s..e].iter_mut().for_each(|x| *x = val);
                }
                if u.iter().any(|x| *x < 0.0) || u.windows(2).any(|p| p[1] > p[0]) {
                    continue;
                }
                let mut z = vec![0.0; n];
                for (k, &i) in perm.iter().enumerate() {
                    z[i] = v[i].signum() * u[k];
                }
                let obj = prox_objective(&z, v, t, w);
                if obj < best_obj {
                    best_obj = obj;
                    best = z;
                }
            }
        }
    }
    best
}
