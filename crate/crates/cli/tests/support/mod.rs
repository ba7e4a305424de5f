//! Reference computations for the integration tests: plain Gauss–Jordan
//! elimination and dense matrix products over ℚ, plus helpers for running
//! the binary. Nothing here calls the library's algorithms.
#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use num_traits::{One, Zero};
use poisson_core::exact_algebra::Scalar;
use serde_json::Value;

pub type Mat = Vec<Vec<Scalar>>;

pub fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples_data").join(name)
}

/// Runs the binary; returns (exit code, parsed stdout, raw stdout).
pub fn run_bin(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_poisson")).args(args).output().expect("binary runs");
    let raw = String::from_utf8(out.stdout).expect("utf-8 output");
    let v: Value = serde_json::from_str(&raw).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v, raw)
}

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![Scalar::zero(); c]; r]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

pub fn mat_mul(a: &Mat, b: &Mat, inner: usize, cols: usize) -> Mat {
    let mut out = zeros(a.len(), cols);
    for i in 0..a.len() {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                let d = &a[i][k] * &b[k][j];
                out[i][j] += d;
            }
        }
    }
    out
}

pub fn transpose(a: &Mat, rows: usize, cols: usize) -> Mat {
    let mut t = zeros(cols, rows);
    for i in 0..rows {
        for j in 0..cols {
            t[j][i] = a[i][j].clone();
        }
    }
    t
}

pub fn mat_vec(a: &Mat, x: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|row| row.iter().zip(x).fold(Scalar::zero(), |s, (p, q)| s + p * q)).collect()
}

pub fn is_zero_mat(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Rank by Gauss–Jordan.
pub fn rank(rows: &[Vec<Scalar>], ncols: usize) -> usize {
    let mut m: Mat = rows.to_vec();
    let mut rk = 0;
    for c in 0..ncols {
        let Some(p) = (rk..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rk, p);
        let pv = m[rk][c].clone();
        for r in 0..m.len() {
            if r != rk && !m[r][c].is_zero() {
                let f = &m[r][c] / &pv;
                for k in 0..ncols {
                    let d = &f * &m[rk][k];
                    m[r][k] -= d;
                }
            }
        }
        rk += 1;
    }
    rk
}

/// Some solution of `A x = b` (A given by rows, `ncols` unknowns), or None.
pub fn solve(a: &[Vec<Scalar>], ncols: usize, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let nr = a.len();
    let mut m: Mat = a.iter().zip(b).map(|(row, y)| row.iter().cloned().chain(std::iter::once(y.clone())).collect()).collect();
    let mut pivots = Vec::new();
    let mut rk = 0;
    for c in 0..ncols {
        let Some(p) = (rk..nr).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rk, p);
        let pv = m[rk][c].clone();
        for k in 0..=ncols {
            m[rk][k] = &m[rk][k] / &pv;
        }
        for r in 0..nr {
            if r != rk && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..=ncols {
                    let d = &f * &m[rk][k];
                    m[r][k] -= d;
                }
            }
        }
        pivots.push(c);
        rk += 1;
    }
    if (rk..nr).any(|r| !m[r][ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Scalar::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][ncols].clone();
    }
    Some(x)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// A basis of `{x : A x = 0}` (A given by rows).
pub fn kernel(a: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut m: Mat = a.to_vec();
    let mut pivots = Vec::new();
    let mut rk = 0;
    for c in 0..ncols {
        let Some(p) = (rk..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rk, p);
        let pv = m[rk][c].clone();
        for k in 0..ncols {
            m[rk][k] = &m[rk][k] / &pv;
        }
        for r in 0..m.len() {
            if r != rk && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..ncols {
                    let d = &f * &m[rk][k];
                    m[r][k] -= d;
                }
            }
        }
        pivots.push(c);
        rk += 1;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![Scalar::zero(); ncols];
        x[free] = Scalar::one();
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = -m[r][free].clone();
        }
        out.push(x);
    }
    out
}
