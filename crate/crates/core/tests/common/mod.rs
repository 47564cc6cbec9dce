//! Reference computations shared by the integration tests. None of these go
//! through the library's own routes.

#![allow(dead_code)]

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Clebsch-Gordan table built by lowering from `|j1+j2, j1+j2>` and
/// Gram-Schmidt in each `M` subspace (Condon-Shortley phase).
///
/// Key: `(2 m1, 2 m2, 2 J, 2 M)`.
pub fn cg_table(tj1: i32, tj2: i32) -> HashMap<(i32, i32, i32, i32), f64> {
    let ms = |tj: i32| (0..=tj).map(move |k| tj - 2 * k).collect::<Vec<_>>();
    let (m1s, m2s) = (ms(tj1), ms(tj2));
    let idx = |a: i32, b: i32| {
        let i = ((tj1 - a) / 2) as usize;
        let j = ((tj2 - b) / 2) as usize;
        i * m2s.len() + j
    };
    let dim = m1s.len() * m2s.len();
    let lower = |v: &[f64]| {
        let mut out = vec![0.0; dim];
        for &a in &m1s {
            for &b in &m2s {
                let c = v[idx(a, b)];
                if c == 0.0 {
                    continue;
                }
                if a > -tj1 {
                    let f = (((tj1 + a) * (tj1 - a + 2)) as f64 / 4.0).sqrt();
                    out[idx(a - 2, b)] += f * c;
                }
                if b > -tj2 {
                    let f = (((tj2 + b) * (tj2 - b + 2)) as f64 / 4.0).sqrt();
                    out[idx(a, b - 2)] += f * c;
                }
            }
        }
        out
    };
    let mut states: Vec<(i32, i32, Vec<f64>)> = Vec::new();
    let mut table = HashMap::new();
    let mut tj = tj1 + tj2;
    while tj >= (tj1 - tj2).abs() {
        // top state: M = J subspace orthogonal to states of larger J
        let mut v = vec![0.0; dim];
        for &a in &m1s {
            let b = tj - a;
            if m2s.contains(&b) {
                v[idx(a, b)] = 1.0 + a as f64 * 0.01;
            }
        }
        for _pass in 0..2 {
            for (_, tm, w) in &states {
                if *tm == tj {
                    let dot: f64 = v.iter().zip(w).map(|(x, y)| x * y).sum();
                    for (x, y) in v.iter_mut().zip(w) {
                        *x -= dot * y;
                    }
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        // Condon-Shortley: <j1 j1; j2 J-j1 | J J> > 0
        if v[idx(tj1, tj - tj1)] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let mut tm = tj;
        loop {
            for &a in &m1s {
                for &b in &m2s {
                    table.insert((a, b, tj, tm), v[idx(a, b)]);
                }
            }
            states.push((tj, tm, v.clone()));
            if tm == -tj {
                break;
            }
            let f = (((tj + tm) * (tj - tm + 2)) as f64 / 4.0).sqrt();
            v = lower(&v).into_iter().map(|x| x / f).collect();
            tm -= 2;
        }
        tj -= 2;
    }
    table
}

/// `|<theta, phi | S, S>|^2 = cos^{4S}(theta / 2)`.
pub fn husimi_hw(two_s: i32, theta: f64) -> f64 {
    (theta / 2.0).cos().powi(2 * two_s)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Dense Jordan-Wigner Majoranas `c_1, ..., c_{2n}` (qubit 0 leftmost).
pub fn dense_majoranas(n: usize) -> Vec<DMatrix<Complex64>> {
    let i = Complex64::new(0.0, 1.0);
    let id = DMatrix::<Complex64>::identity(2, 2);
    let x = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let y = DMatrix::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]);
    let z = DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let mut out = Vec::new();
    for k in 0..n {
        for p in [&x, &y] {
            let mut m = DMatrix::<Complex64>::identity(1, 1);
            for q in 0..n {
                let f = if q < k {
                    &z
                } else if q == k {
                    p
                } else {
                    &id
                };
                m = kron(&m, f);
            }
            out.push(m);
        }
    }
    out
}

/// Purity of `|0...0><0...0|` on each Majorana degree, by brute-force
/// expansion over all `4^n` monomials.
pub fn vacuum_degree_purities(n: usize) -> Vec<f64> {
    let cs = dense_majoranas(n);
    let d = 1usize << n;
    let mut rho = DMatrix::<Complex64>::zeros(d, d);
    rho[(0, 0)] = c(1.0);
    let mut out = vec![0.0; 2 * n + 1];
    for set in 0u32..(1 << (2 * n)) {
        let mut m = DMatrix::<Complex64>::identity(d, d);
        for (mu, c_mu) in cs.iter().enumerate() {
            if set >> mu & 1 == 1 {
                m = &m * c_mu;
            }
        }
        // monomials are orthogonal with Tr[M^dag M] = d
        let t = (m.adjoint() * &rho).trace();
        out[set.count_ones() as usize] += t.norm_sqr() / d as f64;
    }
    out
}

pub fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
