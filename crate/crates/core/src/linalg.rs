//! Dense complex linear algebra helpers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `Tr[a^dag b]`.
pub fn hs_inner(a: &CMat, b: &CMat) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn hs_norm(a: &CMat) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(a: &CMat) -> Complex64 {
    a.diagonal().iter().sum()
}

pub fn is_hermitian(a: &CMat, tol: f64) -> bool {
    a.is_square() && hs_norm(&(a - a.adjoint())) <= tol
}

pub fn projector(psi: &CVec) -> CMat {
    psi * psi.adjoint()
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// `exp(-i t H)` for Hermitian `H`.
pub fn unitary_exp(h: &CMat, t: f64) -> CMat {
    let eig = h.clone().symmetric_eigen();
    let v = &eig.eigenvectors;
    let phases = CVec::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&e| Complex64::from_polar(1.0, -t * e)),
    );
    v * CMat::from_diagonal(&phases) * v.adjoint()
}

/// Haar-random pure state: normalized i.i.d. complex Gaussian amplitudes.
pub fn haar_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVec {
    let v = CVec::from_iterator(
        d,
        (0..d).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))),
    );
    let n = v.norm();
    v / c(n)
}

/// Random Hermitian matrix with i.i.d. Gaussian entries (GUE-like).
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    (&g + g.adjoint()) * c(0.5)
}

/// Haar-random special orthogonal matrix via QR with sign correction.
pub fn haar_special_orthogonal<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(m, m, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Real antisymmetric logarithm of a special orthogonal matrix.
pub fn so_log(o: &DMatrix<f64>) -> DMatrix<f64> {
    let m = o.nrows();
    let oc: CMat = o.map(c);
    let (q, t) = nalgebra::Schur::new(oc).unpack();
    let logd = CMat::from_fn(m, m, |i, j| {
        if i == j {
            let z = t[(i, i)];
            Complex64::new(0.0, z.im.atan2(z.re))
        } else {
            ZERO
        }
    });
    let l = &q * logd * q.adjoint();
    let re = l.map(|z| z.re);
    (&re - re.transpose()) * 0.5
}

/// Reduced `2 x 2` operator of qubit `k` (qubit 0 = most significant index bit).
pub fn partial_trace_to_qubit(a: &CMat, n: usize, k: usize) -> CMat {
    let bit = 1usize << (n - 1 - k);
    let mut out = CMat::zeros(2, 2);
    for i in 0..a.nrows() {
        for bj in 0..2 {
            let j = (i & !bit) | (bj * bit);
            let bi = usize::from(i & bit != 0);
            out[(bi, bj)] += a[(i, j)];
        }
    }
    out
}

/// Compressed list of nonzero entries of a square operator.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOp {
    pub dim: usize,
    pub entries: Vec<(usize, usize, Complex64)>,
}

impl SparseOp {
    pub fn from_dense(a: &CMat, tol: f64) -> Self {
        let mut entries = Vec::new();
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                if a[(i, j)].norm() > tol {
                    entries.push((i, j, a[(i, j)]));
                }
            }
        }
        SparseOp {
            dim: a.nrows(),
            entries,
        }
    }

    pub fn to_dense(&self) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    /// `Tr[self^dag a]`.
    pub fn inner(&self, a: &CMat) -> Complex64 {
        self.entries.iter().map(|&(i, j, v)| v.conj() * a[(i, j)]).sum()
    }

    /// `<psi| self |psi>`.
    pub fn expectation(&self, psi: &CVec) -> Complex64 {
        self.entries.iter().map(|&(i, j, v)| psi[i].conj() * v * psi[j]).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn so_log_inverts_exp() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in [2, 4, 6] {
            let o = haar_special_orthogonal(m, &mut rng);
            assert!((o.determinant() - 1.0).abs() < 1e-10);
            let a = so_log(&o);
            assert!((&a + a.transpose()).norm() < 1e-12);
            let back = a.exp();
            assert!((back - &o).norm() < 1e-9, "m = {m}");
        }
    }

    #[test]
    fn haar_state_is_normalized() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = haar_state(7, &mut rng);
        assert!((psi.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unitary_exp_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = random_hermitian(5, &mut rng);
        let u = unitary_exp(&h, 0.7);
        assert!(hs_norm(&(&u * u.adjoint() - CMat::identity(5, 5))) < 1e-12);
    }
    #[test]
    fn partial_trace_of_product() {
        let a = CMat::from_row_slice(2, 2, &[c(1.0), c(2.0), c(3.0), c(4.0)]);
        let b = CMat::from_row_slice(2, 2, &[c(0.5), ZERO, ZERO, c(0.5)]);
        let ab = kron(&a, &b);
        assert!(hs_norm(&(partial_trace_to_qubit(&ab, 2, 0) - &a)) < 1e-15);
        assert!(hs_norm(&(partial_trace_to_qubit(&ab, 2, 1) - &b * c(5.0))) < 1e-15);
    }
}
