//! Operators on a model Hilbert space and Hermitian irrep basis elements.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec, SparseOp};
use crate::pauli::{PauliString, PauliSum};

/// A linear operator, either dense or as a Pauli-string expansion.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorRep {
    Dense(CMat),
    Pauli(PauliSum),
}

impl OperatorRep {
    pub fn dim(&self) -> usize {
        match self {
            OperatorRep::Dense(m) => m.nrows(),
            OperatorRep::Pauli(p) => 1 << p.num_qubits(),
        }
    }

    pub fn projector(psi: &CVec) -> Self {
        OperatorRep::Dense(linalg::projector(psi))
    }

    pub fn identity(d: usize) -> Self {
        OperatorRep::Dense(CMat::identity(d, d))
    }

    pub fn to_dense(&self) -> CMat {
        match self {
            OperatorRep::Dense(m) => m.clone(),
            OperatorRep::Pauli(p) => p.to_dense(),
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        match self {
            OperatorRep::Dense(m) => linalg::is_hermitian(m, tol),
            OperatorRep::Pauli(p) => p.is_hermitian(tol),
        }
    }

    pub fn trace(&self) -> Complex64 {
        match self {
            OperatorRep::Dense(m) => linalg::trace(m),
            OperatorRep::Pauli(p) => p.trace(),
        }
    }

    /// `Tr[self^dag other]`.
    pub fn hs_inner(&self, other: &OperatorRep) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        match (self, other) {
            (OperatorRep::Pauli(a), OperatorRep::Pauli(b)) => a.trace_inner(b),
            _ => Ok(linalg::hs_inner(&self.to_dense(), &other.to_dense())),
        }
    }

    pub fn hs_norm_sqr(&self) -> f64 {
        match self {
            OperatorRep::Dense(m) => m.iter().map(|z| z.norm_sqr()).sum(),
            OperatorRep::Pauli(p) => p.trace_inner(p).map(|z| z.re).unwrap_or(0.0),
        }
    }
}

/// One Hermitian, Hilbert–Schmidt normalized irrep basis element.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisOp {
    Sparse(SparseOp),
    /// `scale * string` with `string` Hermitian.
    Pauli {
        string: PauliString,
        scale: f64,
    },
}

impl BasisOp {
    pub fn dim(&self) -> usize {
        match self {
            BasisOp::Sparse(s) => s.dim,
            BasisOp::Pauli { string, .. } => 1 << string.num_qubits(),
        }
    }

    pub fn to_dense(&self) -> CMat {
        match self {
            BasisOp::Sparse(s) => s.to_dense(),
            BasisOp::Pauli { string, scale } => string.to_dense() * linalg::c(*scale),
        }
    }

    pub fn to_operator(&self) -> OperatorRep {
        match self {
            BasisOp::Sparse(s) => OperatorRep::Dense(s.to_dense()),
            BasisOp::Pauli { string, scale } => OperatorRep::Pauli(PauliSum::from_string(linalg::c(*scale), string)),
        }
    }

    /// `Tr[D^dag A] = Tr[D A]`.
    pub fn inner(&self, a: &OperatorRep) -> Result<Complex64> {
        if self.dim() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: a.dim(),
            });
        }
        Ok(match (self, a) {
            (BasisOp::Sparse(s), OperatorRep::Dense(m)) => s.inner(m),
            (BasisOp::Sparse(s), OperatorRep::Pauli(p)) => s.inner(&p.to_dense()),
            (BasisOp::Pauli { string, scale }, OperatorRep::Dense(m)) => string.trace_with(m) * scale,
            (BasisOp::Pauli { string, scale }, OperatorRep::Pauli(p)) => {
                let (ph, canon) = string.hermitian_form();
                let dim = (string.num_qubits() as f64).exp2();
                ph.conj() * p.coefficient(canon.x_mask(), canon.z_mask()) * dim * scale
            }
        })
    }

    pub fn inner_dense(&self, a: &CMat) -> Complex64 {
        match self {
            BasisOp::Sparse(s) => s.inner(a),
            BasisOp::Pauli { string, scale } => string.trace_with(a) * scale,
        }
    }

    /// `<psi| D |psi>`.
    pub fn expectation(&self, psi: &CVec) -> Complex64 {
        match self {
            BasisOp::Sparse(s) => s.expectation(psi),
            BasisOp::Pauli { string, scale } => {
                let (flip, zm) = string.index_masks();
                let mut acc = linalg::ZERO;
                for i in 0..psi.len() {
                    let sign = if (zm & i).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                    acc += psi[i ^ flip].conj() * psi[i] * sign;
                }
                acc * crate::pauli::i_pow(string.phase()) * scale
            }
        }
    }
}
