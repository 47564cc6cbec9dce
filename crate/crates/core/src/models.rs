//! The three concrete resource theories: spin-S SU(2) coherence, n-qubit
//! multipartite entanglement and n-mode fermionic Gaussianity.
//!
//! Each model exposes its irrep decomposition of operator space (labels,
//! dimensions, Hermitian orthonormal bases, weight-zero index sets), the
//! highest-weight state, coherent states on the phase space and the adjoint
//! representation matrices of the group.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec, SparseOp};
use crate::operator::BasisOp;
use crate::pauli::{majorana, majorana_degree, PauliString};
use crate::wigner_symbols::{cg_hw_zero, clebsch_gordan, CgQuery, HalfInt};

/// Largest spin dimension handled with dense matrices.
pub const MAX_SPIN_DIM: usize = 64;
/// Largest qubit count for label-level and Pauli-coefficient work.
pub const MAX_QUBITS: usize = 10;
/// Largest qubit count for dense kernels and coherent states.
pub const MAX_DENSE_QUBITS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QrtKind {
    Spin(HalfInt),
    Multipartite(usize),
    Fermionic(usize),
}

impl fmt::Display for QrtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QrtKind::Spin(s) => write!(f, "spin(S={s})"),
            QrtKind::Multipartite(n) => write!(f, "multipartite(n={n})"),
            QrtKind::Fermionic(n) => write!(f, "fermionic(n={n})"),
        }
    }
}

/// Irrep label of operator space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrrepLabel {
    /// Spin-lambda irrep of SU(2).
    Spin(u32),
    /// Support bitstring of local Paulis, qubit `k` on bit `k`.
    Sites(u64),
    /// Number of Majorana factors.
    Degree(u32),
}

impl IrrepLabel {
    pub fn is_trivial(&self) -> bool {
        matches!(self, IrrepLabel::Spin(0) | IrrepLabel::Sites(0) | IrrepLabel::Degree(0))
    }

    pub fn render(&self, kind: &QrtKind) -> String {
        match (self, kind) {
            (IrrepLabel::Sites(bits), QrtKind::Multipartite(n)) => {
                (0..*n).map(|k| if bits >> k & 1 == 1 { '1' } else { '0' }).collect()
            }
            _ => self.to_string(),
        }
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::Spin(l) | IrrepLabel::Degree(l) => write!(f, "{l}"),
            IrrepLabel::Sites(bits) => write!(f, "{bits:b}"),
        }
    }
}

/// An irrep of operator space with a Hermitian orthonormal basis.
#[derive(Clone, Debug)]
pub struct IrrepBlock {
    pub label: IrrepLabel,
    pub dim: usize,
    pub basis: Vec<BasisOp>,
    /// Indices into `basis` of the weight-zero (diagonal) elements.
    pub weight_zero: Vec<usize>,
}

/// A point of the phase space.
#[derive(Clone, Debug, PartialEq)]
pub enum PhasePoint {
    /// Polar and azimuthal angle on the sphere.
    Sphere { theta: f64, phi: f64 },
    /// One sphere per qubit.
    Spheres(Vec<(f64, f64)>),
    /// Real antisymmetric `2n x 2n` generator `h`.
    Gaussian(DMatrix<f64>),
}

impl PhasePoint {
    pub fn sphere(theta: f64, phi: f64) -> Self {
        PhasePoint::Sphere {
            theta,
            phi: phi.rem_euclid(2.0 * PI),
        }
    }

    pub fn north(kind: &QrtKind) -> Self {
        match kind {
            QrtKind::Spin(_) => PhasePoint::Sphere { theta: 0.0, phi: 0.0 },
            QrtKind::Multipartite(n) => PhasePoint::Spheres(vec![(0.0, 0.0); *n]),
            QrtKind::Fermionic(n) => PhasePoint::Gaussian(DMatrix::zeros(2 * n, 2 * n)),
        }
    }
}

fn check_angles(theta: f64, phi: f64) -> Result<()> {
    let eps = 1e-12;
    if !(theta.is_finite() && phi.is_finite())
        || theta < -eps
        || theta > PI + eps
        || phi < -eps
        || phi >= 2.0 * PI + eps
    {
        return Err(Error::InvalidArgument(format!(
            "angles out of range: theta={theta}, phi={phi}"
        )));
    }
    Ok(())
}

/// ZYZ Euler angles; the rotation `Rz(alpha) Ry(beta) Rz(gamma)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Euler {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Euler {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Euler { alpha, beta, gamma }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Euler {
            alpha: rng.gen_range(0.0..2.0 * PI),
            beta: (1.0 - 2.0 * rng.gen::<f64>()).acos(),
            gamma: rng.gen_range(0.0..2.0 * PI),
        }
    }

    /// The SO(3) matrix acting on Bloch vectors.
    pub fn rotation(&self) -> nalgebra::Matrix3<f64> {
        rot_z(self.alpha) * rot_y(self.beta) * rot_z(self.gamma)
    }

    /// The spin-1/2 unitary `exp(-i a Z/2) exp(-i b Y/2) exp(-i g Z/2)`.
    pub fn qubit_unitary(&self) -> CMat {
        let rz = |a: f64| {
            CMat::from_row_slice(
                2,
                2,
                &[
                    Complex64::from_polar(1.0, -a / 2.0),
                    linalg::ZERO,
                    linalg::ZERO,
                    Complex64::from_polar(1.0, a / 2.0),
                ],
            )
        };
        let (cb, sb) = ((self.beta / 2.0).cos(), (self.beta / 2.0).sin());
        let ry = CMat::from_row_slice(2, 2, &[c(cb), c(-sb), c(sb), c(cb)]);
        rz(self.alpha) * ry * rz(self.gamma)
    }
}

fn rot_z(a: f64) -> nalgebra::Matrix3<f64> {
    let (c, s) = (a.cos(), a.sin());
    nalgebra::Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

fn rot_y(a: f64) -> nalgebra::Matrix3<f64> {
    let (c, s) = (a.cos(), a.sin());
    nalgebra::Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

/// An element of the free group `G`.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupElement {
    Spin(Euler),
    LocalSpins(Vec<Euler>),
    /// Spinor unitary `exp(sum_{mu nu} h_{mu nu} c_mu c_nu)`.
    Gaussian(DMatrix<f64>),
}

/// Named benchmark states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NamedState {
    /// `|S, m>` (spin) or computational basis state `|m>` (qubits).
    Basis(HalfInt),
    Ghz,
    Haar(u64),
}

struct SpinFrame {
    jz: CMat,
    jy_vecs: CMat,
    jy_vals: Vec<f64>,
}

#[derive(Default)]
struct Cache {
    blocks: OnceLock<Arc<Vec<IrrepBlock>>>,
    spin: OnceLock<SpinFrame>,
    majoranas: OnceLock<Vec<CMat>>,
}

/// A resource-theory descriptor with lazily built, thread-safe caches.
#[derive(Clone)]
pub struct QrtModel {
    kind: QrtKind,
    cache: Arc<Cache>,
}

impl fmt::Debug for QrtModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QrtModel({})", self.kind)
    }
}

impl QrtModel {
    pub fn new(kind: QrtKind) -> Result<Self> {
        match kind {
            QrtKind::Spin(s) => {
                if s.twice() < 1 || s.multiplicity() > MAX_SPIN_DIM {
                    return Err(Error::InvalidArgument(format!("spin S={s} outside 1/2..=63/2")));
                }
            }
            QrtKind::Multipartite(n) | QrtKind::Fermionic(n) => {
                if n == 0 || n > MAX_QUBITS {
                    return Err(Error::UnsupportedSize(n));
                }
            }
        }
        Ok(QrtModel {
            kind,
            cache: Arc::new(Cache::default()),
        })
    }

    pub fn spin(s: HalfInt) -> Result<Self> {
        QrtModel::new(QrtKind::Spin(s))
    }

    pub fn multipartite(n: usize) -> Result<Self> {
        QrtModel::new(QrtKind::Multipartite(n))
    }

    pub fn fermionic(n: usize) -> Result<Self> {
        QrtModel::new(QrtKind::Fermionic(n))
    }

    pub fn kind(&self) -> QrtKind {
        self.kind
    }

    /// Hilbert space dimension.
    pub fn dim(&self) -> usize {
        match self.kind {
            QrtKind::Spin(s) => s.multiplicity(),
            QrtKind::Multipartite(n) | QrtKind::Fermionic(n) => 1 << n,
        }
    }

    fn num_qubits(&self) -> Option<usize> {
        match self.kind {
            QrtKind::Spin(_) => None,
            QrtKind::Multipartite(n) | QrtKind::Fermionic(n) => Some(n),
        }
    }

    fn require_dense(&self) -> Result<()> {
        match self.num_qubits() {
            Some(n) if n > MAX_DENSE_QUBITS => Err(Error::UnsupportedSize(n)),
            _ => Ok(()),
        }
    }

    pub fn labels(&self) -> Vec<IrrepLabel> {
        match self.kind {
            QrtKind::Spin(s) => (0..=s.twice() as u32).map(IrrepLabel::Spin).collect(),
            QrtKind::Multipartite(n) => (0..1u64 << n).map(IrrepLabel::Sites).collect(),
            QrtKind::Fermionic(n) => (0..=2 * n as u32).map(IrrepLabel::Degree).collect(),
        }
    }

    pub fn trivial_label(&self) -> IrrepLabel {
        match self.kind {
            QrtKind::Spin(_) => IrrepLabel::Spin(0),
            QrtKind::Multipartite(_) => IrrepLabel::Sites(0),
            QrtKind::Fermionic(_) => IrrepLabel::Degree(0),
        }
    }

    pub fn check_label(&self, label: IrrepLabel) -> Result<()> {
        let ok = match (self.kind, label) {
            (QrtKind::Spin(s), IrrepLabel::Spin(l)) => l as i32 <= s.twice(),
            (QrtKind::Multipartite(n), IrrepLabel::Sites(b)) => b < 1 << n,
            (QrtKind::Fermionic(n), IrrepLabel::Degree(l)) => l as usize <= 2 * n,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::LabelOutOfRange {
                label: label.to_string(),
                model: self.kind.to_string(),
            })
        }
    }

    /// Irrep dimension `d_lambda`.
    pub fn irrep_dim(&self, label: IrrepLabel) -> Result<usize> {
        self.check_label(label)?;
        Ok(match (self.kind, label) {
            (QrtKind::Spin(_), IrrepLabel::Spin(l)) => 2 * l as usize + 1,
            (QrtKind::Multipartite(_), IrrepLabel::Sites(b)) => 3usize.pow(b.count_ones()),
            (QrtKind::Fermionic(n), IrrepLabel::Degree(l)) => binomial(2 * n as u64, l as u64) as usize,
            _ => unreachable!(),
        })
    }

    /// Closed-form `tau_lambda`.
    pub fn tau(&self, label: IrrepLabel) -> Result<f64> {
        self.check_label(label)?;
        Ok(match (self.kind, label) {
            (QrtKind::Spin(s), IrrepLabel::Spin(l)) => {
                let cg = cg_hw_zero(s, l)?;
                cg * cg / f64::from(2 * l + 1)
            }
            (QrtKind::Multipartite(n), IrrepLabel::Sites(b)) => {
                1.0 / (3f64.powi(b.count_ones() as i32) * (n as f64).exp2())
            }
            (QrtKind::Fermionic(n), IrrepLabel::Degree(l)) => {
                if l % 2 == 1 {
                    0.0
                } else {
                    binomial(n as u64, u64::from(l / 2)) as f64
                        / (binomial(2 * n as u64, u64::from(l)) as f64 * (n as f64).exp2())
                }
            }
            _ => unreachable!(),
        })
    }

    /// All `(label, d_lambda, tau_lambda)` rows.
    pub fn tau_table(&self) -> Vec<(IrrepLabel, usize, f64)> {
        self.labels()
            .into_iter()
            .map(|l| (l, self.irrep_dim(l).unwrap(), self.tau(l).unwrap()))
            .collect()
    }

    /// Irrep bases, cached after the first call.
    pub fn blocks(&self) -> Result<Arc<Vec<IrrepBlock>>> {
        if let Some(n) = self.num_qubits() {
            if n > 6 {
                return Err(Error::Unsupported(format!(
                    "materializing all 4^{n} basis elements; use the label-level routines"
                )));
            }
        }
        if let Some(b) = self.cache.blocks.get() {
            return Ok(b.clone());
        }
        let built: Vec<IrrepBlock> = match self.kind {
            QrtKind::Spin(s) => (0..=s.twice() as u32)
                .map(|l| irrep_block_su2(s, l))
                .collect::<Result<_>>()?,
            QrtKind::Multipartite(n) => irrep_blocks_multipartite(n)?.collect(),
            QrtKind::Fermionic(n) => irrep_blocks_fermionic(n)?.collect(),
        };
        Ok(self.cache.blocks.get_or_init(|| Arc::new(built)).clone())
    }

    pub fn block(&self, label: IrrepLabel) -> Result<IrrepBlock> {
        self.check_label(label)?;
        match (self.kind, label) {
            (QrtKind::Spin(s), IrrepLabel::Spin(l)) => {
                if let Some(b) = self.cache.blocks.get() {
                    return Ok(b[l as usize].clone());
                }
                irrep_block_su2(s, l)
            }
            (QrtKind::Multipartite(n), IrrepLabel::Sites(b)) => Ok(multipartite_block(n, b)),
            (QrtKind::Fermionic(n), IrrepLabel::Degree(l)) => Ok(fermionic_block(n, l)),
            _ => unreachable!(),
        }
    }

    /// Highest-weight state `|S,S>` or `|0...0>`.
    pub fn hw_state(&self) -> CVec {
        let mut v = CVec::zeros(self.dim());
        v[0] = linalg::ONE;
        v
    }

    fn spin_frame(&self) -> &SpinFrame {
        self.cache.spin.get_or_init(|| {
            let QrtKind::Spin(s) = self.kind else { unreachable!() };
            let (_, jy, jz) = spin_operators(s);
            let eig = jy.symmetric_eigen();
            SpinFrame {
                jz,
                jy_vecs: eig.eigenvectors,
                jy_vals: eig.eigenvalues.iter().copied().collect(),
            }
        })
    }

    fn spin_unitary(&self, e: &Euler) -> CMat {
        let f = self.spin_frame();
        let d = self.dim();
        let zphase = |a: f64| {
            CMat::from_diagonal(&CVec::from_iterator(
                d,
                (0..d).map(|i| Complex64::from_polar(1.0, -a * f.jz[(i, i)].re)),
            ))
        };
        let ry = &f.jy_vecs
            * CMat::from_diagonal(&CVec::from_iterator(
                d,
                f.jy_vals.iter().map(|&l| Complex64::from_polar(1.0, -e.beta * l)),
            ))
            * f.jy_vecs.adjoint();
        zphase(e.alpha) * ry * zphase(e.gamma)
    }

    fn majorana_dense(&self) -> &Vec<CMat> {
        self.cache.majoranas.get_or_init(|| {
            let n = self.num_qubits().unwrap();
            (1..=2 * n).map(|mu| majorana(mu, n).unwrap().to_dense()).collect()
        })
    }

    /// `sum_{mu,nu} h_{mu nu} c_mu c_nu` as a dense anti-Hermitian matrix.
    pub fn gaussian_generator(&self, h: &DMatrix<f64>) -> Result<CMat> {
        let QrtKind::Fermionic(n) = self.kind else {
            return Err(Error::Unsupported(
                "Gaussian generators need the fermionic model".into(),
            ));
        };
        self.require_dense()?;
        if h.nrows() != 2 * n || h.ncols() != 2 * n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                got: h.nrows(),
            });
        }
        if (h + h.transpose()).norm() > 1e-12 {
            return Err(Error::InvalidArgument(
                "fermionic generator must be antisymmetric".into(),
            ));
        }
        let cs = self.majorana_dense();
        let d = self.dim();
        let mut g = CMat::zeros(d, d);
        for mu in 0..2 * n {
            for nu in mu + 1..2 * n {
                let w = 2.0 * h[(mu, nu)];
                if w != 0.0 {
                    g += &cs[mu] * &cs[nu] * c(w);
                }
            }
        }
        Ok(g)
    }

    /// Dense `T(g)`.
    pub fn unitary(&self, g: &GroupElement) -> Result<CMat> {
        match (self.kind, g) {
            (QrtKind::Spin(_), GroupElement::Spin(e)) => Ok(self.spin_unitary(e)),
            (QrtKind::Multipartite(n), GroupElement::LocalSpins(es)) => {
                self.require_dense()?;
                if es.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: es.len(),
                    });
                }
                Ok(es
                    .iter()
                    .skip(1)
                    .fold(es[0].qubit_unitary(), |acc, e| linalg::kron(&acc, &e.qubit_unitary())))
            }
            (QrtKind::Fermionic(_), GroupElement::Gaussian(h)) => Ok(self.gaussian_generator(h)?.exp()),
            _ => Err(Error::InvalidArgument(format!(
                "group element does not belong to {}",
                self.kind
            ))),
        }
    }

    /// The coset representative `T(Omega)`.
    pub fn coset_element(&self, omega: &PhasePoint) -> Result<GroupElement> {
        match (self.kind, omega) {
            (QrtKind::Spin(_), PhasePoint::Sphere { theta, phi }) => {
                check_angles(*theta, *phi)?;
                Ok(GroupElement::Spin(Euler::new(*phi, *theta, 0.0)))
            }
            (QrtKind::Multipartite(n), PhasePoint::Spheres(pts)) => {
                if pts.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: pts.len(),
                    });
                }
                pts.iter().try_for_each(|&(t, p)| check_angles(t, p))?;
                Ok(GroupElement::LocalSpins(
                    pts.iter().map(|&(t, p)| Euler::new(p, t, 0.0)).collect(),
                ))
            }
            (QrtKind::Fermionic(_), PhasePoint::Gaussian(h)) => Ok(GroupElement::Gaussian(h.clone())),
            _ => Err(Error::InvalidArgument(format!(
                "phase point does not belong to {}",
                self.kind
            ))),
        }
    }

    pub fn coset_unitary(&self, omega: &PhasePoint) -> Result<CMat> {
        self.unitary(&self.coset_element(omega)?)
    }

    /// Coherent state `|Omega> = T(Omega)|hw>`.
    pub fn coherent_state(&self, omega: &PhasePoint) -> Result<CVec> {
        match (self.kind, omega) {
            (QrtKind::Spin(s), PhasePoint::Sphere { theta, phi }) => {
                check_angles(*theta, *phi)?;
                Ok(spin_coherent(s, *theta, *phi))
            }
            (QrtKind::Multipartite(n), PhasePoint::Spheres(pts)) => {
                if pts.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: pts.len(),
                    });
                }
                pts.iter().try_for_each(|&(t, p)| check_angles(t, p))?;
                let mut v = CVec::from_element(1, linalg::ONE);
                for &(t, p) in pts {
                    v = v.kronecker(&spin_coherent(HalfInt::HALF, t, p));
                }
                Ok(v)
            }
            (QrtKind::Fermionic(_), PhasePoint::Gaussian(_)) => {
                let u = self.coset_unitary(omega)?;
                Ok(u.column(0).into_owned())
            }
            _ => Err(Error::InvalidArgument(format!(
                "phase point does not belong to {}",
                self.kind
            ))),
        }
    }

    /// `[Phi(g)]_{j j'} = Tr[D_j' T(g) D_j T(g)^dag]`.
    pub fn adjoint_rep_matrix(&self, label: IrrepLabel, g: &GroupElement) -> Result<DMatrix<f64>> {
        let u = self.unitary(g)?;
        let block = self.block(label)?;
        Ok(adjoint_matrix(&block, &u))
    }

    /// The phase point `g . Omega`.
    pub fn act(&self, g: &GroupElement, omega: &PhasePoint) -> Result<PhasePoint> {
        let rotate = |e: &Euler, theta: f64, phi: f64| {
            let v = nalgebra::Vector3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
            let w = e.rotation() * v;
            let t = w.z.clamp(-1.0, 1.0).acos();
            let p = w.y.atan2(w.x).rem_euclid(2.0 * PI);
            (t, p)
        };
        match (self.kind, g, omega) {
            (QrtKind::Spin(_), GroupElement::Spin(e), PhasePoint::Sphere { theta, phi }) => {
                let (t, p) = rotate(e, *theta, *phi);
                Ok(PhasePoint::Sphere { theta: t, phi: p })
            }
            (QrtKind::Multipartite(_), GroupElement::LocalSpins(es), PhasePoint::Spheres(pts)) => Ok(
                PhasePoint::Spheres(es.iter().zip(pts).map(|(e, &(t, p))| rotate(e, t, p)).collect()),
            ),
            (QrtKind::Fermionic(_), GroupElement::Gaussian(hg), PhasePoint::Gaussian(ho)) => {
                // U(h) rotates Majoranas by R = exp(-4h) with R(U1 U2) = R(U2) R(U1)
                let r = (ho * -4.0).exp() * (hg * -4.0).exp();
                Ok(PhasePoint::Gaussian(linalg::so_log(&r) * -0.25))
            }
            _ => Err(Error::InvalidArgument("group element and phase point mismatch".into())),
        }
    }

    /// A phase point drawn from the invariant measure.
    pub fn random_phase_point<R: Rng + ?Sized>(&self, rng: &mut R) -> PhasePoint {
        let sphere = |rng: &mut R| ((1.0 - 2.0 * rng.gen::<f64>()).acos(), rng.gen_range(0.0..2.0 * PI));
        match self.kind {
            QrtKind::Spin(_) => {
                let (theta, phi) = sphere(rng);
                PhasePoint::Sphere { theta, phi }
            }
            QrtKind::Multipartite(n) => PhasePoint::Spheres((0..n).map(|_| sphere(rng)).collect()),
            QrtKind::Fermionic(n) => {
                let o = linalg::haar_special_orthogonal(2 * n, rng);
                PhasePoint::Gaussian(linalg::so_log(&o) * -0.25)
            }
        }
    }

    pub fn random_group_element<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        match self.kind {
            QrtKind::Spin(_) => GroupElement::Spin(Euler::random(rng)),
            QrtKind::Multipartite(n) => GroupElement::LocalSpins((0..n).map(|_| Euler::random(rng)).collect()),
            QrtKind::Fermionic(n) => {
                let o = linalg::haar_special_orthogonal(2 * n, rng);
                GroupElement::Gaussian(linalg::so_log(&o) * -0.25)
            }
        }
    }

    pub fn named_state(&self, which: NamedState) -> Result<CVec> {
        let d = self.dim();
        match which {
            NamedState::Basis(m) => {
                let idx = match self.kind {
                    QrtKind::Spin(s) => {
                        if m.twice().abs() > s.twice() || (s.twice() - m.twice()) % 2 != 0 {
                            return Err(Error::InvalidLabel(format!("m={m} for S={s}")));
                        }
                        ((s.twice() - m.twice()) / 2) as usize
                    }
                    _ => {
                        if !m.is_integer() || m.twice() < 0 || (m.twice() / 2) as usize >= d {
                            return Err(Error::InvalidLabel(format!("basis index {m}")));
                        }
                        (m.twice() / 2) as usize
                    }
                };
                let mut v = CVec::zeros(d);
                v[idx] = linalg::ONE;
                Ok(v)
            }
            NamedState::Ghz => {
                let mut v = CVec::zeros(d);
                v[0] = c(std::f64::consts::FRAC_1_SQRT_2);
                v[d - 1] = c(std::f64::consts::FRAC_1_SQRT_2);
                Ok(v)
            }
            NamedState::Haar(seed) => {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                Ok(linalg::haar_state(d, &mut rng))
            }
        }
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `(Jx, Jy, Jz)` in the `|S,m>` basis with `m` descending.
pub fn spin_operators(s: HalfInt) -> (CMat, CMat, CMat) {
    let d = s.multiplicity();
    let sv = s.value();
    let mut jz = CMat::zeros(d, d);
    let mut jp = CMat::zeros(d, d);
    for i in 0..d {
        let m = sv - i as f64;
        jz[(i, i)] = c(m);
        if i > 0 {
            // <m+1| J+ |m>, row i-1 holds m+1
            jp[(i - 1, i)] = c((sv * (sv + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * c(0.5);
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
    (jx, jy, jz)
}

/// Closed-form `exp(-i phi Jz) exp(-i theta Jy)|S,S>`.
pub fn spin_coherent(s: HalfInt, theta: f64, phi: f64) -> CVec {
    let d = s.multiplicity();
    let two_s = (d - 1) as u64;
    let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    CVec::from_iterator(
        d,
        (0..d).map(|i| {
            // m = S - i
            let m = s.value() - i as f64;
            let amp =
                (binomial(two_s, i as u64) as f64).sqrt() * ch.powi((two_s - i as u64) as i32) * sh.powi(i as i32);
            Complex64::from_polar(amp, -m * phi)
        }),
    )
}

/// Combines complex orthonormal operators `T_q` with `T_q^dag` orthogonal to
/// `T_q` into Hermitian pairs `(T + T^dag)/sqrt2`, `i(T - T^dag)/sqrt2`.
fn hermitian_pair(t: &CMat) -> (CMat, CMat) {
    let td = t.adjoint();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    ((t + &td) * c(r), (t - &td) * Complex64::new(0.0, r))
}

/// Spin-lambda irrep block of operators on spin `S`.
///
/// Spherical tensor operators `T_q = sum_m (-1)^{S-m+q} <S m; S q-m | lambda q> |m><m-q|`
/// are combined into Hermitian pairs; index 0 holds the diagonal `T_0`.
pub fn irrep_block_su2(s: HalfInt, lambda: u32) -> Result<IrrepBlock> {
    if lambda as i32 > s.twice() {
        return Err(Error::LabelOutOfRange {
            label: lambda.to_string(),
            model: format!("spin S={s}"),
        });
    }
    let d = s.multiplicity();
    let lam = lambda as i32;
    let tensor = |q: i32| -> Result<CMat> {
        let mut t = CMat::zeros(d, d);
        for row in 0..d {
            // ket |S, m> with m = S - row; bra <S, m - q|
            let m2 = s.twice() - 2 * row as i32;
            let mb2 = m2 - 2 * q;
            if mb2.abs() > s.twice() {
                continue;
            }
            let col = ((s.twice() - mb2) / 2) as usize;
            let cg = clebsch_gordan(&CgQuery::new(
                s,
                HalfInt::from_twice(m2),
                s,
                HalfInt::from_twice(-mb2),
                HalfInt::from_int(lam),
                HalfInt::from_int(q),
            ))?;
            let expo = (s.twice() - m2) / 2 + q;
            let sign = if expo.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            t[(row, col)] = c(sign * cg);
        }
        Ok(t)
    };
    let mut basis = vec![BasisOp::Sparse(SparseOp::from_dense(&tensor(0)?, 0.0))];
    for q in 1..=lam {
        let (a, b) = hermitian_pair(&tensor(q)?);
        basis.push(BasisOp::Sparse(SparseOp::from_dense(&a, 0.0)));
        basis.push(BasisOp::Sparse(SparseOp::from_dense(&b, 0.0)));
    }
    Ok(IrrepBlock {
        label: IrrepLabel::Spin(lambda),
        dim: basis.len(),
        basis,
        weight_zero: vec![0],
    })
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        Err(Error::UnsupportedSize(n))
    } else {
        Ok(())
    }
}

fn multipartite_block(n: usize, sites: u64) -> IrrepBlock {
    use crate::pauli::Letter;
    let support: Vec<usize> = (0..n).filter(|k| sites >> k & 1 == 1).collect();
    let w = support.len();
    let scale = (-(n as f64) / 2.0).exp2();
    let mut basis = Vec::with_capacity(3usize.pow(w as u32));
    let mut weight_zero = Vec::new();
    for code in 0..3usize.pow(w as u32) {
        let mut letters = vec![Letter::I; n];
        let mut rest = code;
        let mut all_z = true;
        for &k in &support {
            letters[k] = [Letter::Z, Letter::X, Letter::Y][rest % 3];
            all_z &= rest % 3 == 0;
            rest /= 3;
        }
        if all_z {
            weight_zero.push(basis.len());
        }
        basis.push(BasisOp::Pauli {
            string: PauliString::from_letters(&letters),
            scale,
        });
    }
    IrrepBlock {
        label: IrrepLabel::Sites(sites),
        dim: basis.len(),
        basis,
        weight_zero,
    }
}

/// Blocks of the n-qubit local-unitary model, one per support bitstring.
pub fn irrep_blocks_multipartite(n: usize) -> Result<impl Iterator<Item = IrrepBlock>> {
    check_qubits(n)?;
    Ok((0..1u64 << n).map(move |b| multipartite_block(n, b)))
}

/// Hermitian, normalized product of the Majoranas in `set` (ascending, 1-based).
pub fn majorana_monomial(n: usize, set: &[usize]) -> Result<PauliString> {
    let mut p = PauliString::identity(n);
    for &mu in set {
        p = p.mul(&majorana(mu, n)?)?;
    }
    let k = set.len();
    let fix = ((k * (k.saturating_sub(1)) / 2) % 4) as u8;
    Ok(PauliString::from_masks(n, p.x_mask(), p.z_mask(), p.phase() + fix))
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=m {
            if m - v + 1 < k - cur.len() {
                break;
            }
            cur.push(v);
            rec(v + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, m, k, &mut Vec::new(), &mut out);
    out
}

fn fermionic_block(n: usize, degree: u32) -> IrrepBlock {
    let scale = (-(n as f64) / 2.0).exp2();
    let mut basis = Vec::new();
    let mut weight_zero = Vec::new();
    for set in subsets(2 * n, degree as usize) {
        let paired = set
            .chunks(2)
            .all(|ch| ch.len() == 2 && ch[0] % 2 == 1 && ch[1] == ch[0] + 1);
        if degree.is_multiple_of(2) && paired {
            weight_zero.push(basis.len());
        }
        let string = majorana_monomial(n, &set).expect("valid Majorana set");
        debug_assert!(string.is_hermitian());
        basis.push(BasisOp::Pauli { string, scale });
    }
    IrrepBlock {
        label: IrrepLabel::Degree(degree),
        dim: basis.len(),
        basis,
        weight_zero,
    }
}

/// Blocks of the fermionic model, one per Majorana degree `0..=2n`.
pub fn irrep_blocks_fermionic(n: usize) -> Result<impl Iterator<Item = IrrepBlock>> {
    check_qubits(n)?;
    Ok((0..=2 * n as u32).map(move |l| fermionic_block(n, l)))
}

/// Irrep label of a Hermitian Pauli string under a qubit model.
pub fn pauli_label(kind: &QrtKind, p: &PauliString) -> Option<IrrepLabel> {
    match kind {
        QrtKind::Multipartite(_) => Some(IrrepLabel::Sites(p.support())),
        QrtKind::Fermionic(_) => Some(IrrepLabel::Degree(majorana_degree(p))),
        QrtKind::Spin(_) => None,
    }
}

/// Real orthogonal `[Phi]_{j j'} = Tr[D_j' U D_j U^dag]`.
pub fn adjoint_matrix(block: &IrrepBlock, u: &CMat) -> DMatrix<f64> {
    let dense: Vec<CMat> = block.basis.iter().map(|b| b.to_dense()).collect();
    let ud = u.adjoint();
    let mut phi = DMatrix::zeros(block.dim, block.dim);
    for (j, dj) in dense.iter().enumerate() {
        let conj = u * dj * &ud;
        for (jp, djp) in block.basis.iter().enumerate() {
            phi[(j, jp)] = djp.inner_dense(&conj).re;
        }
    }
    phi
}

/// `<hw| D_j |hw>` for the weight-zero elements, keyed by basis index.
pub fn hw_expectations(model: &QrtModel, block: &IrrepBlock) -> BTreeMap<usize, f64> {
    let hw = model.hw_state();
    block
        .weight_zero
        .iter()
        .map(|&j| (j, block.basis[j].expectation(&hw).re))
        .collect()
}
