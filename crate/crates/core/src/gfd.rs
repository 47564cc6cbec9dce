//! Group-Fourier decomposition of operator space: irrep projections and
//! purities, their phase-space filtered versions, Haar statistics and the
//! coherent-state fidelity witness.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::models::{pauli_label, IrrepBlock, IrrepLabel, PhasePoint, QrtKind, QrtModel};
use crate::operator::OperatorRep;
use crate::pauli::{pauli_transform, PauliString, PauliSum};
use crate::wigner_symbols::{clebsch_gordan, CgQuery, HalfInt};

/// Per-irrep purities of an operator.
#[derive(Clone, Debug, PartialEq)]
pub struct PuritySpectrum {
    pub entries: BTreeMap<IrrepLabel, f64>,
    pub total: f64,
}

impl PuritySpectrum {
    pub fn from_entries(entries: BTreeMap<IrrepLabel, f64>) -> Self {
        let total = entries.values().sum();
        PuritySpectrum { entries, total }
    }

    pub fn get(&self, label: IrrepLabel) -> f64 {
        self.entries.get(&label).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (IrrepLabel, f64)> + '_ {
        self.entries.iter().map(|(l, v)| (*l, *v))
    }
}

fn check_dim(model: &QrtModel, a: &OperatorRep) -> Result<()> {
    if a.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: a.dim(),
        });
    }
    Ok(())
}

/// `A_lambda = sum_j <D_j, A> D_j`.
pub fn gfd_project(a: &OperatorRep, block: &IrrepBlock) -> Result<OperatorRep> {
    let d = block.basis.first().map(|b| b.dim()).unwrap_or(0);
    if a.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: a.dim(),
        });
    }
    if let OperatorRep::Pauli(p) = a {
        if block
            .basis
            .iter()
            .all(|b| matches!(b, crate::operator::BasisOp::Pauli { .. }))
        {
            let mut out = PauliSum::zero(p.num_qubits());
            for b in &block.basis {
                let crate::operator::BasisOp::Pauli { string, scale } = b else {
                    unreachable!()
                };
                let w = b.inner(a)?;
                out.add_term(w * scale, string);
            }
            return Ok(OperatorRep::Pauli(out));
        }
    }
    let dense = a.to_dense();
    let mut out = CMat::zeros(d, d);
    for b in &block.basis {
        let w = b.inner_dense(&dense);
        out += b.to_dense() * w;
    }
    Ok(OperatorRep::Dense(out))
}

/// Purities `P_lambda(A) = sum_j |Tr[D_j A]|^2` over every irrep of the model.
pub fn purity_spectrum(a: &OperatorRep, model: &QrtModel) -> Result<PuritySpectrum> {
    check_dim(model, a)?;
    let mut entries: BTreeMap<IrrepLabel, f64> = model.labels().into_iter().map(|l| (l, 0.0)).collect();
    let kind = model.kind();
    match (kind, a) {
        (QrtKind::Spin(_), _) => {
            let dense = a.to_dense();
            for block in model.blocks()?.iter() {
                let p: f64 = block.basis.iter().map(|b| b.inner_dense(&dense).norm_sqr()).sum();
                entries.insert(block.label, p);
            }
        }
        (_, OperatorRep::Pauli(p)) => {
            let scale = (p.num_qubits() as f64).exp2();
            for (coeff, string) in p.terms() {
                let label = pauli_label(&kind, &string).expect("qubit model");
                *entries.get_mut(&label).unwrap() += coeff.norm_sqr() * scale;
            }
        }
        (_, OperatorRep::Dense(m)) => {
            let n = model.dim().trailing_zeros() as usize;
            let inv = (-(n as f64)).exp2();
            pauli_transform(m, |x, z, t| {
                let label = pauli_label(&kind, &PauliString::from_masks(n, x, z, 0)).expect("qubit model");
                *entries.get_mut(&label).unwrap() += t.norm_sqr() * inv;
            })?;
        }
    }
    Ok(PuritySpectrum::from_entries(entries))
}

/// Purity spectrum of the pure state `|psi><psi|`.
pub fn state_purity_spectrum(psi: &CVec, model: &QrtModel) -> Result<PuritySpectrum> {
    purity_spectrum(&OperatorRep::projector(psi), model)
}

/// `tau_lambda` computed as `P_lambda(|hw><hw|) / d_lambda`.
pub fn tau_from_purities(model: &QrtModel) -> Result<BTreeMap<IrrepLabel, f64>> {
    let spec = state_purity_spectrum(&model.hw_state(), model)?;
    spec.iter()
        .map(|(l, p)| Ok((l, p / model.irrep_dim(l)? as f64)))
        .collect()
}

/// `P_lambda(|S,m><S,m|)` as a squared Clebsch–Gordan coefficient.
pub fn closed_form_spin_purity(spin: HalfInt, m: HalfInt, lambda: u32) -> Result<f64> {
    if m.twice().abs() > spin.twice() || (spin.twice() - m.twice()) % 2 != 0 {
        return Err(Error::InvalidLabel(format!("m={m} for S={spin}")));
    }
    if lambda as i32 > spin.twice() {
        return Err(Error::LabelOutOfRange {
            label: lambda.to_string(),
            model: format!("spin S={spin}"),
        });
    }
    let cg = clebsch_gordan(&CgQuery::new(
        spin,
        m,
        spin,
        -m,
        HalfInt::from_int(lambda as i32),
        HalfInt::ZERO,
    ))?;
    Ok(cg * cg)
}

/// `tau_lambda^{-s}`, or zero on sectors absent from phase space.
pub fn filter_gain(model: &QrtModel, label: IrrepLabel, s: f64) -> Result<f64> {
    let tau = model.tau(label)?;
    Ok(if tau > 0.0 { tau.powf(-s) } else { 0.0 })
}

/// Phase-space purities obtained from operator-space ones: `tau^{-s} P_lambda`.
pub fn phase_purity(spec: &PuritySpectrum, s: f64, model: &QrtModel) -> Result<PuritySpectrum> {
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!("s = {s}")));
    }
    let entries = spec
        .iter()
        .map(|(l, p)| Ok((l, filter_gain(model, l, s)? * p)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(PuritySpectrum::from_entries(entries))
}

/// Purity of the kernel `Delta(Omega, s)` on irrep `lambda`: `tau^{-s} d_lambda`.
pub fn kernel_purity(model: &QrtModel, label: IrrepLabel, s: f64) -> Result<f64> {
    Ok(filter_gain(model, label, s)? * model.irrep_dim(label)? as f64)
}

/// Exact Haar average of `P_lambda` over pure states.
pub fn haar_mean_purity(model: &QrtModel, label: IrrepLabel) -> Result<f64> {
    let d = model.dim() as f64;
    if label.is_trivial() {
        model.check_label(label)?;
        Ok(1.0 / d)
    } else {
        Ok(model.irrep_dim(label)? as f64 / (d * (d + 1.0)))
    }
}

/// Operator-space purity spectra of `nsamples` Haar-random pure states.
///
/// Sample `i` uses stream `i` of a ChaCha8 generator seeded with `seed`, so
/// the output does not depend on the thread count.
pub fn haar_purity_samples(model: &QrtModel, nsamples: usize, seed: u64) -> Result<Vec<PuritySpectrum>> {
    (0..nsamples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let psi = linalg::haar_state(model.dim(), &mut rng);
            state_purity_spectrum(&psi, model)
        })
        .collect()
}

/// Monte-Carlo mean and standard error of a sample.
pub fn mean_and_std_err(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// One row of the Haar / highest-weight duality comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct DualityRow {
    pub label: IrrepLabel,
    pub mean: f64,
    pub std_err: f64,
    pub rhs: f64,
    /// `(mean - rhs) / std_err`; infinite when the sample is constant and differs.
    pub z: f64,
}

fn z_score(mean: f64, se: f64, target: f64) -> f64 {
    let diff = mean - target;
    let scale = 1e-12 * target.abs().max(mean.abs()).max(1e-300);
    if diff.abs() <= scale {
        0.0
    } else if se == 0.0 {
        diff.signum() * f64::INFINITY
    } else {
        diff / se
    }
}

/// Compares the Haar average of phase-space purities at `s` with the
/// highest-weight phase-space purities at `s + 1` divided by `d(d+1)`.
pub fn duality_check(model: &QrtModel, s: f64, nsamples: usize, seed: u64) -> Result<Vec<DualityRow>> {
    if nsamples < 100 {
        return Err(Error::InvalidArgument(format!("nsamples = {nsamples} < 100")));
    }
    let d = model.dim() as f64;
    let hw = phase_purity(&state_purity_spectrum(&model.hw_state(), model)?, s + 1.0, model)?;
    let samples = haar_purity_samples(model, nsamples, seed)?;
    let filtered: Vec<PuritySpectrum> = samples
        .iter()
        .map(|p| phase_purity(p, s, model))
        .collect::<Result<_>>()?;
    Ok(model
        .labels()
        .into_iter()
        .map(|label| {
            let xs: Vec<f64> = filtered.iter().map(|p| p.get(label)).collect();
            let (mean, std_err) = mean_and_std_err(&xs);
            let rhs = hw.get(label) / (d * (d + 1.0));
            DualityRow {
                label,
                mean,
                std_err,
                rhs,
                z: z_score(mean, std_err, rhs),
            }
        })
        .collect())
}

/// Markov bound `d_lambda / (a d (d+1))` on `Pr[P_lambda(psi_H) >= a]`.
pub fn markov_bound(model: &QrtModel, label: IrrepLabel, a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Markov threshold a = {a} must be positive"
        )));
    }
    let d = model.dim() as f64;
    Ok(model.irrep_dim(label)? as f64 / (a * d * (d + 1.0)))
}

/// Empirical exceedance frequency of `P_lambda >= a` against the Markov bound.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovRow {
    pub label: IrrepLabel,
    pub a: f64,
    pub frequency: f64,
    pub bound: f64,
    /// Binomial standard error of `frequency`.
    pub sigma: f64,
}

impl MarkovRow {
    pub fn holds(&self, nsigma: f64) -> bool {
        self.frequency <= self.bound + nsigma * self.sigma
    }
}

pub fn markov_check(samples: &[PuritySpectrum], model: &QrtModel, a: f64) -> Result<Vec<MarkovRow>> {
    let n = samples.len() as f64;
    model
        .labels()
        .into_iter()
        .map(|label| {
            let hits = samples.iter().filter(|p| p.get(label) >= a).count() as f64;
            let frequency = hits / n;
            Ok(MarkovRow {
                label,
                a,
                frequency,
                bound: markov_bound(model, label, a)?,
                sigma: (frequency * (1.0 - frequency) / n).sqrt(),
            })
        })
        .collect()
}

/// Generator `-ln tau_lambda` of the exponential s-flow of phase purities.
pub fn s_flow_generator(model: &QrtModel, label: IrrepLabel) -> Result<f64> {
    let tau = model.tau(label)?;
    if tau <= 0.0 {
        return Err(Error::AbsentSector(format!("irrep {label} has tau = 0")));
    }
    Ok(-tau.ln())
}

/// Bounds `(min, max) tau^{-s} Tr[rho^2]` on the phase-space norm of `F_rho`,
/// taken over sectors present in phase space.
pub fn norm_bounds(model: &QrtModel, s: f64, rho: &OperatorRep) -> Result<(f64, f64)> {
    check_dim(model, rho)?;
    if !rho.is_hermitian(1e-10) {
        return Err(Error::InvalidArgument("norm bounds need a Hermitian operator".into()));
    }
    let purity = rho.hs_norm_sqr();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for (_, _, tau) in model.tau_table() {
        if tau > 0.0 {
            let g = tau.powf(-s);
            lo = lo.min(g);
            hi = hi.max(g);
        }
    }
    Ok((lo * purity, hi * purity))
}

/// Maximum coherent-state fidelity and where it is attained.
#[derive(Clone, Debug, PartialEq)]
pub struct Fidelity {
    pub value: f64,
    pub point: PhasePoint,
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// `max_Omega |<Omega|psi>|^2` by a `n_theta x n_phi` grid per sphere followed
/// by coordinate-wise golden-section refinement to `1e-6` in angle.
pub fn coherent_fidelity(model: &QrtModel, psi: &CVec, grid: (usize, usize)) -> Result<Fidelity> {
    if psi.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: psi.len(),
        });
    }
    let (nt, np) = grid;
    if nt < 2 || np < 1 {
        return Err(Error::InvalidArgument(format!("fidelity grid {nt}x{np} too small")));
    }
    let nsph = match model.kind() {
        QrtKind::Spin(_) => 1,
        QrtKind::Multipartite(n) => n,
        QrtKind::Fermionic(_) => {
            return Err(Error::Unsupported(
                "fidelity search over the fermionic phase space".into(),
            ))
        }
    };
    if nsph > 3 {
        return Err(Error::UnsupportedSize(nsph));
    }
    let norm = psi.norm_squared();
    let point = |angles: &[f64]| -> PhasePoint {
        let pairs: Vec<(f64, f64)> = angles
            .chunks(2)
            .map(|c| (c[0].clamp(0.0, PI), c[1].rem_euclid(2.0 * PI)))
            .collect();
        match model.kind() {
            QrtKind::Spin(_) => PhasePoint::Sphere {
                theta: pairs[0].0,
                phi: pairs[0].1,
            },
            _ => PhasePoint::Spheres(pairs),
        }
    };
    let overlap = |angles: &[f64]| -> f64 {
        let v = model.coherent_state(&point(angles)).expect("valid angles");
        v.dotc(psi).norm_sqr() / norm
    };

    let thetas: Vec<f64> = (0..nt).map(|i| PI * i as f64 / (nt - 1) as f64).collect();
    let phis: Vec<f64> = (0..np).map(|j| 2.0 * PI * j as f64 / np as f64).collect();
    let per_sphere = nt * np;
    let total = per_sphere.pow(nsph as u32);
    let (best_idx, _) = (0..total)
        .into_par_iter()
        .map(|mut idx| {
            let orig = idx;
            let mut angles = Vec::with_capacity(2 * nsph);
            for _ in 0..nsph {
                let k = idx % per_sphere;
                idx /= per_sphere;
                angles.push(thetas[k / np]);
                angles.push(phis[k % np]);
            }
            (orig, overlap(&angles))
        })
        .reduce(
            || (0, f64::NEG_INFINITY),
            |a, b| if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a },
        );

    let mut angles = Vec::with_capacity(2 * nsph);
    let mut idx = best_idx;
    for _ in 0..nsph {
        let k = idx % per_sphere;
        idx /= per_sphere;
        angles.push(thetas[k / np]);
        angles.push(phis[k % np]);
    }
    let (dt, dp) = (PI / (nt - 1) as f64, 2.0 * PI / np as f64);
    let mut best = overlap(&angles);
    for _ in 0..60 {
        let before = best;
        for c in 0..angles.len() {
            let (lo, hi) = if c % 2 == 0 {
                ((angles[c] - dt).max(0.0), (angles[c] + dt).min(PI))
            } else {
                (angles[c] - dp, angles[c] + dp)
            };
            let (x, v) = golden_max(
                |t| {
                    let mut a = angles.clone();
                    a[c] = t;
                    overlap(&a)
                },
                lo,
                hi,
                1e-7,
            );
            if v > best {
                best = v;
                angles[c] = x;
            }
        }
        if best - before < 1e-14 {
            break;
        }
    }
    Ok(Fidelity {
        value: best,
        point: point(&angles),
    })
}
