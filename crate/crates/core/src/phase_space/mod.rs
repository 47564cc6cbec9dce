//! Stratonovich–Weyl kernels, phase-space symbols and their harmonic analysis.
//!
//! The measure on every phase space is normalized to one and the harmonics
//! `Y_j(Omega) = tau^{-1/2} <Omega|D_j|Omega>` are orthonormal under it.

mod quadrature;

pub use quadrature::{gauss_legendre, required_band, sphere_quadrature, PhaseGrid, SphereQuadrature};

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gfd::PuritySpectrum;
use crate::linalg::{self, c, CMat};
use crate::models::{IrrepLabel, PhasePoint, QrtModel};
use crate::operator::OperatorRep;

/// How a kernel weights each irrep.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelSpec {
    /// Symbol gain `tau^{-s/2}` per irrep.
    CahillGlauber(f64),
    /// Arbitrary real symbol gain `k_lambda` per irrep.
    GeneralizedFilter(BTreeMap<IrrepLabel, f64>),
}

impl KernelSpec {
    pub fn validate(&self, model: &QrtModel) -> Result<()> {
        match self {
            KernelSpec::CahillGlauber(s) if !s.is_finite() => {
                Err(Error::InvalidArgument(format!("s = {s} is not finite")))
            }
            KernelSpec::CahillGlauber(_) => Ok(()),
            KernelSpec::GeneralizedFilter(k) => {
                for (l, v) in k {
                    model.check_label(*l)?;
                    if !v.is_finite() {
                        return Err(Error::InvalidArgument(format!("filter coefficient {v} on {l}")));
                    }
                }
                if !(k.get(&model.trivial_label()).copied().unwrap_or(0.0) > 0.0) {
                    return Err(Error::InvalidArgument(
                        "filter must be positive on the trivial irrep".into(),
                    ));
                }
                for (l, _, tau) in model.tau_table() {
                    if tau > 0.0 && !k.contains_key(&l) {
                        return Err(Error::InvalidArgument(format!(
                            "filter has no coefficient for irrep {l}"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    /// Gain `k_lambda` multiplying each harmonic coefficient of a symbol.
    pub fn gain(&self, model: &QrtModel, label: IrrepLabel) -> Result<f64> {
        let tau = model.tau(label)?;
        if tau <= 0.0 {
            return Ok(0.0);
        }
        Ok(match self {
            KernelSpec::CahillGlauber(s) => tau.powf(-s / 2.0),
            KernelSpec::GeneralizedFilter(k) => k.get(&label).copied().unwrap_or(0.0),
        })
    }

    /// The kernel paired with this one by the tracing identity.
    pub fn dual(&self) -> Result<KernelSpec> {
        match self {
            KernelSpec::CahillGlauber(s) => Ok(KernelSpec::CahillGlauber(-s)),
            KernelSpec::GeneralizedFilter(k) => k
                .iter()
                .map(|(l, v)| {
                    if *v == 0.0 {
                        Err(Error::NonInvertibleFilter(format!("zero coefficient on irrep {l}")))
                    } else {
                        Ok((*l, 1.0 / v))
                    }
                })
                .collect::<Result<_>>()
                .map(KernelSpec::GeneralizedFilter),
        }
    }
}

/// `Y_j(Omega) = tau^{-1/2} <Omega|D_j|Omega>` for basis element `j` of `label`.
pub fn harmonic(model: &QrtModel, label: IrrepLabel, j: usize, omega: &PhasePoint) -> Result<f64> {
    let tau = model.tau(label)?;
    if tau <= 0.0 {
        return Err(Error::AbsentSector(format!(
            "irrep {label} does not appear in phase space"
        )));
    }
    let block = model.block(label)?;
    let d = block
        .basis
        .get(j)
        .ok_or_else(|| Error::InvalidArgument(format!("index {j} >= {}", block.dim)))?;
    let psi = model.coherent_state(omega)?;
    Ok(d.expectation(&psi).re / tau.sqrt())
}

/// All harmonics of the phase-space sectors at `omega`, in block order.
pub fn harmonics_at(model: &QrtModel, omega: &PhasePoint) -> Result<Vec<(IrrepLabel, Vec<f64>)>> {
    let psi = model.coherent_state(omega)?;
    let mut out = Vec::new();
    for block in model.blocks()?.iter() {
        let tau = model.tau(block.label)?;
        if tau > 0.0 {
            let inv = tau.sqrt().recip();
            out.push((
                block.label,
                block.basis.iter().map(|d| d.expectation(&psi).re * inv).collect(),
            ));
        }
    }
    Ok(out)
}

/// `sum_lambda f_lambda sum_{j in J^0} <hw|D_j|hw> D_j` with `f = k tau^{-1/2}`.
pub fn center_kernel(model: &QrtModel, spec: &KernelSpec) -> Result<CMat> {
    spec.validate(model)?;
    let d = model.dim();
    let hw = model.hw_state();
    let mut k = CMat::zeros(d, d);
    for block in model.blocks()?.iter() {
        let tau = model.tau(block.label)?;
        if tau <= 0.0 {
            continue;
        }
        let f = spec.gain(model, block.label)? / tau.sqrt();
        for &j in &block.weight_zero {
            let e = block.basis[j].expectation(&hw).re;
            k += block.basis[j].to_dense() * c(f * e);
        }
    }
    Ok(k)
}

/// `Delta(Omega) = T(Omega) Delta(north) T(Omega)^dag`.
pub fn sw_kernel(model: &QrtModel, omega: &PhasePoint, spec: &KernelSpec) -> Result<OperatorRep> {
    let k0 = center_kernel(model, spec)?;
    let u = model.coset_unitary(omega)?;
    Ok(OperatorRep::Dense(&u * k0 * u.adjoint()))
}

/// Kernel at `Omega` with cached center and spec.
struct KernelEval<'a> {
    model: &'a QrtModel,
    center: CMat,
}

impl<'a> KernelEval<'a> {
    fn new(model: &'a QrtModel, spec: &KernelSpec) -> Result<Self> {
        Ok(KernelEval {
            model,
            center: center_kernel(model, spec)?,
        })
    }

    fn kernel(&self, omega: &PhasePoint) -> Result<CMat> {
        let u = self.model.coset_unitary(omega)?;
        Ok(&u * &self.center * u.adjoint())
    }

    /// `Tr[Delta A] = Tr[Delta(north) T^dag A T]`.
    fn symbol(&self, a: &CMat, omega: &PhasePoint) -> Result<Complex64> {
        let u = self.model.coset_unitary(omega)?;
        let rotated = u.adjoint() * a * &u;
        Ok(linalg::hs_inner(&self.center, &rotated))
    }
}

fn dense_of(model: &QrtModel, a: &OperatorRep) -> Result<CMat> {
    if a.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: a.dim(),
        });
    }
    Ok(a.to_dense())
}

/// `F_A(Omega) = Tr[Delta(Omega)^dag A]`.
pub fn symbol(model: &QrtModel, a: &OperatorRep, omega: &PhasePoint, spec: &KernelSpec) -> Result<Complex64> {
    let a = dense_of(model, a)?;
    KernelEval::new(model, spec)?.symbol(&a, omega)
}

/// Symbol values on the nodes of a grid.
#[derive(Clone, Debug)]
pub struct SymbolField {
    pub values: Vec<Complex64>,
    pub spec: KernelSpec,
    pub grid: Arc<PhaseGrid>,
}

impl SymbolField {
    pub fn real(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    /// `int F dmu`.
    pub fn integral(&self) -> Complex64 {
        self.grid.weights.iter().zip(&self.values).map(|(w, v)| v * w).sum()
    }

    /// `int |F|^2 dmu`.
    pub fn norm_sqr(&self) -> f64 {
        self.grid
            .weights
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v.norm_sqr())
            .sum()
    }

    pub fn min_real(&self) -> f64 {
        self.values.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    pub fn max_real(&self) -> f64 {
        self.values.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `<F, G>_{L^2} = int conj(F) G dmu` for fields on the same grid.
pub fn l2_inner(f: &SymbolField, g: &SymbolField) -> Result<Complex64> {
    if !Arc::ptr_eq(&f.grid, &g.grid) && f.grid != g.grid {
        return Err(Error::InvalidArgument("fields live on different grids".into()));
    }
    Ok(f.grid
        .weights
        .iter()
        .zip(f.values.iter().zip(&g.values))
        .map(|(w, (a, b))| a.conj() * b * w)
        .sum())
}

/// Evaluates the symbol at every node, in parallel.
pub fn symbol_field(model: &QrtModel, a: &OperatorRep, grid: Arc<PhaseGrid>, spec: &KernelSpec) -> Result<SymbolField> {
    let dense = dense_of(model, a)?;
    let eval = KernelEval::new(model, spec)?;
    let values = grid
        .points
        .par_iter()
        .map(|p| eval.symbol(&dense, p))
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolField {
        values,
        spec: spec.clone(),
        grid,
    })
}

/// Symbol values at arbitrary points, in parallel.
pub fn symbol_values(
    model: &QrtModel,
    a: &OperatorRep,
    points: &[PhasePoint],
    spec: &KernelSpec,
) -> Result<Vec<Complex64>> {
    let dense = dense_of(model, a)?;
    let eval = KernelEval::new(model, spec)?;
    points.par_iter().map(|p| eval.symbol(&dense, p)).collect()
}

/// Single-sphere marginal `int F_A dmu(other spheres)` of a multipartite
/// symbol, evaluated at `(theta, phi)` nodes for qubit `k`.
pub fn marginal_symbol_values(
    model: &QrtModel,
    a: &OperatorRep,
    qubit: usize,
    nodes: &[(f64, f64)],
    s: f64,
) -> Result<Vec<f64>> {
    let crate::models::QrtKind::Multipartite(n) = model.kind() else {
        return Err(Error::Unsupported(
            "marginals are defined for the multipartite model".into(),
        ));
    };
    if qubit >= n {
        return Err(Error::InvalidArgument(format!("qubit {qubit} >= {n}")));
    }
    let reduced = linalg::partial_trace_to_qubit(&dense_of(model, a)?, n, qubit);
    let single = QrtModel::multipartite(1)?;
    // each integrated sphere contributes the trivial-sector factor 2^{(s-1)/2}
    let factor = 2f64.powf((n as f64 - 1.0) * (s - 1.0) / 2.0);
    let points: Vec<PhasePoint> = nodes.iter().map(|&(t, p)| PhasePoint::Spheres(vec![(t, p)])).collect();
    Ok(symbol_values(
        &single,
        &OperatorRep::Dense(reduced),
        &points,
        &KernelSpec::CahillGlauber(s),
    )?
    .into_iter()
    .map(|z| z.re * factor)
    .collect())
}

/// Harmonic coefficients `<Y_j, F>_{L^2}` of a field, per phase-space sector.
pub fn harmonic_coefficients(field: &SymbolField, model: &QrtModel) -> Result<Vec<(IrrepLabel, Vec<Complex64>)>> {
    field.grid.check_resolves(model)?;
    let per_node: Vec<Vec<(IrrepLabel, Vec<f64>)>> = field
        .grid
        .points
        .par_iter()
        .map(|p| harmonics_at(model, p))
        .collect::<Result<_>>()?;
    let mut acc: Vec<(IrrepLabel, Vec<Complex64>)> = match per_node.first() {
        Some(first) => first.iter().map(|(l, ys)| (*l, vec![linalg::ZERO; ys.len()])).collect(),
        None => return Err(Error::InvalidArgument("empty grid".into())),
    };
    for ((w, f), node) in field.grid.weights.iter().zip(&field.values).zip(&per_node) {
        for ((_, sum), (_, ys)) in acc.iter_mut().zip(node) {
            for (s, y) in sum.iter_mut().zip(ys) {
                *s += f * (w * y);
            }
        }
    }
    Ok(acc)
}

/// `P~_lambda(F) = sum_j |<Y_j, F>|^2` with inner products by quadrature.
pub fn phase_purity_quadrature(field: &SymbolField, model: &QrtModel) -> Result<PuritySpectrum> {
    let coeffs = harmonic_coefficients(field, model)?;
    let mut entries: BTreeMap<IrrepLabel, f64> = model.labels().into_iter().map(|l| (l, 0.0)).collect();
    for (l, cs) in coeffs {
        entries.insert(l, cs.iter().map(|z| z.norm_sqr()).sum());
    }
    Ok(PuritySpectrum::from_entries(entries))
}

/// `A = int F(Omega) Delta~(Omega) dmu` with the dual kernel of the field's spec.
pub fn reconstruct(model: &QrtModel, field: &SymbolField) -> Result<OperatorRep> {
    field.grid.check_resolves(model)?;
    let eval = KernelEval::new(model, &field.spec.dual()?)?;
    let d = model.dim();
    let parts = field
        .grid
        .points
        .par_iter()
        .zip(field.grid.weights.par_iter().zip(field.values.par_iter()))
        .map(|(p, (w, f))| Ok(eval.kernel(p)? * (f * w)))
        .collect::<Result<Vec<CMat>>>()?;
    Ok(OperatorRep::Dense(
        parts.into_iter().fold(CMat::zeros(d, d), |acc, m| acc + m),
    ))
}

/// `K_{s,s'}(Omega, Omega') = Tr[Delta(Omega, s) Delta(Omega', -s')]`.
pub fn conversion_kernel(
    model: &QrtModel,
    s: f64,
    s_prime: f64,
    omega: &PhasePoint,
    omega_prime: &PhasePoint,
) -> Result<f64> {
    let a = sw_kernel(model, omega, &KernelSpec::CahillGlauber(s))?.to_dense();
    let b = sw_kernel(model, omega_prime, &KernelSpec::CahillGlauber(-s_prime))?.to_dense();
    Ok(linalg::hs_inner(&a, &b).re)
}

/// Maps a Cahill–Glauber field at `s'` to parameter `s` at `points` by
/// integrating against the conversion kernel.
pub fn convert_field(model: &QrtModel, field: &SymbolField, s: f64, points: &[PhasePoint]) -> Result<Vec<Complex64>> {
    let KernelSpec::CahillGlauber(s_prime) = field.spec else {
        return Err(Error::InvalidArgument("conversion needs a Cahill-Glauber field".into()));
    };
    field.grid.check_resolves(model)?;
    let target = KernelEval::new(model, &KernelSpec::CahillGlauber(s))?;
    let source = KernelEval::new(model, &KernelSpec::CahillGlauber(-s_prime))?;
    let sources: Vec<CMat> = field
        .grid
        .points
        .par_iter()
        .map(|p| source.kernel(p))
        .collect::<Result<_>>()?;
    points
        .par_iter()
        .map(|p| {
            let k = target.kernel(p)?;
            Ok(sources
                .iter()
                .zip(field.grid.weights.iter().zip(&field.values))
                .map(|(src, (w, f))| f * (w * linalg::hs_inner(&k, src).re))
                .sum())
        })
        .collect()
}

/// `M(Omega, Omega', Omega'') = Tr[Delta(Omega, s1) Delta(Omega', -s2) Delta(Omega'', -s3)]`.
pub fn triple_kernel(
    model: &QrtModel,
    s: (f64, f64, f64),
    points: (&PhasePoint, &PhasePoint, &PhasePoint),
) -> Result<Complex64> {
    let a = sw_kernel(model, points.0, &KernelSpec::CahillGlauber(s.0))?.to_dense();
    let b = sw_kernel(model, points.1, &KernelSpec::CahillGlauber(-s.1))?.to_dense();
    let c3 = sw_kernel(model, points.2, &KernelSpec::CahillGlauber(-s.2))?.to_dense();
    Ok(linalg::trace(&(a * b * c3)))
}

/// The same triple trace assembled from `tau` powers, structure constants
/// `Tr[D_j1 D_j2 D_j3]` and harmonics at the three points.
pub fn triple_kernel_factorized(
    model: &QrtModel,
    s: (f64, f64, f64),
    points: (&PhasePoint, &PhasePoint, &PhasePoint),
) -> Result<Complex64> {
    let blocks = model.blocks()?;
    let y1 = harmonics_at(model, points.0)?;
    let y2 = harmonics_at(model, points.1)?;
    let y3 = harmonics_at(model, points.2)?;
    let dense: BTreeMap<IrrepLabel, Vec<CMat>> = blocks
        .iter()
        .map(|b| (b.label, b.basis.iter().map(|d| d.to_dense()).collect()))
        .collect();
    let mut total = linalg::ZERO;
    for (l1, ys1) in &y1 {
        for (l2, ys2) in &y2 {
            for (l3, ys3) in &y3 {
                let (t1, t2, t3) = (model.tau(*l1)?, model.tau(*l2)?, model.tau(*l3)?);
                let coupling = t1.powf(-s.0 / 2.0) * t2.powf(s.1 / 2.0) * t3.powf(s.2 / 2.0);
                let mut inner = linalg::ZERO;
                for (j1, d1) in dense[l1].iter().enumerate() {
                    for (j2, d2) in dense[l2].iter().enumerate() {
                        let d12 = d1 * d2;
                        for (j3, d3) in dense[l3].iter().enumerate() {
                            let cst = linalg::hs_inner(&d12.adjoint(), d3);
                            inner += cst * (ys1[j1] * ys2[j2] * ys3[j3]);
                        }
                    }
                }
                total += inner * coupling;
            }
        }
    }
    Ok(total)
}

/// Twisted product `F_{AB}(Omega, s1)` by double quadrature of the triple
/// kernel against `F_A` (at `s2`) and `F_B` (at `s3`).
pub fn star_product(
    model: &QrtModel,
    fa: &SymbolField,
    fb: &SymbolField,
    s1: f64,
    points: &[PhasePoint],
) -> Result<Vec<Complex64>> {
    let (KernelSpec::CahillGlauber(s2), KernelSpec::CahillGlauber(s3)) = (&fa.spec, &fb.spec) else {
        return Err(Error::InvalidArgument(
            "twisted product needs Cahill-Glauber fields".into(),
        ));
    };
    fa.grid.check_resolves(model)?;
    fb.grid.check_resolves(model)?;
    if fa.grid.len() * fb.grid.len() > 1 << 22 {
        return Err(Error::Unsupported(
            "double quadrature with more than 2^22 node pairs".into(),
        ));
    }
    let ka = KernelEval::new(model, &KernelSpec::CahillGlauber(-s2))?;
    let kb = KernelEval::new(model, &KernelSpec::CahillGlauber(-s3))?;
    let k1 = KernelEval::new(model, &KernelSpec::CahillGlauber(s1))?;
    let da: Vec<CMat> = fa.grid.points.par_iter().map(|p| ka.kernel(p)).collect::<Result<_>>()?;
    let db: Vec<CMat> = fb.grid.points.par_iter().map(|p| kb.kernel(p)).collect::<Result<_>>()?;
    points
        .par_iter()
        .map(|p| {
            let d1 = k1.kernel(p)?;
            let mut acc = linalg::ZERO;
            for (dai, (wa, va)) in da.iter().zip(fa.grid.weights.iter().zip(&fa.values)) {
                let left = &d1 * dai;
                for (dbk, (wb, vb)) in db.iter().zip(fb.grid.weights.iter().zip(&fb.values)) {
                    // Tr[left * dbk]
                    let m = linalg::hs_inner(&left.adjoint(), dbk);
                    acc += m * va * vb * (wa * wb);
                }
            }
            Ok(acc)
        })
        .collect()
}

/// `F^_A(Omega) = sum_lambda k_lambda sum_j Y_j(Omega) <D_j, A>` on the harmonic route.
pub fn generalized_symbol(
    model: &QrtModel,
    a: &OperatorRep,
    omega: &PhasePoint,
    coeffs: &BTreeMap<IrrepLabel, f64>,
) -> Result<Complex64> {
    KernelSpec::GeneralizedFilter(coeffs.clone()).validate(model)?;
    let dense = dense_of(model, a)?;
    let blocks = model.blocks()?;
    let ys = harmonics_at(model, omega)?;
    let mut total = linalg::ZERO;
    for (label, y) in ys {
        let k = coeffs[&label];
        let block = blocks.iter().find(|b| b.label == label).expect("label present");
        let s: Complex64 = block
            .basis
            .iter()
            .zip(&y)
            .map(|(d, yj)| d.inner_dense(&dense) * yj)
            .sum();
        total += s * k;
    }
    Ok(total)
}

/// Dual symbol with coefficients `1/k_lambda`; fails if `A` has weight on a
/// sector where `k_lambda = 0`.
pub fn generalized_dual_symbol(
    model: &QrtModel,
    a: &OperatorRep,
    omega: &PhasePoint,
    coeffs: &BTreeMap<IrrepLabel, f64>,
) -> Result<Complex64> {
    let spec = gfd_weights(model, a)?;
    let mut dual = BTreeMap::new();
    for (l, k) in coeffs {
        if *k == 0.0 {
            if spec.get(l).copied().unwrap_or(0.0) > 1e-24 {
                return Err(Error::NonInvertibleFilter(format!(
                    "zero coefficient on irrep {l} where the operator has weight"
                )));
            }
            dual.insert(*l, 0.0);
        } else {
            dual.insert(*l, 1.0 / k);
        }
    }
    generalized_symbol(model, a, omega, &dual)
}

fn gfd_weights(model: &QrtModel, a: &OperatorRep) -> Result<BTreeMap<IrrepLabel, f64>> {
    Ok(crate::gfd::purity_spectrum(a, model)?.entries)
}
