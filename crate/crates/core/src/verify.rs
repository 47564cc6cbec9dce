//! Invariant checks for one model, aggregated into a pass/fail report.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::gfd::{self, PuritySpectrum};
use crate::linalg::{self, CMat, CVec};
use crate::models::{IrrepLabel, PhasePoint, QrtKind, QrtModel, MAX_DENSE_QUBITS};
use crate::operator::OperatorRep;
use crate::phase_space::{self, KernelSpec, PhaseGrid};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Observed quantity (an error norm, frequency or statistic).
    pub value: f64,
    /// Reference value or upper limit the observation is compared with.
    pub bound: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes when `|value - bound| <= tolerance`.
    pub fn close(name: impl Into<String>, value: f64, bound: f64, tolerance: f64) -> Self {
        let passed = (value - bound).abs() <= tolerance;
        Check {
            name: name.into(),
            passed,
            value,
            bound,
            tolerance,
        }
    }

    /// Passes when `value <= bound + tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64, tolerance: f64) -> Self {
        let passed = value <= bound + tolerance;
        Check {
            name: name.into(),
            passed,
            value,
            bound,
            tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub s_values: Vec<f64>,
    pub seed: u64,
    pub haar_samples: usize,
    /// Tolerance for exact linear-algebra identities.
    pub linear_tol: f64,
    /// Tolerance for quadrature-mediated identities.
    pub quadrature_tol: f64,
    /// Monte-Carlo acceptance in standard errors.
    pub nsigma: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            s_values: vec![-1.0, 0.0, 1.0],
            seed: 7,
            haar_samples: 500,
            linear_tol: 1e-10,
            quadrature_tol: 1e-8,
            nsigma: 4.0,
        }
    }
}

fn rel_err(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1.0)
}

fn max_spectrum_rel_err(a: &PuritySpectrum, b: &PuritySpectrum) -> f64 {
    a.iter().map(|(l, v)| rel_err(v, b.get(l))).fold(0.0, f64::max)
}

/// Runs every applicable check for `model` on the `state` vector.
pub fn run_checks(model: &QrtModel, state: &CVec, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let d = model.dim();
    let kind = model.kind();
    let dense_ok = !matches!(kind, QrtKind::Multipartite(n) | QrtKind::Fermionic(n) if n > MAX_DENSE_QUBITS);
    let lin = cfg.linear_tol;
    let quad = cfg.quadrature_tol;

    // closed-form tau against highest-weight purities
    let numeric = gfd::tau_from_purities(model)?;
    let err = numeric
        .iter()
        .map(|(l, t)| (t - model.tau(*l).unwrap()).abs())
        .fold(0.0, f64::max);
    out.push(Check::close("tau_closed_form_vs_hw_purity", err, 0.0, lin));

    let rho = OperatorRep::projector(state);
    let spec = gfd::purity_spectrum(&rho, model)?;
    out.push(Check::close("pure_state_total_purity", spec.total, 1.0, lin));

    let a = OperatorRep::Dense(linalg::random_hermitian(d, &mut rng));
    let pa = gfd::purity_spectrum(&a, model)?;
    out.push(Check::close(
        "parseval",
        pa.total,
        a.hs_norm_sqr(),
        lin * a.hs_norm_sqr().max(1.0),
    ));

    if matches!(kind, QrtKind::Fermionic(_)) {
        let odd = model
            .labels()
            .into_iter()
            .filter(|l| matches!(l, IrrepLabel::Degree(k) if k % 2 == 1));
        let worst = odd
            .map(|l| model.tau(l).map(f64::abs))
            .try_fold(0.0, |m, t| t.map(|t| f64::max(m, t)))?;
        out.push(Check::close("odd_sector_tau_zero", worst, 0.0, 0.0));
    }

    if dense_ok {
        let mut worst = 0.0f64;
        for _ in 0..5 {
            let g = model.random_group_element(&mut rng);
            let u = model.unitary(&g)?;
            let conj = OperatorRep::Dense(&u * rho.to_dense() * u.adjoint());
            worst = worst.max(max_spectrum_rel_err(&gfd::purity_spectrum(&conj, model)?, &spec));
        }
        out.push(Check::close("purity_conjugation_invariance", worst, 0.0, lin));

        let mut kernel_err = 0.0f64;
        let mut odd_kernel = 0.0f64;
        for &s in &cfg.s_values {
            for _ in 0..3 {
                let p = model.random_phase_point(&mut rng);
                let k = phase_space::sw_kernel(model, &p, &KernelSpec::CahillGlauber(s))?;
                let ks = gfd::purity_spectrum(&k, model)?;
                for (l, v) in ks.iter() {
                    kernel_err = kernel_err.max(rel_err(v, gfd::kernel_purity(model, l, s)?));
                    if model.tau(l)? == 0.0 {
                        odd_kernel = odd_kernel.max(v.abs());
                    }
                }
            }
        }
        out.push(Check::close("kernel_purity_equals_tau_power", kernel_err, 0.0, lin));
        if matches!(kind, QrtKind::Fermionic(_)) {
            out.push(Check::close("odd_sector_kernel_purity_zero", odd_kernel, 0.0, 0.0));
        }

        let mut husimi = 0.0f64;
        for _ in 0..5 {
            let p = model.random_phase_point(&mut rng);
            let k = phase_space::sw_kernel(model, &p, &KernelSpec::CahillGlauber(-1.0))?.to_dense();
            husimi = husimi.max(linalg::hs_norm(&(k - linalg::projector(&model.coherent_state(&p)?))));
        }
        out.push(Check::close("husimi_kernel_is_coherent_projector", husimi, 0.0, lin));

        let mut reality = 0.0f64;
        let mut cov = 0.0f64;
        for _ in 0..10 {
            let g = model.random_group_element(&mut rng);
            let p = model.random_phase_point(&mut rng);
            let u = model.unitary(&g)?;
            let s = cfg.s_values.first().copied().unwrap_or(0.0);
            let spec_s = KernelSpec::CahillGlauber(s);
            let f = phase_space::symbol(model, &a, &p, &spec_s)?;
            reality = reality.max(f.im.abs() / f.norm().max(1.0));
            let conj = OperatorRep::Dense(u.adjoint() * a.to_dense() * &u);
            let lhs = phase_space::symbol(model, &conj, &p, &spec_s)?;
            let rhs = phase_space::symbol(model, &a, &model.act(&g, &p)?, &spec_s)?;
            cov = cov.max((lhs - rhs).norm() / rhs.norm().max(1.0));
        }
        out.push(Check::close("symbol_reality", reality, 0.0, 1e-12));
        out.push(Check::close("symbol_covariance", cov, 0.0, lin));
    }

    if let QrtKind::Multipartite(n) = kind {
        if n <= 3 {
            let p = model.random_phase_point(&mut rng);
            let PhasePoint::Spheres(pts) = &p else { unreachable!() };
            let single = QrtModel::multipartite(1)?;
            let mut worst = 0.0f64;
            for &s in &cfg.s_values {
                let spec_s = KernelSpec::CahillGlauber(s);
                let full = phase_space::sw_kernel(model, &p, &spec_s)?.to_dense();
                let mut prod = CMat::identity(1, 1);
                for &pt in pts {
                    let k = phase_space::sw_kernel(&single, &PhasePoint::Spheres(vec![pt]), &spec_s)?.to_dense();
                    prod = linalg::kron(&prod, &k);
                }
                worst = worst.max(linalg::hs_norm(&(full - prod)));
            }
            out.push(Check::close("multipartite_kernel_factorizes", worst, 0.0, 1e-12));
        }
    }

    let quadrature = match kind {
        QrtKind::Spin(_) => true,
        QrtKind::Multipartite(n) => n <= 3,
        QrtKind::Fermionic(_) => false,
    };
    if quadrature {
        let grid = Arc::new(PhaseGrid::for_model(model, 1.0)?);
        let b = OperatorRep::Dense(linalg::random_hermitian(d, &mut rng));
        let (mut filt, mut trace, mut recon, mut stand, mut norms) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for &s in &cfg.s_values {
            let cg = KernelSpec::CahillGlauber(s);
            let f = phase_space::symbol_field(model, &rho, grid.clone(), &cg)?;
            let q = phase_space::phase_purity_quadrature(&f, model)?;
            filt = filt.max(max_spectrum_rel_err(&q, &gfd::phase_purity(&spec, s, model)?));
            let (lo, hi) = gfd::norm_bounds(model, s, &rho)?;
            let nrm = f.norm_sqr();
            norms = norms.max((lo - nrm).max(nrm - hi).max(0.0));

            let fa = phase_space::symbol_field(model, &a, grid.clone(), &cg)?;
            let fb = phase_space::symbol_field(model, &b, grid.clone(), &KernelSpec::CahillGlauber(-s))?;
            let exact = OperatorRep::hs_inner(&a, &b)?;
            trace = trace.max((phase_space::l2_inner(&fa, &fb)? - exact).norm());
            let back = phase_space::reconstruct(model, &fa)?.to_dense();
            recon = recon.max(linalg::hs_norm(&(back - a.to_dense())));
            let expect = (d as f64).powf((s - 1.0) / 2.0) * a.trace().re;
            stand = stand.max((fa.integral().re - expect).abs() / expect.abs().max(1.0));
        }
        out.push(Check::close("filter_identity_quadrature", filt, 0.0, quad));
        out.push(Check::close("tracing_pairing", trace, 0.0, quad));
        out.push(Check::close("reconstruction_round_trip", recon, 0.0, quad));
        out.push(Check::close("standardization", stand, 0.0, quad));
        out.push(Check::at_most("norm_bounds", norms, 0.0, quad));
    }

    // s-flow: central difference of tau^{-s} P at s = 0.3
    let h = 1e-4;
    let mut flow = 0.0f64;
    for (l, p) in spec.iter() {
        if p == 0.0 || model.tau(l)? == 0.0 {
            continue;
        }
        let at = |s: f64| gfd::filter_gain(model, l, s).unwrap() * p;
        let fd = (at(0.3 + h) - at(0.3 - h)) / (2.0 * h);
        let exact = gfd::s_flow_generator(model, l)? * at(0.3);
        flow = flow.max((fd - exact).abs() / exact.abs().max(1e-300));
    }
    out.push(Check::close("s_flow_generator", flow, 0.0, 1e-6));

    // Haar statistics
    let samples = gfd::haar_purity_samples(model, cfg.haar_samples, cfg.seed)?;
    let mut worst_z = 0.0f64;
    let mut trivial = 0.0f64;
    for l in model.labels() {
        let xs: Vec<f64> = samples.iter().map(|p| p.get(l)).collect();
        let (mean, se) = gfd::mean_and_std_err(&xs);
        let expect = gfd::haar_mean_purity(model, l)?;
        if l.is_trivial() {
            trivial = trivial.max((mean - expect).abs());
        } else if se > 0.0 {
            worst_z = worst_z.max(((mean - expect) / se).abs());
        }
    }
    out.push(Check::close("haar_trivial_purity_is_1_over_d", trivial, 0.0, lin));
    out.push(Check::at_most("haar_flatness_max_z", worst_z, cfg.nsigma, 0.0));

    if cfg.haar_samples >= 100 {
        let mut worst = 0.0f64;
        for &s in &cfg.s_values {
            for row in gfd::duality_check(model, s, cfg.haar_samples, cfg.seed)? {
                if !row.label.is_trivial() {
                    worst = worst.max(row.z.abs());
                }
            }
        }
        out.push(Check::at_most("duality_nontrivial_max_z", worst, cfg.nsigma, 0.0));
    }

    let mut markov_excess = f64::NEG_INFINITY;
    for a in [0.05, 0.1, 0.5] {
        for row in gfd::markov_check(&samples, model, a)? {
            if !row.label.is_trivial() {
                markov_excess = markov_excess.max(row.frequency - row.bound - cfg.nsigma * row.sigma);
            }
        }
    }
    if markov_excess.is_finite() {
        out.push(Check::at_most("markov_bound_excess", markov_excess, 0.0, 0.0));
    }

    let fidelity_ok = match kind {
        QrtKind::Spin(_) => true,
        QrtKind::Multipartite(n) => n <= 2,
        QrtKind::Fermionic(_) => false,
    };
    if fidelity_ok {
        let p = model.random_phase_point(&mut rng);
        let f = gfd::coherent_fidelity(model, &model.coherent_state(&p)?, (16, 32))?;
        out.push(Check::close("coherent_state_fidelity", f.value, 1.0, 1e-8));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::HalfInt;

    #[test]
    fn default_suites_pass() {
        let cfg = VerifyConfig {
            haar_samples: 200,
            ..VerifyConfig::default()
        };
        for m in [
            QrtModel::spin(HalfInt::from_int(1)).unwrap(),
            QrtModel::multipartite(2).unwrap(),
            QrtModel::fermionic(2).unwrap(),
        ] {
            let checks = run_checks(&m, &m.hw_state(), &cfg).unwrap();
            for c in &checks {
                assert!(c.passed, "{m:?}: {c:?}");
            }
        }
    }

    #[test]
    fn impossible_tolerance_fails() {
        let m = QrtModel::spin(HalfInt::from_int(2)).unwrap();
        let cfg = VerifyConfig {
            haar_samples: 100,
            quadrature_tol: 1e-18,
            ..VerifyConfig::default()
        };
        let psi = m.named_state(crate::models::NamedState::Haar(3)).unwrap();
        let checks = run_checks(&m, &psi, &cfg).unwrap();
        assert!(checks.iter().any(|c| !c.passed));
    }
}
