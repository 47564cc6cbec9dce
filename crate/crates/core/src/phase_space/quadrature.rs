//! Integration rules on the phase spaces, normalized to unit total measure.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::models::{PhasePoint, QrtKind, QrtModel};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes descending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = x;
        ws[i] = w;
        xs[n - 1 - i] = -x;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

/// Gauss–Legendre in `cos(theta)` times a uniform rule in `phi`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereQuadrature {
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    /// `(theta, phi)` in row-major order over `(thetas, phis)`.
    pub nodes: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
}

impl SphereQuadrature {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::InvalidArgument(format!("empty sphere grid {n_theta}x{n_phi}")));
        }
        let (xs, ws) = gauss_legendre(n_theta);
        let thetas: Vec<f64> = xs.iter().map(|x| x.clamp(-1.0, 1.0).acos()).collect();
        let phis: Vec<f64> = (0..n_phi).map(|j| 2.0 * PI * j as f64 / n_phi as f64).collect();
        let mut nodes = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (t, w) in thetas.iter().zip(&ws) {
            for p in &phis {
                nodes.push((*t, *p));
                weights.push(w / (2.0 * n_phi as f64));
            }
        }
        Ok(SphereQuadrature {
            thetas,
            phis,
            nodes,
            weights,
        })
    }

    pub fn n_theta(&self) -> usize {
        self.thetas.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phis.len()
    }

    /// Largest degree `L` such that products of two functions of degree `<= L`
    /// are integrated exactly.
    pub fn resolved_band(&self) -> u32 {
        let by_theta = self.n_theta() - 1;
        let by_phi = (self.n_phi() - 1) / 2;
        by_theta.min(by_phi) as u32
    }
}

/// Rule resolving products of two functions of degree `<= band`, with at
/// least `ceil(oversample (band+1))` polar and `ceil(oversample (2 band + 2))`
/// azimuthal nodes.
pub fn sphere_quadrature(band: u32, oversample: f64) -> Result<SphereQuadrature> {
    if !(oversample >= 1.0) || !oversample.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "oversample = {oversample} must be >= 1"
        )));
    }
    let nt = (oversample * f64::from(band + 1)).ceil() as usize;
    let np = (oversample * f64::from(2 * band + 2)).ceil() as usize;
    SphereQuadrature::new(nt, np)
}

/// Integration nodes on a model's phase space with weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGrid {
    pub points: Vec<PhasePoint>,
    pub weights: Vec<f64>,
    /// Degree resolved on each sphere, or `None` for Monte-Carlo rules.
    pub resolved_band: Option<u32>,
}

impl PhaseGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn sphere(q: &SphereQuadrature) -> Self {
        PhaseGrid {
            points: q
                .nodes
                .iter()
                .map(|&(theta, phi)| PhasePoint::Sphere { theta, phi })
                .collect(),
            weights: q.weights.clone(),
            resolved_band: Some(q.resolved_band()),
        }
    }

    /// `n`-fold product of a sphere rule.
    pub fn product(q: &SphereQuadrature, n: usize) -> Result<Self> {
        let m = q.nodes.len();
        let total = m
            .checked_pow(n as u32)
            .filter(|&t| t <= 1 << 22)
            .ok_or(Error::UnsupportedSize(n))?;
        let mut points = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for mut idx in 0..total {
            let mut pts = Vec::with_capacity(n);
            let mut w = 1.0;
            // qubit 0 varies slowest
            let mut digits = vec![0; n];
            for k in (0..n).rev() {
                digits[k] = idx % m;
                idx /= m;
            }
            for &dgt in &digits {
                pts.push(q.nodes[dgt]);
                w *= q.weights[dgt];
            }
            points.push(PhasePoint::Spheres(pts));
            weights.push(w);
        }
        Ok(PhaseGrid {
            points,
            weights,
            resolved_band: Some(q.resolved_band()),
        })
    }

    /// `count` points drawn from the invariant measure with equal weights.
    pub fn sampled(model: &QrtModel, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidArgument("empty Monte-Carlo grid".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..count).map(|_| model.random_phase_point(&mut rng)).collect();
        Ok(PhaseGrid {
            points,
            weights: vec![1.0 / count as f64; count],
            resolved_band: None,
        })
    }

    /// Exact rule for products of two operator symbols of `model`.
    pub fn for_model(model: &QrtModel, oversample: f64) -> Result<Self> {
        match model.kind() {
            QrtKind::Spin(s) => Ok(PhaseGrid::sphere(&sphere_quadrature(s.twice() as u32, oversample)?)),
            QrtKind::Multipartite(n) => PhaseGrid::product(&sphere_quadrature(1, oversample)?, n),
            QrtKind::Fermionic(_) => Err(Error::Unsupported(
                "no structured quadrature on the fermionic phase space; use PhaseGrid::sampled".into(),
            )),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.resolved_band.is_some()
    }

    /// Errors unless the rule integrates products of two symbols exactly.
    pub fn check_resolves(&self, model: &QrtModel) -> Result<()> {
        let need = required_band(model);
        match (self.resolved_band, need) {
            (Some(have), Some(need)) if have < need => Err(Error::UnderResolved(format!(
                "grid resolves degree {have}, {} needs {need}",
                model.kind()
            ))),
            _ => Ok(()),
        }
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Highest harmonic degree per sphere of an operator symbol.
pub fn required_band(model: &QrtModel) -> Option<u32> {
    match model.kind() {
        QrtKind::Spin(s) => Some(s.twice() as u32),
        QrtKind::Multipartite(_) => Some(1),
        QrtKind::Fermionic(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..12 {
            let (xs, ws) = gauss_legendre(n);
            assert!((ws.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for k in 0..2 * n {
                let q: f64 = xs.iter().zip(&ws).map(|(x, w)| w * x.powi(k as i32)).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k + 1) as f64 };
                assert!((q - exact).abs() < 1e-13, "n={n} k={k}");
            }
            assert!(xs.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn sphere_rule_sizes_and_weights() {
        let q = sphere_quadrature(6, 1.0).unwrap();
        assert_eq!((q.n_theta(), q.n_phi()), (7, 14));
        assert_eq!(q.resolved_band(), 6);
        assert!((q.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let q = sphere_quadrature(3, 1.5).unwrap();
        assert!(q.n_theta() >= 6 && q.n_phi() >= 12);
        assert!(sphere_quadrature(3, 0.5).is_err());
    }

    #[test]
    fn sphere_rule_integrates_monomials() {
        let q = sphere_quadrature(4, 1.0).unwrap();
        // mean of x^2 over the unit sphere is 1/3, of x^2 y^2 z^2 is 1/105
        let f = |t: f64, p: f64, a: i32, b: i32, c: i32| {
            (t.sin() * p.cos()).powi(a) * (t.sin() * p.sin()).powi(b) * t.cos().powi(c)
        };
        let m2: f64 = q
            .nodes
            .iter()
            .zip(&q.weights)
            .map(|(&(t, p), w)| w * f(t, p, 2, 0, 0))
            .sum();
        assert!((m2 - 1.0 / 3.0).abs() < 1e-14);
        let m6: f64 = q
            .nodes
            .iter()
            .zip(&q.weights)
            .map(|(&(t, p), w)| w * f(t, p, 2, 2, 2))
            .sum();
        assert!((m6 - 1.0 / 105.0).abs() < 1e-14);
    }

    #[test]
    fn product_grid() {
        let q = sphere_quadrature(1, 1.0).unwrap();
        let g = PhaseGrid::product(&q, 2).unwrap();
        assert_eq!(g.len(), q.nodes.len().pow(2));
        assert!((g.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn resolution_checks() {
        let m = QrtModel::spin(crate::HalfInt::from_int(3)).unwrap();
        let coarse = PhaseGrid::sphere(&SphereQuadrature::new(4, 8).unwrap());
        assert!(matches!(coarse.check_resolves(&m), Err(Error::UnderResolved(_))));
        assert!(PhaseGrid::for_model(&m, 1.0).unwrap().check_resolves(&m).is_ok());
        let f = QrtModel::fermionic(2).unwrap();
        assert!(PhaseGrid::for_model(&f, 1.0).is_err());
        assert!(!PhaseGrid::sampled(&f, 10, 1).unwrap().is_exact());
    }
}
