mod common;

use std::sync::Arc;

use phasefilter::linalg;
use phasefilter::operator::OperatorRep;
use phasefilter::phase_space::{self, KernelSpec, PhaseGrid};
use phasefilter::{HalfInt, PhasePoint, QrtModel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn husimi_of_highest_weight_is_cos_power() {
    for two_s in [1, 2, 4, 10] {
        let model = QrtModel::spin(HalfInt::from_twice(two_s)).unwrap();
        let rho = OperatorRep::projector(&model.hw_state());
        let angles: Vec<(f64, f64)> = (0..=12)
            .map(|i| (std::f64::consts::PI * i as f64 / 12.0, 0.37 * i as f64))
            .collect();
        let points: Vec<PhasePoint> = angles.iter().map(|&(t, p)| PhasePoint::sphere(t, p)).collect();
        let vals = phase_space::symbol_values(&model, &rho, &points, &KernelSpec::CahillGlauber(-1.0)).unwrap();
        for (&(theta, _), v) in angles.iter().zip(vals) {
            assert!((v.re - common::husimi_hw(two_s, theta)).abs() < 1e-12);
        }
    }
}

fn sphere_model() -> impl Strategy<Value = QrtModel> {
    (1i32..=6).prop_map(|t| QrtModel::spin(HalfInt::from_twice(t)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn symbols_of_hermitian_operators_are_real(model in sphere_model(), seed in 0u64..10_000, s in -1.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = OperatorRep::Dense(linalg::random_hermitian(model.dim(), &mut rng));
        let p = model.random_phase_point(&mut rng);
        let f = phase_space::symbol(&model, &a, &p, &KernelSpec::CahillGlauber(s)).unwrap();
        prop_assert!(f.im.abs() < 1e-12 * f.norm().max(1.0));
    }

    #[test]
    fn tracing_pairs_s_with_minus_s(model in sphere_model(), seed in 0u64..10_000, s in -1.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = model.dim();
        let a = OperatorRep::Dense(linalg::random_hermitian(d, &mut rng));
        let b = OperatorRep::Dense(linalg::random_hermitian(d, &mut rng));
        let grid = Arc::new(PhaseGrid::for_model(&model, 1.0).unwrap());
        let fa = phase_space::symbol_field(&model, &a, grid.clone(), &KernelSpec::CahillGlauber(s)).unwrap();
        let fb = phase_space::symbol_field(&model, &b, grid, &KernelSpec::CahillGlauber(-s)).unwrap();
        let lhs = phase_space::l2_inner(&fa, &fb).unwrap();
        let rhs = a.hs_inner(&b).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-8);
    }

    #[test]
    fn kernels_have_unit_trace(seed in 0u64..10_000, s in -1.0f64..1.0, which in 0usize..3) {
        let model = [
            QrtModel::spin(HalfInt::from_int(2)).unwrap(),
            QrtModel::multipartite(2).unwrap(),
            QrtModel::fermionic(2).unwrap(),
        ][which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = model.random_phase_point(&mut rng);
        let k = phase_space::sw_kernel(&model, &p, &KernelSpec::CahillGlauber(s)).unwrap();
        prop_assert!(k.is_hermitian(1e-12));
        // only the trivial sector has a trace: tau_0^{-s/2} sqrt(d)
        let want = (model.dim() as f64).powf((s + 1.0) / 2.0);
        prop_assert!((k.trace().re - want).abs() < 1e-10, "trace {} want {want}", k.trace().re);
    }
}
