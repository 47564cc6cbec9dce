//! The twisted product of two spin-1 symbols reproduces the symbol of the
//! operator product, and its integral kernel factorizes into tau powers,
//! structure constants and harmonics.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use phasefilter::linalg;
use phasefilter::operator::OperatorRep;
use phasefilter::phase_space::{self, KernelSpec, PhaseGrid};
use phasefilter::{HalfInt, QrtModel};

fn main() -> phasefilter::Result<()> {
    let model = QrtModel::spin(HalfInt::from_int(1))?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = OperatorRep::Dense(linalg::random_hermitian(3, &mut rng));
    let b = OperatorRep::Dense(linalg::random_hermitian(3, &mut rng));
    let ab = OperatorRep::Dense(a.to_dense() * b.to_dense());
    let grid = Arc::new(PhaseGrid::for_model(&model, 1.0)?);
    let points: Vec<_> = (0..5).map(|_| model.random_phase_point(&mut rng)).collect();

    for s in [-1.0, 0.0, 1.0] {
        let spec = KernelSpec::CahillGlauber(s);
        let fa = phase_space::symbol_field(&model, &a, grid.clone(), &spec)?;
        let fb = phase_space::symbol_field(&model, &b, grid.clone(), &spec)?;
        let star = phase_space::star_product(&model, &fa, &fb, s, &points)?;
        let direct = phase_space::symbol_values(&model, &ab, &points, &spec)?;
        let err = star
            .iter()
            .zip(&direct)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        println!("s = {s:+}: max |F_A * F_B - F_AB| = {err:.2e}");

        let triple = (&points[0], &points[1], &points[2]);
        let m = phase_space::triple_kernel(&model, (s, s, s), triple)?;
        let f = phase_space::triple_kernel_factorized(&model, (s, s, s), triple)?;
        println!("        M = {m:.6}, factorized {f:.6}");
    }
    Ok(())
}
