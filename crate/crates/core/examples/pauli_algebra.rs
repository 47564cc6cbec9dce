//! Pauli strings in symplectic form, Jordan-Wigner Majoranas, and the
//! Walsh-Hadamard expansion of a dense operator.

use phasefilter::linalg;
use phasefilter::pauli::{majorana, majorana_degree, pauli_transform, PauliString, PauliSum};
use rand::SeedableRng;

fn main() -> phasefilter::Result<()> {
    let a = PauliString::from_label("XYZ")?;
    let b = PauliString::from_label("ZZI")?;
    println!("{a} * {b} = {}; commute: {}", a.mul(&b)?, a.commutes_with(&b));

    let n = 3;
    for mu in 1..=2 * n {
        let c = majorana(mu, n)?;
        println!("c_{mu} = {c} (degree {})", majorana_degree(&c));
    }
    let pair = majorana(1, n)?.mul(&majorana(4, n)?)?;
    println!("c_1 c_4 = {pair}, hermitian: {}", pair.is_hermitian());

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let h = linalg::random_hermitian(1 << n, &mut rng);
    let mut largest = (0.0, String::new());
    pauli_transform(&h, |x, z, t| {
        let p = PauliString::from_masks(n, x, z, 0);
        if t.norm() > largest.0 {
            largest = (t.norm(), p.to_string());
        }
    })?;
    println!(
        "largest Pauli component of a random Hermitian: {} ({:.4})",
        largest.1, largest.0
    );
    let sum = PauliSum::from_dense(&h, 1e-14)?;
    println!(
        "{} terms, round-trip error {:.2e}",
        sum.len(),
        linalg::hs_norm(&(sum.to_dense() - h))
    );
    Ok(())
}
