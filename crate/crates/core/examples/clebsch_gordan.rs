//! Exact Clebsch-Gordan coefficients and the highest-weight coupling that
//! fixes the spin-S tau coefficients.

use phasefilter::wigner_symbols::{cg_hw_zero, clebsch_gordan_exact, CgQuery};
use phasefilter::HalfInt;

fn main() -> phasefilter::Result<()> {
    let h = HalfInt::HALF;
    let q = CgQuery::new(h, h, h, -h, HalfInt::from_int(1), HalfInt::ZERO);
    let exact = clebsch_gordan_exact(&q)?;
    println!(
        "<1/2 1/2; 1/2 -1/2 | 1 0> = {}sqrt({}) = {:.15}",
        if exact.negative { "-" } else { "" },
        exact.square,
        exact.to_f64()
    );

    for twice in [1, 2, 4, 10] {
        let spin = HalfInt::from_twice(twice);
        let taus: Vec<String> = (0..=twice as u32)
            .map(|l| cg_hw_zero(spin, l).map(|c| format!("{:.6}", c * c / f64::from(2 * l + 1))))
            .collect::<phasefilter::Result<_>>()?;
        println!("S = {spin}: tau = [{}]", taus.join(", "));
    }
    Ok(())
}
