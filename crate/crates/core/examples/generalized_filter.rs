//! A hand-picked per-sector filter instead of the Cahill-Glauber family, its
//! dual, and the failure mode when the filter kills an occupied sector.

use std::collections::BTreeMap;

use phasefilter::operator::OperatorRep;
use phasefilter::phase_space::{generalized_dual_symbol, generalized_symbol};
use phasefilter::{Error, HalfInt, IrrepLabel, PhasePoint, QrtModel};

fn main() -> phasefilter::Result<()> {
    let model = QrtModel::spin(HalfInt::from_int(2))?;
    let rho = OperatorRep::projector(&model.hw_state());
    let omega = PhasePoint::sphere(0.7, 1.2);

    // low-pass filter: keep the first two sectors at full weight, damp the rest
    let mut low_pass = BTreeMap::new();
    for l in 0..=4u32 {
        low_pass.insert(IrrepLabel::Spin(l), 1.0 / (1.0 + f64::from(l * l)));
    }
    let f = generalized_symbol(&model, &rho, &omega, &low_pass)?;
    let g = generalized_dual_symbol(&model, &rho, &omega, &low_pass)?;
    println!("filtered symbol {:.6}, dual symbol {:.6}", f.re, g.re);

    let mut notch = low_pass.clone();
    notch.insert(IrrepLabel::Spin(2), 0.0);
    match generalized_dual_symbol(&model, &rho, &omega, &notch) {
        Err(Error::NonInvertibleFilter(msg)) => println!("notch filter has no dual: {msg}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
