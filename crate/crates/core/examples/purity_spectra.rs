//! Operator-space purities of four spin-5 states and their phase-space
//! counterparts for several values of s, printed as CSV.
//!
//! cargo run --release --example purity_spectra > purities.csv

use phasefilter::gfd::{self, PuritySpectrum};
use phasefilter::render::fmt17;
use phasefilter::{HalfInt, NamedState, QrtModel};

fn main() -> phasefilter::Result<()> {
    let spin = HalfInt::from_int(5);
    let model = QrtModel::spin(spin)?;
    let haar_mean = PuritySpectrum::from_entries(
        model
            .labels()
            .into_iter()
            .map(|l| Ok((l, gfd::haar_mean_purity(&model, l)?)))
            .collect::<phasefilter::Result<_>>()?,
    );
    let states = [
        ("|S,S>", gfd::state_purity_spectrum(&model.hw_state(), &model)?),
        (
            "|S,0>",
            gfd::state_purity_spectrum(&model.named_state(NamedState::Basis(HalfInt::ZERO))?, &model)?,
        ),
        (
            "GHZ",
            gfd::state_purity_spectrum(&model.named_state(NamedState::Ghz)?, &model)?,
        ),
        ("Haar mean", haar_mean),
    ];

    println!("state,lambda,tau,s,P,P_tilde");
    for (name, spec) in &states {
        for s in [-1.0, -0.5, 0.0, 0.5, 1.0] {
            let tilde = gfd::phase_purity(spec, s, &model)?;
            for (label, p) in spec.iter() {
                println!(
                    "{name},{label},{},{s},{},{}",
                    fmt17(model.tau(label)?),
                    fmt17(p),
                    fmt17(tilde.get(label))
                );
            }
        }
    }

    // highest weight at s = 1 is flat: every sector carries d_lambda
    let flat = gfd::phase_purity(&states[0].1, 1.0, &model)?;
    for (label, v) in flat.iter() {
        eprintln!(
            "lambda {label}: P~(s=1) = {v:.12} (d_lambda = {})",
            model.irrep_dim(label)?
        );
    }
    Ok(())
}
