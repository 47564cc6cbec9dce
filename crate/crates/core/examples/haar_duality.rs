//! Monte-Carlo statistics of Haar-random spin-2 states: the duality with
//! the highest-weight spectrum and the Markov tail bound.

use phasefilter::gfd;
use phasefilter::{HalfInt, QrtModel};

fn main() -> phasefilter::Result<()> {
    let model = QrtModel::spin(HalfInt::from_int(2))?;
    let (nsamples, seed) = (2000, 2024);

    for s in [-1.0, 0.0] {
        println!("s = {s}");
        for row in gfd::duality_check(&model, s, nsamples, seed)? {
            println!(
                "  lambda {}: mean {:.6} +- {:.6}, predicted {:.6}, z = {:+.2}",
                row.label, row.mean, row.std_err, row.rhs, row.z
            );
        }
    }

    let samples = gfd::haar_purity_samples(&model, nsamples, seed)?;
    for a in [0.05, 0.1, 0.5] {
        for row in gfd::markov_check(&samples, &model, a)? {
            let note = if row.label.is_trivial() {
                " (trivial sector: P = 1/d always)"
            } else {
                ""
            };
            println!(
                "a = {a:<4} lambda {}: Pr[P >= a] = {:.4} (bound {:.4}){note}",
                row.label, row.frequency, row.bound
            );
        }
    }
    Ok(())
}
