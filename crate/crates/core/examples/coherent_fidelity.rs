//! Largest overlap of a state with any coherent state, found by a grid scan
//! refined with golden-section search.

use phasefilter::gfd::coherent_fidelity;
use phasefilter::{HalfInt, NamedState, PhasePoint, QrtModel};

fn main() -> phasefilter::Result<()> {
    for twice in [1, 2, 4, 10] {
        let model = QrtModel::spin(HalfInt::from_twice(twice))?;
        let coherent = model.coherent_state(&PhasePoint::sphere(1.0, 2.0))?;
        let ghz = model.named_state(NamedState::Ghz)?;
        let fc = coherent_fidelity(&model, &coherent, (16, 32))?;
        let fg = coherent_fidelity(&model, &ghz, (16, 32))?;
        println!(
            "S = {}: coherent {:.10}, GHZ {:.10} at {:?}",
            model.kind(),
            fc.value,
            fg.value,
            fg.point
        );
    }
    Ok(())
}
