//! Renders Husimi, Wigner and Glauber-Sudarshan functions of spin-5 states
//! on a Robinson projection and writes PPM images plus CSV field dumps.
//!
//! cargo run --release --example wigner_heatmaps -- out_dir

use std::path::PathBuf;

use phasefilter::operator::OperatorRep;
use phasefilter::phase_space::{symbol_values, KernelSpec};
use phasefilter::render::{self, Projection, RenderSpec};
use phasefilter::{HalfInt, NamedState, PhasePoint, QrtModel};

fn main() -> phasefilter::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "heatmaps".into()));
    std::fs::create_dir_all(&out)?;
    let model = QrtModel::spin(HalfInt::from_int(5))?;
    let spec = RenderSpec::new(64, 128, Projection::Robinson)?;
    let nodes = spec.nodes();
    let points: Vec<PhasePoint> = nodes.iter().map(|&(t, p)| PhasePoint::sphere(t, p)).collect();

    let states = [
        ("hw", model.hw_state()),
        ("m0", model.named_state(NamedState::Basis(HalfInt::ZERO))?),
        ("ghz", model.named_state(NamedState::Ghz)?),
        ("haar", model.named_state(NamedState::Haar(11))?),
    ];
    for (name, psi) in &states {
        let rho = OperatorRep::projector(psi);
        for s in [-1.0, 0.0, 1.0] {
            let values: Vec<f64> = symbol_values(&model, &rho, &points, &KernelSpec::CahillGlauber(s))?
                .into_iter()
                .map(|z| z.re)
                .collect();
            let stem = format!("{name}_s{s}");
            render::write_text(&out.join(format!("{stem}.csv")), &render::field_csv(&nodes, &values)?)?;
            render::render(&values, &spec)?.write_ppm(&out.join(format!("{stem}.ppm")))?;
            println!("{stem:<10} {}", render::describe(&nodes, &values));
        }
    }
    Ok(())
}
