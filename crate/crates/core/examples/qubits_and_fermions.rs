//! Sector structure of the multipartite and fermionic models: tau tables,
//! vanishing odd fermionic sectors and the product form of qubit kernels.

use phasefilter::gfd;
use phasefilter::linalg;
use phasefilter::phase_space::{sw_kernel, KernelSpec};
use phasefilter::{NamedState, PhasePoint, QrtKind, QrtModel};

fn main() -> phasefilter::Result<()> {
    let qubits = QrtModel::multipartite(3)?;
    println!("multipartite n = 3");
    for (label, d, tau) in qubits.tau_table() {
        println!("  sites {}: d = {d}, tau = {tau:.6}", label.render(&qubits.kind()));
    }
    let ghz = qubits.named_state(NamedState::Ghz)?;
    for (label, p) in gfd::state_purity_spectrum(&ghz, &qubits)?.iter() {
        println!("  GHZ purity on {}: {p:.6}", label.render(&qubits.kind()));
    }

    let omega = PhasePoint::Spheres(vec![(0.3, 1.0), (2.0, 0.5), (1.1, 4.0)]);
    let full = sw_kernel(&qubits, &omega, &KernelSpec::CahillGlauber(0.0))?.to_dense();
    let one = QrtModel::multipartite(1)?;
    let PhasePoint::Spheres(pts) = &omega else {
        unreachable!()
    };
    let mut prod = linalg::CMat::identity(1, 1);
    for &p in pts {
        let k = sw_kernel(&one, &PhasePoint::Spheres(vec![p]), &KernelSpec::CahillGlauber(0.0))?.to_dense();
        prod = linalg::kron(&prod, &k);
    }
    println!(
        "  kernel vs product of single-qubit kernels: {:.2e}",
        linalg::hs_norm(&(full - prod))
    );

    for n in [2, 3, 6, 10] {
        let model = QrtModel::fermionic(n)?;
        let taus: Vec<String> = model
            .tau_table()
            .iter()
            .map(|(l, _, t)| format!("{l}:{t:.3e}"))
            .collect();
        println!("fermionic n = {n}: {}", taus.join(" "));
    }

    let fermions = QrtModel::fermionic(3)?;
    let QrtKind::Fermionic(n) = fermions.kind() else {
        unreachable!()
    };
    let psi = fermions.named_state(NamedState::Haar(3))?;
    let spec = gfd::state_purity_spectrum(&psi, &fermions)?;
    let wigner = gfd::phase_purity(&spec, 0.0, &fermions)?;
    println!("n = {n} Haar state, operator vs phase-space purity per degree:");
    for (label, p) in spec.iter() {
        println!("  degree {label}: {p:.6} -> {:.6}", wigner.get(label));
    }
    Ok(())
}
