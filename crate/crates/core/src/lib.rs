//! Group-Fourier decomposition and Stratonovich–Weyl phase-space kernels for
//! quantum resource theories with a compact free group.
//!
//! ```
//! use phasefilter::gfd;
//! use phasefilter::operator::OperatorRep;
//! use phasefilter::phase_space::{symbol, KernelSpec};
//! use phasefilter::{HalfInt, PhasePoint, QrtModel};
//!
//! let model = QrtModel::spin(HalfInt::from_int(5))?;
//! let rho = OperatorRep::projector(&model.hw_state());
//! let spec = gfd::purity_spectrum(&rho, &model)?;
//! let wigner = gfd::phase_purity(&spec, 0.0, &model)?;
//! assert!((spec.total - 1.0).abs() < 1e-12);
//! assert!((wigner.get(model.trivial_label()) - spec.get(model.trivial_label())).abs() < 1e-15);
//!
//! let w = symbol(&model, &rho, &PhasePoint::sphere(0.4, 1.0), &KernelSpec::CahillGlauber(0.0))?;
//! assert!(w.im.abs() < 1e-12);
//! # Ok::<(), phasefilter::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod gfd;
pub mod linalg;
pub mod models;
pub mod operator;
pub mod pauli;
pub mod phase_space;
pub mod render;
pub mod verify;
pub mod wigner_symbols;

pub use error::{Error, Result};
pub use models::{Euler, GroupElement, IrrepBlock, IrrepLabel, NamedState, PhasePoint, QrtKind, QrtModel};
pub use operator::{BasisOp, OperatorRep};
pub use wigner_symbols::HalfInt;
