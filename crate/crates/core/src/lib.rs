//! Natural frequencies and fastening identification for an axisymmetrically
//! vibrating disc whose flexural rigidity grows as `D0 r^2`.
//!
//! * [`basis`] evaluates the bounded solutions and the combinations `f1..f4`.
//! * [`forward`] builds the characteristic determinant of a fastening and
//!   finds its natural frequencies.
//! * [`inverse`] recovers the fastening from three frequencies.
//! * [`stability`] measures how frequency errors reach the recovered matrix.
//!
//! ```
//! use fastening_core::forward::{find_roots, Fastening};
//! use fastening_core::inverse::identify;
//!
//! let bc = Fastening::RigidClamp.boundary_conditions();
//! let spectrum = find_roots(&bc, 3, 10.0).unwrap();
//! let v = spectrum.sqrt_s_values();
//! let result = identify([v[0], v[1], v[2]]).unwrap();
//! assert_eq!(result.classification.label, "rigid clamping");
//! ```

pub mod basis;
pub mod error;
pub mod forward;
pub mod inverse;
pub mod reference;
pub mod report;
pub mod stability;

pub use basis::{eval_basis, series_table, BasisEval, SpectralParameter};
pub use error::{Error, Result, Stage};
pub use forward::{
    characteristic_det, find_roots, minors_of, preset, BoundaryConditions, Fastening,
    MinorVector, RootSearch, Spectrum,
};
pub use inverse::{identify, IdentificationResult};
pub use stability::{perturb_and_identify, PerturbationReport};
