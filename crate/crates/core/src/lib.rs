//! Entanglement of formation, Gaussian discord and mutual information of
//! two-mode squeezed thermal states (STS), together with their exact decay
//! under one or two local thermal reservoirs.
//!
//! Conventions used throughout:
//!
//! * quadratures are ordered `(q1, p1, q2, p2)` and the vacuum variance is
//!   `1/2`, so the two-mode vacuum has covariance matrix `I4 / 2`;
//! * entropies are in nats;
//! * times are in the units of `1 / gamma`.
//!
//! ```
//! use sts_core::{correlation_report, standard_form_from_sts, StsParams};
//!
//! let sf = standard_form_from_sts(&StsParams::new(10.0, 0.1, 2.0, 0.0).unwrap()).unwrap();
//! let report = correlation_report(&sf).unwrap();
//! assert!(!report.separable);
//! assert!(report.d1 > 0.0 && report.ef > 0.0);
//! ```

// NaN has to fail the physicality checks, hence `!(x > 0.0)` forms
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod correlations;
pub mod dynamics;
mod error;
pub mod gaussian;
pub mod verification;

pub use correlations::{
    correlation_report, discords, entanglement_of_formation, entropic_h, mutual_information,
    symplectic_invariant_d, CorrelationReport, Discords, EntanglementOfFormation,
};
pub use dynamics::{
    characteristic_function, closed_form_esd, esd_time_identical_baths, esd_time_single_bath,
    evolve, evolve_identical_baths, gaussian_characteristic, steady_state, EsdTime, EvolvedState,
    ReservoirConfig,
};
pub use error::{Error, Result};
pub use gaussian::{
    full_cm, is_separable, standard_form_from_sts, symplectic_form, symplectic_spectrum,
    StandardForm, StsParams, SymplecticSpectrum, Tolerance,
};
