//! Closed-form correlation measures of a squeezed thermal state.
//!
//! All entropies are in nats. The discords are the Gaussian discords, which
//! are the exact discords for this family of states.
//!
//! The formulas are evaluated in terms of the invariant
//! `P = b1 b2 - c^2 = kappa_plus * kappa_minus` tracked by [`StandardForm`],
//! which keeps them accurate for strongly squeezed inputs:
//!
//! * `D = (P - 1/4)^2 - (b1 - b2)^2 / 4 = U (U + |b1 - b2|)` with `U` the
//!   uncertainty margin;
//! * `y = (P + b1 / 2) / (b2 + 1/2)` and `z = (P + b2 / 2) / (b1 + 1/2)`;
//! * `x_m = [(P - 1/4)^2 + b1 b2] / [(b1 + b2)(P + 1/4) + 2 c sqrt(D)]`,
//!   obtained by rationalizing the numerator of the usual expression, and
//!   evaluated as `1/2` plus a multiple of the squared separability margin.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{is_separable, symplectic_spectrum, StandardForm, VACUUM};

/// Rounding slack for arguments of [`entropic_h`].
pub const ENTROPY_SLACK: f64 = 1e-12;

/// Discords in `[-DISCORD_SLACK, 0)` are rounded up to zero.
pub const DISCORD_SLACK: f64 = 1e-10;

/// Conditional variances `y`, `z` may undershoot `1/2` by this much.
pub const CONDITIONAL_SLACK: f64 = 1e-9;

/// Von Neumann entropy of a one-mode thermal state with symplectic
/// eigenvalue `x`:
/// `h(x) = (x + 1/2) ln(x + 1/2) - (x - 1/2) ln(x - 1/2)`, with `h(1/2) = 0`.
pub fn entropic_h(x: f64) -> Result<f64> {
    if x.is_nan() || x < VACUUM - ENTROPY_SLACK {
        return Err(Error::EntropyDomain(x));
    }
    Ok(h_above_vacuum((x - VACUUM).max(0.0)))
}

/// `h(1/2 + e)` for `e >= 0`, accurate down to tiny `e`.
fn h_above_vacuum(e: f64) -> f64 {
    if e == 0.0 {
        0.0
    } else if e == f64::INFINITY {
        f64::INFINITY
    } else if e < 0.5 {
        (1.0 + e) * e.ln_1p() - e * e.ln()
    } else {
        // same expression regrouped to avoid cancelling two x ln x terms
        (1.0 + e) * (1.0 / e).ln_1p() + e.ln()
    }
}

/// The symplectic invariant `D`, non-negative for bona fide states.
pub fn symplectic_invariant_d(sf: &StandardForm) -> f64 {
    let u = sf.uncertainty_margin().max(0.0);
    u * (u + (sf.b1() - sf.b2()).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntanglementOfFormation {
    pub ef: f64,
    pub x_m: f64,
}

/// Gaussian entanglement of formation `h(x_m)`, zero for separable states.
pub fn entanglement_of_formation(sf: &StandardForm) -> Result<EntanglementOfFormation> {
    if is_separable(sf) {
        return Ok(EntanglementOfFormation { ef: 0.0, x_m: VACUUM });
    }
    let (b1, b2, c) = (sf.b1(), sf.b2(), sf.c());
    let p = sf.kappa_product();
    let delta = b1 - b2;
    if !(4.0 * p + delta * delta > 0.0) {
        return Err(Error::DegenerateDenominator);
    }
    let d = symplectic_invariant_d(sf);
    let s = b1 + b2;
    let root = 2.0 * c * d.sqrt();
    let den = s * (p + 0.25) + root;
    // x_m - 1/2 = m^2 [(4P + 1)^2 + 16 c^2] / (8 (a + root) den), with m the
    // separability margin; this keeps it exact near the threshold
    let q = p - 0.25;
    let a = 2.0 * q * q + 2.0 * b1 * b2 - s * (p + 0.25);
    let m = sf.separability_margin();
    let w = 4.0 * p + 1.0;
    let excess = m * m * (w * w + 16.0 * c * c) / (8.0 * (a + root) * den);
    if !(excess >= 0.0) {
        return Err(Error::DegenerateDenominator);
    }
    Ok(EntanglementOfFormation { ef: h_above_vacuum(excess), x_m: VACUUM + excess })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discords {
    /// Discord with the measurement on mode 2.
    pub d1: f64,
    /// Discord with the measurement on mode 1.
    pub d2: f64,
    pub y: f64,
    pub z: f64,
}

pub fn discords(sf: &StandardForm) -> Result<Discords> {
    let (b1, b2) = (sf.b1(), sf.b2());
    let p = sf.kappa_product();
    let spec = symplectic_spectrum(sf)?;

    let y = conditional("y", (p + 0.5 * b1) / (b2 + 0.5))?;
    let z = conditional("z", (p + 0.5 * b2) / (b1 + 0.5))?;

    let joint = entropic_h(spec.kappa_plus)? + entropic_h(spec.kappa_minus)?;
    let d1 = clamp_discord("d1", entropic_h(b2)? - joint + entropic_h(y)?)?;
    let d2 = clamp_discord("d2", entropic_h(b1)? - joint + entropic_h(z)?)?;
    Ok(Discords { d1, d2, y, z })
}

/// Quantum mutual information `h(b1) + h(b2) - h(kappa_plus) - h(kappa_minus)`.
pub fn mutual_information(sf: &StandardForm) -> Result<f64> {
    let spec = symplectic_spectrum(sf)?;
    let marginals = entropic_h(sf.b1())? + entropic_h(sf.b2())?;
    let joint = entropic_h(spec.kappa_plus)? + entropic_h(spec.kappa_minus)?;
    Ok((marginals - joint).max(0.0))
}

/// Every correlation measure of a state at once.
///
/// The discords are Gaussian-optimal, which is exact for squeezed thermal
/// states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub ef: f64,
    pub d1: f64,
    pub d2: f64,
    pub mutual_information: f64,
    pub separable: bool,
    pub x_m: f64,
    pub y: f64,
    pub z: f64,
    pub invariant_d: f64,
}

pub fn correlation_report(sf: &StandardForm) -> Result<CorrelationReport> {
    let ef = entanglement_of_formation(sf)?;
    let disc = discords(sf)?;
    Ok(CorrelationReport {
        ef: ef.ef,
        d1: disc.d1,
        d2: disc.d2,
        mutual_information: mutual_information(sf)?,
        separable: is_separable(sf),
        x_m: ef.x_m,
        y: disc.y,
        z: disc.z,
        invariant_d: symplectic_invariant_d(sf),
    })
}

fn conditional(name: &'static str, value: f64) -> Result<f64> {
    if value < VACUUM - CONDITIONAL_SLACK || value.is_nan() {
        Err(Error::ConditionalVariance { name, value })
    } else {
        Ok(value.max(VACUUM))
    }
}

fn clamp_discord(name: &'static str, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -DISCORD_SLACK {
        Ok(0.0)
    } else {
        Err(Error::NegativeDiscord { name, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{standard_form_from_sts, StsParams};
    use approx::assert_relative_eq;

    fn sts(n1: f64, n2: f64, r: f64) -> StandardForm {
        standard_form_from_sts(&StsParams::new(n1, n2, r, 0.0).unwrap()).unwrap()
    }

    #[test]
    fn h_values() {
        assert_eq!(entropic_h(0.5).unwrap(), 0.0);
        assert_relative_eq!(entropic_h(1.5).unwrap(), 2.0 * 2f64.ln(), max_relative = 1e-15);
        // 50-digit reference
        assert_relative_eq!(entropic_h(10.5).unwrap(), 3.3509970708416191445, max_relative = 1e-15);
    }

    #[test]
    fn h_domain() {
        assert_eq!(entropic_h(0.5 - 1e-13).unwrap(), 0.0);
        assert!(matches!(entropic_h(0.4), Err(Error::EntropyDomain(_))));
        assert!(entropic_h(f64::NAN).is_err());
    }

    #[test]
    fn h_branches_meet() {
        let below = entropic_h(1.0 - 1e-12).unwrap();
        let at = entropic_h(1.0).unwrap();
        assert!((at - below).abs() < 1e-11);
        assert!(at > below);
    }

    #[test]
    fn separable_has_zero_ef() {
        let ef = entanglement_of_formation(&StandardForm::new(3.0, 2.0, 0.5, 0.0).unwrap()).unwrap();
        assert_eq!(ef, EntanglementOfFormation { ef: 0.0, x_m: 0.5 });
    }

    #[test]
    fn pure_state_ef_is_local_entropy() {
        let sf = StandardForm::pure(5.0, 0.0).unwrap();
        assert_eq!(symplectic_invariant_d(&sf), 0.0);
        let ef = entanglement_of_formation(&sf).unwrap();
        assert_relative_eq!(ef.x_m, 5.0, max_relative = 1e-15);
        assert_relative_eq!(ef.ef, entropic_h(5.0).unwrap(), max_relative = 1e-15);
    }

    #[test]
    fn ef_just_below_threshold() {
        // x_m - 1/2 is far below one ulp of 1/2 here; 80-digit references
        let ef = entanglement_of_formation(&StandardForm::new(1.0, 1.0, 0.500000001, 0.0).unwrap()).unwrap();
        assert_relative_eq!(ef.ef, 4.2446529412409974061e-17, max_relative = 1e-6);
        let ef = entanglement_of_formation(&StandardForm::new(2.0, 0.75, 0.707, 0.0).unwrap()).unwrap();
        assert_relative_eq!(ef.x_m, 0.512540417230930599918, max_relative = 1e-14);
        assert_relative_eq!(ef.ef, 0.067530681433151069749, max_relative = 1e-13);
    }

    // expected values from an independent 50-digit evaluation of the
    // textbook expressions
    #[test]
    fn cold_partner_values() {
        let sf = sts(10.0, 0.1, 2.0);
        let rep = correlation_report(&sf).unwrap();
        assert_relative_eq!(rep.invariant_d, 12.100000000000000733, max_relative = 1e-12);
        assert_relative_eq!(rep.x_m, 7.5622342365363805187, max_relative = 1e-13);
        assert_relative_eq!(rep.ef, 3.0224371240335289245, max_relative = 1e-13);
        assert_relative_eq!(rep.y, 0.57477362680111954403, max_relative = 1e-13);
        assert_relative_eq!(rep.z, 0.50700589230139400979, max_relative = 1e-13);
        assert_relative_eq!(rep.d1, 2.5730936971283027913, max_relative = 1e-12);
        assert_relative_eq!(rep.d2, 2.4088124840205894367, max_relative = 1e-12);
        assert_relative_eq!(rep.mutual_information, 8.3548046328623182503, max_relative = 1e-13);
        assert!(!rep.separable);
    }

    #[test]
    fn warm_pair_values() {
        let rep = correlation_report(&sts(10.0, 7.0, 2.0)).unwrap();
        assert_relative_eq!(rep.invariant_d, 6160.0, max_relative = 1e-12);
        assert_relative_eq!(rep.x_m, 0.86016818426382210849, max_relative = 1e-12);
        assert_relative_eq!(rep.ef, 0.78619715163844846058, max_relative = 1e-12);
        assert_relative_eq!(rep.d1, 0.87385132670074453707, max_relative = 1e-12);
        assert_relative_eq!(rep.d2, 0.8632452643993433138, max_relative = 1e-12);
        assert_relative_eq!(rep.mutual_information, 6.6436286163466173478, max_relative = 1e-13);
    }

    #[test]
    fn symmetric_state_has_equal_discords() {
        let d = discords(&StandardForm::new(3.0, 3.0, 2.0, 0.0).unwrap()).unwrap();
        assert_eq!(d.y, d.z);
        assert_eq!(d.d1, d.d2);
    }

    #[test]
    fn pure_state_discords() {
        let sf = StandardForm::pure(4.0, 1.0).unwrap();
        let d = discords(&sf).unwrap();
        assert_eq!((d.y, d.z), (0.5, 0.5));
        assert_relative_eq!(d.d1, entropic_h(4.0).unwrap(), max_relative = 1e-15);
        assert_eq!(d.d1, d.d2);
    }

    #[test]
    fn product_state_has_no_correlations() {
        let sf = StandardForm::new(10.5, 7.5, 0.0, 0.0).unwrap();
        let rep = correlation_report(&sf).unwrap();
        assert_eq!((rep.ef, rep.d1, rep.d2, rep.mutual_information), (0.0, 0.0, 0.0, 0.0));
        assert!(rep.separable);
    }

    #[test]
    fn vacuum_report() {
        let rep = correlation_report(&StandardForm::new(0.5, 0.5, 0.0, 0.0).unwrap()).unwrap();
        assert_eq!((rep.ef, rep.d1, rep.d2, rep.mutual_information), (0.0, 0.0, 0.0, 0.0));
        assert!(rep.separable);
    }

    #[test]
    fn pure_r2_report() {
        let rep = correlation_report(&sts(0.0, 0.0, 2.0)).unwrap();
        let expected = 3.6138174635076089626; // h(cosh(4) / 2)
        assert_relative_eq!(rep.ef, expected, max_relative = 1e-14);
        assert_relative_eq!(rep.d1, expected, max_relative = 1e-14);
        assert_relative_eq!(rep.d2, expected, max_relative = 1e-14);
        assert_relative_eq!(rep.mutual_information, 2.0 * rep.ef, max_relative = 1e-14);
    }

    #[test]
    fn negative_discord_beyond_rounding_is_an_error() {
        assert_eq!(clamp_discord("d1", -1e-11).unwrap(), 0.0);
        assert!(matches!(clamp_discord("d1", -1e-9), Err(Error::NegativeDiscord { .. })));
        assert!(conditional("y", 0.5 - 1e-10).is_ok());
        assert!(conditional("y", 0.49).is_err());
    }
}
