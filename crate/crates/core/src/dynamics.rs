//! Exact evolution of a squeezed thermal state under local thermal
//! reservoirs.
//!
//! Each mode `j` is damped at rate `gamma_j` towards a thermal state with
//! occupancy `n_rj`. The state stays Gaussian and in standard form, with
//!
//! ```text
//! b_j(t) = b_j e^{-gamma_j t} + (n_rj + 1/2)(1 - e^{-gamma_j t})
//! c(t)   = c e^{-(gamma_1 + gamma_2) t / 2}
//! ```
//!
//! Times are in units of `1 / gamma`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{
    full_cm, is_separable, physicality_slack, symplectic_spectrum, StandardForm, VACUUM,
};

/// Damping rates and thermal occupancies of the baths attached to the two
/// modes. A zero rate leaves the corresponding mode undamped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReservoirConfig {
    pub gamma1: f64,
    pub n_r1: f64,
    pub gamma2: f64,
    pub n_r2: f64,
}

impl ReservoirConfig {
    pub fn new(gamma1: f64, n_r1: f64, gamma2: f64, n_r2: f64) -> Result<Self> {
        let res = Self { gamma1, n_r1, gamma2, n_r2 };
        res.validate()?;
        Ok(res)
    }

    /// Two identical baths.
    pub fn identical(gamma: f64, n_r: f64) -> Result<Self> {
        Self::new(gamma, n_r, gamma, n_r)
    }

    /// A single bath on mode 1; mode 2 evolves freely.
    pub fn single_bath(gamma: f64, n_r: f64) -> Result<Self> {
        Self::new(gamma, n_r, 0.0, 0.0)
    }

    /// No reservoir at all: evolution is the identity.
    pub fn none() -> Self {
        Self { gamma1: 0.0, n_r1: 0.0, gamma2: 0.0, n_r2: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma1", self.gamma1),
            ("n_r1", self.n_r1),
            ("gamma2", self.gamma2),
            ("n_r2", self.n_r2),
        ] {
            if !v.is_finite() {
                return Err(Error::NonFinite { name, value: v });
            }
            if v < 0.0 {
                return Err(Error::Negative { name, value: v });
            }
        }
        Ok(())
    }

    pub fn is_identical(&self) -> bool {
        self.gamma1 > 0.0 && self.gamma1 == self.gamma2 && self.n_r1 == self.n_r2
    }

    /// The damped mode when exactly one bath is attached.
    pub fn single_damped_mode(&self) -> Option<u8> {
        match (self.gamma1 > 0.0, self.gamma2 > 0.0) {
            (true, false) => Some(1),
            (false, true) => Some(2),
            _ => None,
        }
    }

    pub fn has_channel(&self) -> bool {
        self.gamma1 > 0.0 || self.gamma2 > 0.0
    }
}

/// State reached after a time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvedState {
    pub t: f64,
    pub sf: StandardForm,
}

/// Entanglement death time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EsdTime {
    Finite(f64),
    /// Zero-temperature bath: entanglement only vanishes as `t -> infinity`.
    AsymptoticOnly,
}

impl EsdTime {
    pub fn finite(self) -> Option<f64> {
        match self {
            EsdTime::Finite(t) => Some(t),
            EsdTime::AsymptoticOnly => None,
        }
    }
}

/// Decay factor `e^{-gamma t}` and its complement `1 - e^{-gamma t}`.
fn decay(gamma: f64, t: f64) -> (f64, f64) {
    let x = -gamma * t;
    (x.exp(), -x.exp_m1())
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTime(t))
    }
}

pub fn evolve(sf0: &StandardForm, res: &ReservoirConfig, t: f64) -> Result<EvolvedState> {
    check_time(t)?;
    res.validate()?;
    let (e1, f1) = decay(res.gamma1, t);
    let (e2, f2) = decay(res.gamma2, t);
    let (m1, m2) = (res.n_r1 + VACUUM, res.n_r2 + VACUUM);
    let (b1, b2) = (sf0.b1(), sf0.b2());

    let b1t = b1 * e1 + m1 * f1;
    let b2t = b2 * e2 + m2 * f2;
    let ct = sf0.c() * (-0.5 * (res.gamma1 + res.gamma2) * t).exp();
    // b1(t) b2(t) - c(t)^2 expanded into non-negative terms
    let pt = e1 * e2 * sf0.kappa_product()
        + b1 * e1 * m2 * f2
        + b2 * e2 * m1 * f1
        + m1 * m2 * f1 * f2;

    let slack = physicality_slack(b1t, b2t, ct);
    let sf = StandardForm::assemble(b1t, b2t, ct, sf0.phi(), pt, slack)?;
    Ok(EvolvedState { t, sf })
}

/// Evolution with two identical baths,
/// `V(t) = e^{-gamma t} V(0) + (n_r + 1/2)(1 - e^{-gamma t}) I4`.
pub fn evolve_identical_baths(
    sf0: &StandardForm,
    gamma: f64,
    n_r: f64,
    t: f64,
) -> Result<EvolvedState> {
    check_time(t)?;
    ReservoirConfig::identical(gamma, n_r)?;
    let (e, f) = decay(gamma, t);
    let noise = (n_r + VACUUM) * f;

    let b1t = e * sf0.b1() + noise;
    let b2t = e * sf0.b2() + noise;
    let ct = e * sf0.c();
    let pt = e * e * sf0.kappa_product() + e * noise * (sf0.b1() + sf0.b2()) + noise * noise;

    let slack = physicality_slack(b1t, b2t, ct);
    let sf = StandardForm::assemble(b1t, b2t, ct, sf0.phi(), pt, slack)?;
    Ok(EvolvedState { t, sf })
}

fn check_rate(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveRate(gamma))
    }
}

fn check_occupancy(n_r: f64) -> Result<()> {
    if !n_r.is_finite() {
        Err(Error::NonFinite { name: "n_r", value: n_r })
    } else if n_r < 0.0 {
        Err(Error::Negative { name: "n_r", value: n_r })
    } else {
        Ok(())
    }
}

/// Death time under two identical baths:
/// `t_s = ln(1 + (1/2 - kappa_tilde_minus) / n_r) / gamma`.
pub fn esd_time_identical_baths(sf0: &StandardForm, gamma: f64, n_r: f64) -> Result<EsdTime> {
    check_rate(gamma)?;
    check_occupancy(n_r)?;
    if is_separable(sf0) {
        return Err(Error::AlreadySeparable { margin: sf0.separability_margin() });
    }
    if n_r == 0.0 {
        return Ok(EsdTime::AsymptoticOnly);
    }
    let kt_minus = symplectic_spectrum(sf0)?.kappa_tilde_minus;
    let t = ((VACUUM - kt_minus) / n_r).ln_1p() / gamma;
    Ok(EsdTime::Finite(t.max(0.0)))
}

/// Death time with a single bath on mode 1:
/// `t_s = ln(1 - M / (n_r (b2 - 1/2))) / gamma`, `M` the separability margin.
pub fn esd_time_single_bath(sf0: &StandardForm, gamma: f64, n_r: f64) -> Result<EsdTime> {
    check_rate(gamma)?;
    check_occupancy(n_r)?;
    let margin = sf0.separability_margin();
    if margin >= 0.0 {
        return Err(Error::AlreadySeparable { margin });
    }
    let free = sf0.b2() - VACUUM;
    if free <= 0.0 {
        return Err(Error::DegenerateMode);
    }
    if n_r == 0.0 {
        return Ok(EsdTime::AsymptoticOnly);
    }
    let t = (-margin / (n_r * free)).ln_1p() / gamma;
    Ok(EsdTime::Finite(t))
}

/// Closed-form death time when one exists for `res`: identical baths, or a
/// single bath on either mode. `None` for other configurations.
pub fn closed_form_esd(sf0: &StandardForm, res: &ReservoirConfig) -> Option<Result<EsdTime>> {
    if let Err(e) = res.validate() {
        return Some(Err(e));
    }
    if !res.has_channel() {
        return Some(Err(Error::NoChannel));
    }
    if res.is_identical() {
        return Some(esd_time_identical_baths(sf0, res.gamma1, res.n_r1));
    }
    match res.single_damped_mode() {
        Some(1) => Some(esd_time_single_bath(sf0, res.gamma1, res.n_r1)),
        Some(_) => Some(esd_time_single_bath(&sf0.swapped(), res.gamma2, res.n_r2)),
        None => None,
    }
}

/// Product state reached as `t -> infinity`. An undamped mode keeps its
/// initial marginal.
pub fn steady_state(res: &ReservoirConfig, sf0: &StandardForm) -> Result<StandardForm> {
    res.validate()?;
    if !res.has_channel() {
        return Err(Error::NoChannel);
    }
    let b1 = if res.gamma1 > 0.0 { res.n_r1 + VACUUM } else { sf0.b1() };
    let b2 = if res.gamma2 > 0.0 { res.n_r2 + VACUUM } else { sf0.b2() };
    StandardForm::new(b1, b2, 0.0, sf0.phi())
}

/// `Tr[D1(l1) D2(l2) rho]` of a zero-mean Gaussian state,
/// `exp(-xi^T V xi / 2)` with `xi = sqrt(2) (Im l1, -Re l1, Im l2, -Re l2)`.
pub fn gaussian_characteristic(sf: &StandardForm, lambda1: Complex64, lambda2: Complex64) -> Complex64 {
    let s = std::f64::consts::SQRT_2;
    let xi = nalgebra::Vector4::new(s * lambda1.im, -s * lambda1.re, s * lambda2.im, -s * lambda2.re);
    let quad = xi.dot(&(full_cm(sf) * xi));
    Complex64::new((-0.5 * quad).exp(), 0.0)
}

/// Characteristic function at time `t` from the damped input and the
/// accumulated bath noise.
pub fn characteristic_function(
    sf0: &StandardForm,
    res: &ReservoirConfig,
    t: f64,
    lambda1: Complex64,
    lambda2: Complex64,
) -> Result<Complex64> {
    check_time(t)?;
    res.validate()?;
    let (_, f1) = decay(res.gamma1, t);
    let (_, f2) = decay(res.gamma2, t);
    let scaled1 = lambda1 * (-0.5 * res.gamma1 * t).exp();
    let scaled2 = lambda2 * (-0.5 * res.gamma2 * t).exp();
    let noise = (res.n_r1 + VACUUM) * f1 * lambda1.norm_sqr() + (res.n_r2 + VACUUM) * f2 * lambda2.norm_sqr();
    Ok(gaussian_characteristic(sf0, scaled1, scaled2) * (-noise).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{standard_form_from_sts, StsParams};
    use approx::assert_relative_eq;
    use std::f64::consts::LN_2;

    fn sts(n1: f64, n2: f64, r: f64) -> StandardForm {
        standard_form_from_sts(&StsParams::new(n1, n2, r, 0.3).unwrap()).unwrap()
    }

    #[test]
    fn zero_time_is_identity() {
        let sf = sts(10.0, 0.1, 2.0);
        let res = ReservoirConfig::new(1.0, 0.5, 0.3, 2.0).unwrap();
        assert_eq!(evolve(&sf, &res, 0.0).unwrap().sf, sf);
        assert_eq!(evolve_identical_baths(&sf, 1.0, 0.5, 0.0).unwrap().sf, sf);
    }

    #[test]
    fn rejects_negative_time() {
        let sf = sts(1.0, 1.0, 1.0);
        let res = ReservoirConfig::identical(1.0, 0.5).unwrap();
        assert!(matches!(evolve(&sf, &res, -1.0), Err(Error::InvalidTime(_))));
        assert!(evolve(&sf, &res, f64::NAN).is_err());
    }

    #[test]
    fn long_time_limit_is_thermal_product() {
        let sf = sts(10.0, 7.0, 2.0);
        let res = ReservoirConfig::new(1.0, 0.5, 1.0, 2.0).unwrap();
        let late = evolve(&sf, &res, 700.0).unwrap().sf;
        assert!((late.b1() - 1.0).abs() < 1e-12);
        assert!((late.b2() - 2.5).abs() < 1e-12);
        assert!(late.c() < 1e-12);
    }

    #[test]
    fn single_bath_leaves_mode_two_alone() {
        let sf = sts(10.0, 7.0, 2.0);
        let res = ReservoirConfig::single_bath(1.0, 0.5).unwrap();
        for t in [0.1, 1.0, 5.0] {
            let s = evolve(&sf, &res, t).unwrap().sf;
            assert_eq!(s.b2(), sf.b2());
            assert_relative_eq!(s.c(), sf.c() * (-t / 2.0).exp(), max_relative = 1e-15);
        }
    }

    #[test]
    fn identical_baths_half_life() {
        let sf = sts(2.0, 1.0, 1.0);
        let s = evolve_identical_baths(&sf, 1.0, 0.0, LN_2).unwrap().sf;
        assert_relative_eq!(s.b1(), sf.b1() / 2.0 + 0.25, max_relative = 1e-15);
        assert_relative_eq!(s.b2(), sf.b2() / 2.0 + 0.25, max_relative = 1e-15);
        assert_relative_eq!(s.c(), sf.c() / 2.0, max_relative = 1e-15);
    }

    #[test]
    fn identical_baths_matrix_form() {
        let sf = sts(3.0, 0.5, 1.2);
        let (gamma, n_r, t): (f64, f64, f64) = (0.7, 0.8, 1.3);
        let e = (-gamma * t).exp();
        let expected = full_cm(&sf) * e + nalgebra::Matrix4::identity() * ((n_r + 0.5) * (1.0 - e));
        let got = full_cm(&evolve_identical_baths(&sf, gamma, n_r, t).unwrap().sf);
        assert_relative_eq!(got, expected, epsilon = 1e-13);
        let general = evolve(&sf, &ReservoirConfig::identical(gamma, n_r).unwrap(), t).unwrap().sf;
        assert_relative_eq!(full_cm(&general), expected, epsilon = 1e-13);
    }

    #[test]
    fn symmetric_input_stays_symmetric() {
        let sf = sts(0.0, 0.0, 1.5);
        for t in [0.2, 1.0, 4.0] {
            let s = evolve_identical_baths(&sf, 1.0, 0.5, t).unwrap().sf;
            assert_eq!(s.b1(), s.b2());
            let d = crate::correlations::discords(&s).unwrap();
            assert_eq!(d.d1, d.d2);
        }
    }

    #[test]
    fn identical_esd_direct_substitution() {
        // b - c = 0.3 with b = 1 gives kappa_tilde_minus = 0.3
        let sf = StandardForm::new(1.0, 1.0, 0.7, 0.0).unwrap();
        assert_relative_eq!(symplectic_spectrum(&sf).unwrap().kappa_tilde_minus, 0.3, max_relative = 1e-15);
        let t = esd_time_identical_baths(&sf, 1.0, 0.5).unwrap().finite().unwrap();
        assert_relative_eq!(t, 1.4f64.ln(), max_relative = 1e-15);
    }

    #[test]
    fn identical_esd_near_threshold_is_small() {
        let sf = StandardForm::new(1.0, 1.0, 0.5 + 1e-9, 0.0).unwrap();
        let t = esd_time_identical_baths(&sf, 1.0, 0.5).unwrap().finite().unwrap();
        assert!(t > 0.0 && t < 1e-8);
    }

    #[test]
    fn cold_partner_identical_esd() {
        let sf = sts(10.0, 0.1, 2.0);
        let t = esd_time_identical_baths(&sf, 1.0, 0.5).unwrap().finite().unwrap();
        // 50-digit reference
        assert_relative_eq!(t, 0.67214294975904891504, max_relative = 1e-14);
        let at = evolve_identical_baths(&sf, 1.0, 0.5, t).unwrap().sf;
        assert!(at.separability_margin().abs() < 1e-9);
    }

    #[test]
    fn single_bath_esd_mixed() {
        let sf = sts(10.0, 7.0, 2.0);
        let t = esd_time_single_bath(&sf, 1.0, 0.5).unwrap().finite().unwrap();
        assert_relative_eq!(t, 0.86215870773413677173, max_relative = 1e-14);
        let res = ReservoirConfig::single_bath(1.0, 0.5).unwrap();
        assert!(evolve(&sf, &res, t).unwrap().sf.separability_margin().abs() < 1e-9);
    }

    #[test]
    fn pure_single_bath_time_is_universal() {
        for r in [0.5, 1.0, 2.0, 3.5] {
            let sf = sts(0.0, 0.0, r);
            let t = esd_time_single_bath(&sf, 1.0, 1.0).unwrap().finite().unwrap();
            assert_relative_eq!(t, LN_2, max_relative = 1e-15);
            let t = esd_time_single_bath(&sf, 2.0, 0.5).unwrap().finite().unwrap();
            assert_relative_eq!(t, 3f64.ln() / 2.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn zero_temperature_is_asymptotic() {
        let sf = sts(0.0, 0.0, 1.0);
        assert_eq!(esd_time_identical_baths(&sf, 1.0, 0.0).unwrap(), EsdTime::AsymptoticOnly);
        assert_eq!(esd_time_single_bath(&sf, 1.0, 0.0).unwrap(), EsdTime::AsymptoticOnly);
    }

    #[test]
    fn esd_rejects_separable_and_bad_rates() {
        let sep = StandardForm::new(3.0, 3.0, 0.1, 0.0).unwrap();
        assert!(matches!(esd_time_identical_baths(&sep, 1.0, 0.5), Err(Error::AlreadySeparable { .. })));
        assert!(matches!(esd_time_single_bath(&sep, 1.0, 0.5), Err(Error::AlreadySeparable { .. })));
        let ent = sts(0.0, 0.0, 1.0);
        assert!(matches!(esd_time_identical_baths(&ent, 0.0, 0.5), Err(Error::NonPositiveRate(_))));
        assert!(esd_time_single_bath(&ent, 1.0, -0.5).is_err());
    }

    #[test]
    fn closed_form_dispatch() {
        let sf = sts(10.0, 7.0, 2.0);
        let single1 = ReservoirConfig::single_bath(1.0, 0.5).unwrap();
        let single2 = ReservoirConfig::new(0.0, 0.0, 1.0, 0.5).unwrap();
        let t1 = closed_form_esd(&sf, &single1).unwrap().unwrap();
        let t2 = closed_form_esd(&sf.swapped(), &single2).unwrap().unwrap();
        assert_eq!(t1, t2);
        let mixed = ReservoirConfig::new(1.0, 0.5, 2.0, 0.1).unwrap();
        assert!(closed_form_esd(&sf, &mixed).is_none());
        assert!(matches!(closed_form_esd(&sf, &ReservoirConfig::none()), Some(Err(Error::NoChannel))));
    }

    #[test]
    fn steady_states() {
        let sf = sts(10.0, 7.0, 2.0);
        let vac = steady_state(&ReservoirConfig::identical(1.0, 0.0).unwrap(), &sf).unwrap();
        assert_eq!((vac.b1(), vac.b2(), vac.c()), (0.5, 0.5, 0.0));

        let sf = StandardForm::new(9.0, 7.5, 7.0, 0.0).unwrap();
        let single = steady_state(&ReservoirConfig::single_bath(1.0, 0.5).unwrap(), &sf).unwrap();
        assert_eq!((single.b1(), single.b2(), single.c()), (1.0, 7.5, 0.0));

        let noisy = steady_state(&ReservoirConfig::identical(1.0, 2.0).unwrap(), &sf).unwrap();
        let rep = crate::correlations::correlation_report(&noisy).unwrap();
        assert_eq!((rep.ef, rep.d1, rep.d2), (0.0, 0.0, 0.0));

        assert!(matches!(steady_state(&ReservoirConfig::none(), &sf), Err(Error::NoChannel)));
    }

    #[test]
    fn characteristic_normalization_and_limit() {
        let sf = sts(10.0, 0.1, 2.0);
        let res = ReservoirConfig::new(1.0, 0.5, 0.5, 1.5).unwrap();
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(characteristic_function(&sf, &res, 3.0, zero, zero).unwrap(), Complex64::new(1.0, 0.0));

        let (l1, l2) = (Complex64::new(0.3, -0.2), Complex64::new(-0.1, 0.4));
        let late = characteristic_function(&sf, &res, 700.0, l1, l2).unwrap();
        let thermal = (-l1.norm_sqr() - 2.0 * l2.norm_sqr()).exp();
        assert_relative_eq!(late.re, thermal, max_relative = 1e-12);
        assert_eq!(late.im, 0.0);
    }

    #[test]
    fn vacuum_characteristic() {
        let vac = StandardForm::new(0.5, 0.5, 0.0, 0.0).unwrap();
        let l = Complex64::new(0.6, 0.8);
        let chi = gaussian_characteristic(&vac, l, Complex64::new(0.0, 0.0));
        assert_relative_eq!(chi.re, (-0.5f64).exp(), max_relative = 1e-15);
    }
}
