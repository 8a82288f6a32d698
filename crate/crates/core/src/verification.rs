//! Numeric oracles that check the closed forms by independent routes.
//!
//! * Symplectic spectra come from the eigenvalues of `Omega V` for the full
//!   4x4 covariance matrix. A general eigen-solver locates them; each is then
//!   polished with the two-sided Rayleigh quotient
//!   `kappa = Im(x^H V Omega V x) / (x^H V x)`, evaluated in double-double
//!   arithmetic. For the eigenvector `x` of `Omega V` at `i kappa`, `V x` is the
//!   matching left eigenvector, so the quotient is stationary and the
//!   polished value is limited by the rounding of `V`, not by the conditioning
//!   of the non-normal product.
//! * Entanglement death times come from bisection on the separability margin
//!   `(b1(t) - 1/2)(b2(t) - 1/2) - c(t)^2` of the evolved entries.

use std::f64::consts::PI;

use nalgebra::{Complex, Matrix4, Vector4};
use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::dynamics::{
    characteristic_function, closed_form_esd, evolve, gaussian_characteristic, EsdTime,
    ReservoirConfig,
};
use crate::error::{Error, Result};
use crate::gaussian::{
    full_cm, is_separable, symplectic_form, symplectic_spectrum, StandardForm, StsParams, VACUUM,
};

/// Eigenvalue moduli of `Omega V` must pair up to this tolerance.
pub const PAIRING_TOL: f64 = 1e-8;

/// Width of the final bisection bracket, in units of time.
pub const BISECTION_TOL: f64 = 1e-12;

pub const SPECTRUM_TOL: f64 = 1e-10;
pub const ESD_TOL: f64 = 1e-9;
pub const CHARACTERISTIC_TOL: f64 = 1e-10;

/// Outcome of comparing a closed form with its oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub quantity: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub tol: f64,
    pub pass: bool,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, closed_form: f64, oracle: f64, tol: f64) -> Self {
        let abs_err = (closed_form - oracle).abs();
        Self { quantity: quantity.into(), closed_form, oracle, abs_err, tol, pass: abs_err <= tol }
    }
}

// double-double arithmetic, enough for dot products of length four

#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Dd { hi: s, lo: lo - (s - hi) }
    }

    fn add(self, o: Dd) -> Dd {
        let s = self.hi + o.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (o.hi - bb);
        Dd::renorm(s, err + self.lo + o.lo)
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let err = self.hi.mul_add(o.hi, -p);
        Dd::renorm(p, err + self.hi * o.lo + self.lo * o.hi)
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

fn mat_vec_dd(v: &Matrix4<f64>, x: &Vector4<f64>) -> [Dd; 4] {
    let mut out = [Dd::ZERO; 4];
    for (i, o) in out.iter_mut().enumerate() {
        for j in 0..4 {
            *o = o.add(Dd::from(v[(i, j)]).mul(Dd::from(x[j])));
        }
    }
    out
}

/// Polishes an approximate symplectic eigenvalue of `v`.
fn refine_symplectic_eigenvalue(v: &Matrix4<f64>, kappa: f64) -> f64 {
    let m: Matrix4<Complex64> = (symplectic_form() * v).map(|a| Complex::new(a, 0.0));
    let mut x = Vector4::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.7, 0.3),
        Complex64::new(-0.4, 0.9),
        Complex64::new(0.2, -0.5),
    );
    let mut shift = Complex64::new(0.0, kappa);
    for _ in 0..3 {
        let a = m - Matrix4::identity() * shift;
        let next = match a.lu().solve(&x) {
            Some(y) if y.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => y,
            _ => {
                shift += Complex64::new(0.0, kappa.max(1.0) * 1e-13);
                continue;
            }
        };
        let scale = next.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            break;
        }
        x = next / Complex64::new(scale, 0.0);
    }

    let u = x.map(|z| z.re);
    let w = x.map(|z| z.im);
    let p = mat_vec_dd(v, &u);
    let q = mat_vec_dd(v, &w);
    // u^T (V Omega V) w = (V u)^T Omega (V w)
    let num = p[0].mul(q[1]).sub(p[1].mul(q[0])).add(p[2].mul(q[3])).sub(p[3].mul(q[2]));
    let mut den = Dd::ZERO;
    for i in 0..4 {
        den = den.add(Dd::from(u[i]).mul(p[i])).add(Dd::from(w[i]).mul(q[i]));
    }
    let refined = (2.0 * num.value() / den.value()).abs();
    if refined.is_finite() {
        refined
    } else {
        kappa
    }
}

/// Symplectic eigenvalues `(kappa_plus, kappa_minus)` of a positive definite
/// 4x4 covariance matrix, from the moduli of the eigenvalues of `i Omega V`.
pub fn symplectic_spectrum_oracle(v: &Matrix4<f64>) -> Result<(f64, f64)> {
    let asymmetry = (v - v.transpose()).abs().max();
    if asymmetry > PAIRING_TOL * v.abs().max() || v.cholesky().is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    let eig = (symplectic_form() * v).complex_eigenvalues();
    let (hi, lo) = pair_moduli([eig[0].norm(), eig[1].norm(), eig[2].norm(), eig[3].norm()])?;
    let hi = refine_symplectic_eigenvalue(v, hi);
    let lo = refine_symplectic_eigenvalue(v, lo);
    Ok((hi.max(lo), hi.min(lo)))
}

/// Groups the four moduli into two equal pairs, largest first.
fn pair_moduli(mut moduli: [f64; 4]) -> Result<(f64, f64)> {
    moduli.sort_by(|a, b| b.total_cmp(a));
    let paired = |a: f64, b: f64| (a - b).abs() <= PAIRING_TOL * a.max(1.0);
    if !paired(moduli[0], moduli[1]) || !paired(moduli[2], moduli[3]) {
        return Err(Error::Unpaired(moduli));
    }
    Ok((0.5 * (moduli[0] + moduli[1]), 0.5 * (moduli[2] + moduli[3])))
}

/// Momentum reflection on mode 2, the partial transpose at the level of
/// covariance matrices.
pub fn partial_transpose(v: &Matrix4<f64>) -> Matrix4<f64> {
    let flip = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 1.0, -1.0));
    flip * v * flip
}

/// `(kappa_tilde_plus, kappa_tilde_minus)` of a covariance matrix.
pub fn ppt_spectrum_oracle(v: &Matrix4<f64>) -> Result<(f64, f64)> {
    symplectic_spectrum_oracle(&partial_transpose(v))
}

fn margin_of_entries(sf: &StandardForm) -> f64 {
    let a = Dd::from(sf.b1()).sub(Dd::from(VACUUM));
    let b = Dd::from(sf.b2()).sub(Dd::from(VACUUM));
    let c = Dd::from(sf.c());
    a.mul(b).sub(c.mul(c)).value()
}

/// `(b1(t) - 1/2)(b2(t) - 1/2) - c(t)^2` from the evolved entries.
pub fn separability_margin_at(sf0: &StandardForm, res: &ReservoirConfig, t: f64) -> Result<f64> {
    Ok(margin_of_entries(&evolve(sf0, res, t)?.sf))
}

/// Root of the separability margin along the evolution, by bisection.
pub fn esd_bisection(sf0: &StandardForm, res: &ReservoirConfig) -> Result<f64> {
    res.validate()?;
    if !res.has_channel() {
        return Err(Error::NoChannel);
    }
    let m0 = margin_of_entries(sf0);
    if m0 >= 0.0 {
        return Err(Error::AlreadySeparable { margin: m0 });
    }

    let rates = [res.gamma1, res.gamma2];
    let gamma_min = rates.iter().copied().filter(|g| *g > 0.0).fold(f64::INFINITY, f64::min);
    let n_r = [(res.gamma1, res.n_r1), (res.gamma2, res.n_r2)]
        .iter()
        .filter(|(g, _)| *g > 0.0)
        .map(|(_, n)| *n)
        .fold(0.0, f64::max);
    let kt_minus = symplectic_spectrum(sf0)?.kappa_tilde_minus.min(VACUUM);
    // past this the decay factors underflow and the margin stops moving
    let t_cap = 800.0 / gamma_min;

    let mut hi = (2.0 / gamma_min) * ((VACUUM - kt_minus) / n_r.max(1e-6)).ln_1p();
    if !(hi > 0.0) {
        hi = 1.0 / gamma_min;
    }
    hi = hi.min(t_cap);
    while separability_margin_at(sf0, res, hi)? <= 0.0 {
        if hi >= t_cap {
            return Err(Error::NoRoot { t_max: t_cap });
        }
        hi = (2.0 * hi).min(t_cap);
    }

    let mut lo = 0.0;
    while hi - lo > BISECTION_TOL {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if separability_margin_at(sf0, res, mid)? >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo + 0.5 * (hi - lo))
}

/// Number of sign changes of the separability margin over `samples + 1`
/// equally spaced times in `[0, t_max]`. Zeros are skipped.
pub fn margin_sign_changes(
    sf0: &StandardForm,
    res: &ReservoirConfig,
    t_max: f64,
    samples: usize,
) -> Result<usize> {
    let mut changes = 0;
    let mut last: Option<bool> = None;
    for k in 0..=samples {
        let t = t_max * k as f64 / samples.max(1) as f64;
        let m = separability_margin_at(sf0, res, t)?;
        if m == 0.0 {
            continue;
        }
        let sign = m > 0.0;
        if last.is_some_and(|s| s != sign) {
            changes += 1;
        }
        last = Some(sign);
    }
    Ok(changes)
}

/// Runs every applicable oracle on `sf` and `res`.
pub fn check_state(sf: &StandardForm, res: &ReservoirConfig) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    let v = full_cm(sf);
    // the entries of V are all the oracle sees
    let entries = StandardForm::from_cm(&v)?;
    let closed = symplectic_spectrum(&entries)?;
    let (kp, km) = symplectic_spectrum_oracle(&v)?;
    let (ktp, ktm) = ppt_spectrum_oracle(&v)?;
    out.push(OracleReport::new("kappa_plus", closed.kappa_plus, kp, SPECTRUM_TOL));
    out.push(OracleReport::new("kappa_minus", closed.kappa_minus, km, SPECTRUM_TOL));
    out.push(OracleReport::new("kappa_tilde_plus", closed.kappa_tilde_plus, ktp, SPECTRUM_TOL));
    out.push(OracleReport::new("kappa_tilde_minus", closed.kappa_tilde_minus, ktm, SPECTRUM_TOL));
    let verdict = |b: bool| if b { 1.0 } else { 0.0 };
    out.push(OracleReport::new("separable", verdict(is_separable(sf)), verdict(ktm >= VACUUM), 0.0));

    if res.has_channel() && !is_separable(sf) {
        if let Some(Ok(EsdTime::Finite(t_closed))) = closed_form_esd(sf, res) {
            let t_bis = esd_bisection(sf, res)?;
            out.push(OracleReport::new("esd_time", t_closed, t_bis, ESD_TOL));
        }
    }

    if res.has_channel() {
        let t = 1.0;
        let evolved = evolve(sf, res, t)?.sf;
        for (k, (l1, l2)) in characteristic_probe_points().into_iter().enumerate() {
            let direct = characteristic_function(sf, res, t, l1, l2)?;
            let via_cm = gaussian_characteristic(&evolved, l1, l2);
            out.push(OracleReport::new(
                format!("characteristic[{k}]"),
                direct.re,
                via_cm.re,
                CHARACTERISTIC_TOL,
            ));
        }
    }
    Ok(out)
}

fn characteristic_probe_points() -> [(Complex64, Complex64); 3] {
    [
        (Complex64::new(0.1, 0.0), Complex64::new(0.0, 0.05)),
        (Complex64::new(0.03, -0.02), Complex64::new(-0.04, 0.01)),
        (Complex64::new(-0.2, 0.1), Complex64::new(0.15, 0.2)),
    ]
}

/// Random STS parameters: `n1, n2 ~ U[0, 20]`, `r ~ U[0, 3]`,
/// `phi ~ U(-pi, pi]`.
pub fn random_sts<R: Rng + ?Sized>(rng: &mut R) -> StsParams {
    StsParams {
        n1: rng.gen_range(0.0..=20.0),
        n2: rng.gen_range(0.0..=20.0),
        r: rng.gen_range(0.0..=3.0),
        phi: PI - rng.gen_range(0.0..2.0 * PI),
    }
}

/// Random bona fide standard form drawn directly in `(b1, b2, c)`, with
/// rejection on the uncertainty inequality. Covers states that are not
/// reachable from the thermal-occupancy parametrization with small `r`.
pub fn random_standard_form<R: Rng + ?Sized>(rng: &mut R) -> StandardForm {
    loop {
        let b1 = rng.gen_range(0.5..=30.0);
        let b2 = rng.gen_range(0.5..=30.0);
        let c = rng.gen_range(0.0..=f64::min(b1, b2) + 0.5);
        let phi = PI - rng.gen_range(0.0..2.0 * PI);
        if let Ok(sf) = StandardForm::new(b1, b2, c, phi) {
            return sf;
        }
    }
}
