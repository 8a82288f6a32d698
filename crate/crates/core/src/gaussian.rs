//! Two-mode Gaussian states in standard form.
//!
//! A squeezed thermal state has the covariance matrix
//!
//! ```text
//!     | b1 I2   C   |          | cos(phi)   sin(phi) |
//! V = |             |,   C = c |                     |
//!     |  C    b2 I2 |          | sin(phi)  -cos(phi) |
//! ```
//!
//! in the quadrature ordering `(q1, p1, q2, p2)` with vacuum variance `1/2`.
//!
//! Besides the entries, a [`StandardForm`] tracks the invariant
//! `kappa_plus * kappa_minus = b1 b2 - c^2` (the square root of `det V`).
//! For strongly squeezed states `b1 b2` and `c^2` nearly cancel and the
//! rounded entries no longer resolve the symplectic spectrum, so the invariant
//! is taken from the most accurate source available: the thermal occupancies
//! when built from [`StsParams`], a closed-form update under damping, or a
//! compensated product when built from raw entries.

use std::f64::consts::PI;

use nalgebra::Matrix4;

use crate::error::{Error, Result};

/// Vacuum variance of a single quadrature.
pub const VACUUM: f64 = 0.5;

/// Absolute slack applied by physicality checks.
pub const ABSOLUTE_SLACK: f64 = 1e-12;

/// Slack relative to the magnitude of `b1 b2 + c^2`, the size of the terms
/// that cancel in the uncertainty and separability margins.
pub const RELATIVE_SLACK: f64 = 8.0 * f64::EPSILON;

/// How strictly physicality is enforced when building a [`StandardForm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Tolerance {
    /// Admit rounding-level violations and snap them onto the boundary.
    #[default]
    Slack,
    /// Reject any violation.
    Exact,
}

/// Physical parametrization of a squeezed thermal state: a thermal product
/// with occupancies `n1`, `n2` acted on by a two-mode squeezer `(r, phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StsParams {
    pub n1: f64,
    pub n2: f64,
    pub r: f64,
    pub phi: f64,
}

impl StsParams {
    pub fn new(n1: f64, n2: f64, r: f64, phi: f64) -> Result<Self> {
        let p = Self { n1, n2, r, phi: wrap_phase(finite("phi", phi)?) };
        p.validate()?;
        Ok(p)
    }

    /// Two-mode squeezed vacuum.
    pub fn squeezed_vacuum(r: f64) -> Result<Self> {
        Self::new(0.0, 0.0, r, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("n1", self.n1)?;
        non_negative("n2", self.n2)?;
        non_negative("r", self.r)?;
        finite("phi", self.phi)?;
        Ok(())
    }
}

/// Standard-form parameters `(b1, b2, c, phi)` of a two-mode Gaussian state.
///
/// Always bona fide: constructors reject states that violate the
/// uncertainty inequality. `c` is kept non-negative, with its sign absorbed
/// into `phi`, and `phi` lies in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardForm {
    b1: f64,
    b2: f64,
    c: f64,
    phi: f64,
    kappa_product: f64,
}

impl StandardForm {
    pub fn new(b1: f64, b2: f64, c: f64, phi: f64) -> Result<Self> {
        Self::with_tolerance(b1, b2, c, phi, Tolerance::Slack)
    }

    pub fn with_tolerance(b1: f64, b2: f64, c: f64, phi: f64, tol: Tolerance) -> Result<Self> {
        let b1 = finite("b1", b1)?;
        let b2 = finite("b2", b2)?;
        let c = finite("c", c)?;
        let phi = finite("phi", phi)?;
        let (c, phi) = if c < 0.0 { (-c, wrap_phase(phi + PI)) } else { (c, wrap_phase(phi)) };

        let slack = match tol {
            Tolerance::Slack => physicality_slack(b1, b2, c),
            Tolerance::Exact => 0.0,
        };
        let b1 = at_least_vacuum("b1", b1, slack)?;
        let b2 = at_least_vacuum("b2", b2, slack)?;

        let kappa_product = diff_of_products(b1, b2, c, c);
        Self::assemble(b1, b2, c, phi, kappa_product, slack)
    }

    /// Pure two-mode squeezed vacuum with local variance `b`.
    pub fn pure(b: f64, phi: f64) -> Result<Self> {
        let b = at_least_vacuum("b", finite("b", b)?, 0.0)?;
        let c = ((b - VACUUM) * (b + VACUUM)).sqrt();
        Ok(Self { b1: b, b2: b, c, phi: wrap_phase(finite("phi", phi)?), kappa_product: 0.25 })
    }

    /// Reads the standard-form entries of a covariance matrix laid out as
    /// [`full_cm`] produces it. Off-block-diagonal structure is not checked.
    pub fn from_cm(v: &Matrix4<f64>) -> Result<Self> {
        let (cx, cy) = (v[(0, 2)], v[(0, 3)]);
        Self::new(v[(0, 0)], v[(2, 2)], cx.hypot(cy), cy.atan2(cx))
    }

    /// Final physicality check shared by every constructor. Rounding-level
    /// violations of the uncertainty inequality are moved onto the boundary.
    pub(crate) fn assemble(
        b1: f64,
        b2: f64,
        c: f64,
        phi: f64,
        kappa_product: f64,
        slack: f64,
    ) -> Result<Self> {
        let floor = 0.25 + 0.5 * (b1 - b2).abs();
        let margin = kappa_product - floor;
        if margin < -slack {
            return Err(Error::Uncertainty { margin });
        }
        Ok(Self { b1, b2, c, phi, kappa_product: kappa_product.max(floor) })
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn b2(&self) -> f64 {
        self.b2
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `b1 b2 - c^2`, equal to `kappa_plus * kappa_minus` and to `sqrt(det V)`.
    pub fn kappa_product(&self) -> f64 {
        self.kappa_product
    }

    /// Same state with the two modes exchanged.
    pub fn swapped(&self) -> Self {
        Self { b1: self.b2, b2: self.b1, ..*self }
    }

    /// `(b_max + 1/2)(b_min - 1/2) - c^2`; non-negative for every bona fide state.
    pub fn uncertainty_margin(&self) -> f64 {
        self.kappa_product - 0.25 - 0.5 * (self.b1 - self.b2).abs()
    }

    /// `(b1 - 1/2)(b2 - 1/2) - c^2`; non-negative iff the state is separable.
    pub fn separability_margin(&self) -> f64 {
        self.kappa_product - 0.5 * (self.b1 + self.b2) + 0.25
    }

    pub fn is_symmetric(&self) -> bool {
        self.b1 == self.b2
    }

    /// Slack used when this state's invariants were checked.
    pub fn slack(&self) -> f64 {
        physicality_slack(self.b1, self.b2, self.c)
    }
}

/// Symplectic eigenvalues of a state and of its partial transpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticSpectrum {
    pub kappa_plus: f64,
    pub kappa_minus: f64,
    pub kappa_tilde_plus: f64,
    pub kappa_tilde_minus: f64,
}

pub fn standard_form_from_sts(p: &StsParams) -> Result<StandardForm> {
    p.validate()?;
    let (sh, ch) = (p.r.sinh(), p.r.cosh());
    let (m1, m2) = (p.n1 + VACUUM, p.n2 + VACUUM);
    let b1 = m1 * ch * ch + m2 * sh * sh;
    let b2 = m1 * sh * sh + m2 * ch * ch;
    let c = (p.n1 + p.n2 + 1.0) * sh * ch;
    StandardForm::assemble(b1, b2, c, wrap_phase(p.phi), m1 * m2, physicality_slack(b1, b2, c))
}

pub fn symplectic_spectrum(sf: &StandardForm) -> Result<SymplecticSpectrum> {
    let (b1, b2, c) = (sf.b1, sf.b2, sf.c);
    let delta = (b1 - b2).abs();
    let p = sf.kappa_product;

    // (b1 + b2)^2 - 4 c^2 rewritten without cancellation
    let disc = 4.0 * p + delta * delta;
    if !(disc > 0.0) {
        return Err(Error::NonPhysicalSpectrum { value: disc });
    }
    let kappa_plus = 0.5 * (disc.sqrt() + delta);
    let kappa_minus = (p / kappa_plus).max(VACUUM);

    let kappa_tilde_plus = 0.5 * (b1 + b2 + (delta * delta + 4.0 * c * c).sqrt());
    let kappa_tilde_minus = p / kappa_tilde_plus;

    Ok(SymplecticSpectrum { kappa_plus, kappa_minus, kappa_tilde_plus, kappa_tilde_minus })
}

/// Simon's criterion in the reduced form `(b1 - 1/2)(b2 - 1/2) - c^2 >= 0`.
pub fn is_separable(sf: &StandardForm) -> bool {
    sf.separability_margin() >= 0.0
}

pub fn full_cm(sf: &StandardForm) -> Matrix4<f64> {
    let (s, co) = sf.phi.sin_cos();
    let (b1, b2, c) = (sf.b1, sf.b2, sf.c);
    #[rustfmt::skip]
    let v = Matrix4::new(
        b1,      0.0,     c * co,  c * s,
        0.0,     b1,      c * s,  -c * co,
        c * co,  c * s,   b2,      0.0,
        c * s,  -c * co,  0.0,     b2,
    );
    v
}

/// Block-diagonal symplectic form with blocks `[[0, 1], [-1, 0]]`.
pub fn symplectic_form() -> Matrix4<f64> {
    #[rustfmt::skip]
    let omega = Matrix4::new(
        0.0,  1.0, 0.0, 0.0,
       -1.0,  0.0, 0.0, 0.0,
        0.0,  0.0, 0.0, 1.0,
        0.0,  0.0, -1.0, 0.0,
    );
    omega
}

/// Maps an angle into `(-pi, pi]`.
pub fn wrap_phase(phi: f64) -> f64 {
    let p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p - 2.0 * PI
    } else {
        p
    }
}

pub(crate) fn physicality_slack(b1: f64, b2: f64, c: f64) -> f64 {
    ABSOLUTE_SLACK.max(RELATIVE_SLACK * (b1 * b2 + c * c))
}

/// `a b - c d` with a single rounding error (Kahan's fma algorithm).
pub(crate) fn diff_of_products(a: f64, b: f64, c: f64, d: f64) -> f64 {
    let w = d * c;
    let err = (-d).mul_add(c, w);
    a.mul_add(b, -w) + err
}

fn finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { name, value })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    let value = finite(name, value)?;
    if value < 0.0 {
        Err(Error::Negative { name, value })
    } else {
        Ok(value)
    }
}

fn at_least_vacuum(name: &'static str, value: f64, slack: f64) -> Result<f64> {
    if value < VACUUM - slack {
        Err(Error::BelowVacuum { name, value })
    } else {
        Ok(value.max(VACUUM))
    }
}
