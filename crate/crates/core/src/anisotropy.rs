//! The one-dimensional anisotropy `H` and the quantities derived from it.
//!
//! `H(s) = a·s` for `s ≥ 0` and `−b·s` for `s < 0`, with `a, b > 0`. It is
//! positively 1-homogeneous and nonnegative, vanishing only at `0`, but it is
//! even only when `a = b`. Everything here is exact arithmetic on the two
//! slopes; the solvers that need smoothing for `1 < p < 2` keep it on their
//! side.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A positively homogeneous norm on the line together with the exponent `p`
/// of the energy it induces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAnisotropy")]
pub struct AnisotropyH {
    a: f64,
    b: f64,
    p: f64,
}

#[derive(Deserialize)]
struct RawAnisotropy {
    a: f64,
    b: f64,
    p: f64,
}

impl TryFrom<RawAnisotropy> for AnisotropyH {
    type Error = Error;

    fn try_from(raw: RawAnisotropy) -> Result<Self> {
        AnisotropyH::new(raw.a, raw.b, raw.p)
    }
}

impl AnisotropyH {
    /// Requires `a > 0`, `b > 0` and `p > 1`.
    pub fn new(a: f64, b: f64, p: f64) -> Result<Self> {
        if a <= 0.0 || !a.is_finite() {
            return Err(Error::InvalidParameter(format!("right slope a = {a} must be positive")));
        }
        if b <= 0.0 || !b.is_finite() {
            return Err(Error::InvalidParameter(format!("left slope b = {b} must be positive")));
        }
        if p <= 1.0 || !p.is_finite() {
            return Err(Error::InvalidParameter(format!("exponent p = {p} must exceed 1")));
        }
        Ok(Self { a, b, p })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Lower growth constant `min(a, b)`, so `alpha_lower·|s| ≤ H(s)`.
    pub fn alpha_lower(&self) -> f64 {
        self.a.min(self.b)
    }

    /// Upper growth constant `max(a, b)`, so `H(s) ≤ alpha_upper·|s|`.
    pub fn alpha_upper(&self) -> f64 {
        self.a.max(self.b)
    }

    /// `H(s)`.
    pub fn eval(&self, s: f64) -> f64 {
        if s >= 0.0 {
            self.a * s
        } else {
            -self.b * s
        }
    }

    /// The polar norm `H₀(x) = sup_t t·x / H(t)`, which works out to `x/a`
    /// for `x ≥ 0` and `−x/b` for `x < 0`.
    pub fn polar_eval(&self, x: f64) -> f64 {
        if x >= 0.0 {
            x / self.a
        } else {
            -x / self.b
        }
    }

    /// The reflected anisotropy `H̃(s) = H(−s)`: the two slopes swap.
    pub fn reflect(&self) -> Self {
        Self { a: self.b, b: self.a, p: self.p }
    }

    /// The flux `H(s)^{p−1} H'(s)`, i.e. `(1/p)·d/ds H(s)^p` away from zero,
    /// extended by continuity with `flux(0) = 0` (valid because `p > 1`).
    pub fn flux(&self, s: f64) -> f64 {
        if s > 0.0 {
            self.a.powf(self.p) * s.powf(self.p - 1.0)
        } else if s < 0.0 {
            -self.b.powf(self.p) * (-s).powf(self.p - 1.0)
        } else {
            0.0
        }
    }

    /// The energy integrand `H(s)^p`.
    pub fn energy_density(&self, s: f64) -> f64 {
        self.eval(s).powf(self.p)
    }
}
