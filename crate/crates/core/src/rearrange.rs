//! Monotone and anisotropic rearrangements of nonnegative piecewise-affine
//! functions, with the energy inequalities they satisfy.
//!
//! All rearrangements here are *exact*: the distribution function of a
//! piecewise-affine interpolant is piecewise affine in the level, so the
//! rearranged function is again piecewise affine with breakpoints at the
//! distinct nodal values. Computing it that way (instead of resampling on the
//! original grid) makes the energy comparisons exact up to rounding, which is
//! what the rigidity/equality tests require.
//!
//! The level-band picture: between two consecutive distinct nodal values
//! `(t_i, t_{i+1})`, every cell of `u` that spans the band contributes
//! `h·(t_{i+1}−t_i)/|Δu|` of horizontal width. The decreasing rearrangement
//! descends through the bands at the aggregate width; the anisotropic
//! rearrangement splits each band's width left/right of the peak in the ratio
//! `a : b`.

use serde::Serialize;

use crate::anisotropy::AnisotropyH;
use crate::mesh::{cell_p_integral, GridFunction};
use crate::{Error, Result};

/// Direction of a monotone rearrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A rearranged function: piecewise affine on its own (possibly shifted)
/// domain, stored as breakpoints with values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RearrangedFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl RearrangedFunction {
    fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Self {
        debug_assert_eq!(breakpoints.len(), values.len());
        debug_assert!(breakpoints.windows(2).all(|w| w[1] >= w[0]));
        Self { breakpoints, values }
    }

    pub fn domain_left(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn domain_right(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Values at the breakpoints. For a decreasing rearrangement of a
    /// function with distinct nodal values this is exactly those values
    /// sorted in descending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v))
    }

    /// Piecewise-affine evaluation, clamped to the domain.
    pub fn eval(&self, x: f64) -> f64 {
        let xs = &self.breakpoints;
        if x <= xs[0] {
            return self.values[0];
        }
        if x >= *xs.last().unwrap() {
            return *self.values.last().unwrap();
        }
        let i = match xs.binary_search_by(|probe| probe.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.values[i],
            Err(i) => i - 1,
        };
        let w = xs[i + 1] - xs[i];
        if w == 0.0 {
            return self.values[i + 1];
        }
        let t = (x - xs[i]) / w;
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    /// Exact `∫ H(u')^p` over the domain.
    pub fn energy(&self, h: &AnisotropyH) -> f64 {
        let p = h.p();
        let mut total = 0.0;
        for i in 0..self.breakpoints.len() - 1 {
            let w = self.breakpoints[i + 1] - self.breakpoints[i];
            if w > 0.0 {
                let slope = (self.values[i + 1] - self.values[i]) / w;
                total += w * h.eval(slope).powf(p);
            }
        }
        total
    }

    /// Exact `∫ |u|^p` over the domain.
    pub fn p_integral(&self, p: f64) -> f64 {
        let mut total = 0.0;
        for i in 0..self.breakpoints.len() - 1 {
            let w = self.breakpoints[i + 1] - self.breakpoints[i];
            if w > 0.0 {
                total += cell_p_integral(self.values[i], self.values[i + 1], w, p);
            }
        }
        total
    }

    /// Measure of the super-level set `{u > t}`.
    pub fn distribution(&self, t: f64) -> f64 {
        let mut total = 0.0;
        for i in 0..self.breakpoints.len() - 1 {
            let w = self.breakpoints[i + 1] - self.breakpoints[i];
            total += segment_superlevel(self.values[i], self.values[i + 1], w, t);
        }
        total
    }

    /// Nodal sample on `n+1` uniform points across the domain.
    pub fn sample(&self, n: usize) -> Vec<(f64, f64)> {
        let (l, r) = (self.domain_left(), self.domain_right());
        (0..=n)
            .map(|i| {
                let x = l + (r - l) * i as f64 / n as f64;
                (x, self.eval(x))
            })
            .collect()
    }
}

/// Measure of `{affine > t}` within one segment.
fn segment_superlevel(v1: f64, v2: f64, width: f64, t: f64) -> f64 {
    let (lo, hi) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
    if lo == hi {
        return if lo > t { width } else { 0.0 };
    }
    width * ((hi - t) / (hi - lo)).clamp(0.0, 1.0)
}

/// Measure of the super-level set `{u > t}` of the piecewise-affine
/// interpolant, exact per cell.
pub fn distribution_function(u: &GridFunction, t: f64) -> f64 {
    let h = u.mesh().h();
    u.values()
        .windows(2)
        .map(|w| segment_superlevel(w[0], w[1], h, t))
        .sum()
}

// ---------------------------------------------------------------------------
// Level bands
// ---------------------------------------------------------------------------

/// The exact level decomposition of a piecewise-affine function: distinct
/// nodal values in ascending order, the horizontal width each band
/// `(levels[i], levels[i+1])` occupies, and the measure of each flat level.
struct LevelBands {
    levels: Vec<f64>,
    widths: Vec<f64>,
    plateaus: Vec<f64>,
}

fn level_bands(u: &GridFunction) -> LevelBands {
    let h = u.mesh().h();
    let mut levels = u.values().to_vec();
    levels.sort_by(|x, y| x.partial_cmp(y).unwrap());
    levels.dedup();
    let k = levels.len();
    let mut widths = vec![0.0; k.saturating_sub(1)];
    let mut plateaus = vec![0.0; k];

    let index_of = |v: f64| -> usize {
        levels
            .binary_search_by(|probe| probe.partial_cmp(&v).unwrap())
            .expect("every nodal value is a level")
    };

    for w in u.values().windows(2) {
        let (lo, hi) = if w[0] <= w[1] { (w[0], w[1]) } else { (w[1], w[0]) };
        if lo == hi {
            plateaus[index_of(lo)] += h;
        } else {
            let span = hi - lo;
            for i in index_of(lo)..index_of(hi) {
                widths[i] += h * (levels[i + 1] - levels[i]) / span;
            }
        }
    }
    LevelBands { levels, widths, plateaus }
}

// ---------------------------------------------------------------------------
// Monotone rearrangement
// ---------------------------------------------------------------------------

/// Exact monotone rearrangement of `u ≥ 0` onto the interval `(l, r)`, which
/// must have the same length as the source domain.
///
/// The result is equimeasurable with `u` at every level; the decreasing
/// direction descends from `max u` at the left endpoint.
pub fn monotone_rearrangement(
    u: &GridFunction,
    direction: Direction,
    interval: (f64, f64),
) -> Result<RearrangedFunction> {
    require_nonnegative(u)?;
    let (l, r) = interval;
    if (r - l - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "target interval ({l}, {r}) must have the source length 1"
        )));
    }
    let bands = level_bands(u);
    Ok(monotone_from_bands(&bands, direction, l, r))
}

fn monotone_from_bands(
    bands: &LevelBands,
    direction: Direction,
    l: f64,
    r: f64,
) -> RearrangedFunction {
    let k = bands.levels.len() - 1;
    let mut xs = Vec::with_capacity(2 * (k + 1));
    let mut vs = Vec::with_capacity(2 * (k + 1));
    let mut x = l;

    // Descend from the top level; the increasing direction is the mirror.
    xs.push(x);
    vs.push(bands.levels[k]);
    if bands.plateaus[k] > 0.0 {
        x += bands.plateaus[k];
        xs.push(x);
        vs.push(bands.levels[k]);
    }
    for i in (0..k).rev() {
        x += bands.widths[i];
        xs.push(x);
        vs.push(bands.levels[i]);
        if bands.plateaus[i] > 0.0 {
            x += bands.plateaus[i];
            xs.push(x);
            vs.push(bands.levels[i]);
        }
    }
    *xs.last_mut().unwrap() = r; // total width is the domain length up to rounding

    if matches!(direction, Direction::Increasing) {
        // Mirror across the interval midpoint.
        let mut mirrored_x: Vec<f64> = xs.iter().rev().map(|&xx| l + r - xx).collect();
        mirrored_x[0] = l;
        *mirrored_x.last_mut().unwrap() = r;
        let mirrored_v: Vec<f64> = vs.iter().rev().copied().collect();
        return RearrangedFunction::new(mirrored_x, mirrored_v);
    }
    RearrangedFunction::new(xs, vs)
}

/// Energies `(∫H(u')^p, ∫H((u_*)')^p)` of `u` and of its exact decreasing
/// rearrangement on the same interval; both sides are exact for
/// piecewise-affine input.
pub fn polya_monotone_check(u: &GridFunction, h: &AnisotropyH) -> Result<(f64, f64)> {
    require_nonnegative(u)?;
    let lhs = interpolant_energy(u, h);
    let rearranged = monotone_rearrangement(u, Direction::Decreasing, (0.0, 1.0))?;
    Ok((lhs, rearranged.energy(h)))
}

// ---------------------------------------------------------------------------
// Anisotropic rearrangement
// ---------------------------------------------------------------------------

/// Exact anisotropic rearrangement of `u ≥ 0` with `u(0) = u(1) = 0`.
///
/// Lives on `I★ = (−a/(a+b), b/(a+b))` with its peak at `0`; every
/// super-level set is the interval of the same measure split left/right of
/// the origin in the ratio `a : b`.
pub fn anisotropic_rearrangement(u: &GridFunction, h: &AnisotropyH) -> Result<RearrangedFunction> {
    require_nonnegative(u)?;
    require_vanishing_endpoints(u)?;
    let bands = level_bands(u);
    Ok(star_from_bands(&bands, h.a(), h.b()))
}

fn star_from_bands(bands: &LevelBands, a: f64, b: f64) -> RearrangedFunction {
    let k = bands.levels.len() - 1;
    let left_frac = a / (a + b);
    let right_frac = b / (a + b);

    // Walk down from the peak on both sides at once; the left side is built
    // outward (descending x) and reversed at the end.
    let mut right_x = vec![0.0];
    let mut right_v = vec![bands.levels[k]];
    let mut left_x = vec![0.0];
    let mut left_v = vec![bands.levels[k]];
    let (mut xr, mut xl) = (0.0, 0.0);

    let mut segments = Vec::with_capacity(2 * k + 1);
    if bands.plateaus[k] > 0.0 {
        segments.push((bands.plateaus[k], bands.levels[k]));
    }
    for i in (0..k).rev() {
        segments.push((bands.widths[i], bands.levels[i]));
        if bands.plateaus[i] > 0.0 {
            segments.push((bands.plateaus[i], bands.levels[i]));
        }
    }
    for (w, level) in segments {
        if w <= 0.0 {
            continue;
        }
        xr += w * right_frac;
        right_x.push(xr);
        right_v.push(level);
        xl -= w * left_frac;
        left_x.push(xl);
        left_v.push(level);
    }
    // Total measure is the full domain, so the ends are the exact fractions
    // up to rounding.
    *right_x.last_mut().unwrap() = right_frac;
    *left_x.last_mut().unwrap() = -left_frac;

    let mut xs: Vec<f64> = left_x.into_iter().rev().collect();
    let mut vs: Vec<f64> = left_v.into_iter().rev().collect();
    xs.pop(); // origin is shared by both halves
    vs.pop();
    xs.extend(right_x);
    vs.extend(right_v);
    RearrangedFunction::new(xs, vs)
}

/// Energies `(∫H(u')^p, ∫H((u★)')^p)` and whether they agree to `1e−10`
/// relative, in which case the input is (up to that tolerance) the shifted
/// anisotropic profile itself.
pub fn polya_anisotropic_check(u: &GridFunction, h: &AnisotropyH) -> Result<(f64, f64, bool)> {
    require_nonnegative(u)?;
    require_vanishing_endpoints(u)?;
    let lhs = interpolant_energy(u, h);
    let star = anisotropic_rearrangement(u, h)?;
    let rhs = star.energy(h);
    let equal = (lhs - rhs).abs() <= 1e-10 * lhs.max(f64::MIN_POSITIVE);
    Ok((lhs, rhs, equal))
}

/// Rearrangement of a nonpositive function `v` with `v(0) = v(1) = 0`:
/// `v# = −(−v)★` computed for the reflected anisotropy, living on
/// `Ĩ★ = (−b/(a+b), a/(a+b))`.
pub fn negative_rearrangement(v: &GridFunction, h: &AnisotropyH) -> Result<RearrangedFunction> {
    if v.max_value() > 0.0 {
        return Err(Error::InvalidParameter("negative rearrangement expects v ≤ 0".into()));
    }
    require_vanishing_endpoints(v)?;
    let neg = GridFunction::new(v.mesh(), v.values().iter().map(|x| -x).collect())?;
    let star = anisotropic_rearrangement(&neg, &h.reflect())?;
    let values = star.values().iter().map(|x| -x).collect();
    Ok(RearrangedFunction::new(star.breakpoints().to_vec(), values))
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

/// Exact `∫ H(u')^p` of the piecewise-affine interpolant.
pub fn interpolant_energy(u: &GridFunction, h: &AnisotropyH) -> f64 {
    let hh = u.mesh().h();
    let p = h.p();
    u.values()
        .windows(2)
        .map(|w| hh * h.eval((w[1] - w[0]) / hh).powf(p))
        .sum()
}

fn require_nonnegative(u: &GridFunction) -> Result<()> {
    if u.min_value() < 0.0 {
        return Err(Error::InvalidParameter("rearrangement expects u ≥ 0".into()));
    }
    Ok(())
}

fn require_vanishing_endpoints(u: &GridFunction) -> Result<()> {
    let v = u.values();
    let (first, last) = (v[0], v[v.len() - 1]);
    if first != 0.0 || last != 0.0 {
        return Err(Error::NonVanishingEndpoints(first, last));
    }
    Ok(())
}
