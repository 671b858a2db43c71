//! Complex root location for scalar dispersion functions.
//!
//! Functions are passed as `Fn(Complex64) -> Result<Complex64>` so that
//! provider errors surface unchanged. Derivatives are always numerical:
//! dispersion functions built on tabulated kernels have no analytic form.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootMethod {
    Newton,
    GridRefine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    pub location: Complex64,
    pub residual_modulus: f64,
    pub iterations: usize,
    pub method: RootMethod,
    /// Winding number of a small rectangle around the root, when it could
    /// be computed.
    pub certified_count: Option<i64>,
    /// Starting point of the iteration.
    pub seed: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchRegion {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl SearchRegion {
    pub fn new(re: (f64, f64), im: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        let region = Self {
            re_min: re.0,
            re_max: re.1,
            im_min: im.0,
            im_max: im.1,
            nx,
            ny,
        };
        region.validate()?;
        Ok(region)
    }

    pub fn validate(&self) -> Result<()> {
        let bounds = [self.re_min, self.re_max, self.im_min, self.im_max];
        if bounds.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("region", "bounds must be finite"));
        }
        if !(self.re_min < self.re_max) {
            return Err(Error::invalid("region", "re_min must be below re_max"));
        }
        if !(self.im_min < self.im_max) {
            return Err(Error::invalid("region", "im_min must be below im_max"));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::invalid("region", "nx and ny must be at least 2"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        (self.re_max - self.re_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.im_max - self.im_min) / (self.ny - 1) as f64
    }

    /// Grid node `(ix, iy)`; the last node sits exactly on the upper bound.
    pub fn node(&self, ix: usize, iy: usize) -> Complex64 {
        let re = if ix + 1 == self.nx {
            self.re_max
        } else {
            self.re_min + ix as f64 * self.dx()
        };
        let im = if iy + 1 == self.ny {
            self.im_max
        } else {
            self.im_min + iy as f64 * self.dy()
        };
        Complex64::new(re, im)
    }

    /// Node at row-major index `iy·nx + ix`.
    pub fn point(&self, index: usize) -> Complex64 {
        self.node(index % self.nx, index / self.nx)
    }

    fn contains_with_margin(&self, z: Complex64, margin_x: f64, margin_y: f64) -> bool {
        z.re >= self.re_min - margin_x
            && z.re <= self.re_max + margin_x
            && z.im >= self.im_min - margin_y
            && z.im <= self.im_max + margin_y
    }
}

/// Central-difference derivative with step `max(1e−7, 1e−7|z|)`.
pub fn derivative<F>(f: &F, z: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let h = 1e-7_f64.max(1e-7 * z.norm());
    Ok((f(z + h)? - f(z - h)?) / (2.0 * h))
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Damped Newton iteration from `z0` until `|f(z)| < tol`.
///
/// After the tolerance is met a few further steps are taken while they keep
/// reducing `|f|`, so the location is accurate to roughly machine precision
/// for simple roots.
pub fn newton<F>(f: F, z0: Complex64, tol: f64, max_iter: usize) -> Result<RootRecord>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(tol > 0.0) {
        return Err(Error::invalid("tol", "tolerance must be positive"));
    }
    let mut z = z0;
    let mut fz = f(z)?;
    let mut iterations = 0;
    let fail = |z: Complex64, fz: Complex64, iterations: usize| Error::NonConvergence {
        last: z,
        iterations,
        residual: fz.norm(),
    };

    while fz.norm() >= tol {
        if iterations == max_iter || !finite(fz) {
            return Err(fail(z, fz, iterations));
        }
        let df = derivative(&f, z)?;
        if df.norm() == 0.0 || !finite(df) {
            return Err(fail(z, fz, iterations));
        }
        let step = fz / df;
        let mut lambda = 1.0;
        let (mut cand, mut fc);
        loop {
            cand = z - step * lambda;
            fc = f(cand)?;
            if (finite(fc) && fc.norm() < fz.norm()) || lambda < 1e-3 {
                break;
            }
            lambda *= 0.5;
        }
        iterations += 1;
        z = cand;
        fz = fc;
    }

    for _ in 0..3 {
        let Ok(df) = derivative(&f, z) else { break };
        if df.norm() == 0.0 || !finite(df) {
            break;
        }
        let cand = z - fz / df;
        let fc = f(cand)?;
        if !(finite(fc) && fc.norm() < fz.norm()) {
            break;
        }
        z = cand;
        fz = fc;
    }

    Ok(RootRecord {
        location: z,
        residual_modulus: fz.norm(),
        iterations,
        method: RootMethod::Newton,
        certified_count: None,
        seed: z0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanOptions {
    /// Residual tolerance for accepting a refined root.
    pub tol: f64,
    pub max_iter: usize,
    /// Candidate minima must not exceed this quantile of the grid values.
    pub quantile: f64,
    /// Refined roots closer than `merge_factor · tol` are merged.
    pub merge_factor: f64,
    /// Compute a winding number around each accepted root.
    pub certify: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 60,
            quantile: 0.05,
            merge_factor: 10.0,
            certify: true,
        }
    }
}

/// `f` at every node of the region, row-major. Evaluation is parallel;
/// the first failing node in index order determines the error.
pub fn evaluate_grid<F, T>(f: &F, region: &SearchRegion) -> Result<Vec<T>>
where
    F: Fn(Complex64) -> Result<T> + Sync,
    T: Send,
{
    region.validate()?;
    let values: Vec<Result<T>> = (0..region.len())
        .into_par_iter()
        .map(|idx| f(region.point(idx)))
        .collect();
    values.into_iter().collect()
}

/// Indices of strict local minima of a row-major grid (8-neighbourhood,
/// boundary nodes compared with the neighbours they have).
pub fn local_minima(values: &[f64], nx: usize, ny: usize) -> Vec<usize> {
    let mut minima = Vec::new();
    for iy in 0..ny {
        for ix in 0..nx {
            let v = values[iy * nx + ix];
            let mut is_min = v.is_finite();
            'nbr: for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (jx, jy) = (ix as i64 + dx, iy as i64 + dy);
                    if jx < 0 || jy < 0 || jx >= nx as i64 || jy >= ny as i64 {
                        continue;
                    }
                    let w = values[jy as usize * nx + jx as usize];
                    if !(w > v) {
                        is_min = false;
                        break 'nbr;
                    }
                }
            }
            if is_min {
                minima.push(iy * nx + ix);
            }
        }
    }
    minima
}

fn quantile(values: &[f64], q: f64) -> f64 {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if sorted.is_empty() {
        return f64::NAN;
    }
    sorted.sort_by(f64::total_cmp);
    let idx = ((sorted.len() - 1) as f64 * q).floor() as usize;
    sorted[idx]
}

pub fn grid_scan<F>(f: F, region: &SearchRegion) -> Result<Vec<RootRecord>>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    grid_scan_with(f, region, &ScanOptions::default())
}

/// Local minima of `|f|` on the grid, each refined by [`newton`].
///
/// Roots are kept when the refinement converges inside the region grown by
/// one cell; near-coincident roots are merged. The result is ordered by
/// real part, then imaginary part.
pub fn grid_scan_with<F>(f: F, region: &SearchRegion, opts: &ScanOptions) -> Result<Vec<RootRecord>>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let moduli: Vec<f64> = evaluate_grid(&f, region)?
        .into_iter()
        .map(|z| z.norm())
        .collect();
    let threshold = quantile(&moduli, opts.quantile);
    let seeds: Vec<usize> = local_minima(&moduli, region.nx, region.ny)
        .into_iter()
        .filter(|&idx| moduli[idx] <= threshold)
        .collect();

    let refined: Vec<Option<RootRecord>> = seeds
        .par_iter()
        .map(|&idx| {
            let seed = region.point(idx);
            match newton(&f, seed, opts.tol, opts.max_iter) {
                Ok(rec) if region.contains_with_margin(rec.location, region.dx(), region.dy()) => {
                    Ok(Some(RootRecord {
                        method: RootMethod::GridRefine,
                        ..rec
                    }))
                }
                Ok(_) | Err(Error::NonConvergence { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut roots: Vec<RootRecord> = Vec::new();
    for rec in refined.into_iter().flatten() {
        let merge_radius = opts.merge_factor * opts.tol;
        match roots
            .iter_mut()
            .find(|r| (r.location - rec.location).norm() < merge_radius)
        {
            Some(existing) => {
                if rec.residual_modulus < existing.residual_modulus {
                    *existing = rec;
                }
            }
            None => roots.push(rec),
        }
    }
    roots.sort_by(|a, b| {
        a.location
            .re
            .total_cmp(&b.location.re)
            .then(a.location.im.total_cmp(&b.location.im))
    });

    if opts.certify {
        let (hx, hy) = (region.dx(), region.dy());
        for rec in &mut roots {
            let z = rec.location;
            let cell = SearchRegion {
                re_min: z.re - hx,
                re_max: z.re + hx,
                im_min: z.im - hy,
                im_max: z.im + hy,
                nx: 2,
                ny: 2,
            };
            rec.certified_count = winding_count(&f, &cell, 32).ok();
        }
    }
    Ok(roots)
}

/// Number of zeros enclosed by the region boundary, from the total change
/// of `arg f` along it (counter-clockwise).
///
/// Segments on which the argument turns by more than `π/4` are bisected
/// adaptively. Fails if `|f|` nearly vanishes at a boundary sample.
pub fn winding_count<F>(f: F, region: &SearchRegion, samples_per_edge: usize) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    region.validate()?;
    let n = samples_per_edge.max(2);
    let corners = [
        Complex64::new(region.re_min, region.im_min),
        Complex64::new(region.re_max, region.im_min),
        Complex64::new(region.re_max, region.im_max),
        Complex64::new(region.re_min, region.im_max),
    ];
    let mut path = Vec::with_capacity(4 * n + 1);
    for edge in 0..4 {
        let (a, b) = (corners[edge], corners[(edge + 1) % 4]);
        for k in 0..n {
            path.push(a + (b - a) * (k as f64 / n as f64));
        }
    }
    path.push(corners[0]);

    let values: Vec<Complex64> = path.iter().map(|&z| f(z)).collect::<Result<_>>()?;
    let scale = {
        let mut m: Vec<f64> = values.iter().map(|z| z.norm()).collect();
        m.sort_by(f64::total_cmp);
        m[m.len() / 2]
    };
    let contact = 1e-10 * scale.max(f64::MIN_POSITIVE);
    let check = |z: Complex64, fz: Complex64| -> Result<()> {
        if !finite(fz) || fz.norm() <= contact {
            Err(Error::BoundaryContact {
                at: z,
                modulus: fz.norm(),
            })
        } else {
            Ok(())
        }
    };
    for (z, fz) in path.iter().zip(&values) {
        check(*z, *fz)?;
    }

    fn turn(a: Complex64, b: Complex64) -> f64 {
        (b / a).arg()
    }

    fn segment<F>(
        f: &F,
        za: Complex64,
        fa: Complex64,
        zb: Complex64,
        fb: Complex64,
        depth: u32,
        check: &dyn Fn(Complex64, Complex64) -> Result<()>,
    ) -> Result<f64>
    where
        F: Fn(Complex64) -> Result<Complex64>,
    {
        let d = turn(fa, fb);
        if d.abs() <= PI / 4.0 || depth == 0 {
            return Ok(d);
        }
        let zm = 0.5 * (za + zb);
        let fm = f(zm)?;
        check(zm, fm)?;
        Ok(segment(f, za, fa, zm, fm, depth - 1, check)?
            + segment(f, zm, fm, zb, fb, depth - 1, check)?)
    }

    let mut total = 0.0;
    for k in 0..path.len() - 1 {
        total += segment(
            &f,
            path[k],
            values[k],
            path[k + 1],
            values[k + 1],
            24,
            &check,
        )?;
    }
    Ok((total / (2.0 * PI)).round() as i64)
}
