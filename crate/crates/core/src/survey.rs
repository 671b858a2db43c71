//! Drivers for the numerical studies: level-curve grids of `𝒲` or `|D|`
//! over the `η` plane, attenuation sweeps over crack speed, and the search
//! for the critical speed above which a slowly attenuated corrugation wave
//! exists.
//!
//! Speeds are passed as `V/b` throughout. A sweep needs a fresh kernel per
//! speed, so the drivers take a [`ProblemFamily`]: any `Fn(V/b) -> problem`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{DispersionProblem, Relation};
use crate::elastodyn::{rayleigh_speed, LoadState};
use crate::error::{Error, Result};
use crate::kernels::{Capability, ProviderKind};
use crate::rootfind::{evaluate_grid, grid_scan_with, RootRecord, ScanOptions, SearchRegion};

/// Region used when none is configured: `Re η ∈ [0, 2]`, `Im η ∈ [−1, 0.25]`
/// in units of `b`.
pub fn default_region(b: f64) -> SearchRegion {
    SearchRegion {
        re_min: 0.0,
        re_max: 2.0 * b,
        im_min: -b,
        im_max: 0.25 * b,
        nx: 201,
        ny: 126,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMetadata {
    pub relation: Relation,
    pub v_over_b: f64,
    pub nu: f64,
    pub provider: ProviderKind,
    /// Left empty unless the caller stamps the run; grids are otherwise
    /// reproducible byte for byte.
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSurvey {
    pub region: SearchRegion,
    /// Row-major, `values[iy·nx + ix]`.
    pub values: Vec<f64>,
    pub metadata: GridMetadata,
}

impl GridSurvey {
    /// Grid node with the smallest value.
    pub fn argmin(&self) -> Option<(usize, Complex64, f64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(idx, &v)| (idx, self.region.point(idx), v))
    }
}

/// `𝒲` (corrugation) or `|D|` (other relations) at every node of `region`.
pub fn level_curve_grid(problem: &DispersionProblem, region: &SearchRegion) -> Result<GridSurvey> {
    let values = evaluate_grid(&|z| problem.eval(z).map(|d| d.norm()), region)?;
    Ok(GridSurvey {
        region: *region,
        values,
        metadata: GridMetadata {
            relation: problem.relation,
            v_over_b: problem.load.v / problem.material.b(),
            nu: problem.material.nu(),
            provider: problem.provider.kind(),
            timestamp: None,
        },
    })
}

/// Builds the dispersion problem at a given `V/b`.
pub trait ProblemFamily: Sync {
    fn at(&self, v_over_b: f64) -> Result<DispersionProblem>;
}

impl<F> ProblemFamily for F
where
    F: Fn(f64) -> Result<DispersionProblem> + Sync,
{
    fn at(&self, v_over_b: f64) -> Result<DispersionProblem> {
        self(v_over_b)
    }
}

/// Rebuilds `base` at other speeds with the same kernel provider, scaling
/// the loading unchanged. Only meaningful for providers not tied to a speed.
pub fn fixed_kernel_family(base: &DispersionProblem) -> impl ProblemFamily + '_ {
    move |v_over_b: f64| {
        let mut load = base.load;
        load.v = v_over_b * base.material.b();
        let load = LoadState::new(
            &base.material,
            load.v,
            load.ki0,
            load.kiii0,
            load.a10,
            load.a20,
            load.a30,
        )?;
        DispersionProblem::with_options(
            base.relation,
            base.material,
            load,
            base.provider.clone(),
            base.options,
        )
        .map(|p| p.with_normalization(base.normalization))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub speeds: Vec<f64>,
    pub roots: Vec<Option<Complex64>>,
    pub attenuation: Vec<Option<f64>>,
    pub residuals: Vec<Option<f64>>,
    /// Per-speed failure messages; the sweep continues past them.
    pub errors: Vec<Option<String>>,
}

impl SweepResult {
    pub fn len(&self) -> usize {
        self.speeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.speeds.is_empty()
    }

    fn push(&mut self, v_over_b: f64, root: Option<&RootRecord>, error: Option<String>) {
        self.speeds.push(v_over_b);
        self.roots.push(root.map(|r| r.location));
        self.attenuation.push(root.map(|r| r.location.im));
        self.residuals.push(root.map(|r| r.residual_modulus));
        self.errors.push(error);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepOptions {
    pub scan: ScanOptions,
    /// Root to track from at the first speed; without it the root with the
    /// smallest `|Im η|` is taken.
    pub initial_guess: Option<Complex64>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            scan: ScanOptions {
                certify: false,
                ..ScanOptions::default()
            },
            initial_guess: None,
        }
    }
}

fn corrugation_roots(
    problem: &DispersionProblem,
    region: &SearchRegion,
    scan: &ScanOptions,
) -> Result<Vec<RootRecord>> {
    if problem.provider.capability() != Capability::ComplexPlane {
        return Err(Error::Capability(format!(
            "{} provider cannot be evaluated off the real η axis",
            problem.provider.kind()
        )));
    }
    grid_scan_with(|eta| problem.d_corrugation(eta), region, scan)
}

/// Tracks one corrugation root across `speeds` (V/b, increasing).
///
/// At every speed the region is scanned; the root nearest to the previous
/// speed's root is kept. Speeds without a root, or whose evaluation fails,
/// are recorded as absent.
pub fn attenuation_sweep(
    family: &impl ProblemFamily,
    speeds: &[f64],
    region: &SearchRegion,
    opts: &SweepOptions,
) -> Result<SweepResult> {
    region.validate()?;
    if speeds.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid(
            "speeds",
            "sweep speeds must be strictly increasing",
        ));
    }
    let mut result = SweepResult::default();
    let mut previous = opts.initial_guess;
    for &v_over_b in speeds {
        let outcome = family
            .at(v_over_b)
            .and_then(|problem| corrugation_roots(&problem, region, &opts.scan));
        match outcome {
            Ok(roots) => {
                let chosen = match previous {
                    Some(prev) => roots.iter().min_by(|a, b| {
                        (a.location - prev)
                            .norm()
                            .total_cmp(&(b.location - prev).norm())
                    }),
                    None => roots
                        .iter()
                        .min_by(|a, b| a.location.im.abs().total_cmp(&b.location.im.abs())),
                };
                if let Some(root) = chosen {
                    previous = Some(root.location);
                }
                result.push(v_over_b, chosen, None);
            }
            Err(e) => result.push(v_over_b, None, Some(e.to_string())),
        }
    }
    Ok(result)
}

/// What counts as a slowly attenuated corrugation root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RootCriterion {
    /// Upper bound on `|Im η|/|Re η|`.
    pub max_ratio: f64,
    pub max_residual: f64,
}

impl Default for RootCriterion {
    fn default() -> Self {
        Self {
            max_ratio: 0.25,
            max_residual: 1e-8,
        }
    }
}

impl RootCriterion {
    pub fn accepts(&self, root: &RootRecord) -> bool {
        let eta = root.location;
        eta.re != 0.0
            && eta.im.abs() / eta.re.abs() < self.max_ratio
            && root.residual_modulus < self.max_residual
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticalSpeedOptions {
    pub criterion: RootCriterion,
    pub scan: ScanOptions,
    /// Equal subdivisions of `[v_lo, v_hi]` probed before bisection.
    pub coarse_steps: usize,
}

impl Default for CriticalSpeedOptions {
    fn default() -> Self {
        Self {
            criterion: RootCriterion::default(),
            scan: ScanOptions {
                certify: false,
                ..ScanOptions::default()
            },
            coarse_steps: 8,
        }
    }
}

/// Smallest `V/b` in `[v_lo, v_hi]` at which a root satisfying the
/// criterion exists, to within `tol_v`.
///
/// The interval is probed on a coarse grid first; the first crossing from
/// "absent" to "present" is then bisected. Returns `None` if no probe
/// finds a root.
pub fn critical_speed_search(
    family: &impl ProblemFamily,
    v_lo: f64,
    v_hi: f64,
    tol_v: f64,
    region: &SearchRegion,
    opts: &CriticalSpeedOptions,
) -> Result<Option<f64>> {
    region.validate()?;
    if !(v_lo > 0.0 && v_lo < v_hi) {
        return Err(Error::invalid(
            "vc",
            format!("need 0 < v_lo < v_hi, got [{v_lo}, {v_hi}]"),
        ));
    }
    if !(tol_v > 0.0) {
        return Err(Error::invalid("vc", "tol_v must be positive"));
    }
    let probe = family.at(v_lo).map_err(|e| Error::AtSpeed {
        v_over_b: v_lo,
        source: Box::new(e),
    })?;
    let c_r_over_b = rayleigh_speed(&probe.material) / probe.material.b();
    if v_hi >= c_r_over_b {
        return Err(Error::Domain(format!(
            "v_hi = {v_hi} is not below c_R/b = {c_r_over_b}"
        )));
    }

    let holds = |v: f64| -> Result<bool> {
        let wrap = |e: Error| Error::AtSpeed {
            v_over_b: v,
            source: Box::new(e),
        };
        let problem = family.at(v).map_err(wrap)?;
        let roots = corrugation_roots(&problem, region, &opts.scan).map_err(wrap)?;
        Ok(roots.iter().any(|r| opts.criterion.accepts(r)))
    };

    if holds(v_lo)? {
        return Ok(Some(v_lo));
    }
    let steps = opts.coarse_steps.max(1);
    let mut lo = v_lo;
    let mut hi = None;
    for k in 1..=steps {
        let v = v_lo + (v_hi - v_lo) * k as f64 / steps as f64;
        if holds(v)? {
            hi = Some(v);
            break;
        }
        lo = v;
    }
    let Some(mut hi) = hi else { return Ok(None) };
    while hi - lo > tol_v {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}
