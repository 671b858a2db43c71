//! Run configuration: one JSON document, every section optional.

use std::path::{Path, PathBuf};

use crackwave::dispersion::{
    corrugation_root_term, DispersionOptions, DispersionProblem, Relation,
};
use crackwave::elastodyn::{coefficient_functions, LoadState, MaterialParams};
use crackwave::kernels::{
    load_table, make_synthetic, BlockComponent, BranchTerm, KernelProvider, SyntheticParams,
};
use crackwave::rootfind::{ScanOptions, SearchRegion};
use crackwave::survey::{default_region, RootCriterion};
use crackwave::{Complex64, Error};
use serde::{Deserialize, Serialize};

use crate::failure::Failure;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub material: MaterialConfig,
    pub load: LoadConfig,
    pub kernel: KernelConfig,
    pub relation: Relation,
    pub options: DispersionOptions,
    /// Search region in η; defaults to Re ∈ [0, 2b], Im ∈ [−b, 0.25b].
    pub region: Option<RegionConfig>,
    pub scan: ScanOptions,
    pub sweep: SweepConfig,
    pub vc: VcConfig,
    pub front: FrontConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            material: MaterialConfig::default(),
            load: LoadConfig::default(),
            kernel: KernelConfig::default(),
            relation: Relation::Corrugation,
            options: DispersionOptions::default(),
            region: None,
            scan: ScanOptions {
                certify: false,
                ..ScanOptions::default()
            },
            sweep: SweepConfig::default(),
            vc: VcConfig::default(),
            front: FrontConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaterialConfig {
    pub nu: f64,
    pub b: f64,
}

impl Default for MaterialConfig {
    fn default() -> Self {
        Self { nu: 0.3, b: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LoadConfig {
    #[serde(rename = "V_over_b")]
    pub v_over_b: f64,
    #[serde(rename = "KI0")]
    pub ki0: f64,
    #[serde(rename = "KIII0")]
    pub kiii0: f64,
    #[serde(rename = "A10")]
    pub a10: f64,
    #[serde(rename = "A20")]
    pub a20: f64,
    #[serde(rename = "A30")]
    pub a30: f64,
}

impl Default for LoadConfig {
    fn default() -> Self {
        Self {
            v_over_b: 0.69,
            ki0: 1.0,
            kiii0: 0.0,
            a10: 0.0,
            a20: 0.0,
            a30: 0.0,
        }
    }
}

/// A real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl Scalar {
    pub fn value(self) -> Complex64 {
        match self {
            Scalar::Real(x) => Complex64::new(x, 0.0),
            Scalar::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::Real(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TermConfig {
    pub c: Scalar,
    pub d: Scalar,
    pub v0: f64,
}

impl Default for TermConfig {
    fn default() -> Self {
        Self {
            c: Scalar::default(),
            d: Scalar::default(),
            v0: 1.0,
        }
    }
}

impl TermConfig {
    fn term(&self) -> BranchTerm {
        BranchTerm {
            c: self.c.value(),
            d: self.d.value(),
            v0: self.v0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticConfig {
    pub q11: TermConfig,
    pub q12: TermConfig,
    pub q21: TermConfig,
    pub q22: TermConfig,
    pub q33: TermConfig,
}

impl SyntheticConfig {
    fn params(&self) -> SyntheticParams {
        SyntheticParams {
            q11: self.q11.term(),
            q12: self.q12.term(),
            q21: self.q21.term(),
            q22: self.q22.term(),
            q33: self.q33.term(),
        }
    }
}

/// Replaces `Q̄₁₁` at every speed so that the corrugation bracket vanishes
/// at `η*(x) = Σ re[k]·xᵏ + i·Σ im[k]·xᵏ`, `x = V/b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootFamilyConfig {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "half")]
    pub v0: f64,
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

impl RootFamilyConfig {
    pub fn eta(&self, x: f64) -> Complex64 {
        let poly = |coeffs: &[f64]| coeffs.iter().rev().fold(0.0, |acc, k| acc * x + k);
        Complex64::new(poly(&self.re), poly(&self.im))
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KernelConfig {
    Synthetic {
        #[serde(default)]
        params: SyntheticConfig,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        corrugation_root: Option<RootFamilyConfig>,
    },
    Tabulated {
        table: PathBuf,
    },
    Reference,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig::Synthetic {
            params: SyntheticConfig::default(),
            corrugation_root: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Crack speeds as V/b, strictly increasing.
    pub speeds: Vec<f64>,
    pub initial_guess: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VcConfig {
    pub v_lo: f64,
    pub v_hi: f64,
    pub tol_v: f64,
    pub criterion: RootCriterion,
    pub coarse_steps: usize,
}

impl Default for VcConfig {
    fn default() -> Self {
        Self {
            v_lo: 0.1,
            v_hi: 0.9,
            tol_v: 1e-3,
            criterion: RootCriterion::default(),
            coarse_steps: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrontConfig {
    /// Wavenumbers of the synthesised modes; each gets `ω = |k₂|·η`.
    pub k2: Vec<f64>,
    pub amplitude: Scalar,
    /// Newton start for the root; without it the region is scanned and the
    /// least attenuated root is used.
    pub eta_guess: Option<[f64; 2]>,
    pub x_min: f64,
    pub x_max: f64,
    pub samples: usize,
    pub times: Vec<f64>,
    pub residual_tol: f64,
}

impl Default for FrontConfig {
    fn default() -> Self {
        Self {
            k2: vec![1.0],
            amplitude: Scalar::Real(1.0),
            eta_guess: None,
            x_min: 0.0,
            x_max: 4.0 * std::f64::consts::PI,
            samples: 256,
            times: (0..5).map(|k| k as f64).collect(),
            residual_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("."),
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::config(format!("config {}: {e}", path.display())))
    }

    /// Compact JSON echo, written into output metadata.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).expect("configuration serialises")
    }

    pub fn material(&self) -> Result<MaterialParams, Failure> {
        MaterialParams::new(self.material.nu, self.material.b)
            .map_err(|e| Failure::at("material", e))
    }

    pub fn load_state(&self, mat: &MaterialParams) -> Result<LoadState, Failure> {
        let l = &self.load;
        LoadState::new(
            mat,
            l.v_over_b * mat.b(),
            l.ki0,
            l.kiii0,
            l.a10,
            l.a20,
            l.a30,
        )
        .map_err(|e| Failure::at("load", e))
    }

    pub fn region(&self) -> Result<SearchRegion, Failure> {
        let region = match self.region {
            Some(r) => SearchRegion::new((r.re[0], r.re[1]), (r.im[0], r.im[1]), r.nx, r.ny),
            None => Ok(default_region(self.material.b)),
        };
        region.map_err(|e| Failure::at("region", e))
    }

    fn provider_at(
        &self,
        mat: &MaterialParams,
        v_over_b: f64,
    ) -> Result<KernelProvider, (&'static str, Error)> {
        match &self.kernel {
            KernelConfig::Synthetic {
                params,
                corrugation_root,
            } => {
                let mut params = params.params();
                if let Some(family) = corrugation_root {
                    let v = v_over_b * mat.b();
                    let coeffs = coefficient_functions(v, mat).map_err(|e| ("load.V_over_b", e))?;
                    let eta = family.eta(v_over_b);
                    let term = corrugation_root_term(
                        &coeffs,
                        v,
                        eta,
                        Complex64::new(family.c, 0.0),
                        family.v0,
                    )
                    .map_err(|e| ("kernel.corrugation_root", e))?;
                    params = params.with(BlockComponent::Q11, term);
                }
                make_synthetic(params).map_err(|e| ("kernel.params", e))
            }
            KernelConfig::Tabulated { table } => load_table(table).map_err(|e| {
                (
                    "kernel.table",
                    Error::Io(format!("{}: {e}", table.display())),
                )
            }),
            KernelConfig::Reference => Err((
                "kernel.kind",
                Error::Capability(
                    "the reference kernel closed forms are not built into this tool; \
                     use a synthetic or tabulated kernel"
                        .into(),
                ),
            )),
        }
    }

    fn build(&self, v_over_b: f64) -> Result<DispersionProblem, (&'static str, Error)> {
        let mat =
            MaterialParams::new(self.material.nu, self.material.b).map_err(|e| ("material", e))?;
        let l = &self.load;
        let load = LoadState::new(
            &mat,
            v_over_b * mat.b(),
            l.ki0,
            l.kiii0,
            l.a10,
            l.a20,
            l.a30,
        )
        .map_err(|e| ("load", e))?;
        let provider = self.provider_at(&mat, v_over_b)?;
        DispersionProblem::with_options(self.relation, mat, load, provider, self.options)
            .map_err(|e| ("kernel", e))
    }

    /// The problem at another speed, as a plain library result (used for
    /// per-speed families).
    pub fn problem_at(&self, v_over_b: f64) -> crackwave::Result<DispersionProblem> {
        self.build(v_over_b).map_err(|(_, e)| e)
    }

    /// The problem at the configured speed, with the offending field named
    /// on failure.
    pub fn problem(&self) -> Result<DispersionProblem, Failure> {
        self.build(self.load.v_over_b)
            .map_err(|(field, e)| Failure::at(field, e))
    }
}
