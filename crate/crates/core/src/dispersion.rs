//! The three crack-front-wave dispersion functions and the 2×2 spectral
//! system of the mixed Mode I–III problem.
//!
//! Conventions: time dependence `e^{i(k₂x₂ − ωt)}`; in the `k₂`-unit
//! normalisation the single complex argument is `η = ω/|k₂|` with `k₂ = 1`.
//! The Mode-I energy flux factor enters through `f_I`, `f′_I`; any constant
//! prefactor of the energy release rate cancels in every relation here.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::elastodyn::{
    coefficient_functions, f_factor_i, f_log_derivative_with, CoefficientSet, EnergyFactor,
    LoadState, MaterialParams, ModeIIIFactor,
};
use crate::error::{Error, Result};
use crate::kernels::{BlockComponent, BranchTerm, KernelProvider};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// In-plane Mode-I front waves.
    Inplane,
    /// Out-of-plane corrugation waves under Mode-I loading.
    Corrugation,
    /// Coupled waves under mixed Mode I–III loading.
    Mixed,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Relation::Inplane => "inplane",
            Relation::Corrugation => "corrugation",
            Relation::Mixed => "mixed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Normalization {
    /// `k₂ = 1`, argument `η = ω/|k₂|`.
    #[default]
    K2Unit,
    /// Fixed wavenumber, argument `ω`.
    Raw { k2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DispersionOptions {
    /// Keep the `2m` edge-correction term of the in-plane relation. It is
    /// negligible at large `(ω, k₂)` and dropped by default.
    pub keep_m_term: bool,
    pub mode_iii: ModeIIIFactor,
    /// Zero the `Θ₁₃` contributions; used to isolate the `ω₁₃` term.
    pub zero_theta13: bool,
}

impl Default for DispersionOptions {
    fn default() -> Self {
        Self {
            keep_m_term: false,
            mode_iii: ModeIIIFactor::InverseBeta,
            zero_theta13: false,
        }
    }
}

/// A point of the `(ω, k₂)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub omega: Complex64,
    pub k2: f64,
}

impl SpectralPoint {
    pub fn new(omega: Complex64, k2: f64) -> Self {
        Self { omega, k2 }
    }

    /// `η = ω/|k₂|`, undefined at `k₂ = 0`.
    pub fn eta(&self) -> Option<Complex64> {
        (self.k2 != 0.0).then(|| self.omega / self.k2.abs())
    }
}

/// Speed-dependent scalars shared by all relations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedFactors {
    pub f_i: f64,
    pub f_iii: f64,
    /// `f′_I`
    pub df_i: f64,
    /// `f′_III`
    pub df_iii: f64,
    pub coeffs: CoefficientSet,
}

impl SpeedFactors {
    pub fn new(v: f64, mat: &MaterialParams, mode_iii: ModeIIIFactor) -> Result<Self> {
        let f_i = f_factor_i(v, mat)?;
        let f_iii = mode_iii.eval(v, mat)?;
        let df_i = f_i * f_log_derivative_with(EnergyFactor::I, v, mat, mode_iii)?;
        let df_iii = f_iii * f_log_derivative_with(EnergyFactor::III, v, mat, mode_iii)?;
        Ok(Self {
            f_i,
            f_iii,
            df_i,
            df_iii,
            coeffs: coefficient_functions(v, mat)?,
        })
    }
}

/// A dispersion function closed over material, loading and kernel.
#[derive(Debug, Clone)]
pub struct DispersionProblem {
    pub relation: Relation,
    pub material: MaterialParams,
    pub load: LoadState,
    pub provider: KernelProvider,
    pub normalization: Normalization,
    pub options: DispersionOptions,
    factors: SpeedFactors,
}

impl DispersionProblem {
    pub fn new(
        relation: Relation,
        material: MaterialParams,
        load: LoadState,
        provider: KernelProvider,
    ) -> Result<Self> {
        Self::with_options(
            relation,
            material,
            load,
            provider,
            DispersionOptions::default(),
        )
    }

    pub fn with_options(
        relation: Relation,
        material: MaterialParams,
        load: LoadState,
        provider: KernelProvider,
        options: DispersionOptions,
    ) -> Result<Self> {
        let v_over_b = load.v / material.b();
        if let Some(pv) = provider.v_over_b() {
            if (pv - v_over_b).abs() > 1e-12 * v_over_b.max(1.0) {
                return Err(Error::invalid(
                    "kernel",
                    format!("provider built for V/b = {pv}, load has V/b = {v_over_b}"),
                ));
            }
        }
        if let Some(nu) = provider.nu() {
            if (nu - material.nu()).abs() > 1e-12 {
                return Err(Error::invalid(
                    "kernel",
                    format!(
                        "provider built for nu = {nu}, material has nu = {}",
                        material.nu()
                    ),
                ));
            }
        }
        let factors = SpeedFactors::new(load.v, &material, options.mode_iii)?;
        Ok(Self {
            relation,
            material,
            load,
            provider,
            normalization: Normalization::K2Unit,
            options,
            factors,
        })
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_relation(mut self, relation: Relation) -> Self {
        self.relation = relation;
        self
    }

    pub fn factors(&self) -> &SpeedFactors {
        &self.factors
    }

    fn theta13(&self) -> f64 {
        if self.options.zero_theta13 {
            0.0
        } else {
            self.factors.coeffs.theta13
        }
    }

    fn q(&self, comp: BlockComponent, omega: Complex64, k2: f64) -> Result<Complex64> {
        self.provider.qbar_component(comp, omega, k2)
    }

    /// Maps the scalar argument onto `(ω, k₂)` according to the normalisation.
    pub fn spectral_point(&self, z: Complex64) -> SpectralPoint {
        match self.normalization {
            Normalization::K2Unit => SpectralPoint::new(z, 1.0),
            Normalization::Raw { k2 } => SpectralPoint::new(z, k2),
        }
    }

    /// The dispersion function selected by `relation`, as a function of
    /// its single complex argument.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let p = self.spectral_point(z);
        match self.relation {
            Relation::Inplane => self.d_inplane(p.omega, p.k2),
            Relation::Corrugation => self.d_corrugation_raw(p.omega, p.k2),
            Relation::Mixed => self.d_mixed(p.omega, p.k2),
        }
    }

    /// `2Q̄₃₃(ω,k) − iω f′_I/f_I (+ 2m)`.
    pub fn d_inplane(&self, omega: Complex64, k: f64) -> Result<Complex64> {
        let i = Complex64::i();
        let dlog = self.factors.df_i / self.factors.f_i;
        let mut d = 2.0 * self.q(BlockComponent::Q33, omega, k)? - i * omega * dlog;
        if self.options.keep_m_term {
            d += 2.0 * self.load.m();
        }
        Ok(d)
    }

    /// Corrugation bracket `−Q̄₁₁(η,1)Θ₁₃ + i(η/V)ω₁₃` per unit `K_I ψ̄*`.
    pub fn d_corrugation(&self, eta: Complex64) -> Result<Complex64> {
        self.d_corrugation_raw(eta, 1.0)
    }

    /// Corrugation bracket at a general `(ω, k₂)`.
    pub fn d_corrugation_raw(&self, omega: Complex64, k2: f64) -> Result<Complex64> {
        let q11 = self.q(BlockComponent::Q11, omega, k2)?;
        Ok(-q11 * self.theta13()
            + Complex64::i() * (omega / self.load.v) * self.factors.coeffs.omega13)
    }

    /// `𝒲(η) = |Q̄₁₁Θ₁₃ − i(η/V)ω₁₃|`.
    pub fn w_modulus(&self, eta: Complex64) -> Result<f64> {
        Ok(self.d_corrugation(eta)?.norm())
    }

    /// Coefficients of `(φ̄, ψ̄*)` in the Fourier-transformed energy balance
    /// (row 0) and local symmetry condition (row 1).
    pub fn mixed_system_matrix(&self, omega: Complex64, k2: f64) -> Result<[[Complex64; 2]; 2]> {
        let parts = self.mixed_parts(omega, k2)?;
        let ki = self.load.ki0;
        let kiii = self.load.kiii0;
        Ok([
            [
                parts.inplane * ki * ki + parts.antiplane * kiii * kiii,
                parts.coupling_energy * ki * kiii,
            ],
            [parts.coupling_symmetry * kiii, parts.corrugation * ki],
        ])
    }

    /// Left side of the mixed-mode dispersion relation; equals
    /// `det M / K_I³`.
    pub fn d_mixed(&self, omega: Complex64, k2: f64) -> Result<Complex64> {
        let parts = self.mixed_parts(omega, k2)?;
        let k0_sq = self.load.k0().powi(2);
        Ok(
            parts.corrugation * (parts.inplane + parts.antiplane * k0_sq)
                - parts.coupling_symmetry * parts.coupling_energy * k0_sq,
        )
    }

    fn mixed_parts(&self, omega: Complex64, k2: f64) -> Result<MixedParts> {
        let i = Complex64::i();
        let f = &self.factors;
        let theta = self.theta13();
        let q11 = self.q(BlockComponent::Q11, omega, k2)?;
        let q12 = self.q(BlockComponent::Q12, omega, k2)?;
        let q21 = self.q(BlockComponent::Q21, omega, k2)?;
        let q22 = self.q(BlockComponent::Q22, omega, k2)?;
        let q33 = self.q(BlockComponent::Q33, omega, k2)?;
        Ok(MixedParts {
            inplane: 2.0 * f.f_i * q33 - i * omega * f.df_i,
            antiplane: 2.0 * f.f_iii * q22 - i * omega * f.df_iii,
            coupling_energy: 2.0 * f.f_iii * (-q12 * theta + i * k2 * f.coeffs.omega23)
                + 4.0 * i * k2 * f.f_i,
            coupling_symmetry: q21 + i * k2,
            corrugation: -q11 * theta + i * (omega / self.load.v) * f.coeffs.omega13,
        })
    }
}

struct MixedParts {
    inplane: Complex64,
    antiplane: Complex64,
    coupling_energy: Complex64,
    coupling_symmetry: Complex64,
    corrugation: Complex64,
}

/// Determinant of a 2×2 complex matrix.
pub fn det2(m: &[[Complex64; 2]; 2]) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// A `Q̄₁₁` branch term `c·√(v₀²k₂² − ω²) + d·iω` for which the corrugation
/// bracket vanishes at `eta_star`.
///
/// Solves the bracket, which is linear in `d`, for `d` with `c` and `v₀`
/// given. Requires `Θ₁₃ ≠ 0` and `η* ≠ 0`.
pub fn corrugation_root_term(
    coeffs: &CoefficientSet,
    v: f64,
    eta_star: Complex64,
    c: Complex64,
    v0: f64,
) -> Result<BranchTerm> {
    if coeffs.theta13 == 0.0 {
        return Err(Error::Domain(
            "Θ₁₃ vanishes; the root cannot be placed".into(),
        ));
    }
    if eta_star == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain(
            "η* = 0 is a root only of the Θ₁₃-free bracket".into(),
        ));
    }
    let radical = (Complex64::new(v0 * v0, 0.0) - eta_star * eta_star).sqrt();
    let d = coeffs.omega13 / (v * coeffs.theta13) - c * radical / (Complex64::i() * eta_star);
    Ok(BranchTerm { c, d, v0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{make_synthetic, SyntheticParams};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn problem(relation: Relation, params: SyntheticParams) -> DispersionProblem {
        let mat = MaterialParams::new(0.3, 1.0).unwrap();
        let load = LoadState::new(&mat, 0.69, 1.5, 0.4, 0.1, 0.2, 0.3).unwrap();
        DispersionProblem::new(relation, mat, load, make_synthetic(params).unwrap()).unwrap()
    }

    #[test]
    fn inplane_at_zero_frequency() {
        let params =
            SyntheticParams::default().with(BlockComponent::Q33, BranchTerm::new(0.8, 0.3, 0.9));
        let p = problem(Relation::Inplane, params);
        let d = p.d_inplane(c(0.0, 0.0), 1.0).unwrap();
        let q33 = p.provider.qbar(3, 3, c(0.0, 0.0), 1.0).unwrap();
        assert_eq!(d, 2.0 * q33);
    }

    #[test]
    fn inplane_m_term_flag() {
        let params =
            SyntheticParams::default().with(BlockComponent::Q33, BranchTerm::new(0.8, 0.3, 0.9));
        let mut p = problem(Relation::Inplane, params);
        let dropped = p.d_inplane(c(0.4, -0.1), 1.0).unwrap();
        p.options.keep_m_term = true;
        let kept = p.d_inplane(c(0.4, -0.1), 1.0).unwrap();
        assert!((kept - dropped - 2.0 * p.load.m()).norm() < 1e-15);
    }

    #[test]
    fn corrugation_with_theta_zeroed_has_root_at_origin() {
        let params = SyntheticParams::uniform(BranchTerm::new(1.0, 0.5, 0.8));
        let mut p = problem(Relation::Corrugation, params);
        p.options.zero_theta13 = true;
        assert_eq!(p.d_corrugation(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(p.d_corrugation(c(0.3, 0.0)).unwrap().norm() > 0.0);
    }

    #[test]
    fn corrugation_linear_kernel_closed_form() {
        let dval = 0.37;
        let params =
            SyntheticParams::default().with(BlockComponent::Q11, BranchTerm::new(0.0, dval, 1.0));
        let p = problem(Relation::Corrugation, params);
        let coeffs = p.factors().coeffs;
        for eta in [c(0.3, 0.0), c(-0.2, 0.5), c(1.4, -0.7)] {
            let expected = Complex64::i() * eta * (coeffs.omega13 / 0.69 - dval * coeffs.theta13);
            assert!((p.d_corrugation(eta).unwrap() - expected).norm() < 1e-14);
        }
        assert_eq!(p.d_corrugation(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn w_is_modulus_of_bracket() {
        let params = SyntheticParams::uniform(BranchTerm::new(1.0, 0.5, 0.8));
        let p = problem(Relation::Corrugation, params);
        for eta in [c(0.3, 0.0), c(-0.2, 0.5), c(1.4, -0.7)] {
            assert_eq!(
                p.w_modulus(eta).unwrap(),
                p.d_corrugation(eta).unwrap().norm()
            );
        }
    }

    #[test]
    fn engineered_corrugation_root() {
        let base = problem(Relation::Corrugation, SyntheticParams::default());
        let eta_star = c(0.62, -0.04);
        let term = corrugation_root_term(
            &base.factors().coeffs,
            base.load.v,
            eta_star,
            c(1.0, 0.0),
            0.5,
        )
        .unwrap();
        let p = problem(
            Relation::Corrugation,
            SyntheticParams::default().with(BlockComponent::Q11, term),
        );
        assert!(p.d_corrugation(eta_star).unwrap().norm() < 1e-14);
        assert_eq!(
            p.w_modulus(eta_star).unwrap(),
            p.d_corrugation(eta_star).unwrap().norm()
        );
        assert!(p.w_modulus(eta_star + 0.05).unwrap() > 1e-3);
    }

    #[test]
    fn decoupled_matrix_when_kiii_vanishes() {
        let mat = MaterialParams::new(0.3, 1.0).unwrap();
        let load = LoadState::new(&mat, 0.5, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let provider =
            make_synthetic(SyntheticParams::uniform(BranchTerm::new(1.0, 0.2, 0.7))).unwrap();
        let p = DispersionProblem::new(Relation::Mixed, mat, load, provider).unwrap();
        let m = p.mixed_system_matrix(c(0.3, -0.1), 1.0).unwrap();
        assert_eq!(m[0][1], c(0.0, 0.0));
        assert_eq!(m[1][0], c(0.0, 0.0));
    }

    #[test]
    fn m22_matches_corrugation_bracket() {
        let p = problem(
            Relation::Mixed,
            SyntheticParams::uniform(BranchTerm::new(1.0, 0.2, 0.7)),
        );
        let eta = c(0.45, -0.12);
        let m = p.mixed_system_matrix(eta, 1.0).unwrap();
        let expected = p.d_corrugation(eta).unwrap();
        assert!((m[1][1] / p.load.ki0 - expected).norm() < 1e-14);
    }

    #[test]
    fn mixed_hand_expansion_with_zero_kernels() {
        let p = problem(Relation::Mixed, SyntheticParams::default());
        let f = *p.factors();
        let k0_sq = p.load.k0().powi(2);
        let i = Complex64::i();
        for (w, k2) in [(0.3, 1.0), (1.2, 0.5), (-0.7, 2.0)] {
            let omega = c(w, 0.0);
            let expected = i
                * (omega / p.load.v)
                * f.coeffs.omega13
                * (-i * omega)
                * (f.df_i + f.df_iii * k0_sq)
                - k0_sq
                    * (i * k2)
                    * (2.0 * f.f_iii * i * k2 * f.coeffs.omega23 + 4.0 * i * k2 * f.f_i);
            let got = p.d_mixed(omega, k2).unwrap();
            assert!((got - expected).norm() < 1e-13 * expected.norm().max(1.0));
        }
    }

    #[test]
    fn problem_rejects_mismatched_provider_speed() {
        let mat = MaterialParams::new(0.3, 1.0).unwrap();
        let load = LoadState::mode_i(&mat, 0.5).unwrap();
        let provider = make_synthetic(SyntheticParams::default())
            .unwrap()
            .at_speed(0.3, 0.6);
        assert!(DispersionProblem::new(Relation::Corrugation, mat, load, provider).is_err());
        let provider = make_synthetic(SyntheticParams::default())
            .unwrap()
            .at_speed(0.3, 0.5);
        assert!(DispersionProblem::new(Relation::Corrugation, mat, load, provider).is_ok());
    }

    #[test]
    fn spectral_point_eta() {
        assert_eq!(
            SpectralPoint::new(c(1.0, -0.5), -2.0).eta(),
            Some(c(0.5, -0.25))
        );
        assert_eq!(SpectralPoint::new(c(1.0, 0.0), 0.0).eta(), None);
    }

    #[test]
    fn eval_dispatches_on_relation() {
        let p = problem(
            Relation::Corrugation,
            SyntheticParams::uniform(BranchTerm::new(1.0, 0.2, 0.7)),
        );
        let z = c(0.3, -0.2);
        assert_eq!(p.eval(z).unwrap(), p.d_corrugation(z).unwrap());
        let p = p
            .with_relation(Relation::Mixed)
            .with_normalization(Normalization::Raw { k2: 2.0 });
        assert_eq!(p.eval(z).unwrap(), p.d_mixed(z, 2.0).unwrap());
        let p = p.with_relation(Relation::Inplane);
        assert_eq!(p.eval(z).unwrap(), p.d_inplane(z, 2.0).unwrap());
    }
}
