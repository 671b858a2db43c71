//! Closed-form elastodynamic functions of the crack speed.
//!
//! All speeds are in the same units as the shear wave speed `b` carried by
//! [`MaterialParams`]. Every function is a pure function of its arguments.
//!
//! The Rayleigh function and the coefficient functions are evaluated in a
//! rearranged form that factors out `s = V²/b²` explicitly, so that the
//! removable `0/0` at `V → 0` does not lose digits to cancellation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this fraction of `b` the coefficient functions switch to their
/// `V → 0` limits.
pub const SMALL_SPEED_FRACTION: f64 = 1e-6;

/// Isotropic elastic medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    nu: f64,
    b: f64,
    a: f64,
    rho: Option<f64>,
}

impl MaterialParams {
    /// Medium with Poisson ratio `nu` and shear wave speed `b`; the
    /// longitudinal speed follows from `a² = 2b²(1−ν)/(1−2ν)`.
    pub fn new(nu: f64, b: f64) -> Result<Self> {
        if !(nu > 0.0 && nu < 0.5) {
            return Err(Error::invalid(
                "nu",
                format!("Poisson ratio {nu} outside (0, 0.5)"),
            ));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::invalid(
                "b",
                format!("shear wave speed {b} must be positive"),
            ));
        }
        let a = b * (2.0 * (1.0 - nu) / (1.0 - 2.0 * nu)).sqrt();
        Ok(Self {
            nu,
            b,
            a,
            rho: None,
        })
    }

    pub fn with_density(mut self, rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::invalid(
                "rho",
                format!("density {rho} must be positive"),
            ));
        }
        self.rho = Some(rho);
        Ok(self)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// Shear wave speed.
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Longitudinal wave speed.
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn rho(&self) -> Option<f64> {
        self.rho
    }

    /// `b²/a² = (1−2ν)/(2(1−ν))`, computed from `ν` without rounding through `a`.
    fn kappa(&self) -> f64 {
        (1.0 - 2.0 * self.nu) / (2.0 * (1.0 - self.nu))
    }
}

/// Unperturbed state of the moving crack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadState {
    pub v: f64,
    pub ki0: f64,
    pub kiii0: f64,
    pub a10: f64,
    pub a20: f64,
    pub a30: f64,
}

impl LoadState {
    /// Validates `0 < V < c_R` and `K_I > 0`.
    pub fn new(
        mat: &MaterialParams,
        v: f64,
        ki0: f64,
        kiii0: f64,
        a10: f64,
        a20: f64,
        a30: f64,
    ) -> Result<Self> {
        let c_r = rayleigh_speed(mat);
        if !(v > 0.0 && v < c_r) {
            return Err(Error::Domain(format!(
                "crack speed V = {v} must lie in (0, c_R = {c_r})"
            )));
        }
        if !(ki0 > 0.0 && ki0.is_finite()) {
            return Err(Error::invalid("KI0", format!("{ki0} must be positive")));
        }
        for (field, value) in [("KIII0", kiii0), ("A10", a10), ("A20", a20), ("A30", a30)] {
            if !value.is_finite() {
                return Err(Error::invalid(field, "must be finite"));
            }
        }
        Ok(Self {
            v,
            ki0,
            kiii0,
            a10,
            a20,
            a30,
        })
    }

    /// Pure Mode-I loading with unit `K_I` and no edge corrections.
    pub fn mode_i(mat: &MaterialParams, v: f64) -> Result<Self> {
        Self::new(mat, v, 1.0, 0.0, 0.0, 0.0, 0.0)
    }

    /// `m = (π/2)^{1/2} A₃/K_I`.
    pub fn m(&self) -> f64 {
        std::f64::consts::FRAC_PI_2.sqrt() * self.a30 / self.ki0
    }

    /// Loading mixity `K_III/K_I`.
    pub fn k0(&self) -> f64 {
        self.kiii0 / self.ki0
    }
}

fn check_subsonic(v: f64, mat: &MaterialParams) -> Result<()> {
    if !(v >= 0.0) {
        return Err(Error::Domain(format!("speed {v} must be non-negative")));
    }
    if v >= mat.b {
        return Err(Error::Domain(format!(
            "speed {v} is not below the shear wave speed {}",
            mat.b
        )));
    }
    Ok(())
}

fn check_sub_rayleigh(v: f64, mat: &MaterialParams) -> Result<f64> {
    let c_r = rayleigh_speed(mat);
    if !(v > 0.0 && v < c_r) {
        return Err(Error::Domain(format!("speed {v} outside (0, c_R = {c_r})")));
    }
    Ok(c_r)
}

/// `(α, β) = (√(1−V²/a²), √(1−V²/b²))`.
pub fn alpha_beta(v: f64, mat: &MaterialParams) -> Result<(f64, f64)> {
    check_subsonic(v, mat)?;
    Ok(alpha_beta_unchecked(v, mat))
}

fn alpha_beta_unchecked(v: f64, mat: &MaterialParams) -> (f64, f64) {
    let s = (v / mat.b).powi(2);
    let r = s * mat.kappa();
    ((1.0 - r).sqrt(), (1.0 - s).sqrt())
}

// R(V) = s·P(s) / (4αβ + (2−s)²) with s = V²/b², κ = b²/a² and
// P(s) = 16(1−κ) + (16κ−24)s + 8s² − s³, obtained by multiplying
// 4αβ − (1+β²)² by its conjugate.
fn rayleigh_cubic(s: f64, kappa: f64) -> f64 {
    16.0 * (1.0 - kappa) + (16.0 * kappa - 24.0) * s + 8.0 * s * s - s * s * s
}

fn rayleigh_parts(v: f64, mat: &MaterialParams) -> (f64, f64, f64) {
    let (alpha, beta) = alpha_beta_unchecked(v, mat);
    let s = (v / mat.b).powi(2);
    let conj = 4.0 * alpha * beta + (2.0 - s).powi(2);
    (s, rayleigh_cubic(s, mat.kappa()), conj)
}

/// Rayleigh function `R(V) = 4αβ − (1+β²)²`.
pub fn rayleigh_function(v: f64, mat: &MaterialParams) -> Result<f64> {
    check_subsonic(v, mat)?;
    let (s, cubic, conj) = rayleigh_parts(v, mat);
    Ok(s * cubic / conj)
}

/// Rayleigh wave speed `c_R`, the unique zero of `R` in `(0, b)`.
pub fn rayleigh_speed(mat: &MaterialParams) -> f64 {
    // P(0) = 16(1−κ) > 0 and P(1) = −1, with a single sign change in between.
    let kappa = mat.kappa();
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > 1e-16 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if rayleigh_cubic(mid, kappa) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    mat.b * (0.5 * (lo + hi)).sqrt()
}

/// Mode-I energy flux factor `f_I(v) = v²α / ((1−ν) b² R(v))`.
pub fn f_factor_i(v: f64, mat: &MaterialParams) -> Result<f64> {
    check_sub_rayleigh(v, mat)?;
    let (alpha, _) = alpha_beta_unchecked(v, mat);
    let (_, cubic, conj) = rayleigh_parts(v, mat);
    // v²/b² cancels against the factor s in R.
    Ok(alpha * conj / ((1.0 - mat.nu) * cubic))
}

/// Continuous extension of `f_I` at `v = 0`.
pub fn f_factor_i_limit0() -> f64 {
    1.0
}

/// Normalisation of the Mode-III energy flux factor.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ModeIIIFactor {
    /// `f_III(v) = 1/β(v)`.
    #[default]
    InverseBeta,
    /// `f_III(v) = scale/β(v)`.
    ScaledInverseBeta { scale: f64 },
}

impl ModeIIIFactor {
    pub fn eval(&self, v: f64, mat: &MaterialParams) -> Result<f64> {
        if !(v > 0.0) {
            return Err(Error::Domain(format!("speed {v} must be positive")));
        }
        check_subsonic(v, mat)?;
        let scale = match *self {
            ModeIIIFactor::InverseBeta => 1.0,
            ModeIIIFactor::ScaledInverseBeta { scale } => scale,
        };
        if v < SMALL_SPEED_FRACTION * mat.b {
            return Ok(scale);
        }
        let (_, beta) = alpha_beta_unchecked(v, mat);
        Ok(scale / beta)
    }
}

/// Mode-III energy flux factor with the default `1/β` normalisation.
pub fn f_factor_iii(v: f64, mat: &MaterialParams) -> Result<f64> {
    ModeIIIFactor::InverseBeta.eval(v, mat)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyFactor {
    I,
    III,
}

/// Plain second-order central difference.
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// `f′(V)/f(V)` for the chosen energy flux factor, from central differences
/// of `ln f` with one Richardson step.
pub fn f_log_derivative(which: EnergyFactor, v: f64, mat: &MaterialParams) -> Result<f64> {
    f_log_derivative_with(which, v, mat, ModeIIIFactor::InverseBeta)
}

pub fn f_log_derivative_with(
    which: EnergyFactor,
    v: f64,
    mat: &MaterialParams,
    mode_iii: ModeIIIFactor,
) -> Result<f64> {
    let c_r = check_sub_rayleigh(v, mat)?;
    let h = 1e-3 * v.min(c_r - v);
    let ln_f = |x: f64| -> f64 {
        let value = match which {
            EnergyFactor::I => f_factor_i(x, mat),
            EnergyFactor::III => mode_iii.eval(x, mat),
        };
        // Stencil points stay inside (0, c_R) by construction of h.
        value.map(f64::ln).unwrap_or(f64::NAN)
    };
    let coarse = central_difference(ln_f, v, h);
    let fine = central_difference(ln_f, v, 0.5 * h);
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Coefficient functions entering the first-order Mode-II and Mode-III
/// intensity factor perturbations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSet {
    pub theta13: f64,
    pub omega13: f64,
    pub omega23: f64,
    pub sigma11: f64,
    pub sigma12: f64,
}

/// `V → 0` limits of the coefficient functions.
pub fn coefficient_limits(mat: &MaterialParams) -> CoefficientSet {
    let kappa = mat.kappa();
    CoefficientSet {
        theta13: 1.0,
        omega13: -0.5,
        omega23: 2.0 * mat.nu - 1.0,
        sigma11: 1.0,
        // −(1/a²)/(1/b² − 1/a²)
        sigma12: -kappa / (1.0 - kappa),
    }
}

pub fn coefficient_functions(v: f64, mat: &MaterialParams) -> Result<CoefficientSet> {
    if !(v >= 0.0) {
        return Err(Error::Domain(format!("speed {v} must be non-negative")));
    }
    let c_r = rayleigh_speed(mat);
    if v >= c_r {
        return Err(Error::Domain(format!("speed {v} is not below c_R = {c_r}")));
    }
    if v < SMALL_SPEED_FRACTION * mat.b {
        return Ok(coefficient_limits(mat));
    }

    let kappa = mat.kappa();
    let nu = mat.nu;
    let (alpha, beta) = alpha_beta_unchecked(v, mat);
    let s = (v / mat.b).powi(2);
    let r = kappa * s;
    // R/s, so every numerator below is divided by s as well.
    let r_over_s = rayleigh_cubic(s, kappa) / (4.0 * alpha * beta + (2.0 - s).powi(2));

    // α − β = (s − r)/(α + β); α² − β² = s − r.
    let diff_sq_over_s = 1.0 - kappa;
    let alpha_minus_beta_over_s = diff_sq_over_s / (alpha + beta);
    let one_plus_beta_sq = 2.0 - s;

    let omega13 =
        alpha_minus_beta_over_s * one_plus_beta_sq * (alpha + 2.0 * beta) / r_over_s - 2.0;
    let omega23 = 2.0 * nu * one_plus_beta_sq * diff_sq_over_s / r_over_s - 1.0;

    // 4αβ − (1+2α²−β²)(1+β²) = 4(rs − r − s)/(1+αβ) + 4r − 2rs + s²
    let sigma11_num_over_s =
        4.0 * (r - kappa - 1.0) / (1.0 + alpha * beta) + 4.0 * kappa - 2.0 * r + s;
    let sigma11 = -sigma11_num_over_s / r_over_s;

    // 1 + β² − 2αβ = s(s + 4κ − 4κs) / ((2−s) + 2αβ)
    let sigma12_num_over_s = (s + 4.0 * kappa - 4.0 * r) / (one_plus_beta_sq + 2.0 * alpha * beta);
    let sigma12 = -2.0 * sigma12_num_over_s / r_over_s;

    let theta13 = sigma11 + 0.5 * s * sigma12;
    Ok(CoefficientSet {
        theta13,
        omega13,
        omega23,
        sigma11,
        sigma12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn steel() -> MaterialParams {
        MaterialParams::new(0.3, 1.0).unwrap()
    }

    // Literal transcription of R for cross-checking the rearranged form.
    fn naive_r(v: f64, mat: &MaterialParams) -> f64 {
        let alpha = (1.0 - v * v / (mat.a() * mat.a())).sqrt();
        let beta = (1.0 - v * v / (mat.b() * mat.b())).sqrt();
        4.0 * alpha * beta - (1.0 + beta * beta).powi(2)
    }

    fn bisect_naive_r(mat: &MaterialParams) -> f64 {
        let (mut lo, mut hi) = (0.8 * mat.b(), mat.b() * (1.0 - 1e-15));
        assert!(naive_r(lo, mat) > 0.0 && naive_r(hi, mat) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if naive_r(mid, mat) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn material_rejects_bad_poisson_ratio() {
        assert!(MaterialParams::new(0.6, 1.0).is_err());
        assert!(MaterialParams::new(0.0, 1.0).is_err());
        assert!(MaterialParams::new(0.3, -1.0).is_err());
        let m = steel();
        let expected = 2.0 * 0.7 / 0.4;
        assert!((m.a() * m.a() - expected).abs() < 1e-14);
    }

    #[test]
    fn alpha_beta_examples() {
        let m = steel();
        assert_eq!(alpha_beta(0.0, &m).unwrap(), (1.0, 1.0));
        assert!(alpha_beta(m.b(), &m).is_err());
        assert!(alpha_beta(-0.1, &m).is_err());
    }

    #[test]
    fn alpha_three_four_five() {
        // 0.6a < b needs a/b < 5/3; ν = 0.1 gives a/b = 1.5.
        let m = MaterialParams::new(0.1, 1.0).unwrap();
        let (alpha, beta) = alpha_beta(0.6 * m.a(), &m).unwrap();
        assert!((alpha - 0.8).abs() < 1e-15);
        assert!(beta > 0.0 && beta <= alpha);
    }

    #[test]
    fn rayleigh_function_endpoints() {
        let m = steel();
        assert_eq!(rayleigh_function(0.0, &m).unwrap(), 0.0);
        let near_b = m.b() * (1.0 - 1e-14);
        assert!((rayleigh_function(near_b, &m).unwrap() + 1.0).abs() < 1e-6);
        assert!(rayleigh_function(m.b(), &m).is_err());
    }

    #[test]
    fn rearranged_r_matches_literal_formula() {
        let m = steel();
        for i in 1..100 {
            let v = m.b() * i as f64 / 100.0;
            let lhs = rayleigh_function(v, &m).unwrap();
            assert!((lhs - naive_r(v, &m)).abs() < 1e-13, "v = {v}");
        }
    }

    #[test]
    fn rayleigh_speed_matches_bisection_oracle() {
        for (nu, expected) in [(0.3, 0.9274), (0.25, 0.9194)] {
            let m = MaterialParams::new(nu, 1.0).unwrap();
            let c_r = rayleigh_speed(&m);
            let oracle = bisect_naive_r(&m);
            assert!((c_r - oracle).abs() < 1e-12, "nu = {nu}: {c_r} vs {oracle}");
            assert!((c_r - expected).abs() < 1e-4, "nu = {nu}: {c_r}");
            assert!(rayleigh_function(c_r, &m).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn rayleigh_function_single_sign_change() {
        let m = steel();
        let c_r = rayleigh_speed(&m);
        let mut changes = 0;
        let mut prev = rayleigh_function(1e-4, &m).unwrap();
        for i in 2..10_000 {
            let v = i as f64 * 1e-4;
            let cur = rayleigh_function(v, &m).unwrap();
            if prev.signum() != cur.signum() {
                changes += 1;
                assert!((v - c_r).abs() < 2e-4);
            }
            prev = cur;
        }
        assert_eq!(changes, 1);
    }

    #[test]
    fn beta_le_alpha_le_one() {
        let m = MaterialParams::new(0.2, 2.0).unwrap();
        for i in 1..200 {
            let v = m.b() * i as f64 / 200.0;
            let (alpha, beta) = alpha_beta(v, &m).unwrap();
            assert!(0.0 < beta && beta <= alpha && alpha <= 1.0);
        }
    }

    #[test]
    fn f_i_limits() {
        let m = steel();
        assert!((f_factor_i(1e-4, &m).unwrap() - 1.0).abs() < 1e-6);
        assert_eq!(f_factor_i_limit0(), 1.0);
        assert!(f_factor_i(0.0, &m).is_err());
        let c_r = rayleigh_speed(&m);
        assert!(f_factor_i(c_r, &m).is_err());
        let near = f_factor_i(c_r * (1.0 - 1e-9), &m).unwrap();
        assert!(near > 1e6);
    }

    #[test]
    fn f_i_matches_literal_formula_at_half_b() {
        let m = steel();
        let v = 0.5;
        let alpha = (1.0 - v * v / (m.a() * m.a())).sqrt();
        let literal = v * v * alpha / ((1.0 - 0.3) * naive_r(v, &m));
        let value = f_factor_i(v, &m).unwrap();
        assert!(value > 0.0 && value.is_finite());
        assert!((value - literal).abs() < 1e-12 * literal);
    }

    #[test]
    fn f_iii_examples() {
        let m = steel();
        assert_eq!(f_factor_iii(1e-9, &m).unwrap(), 1.0);
        let v = 3f64.sqrt() / 2.0;
        assert!((f_factor_iii(v, &m).unwrap() - 2.0).abs() < 1e-12);
        assert!(f_factor_iii(1.0, &m).is_err());
        let mut prev = 0.0;
        for i in 1..1000 {
            let value = f_factor_iii(i as f64 / 1000.0, &m).unwrap();
            assert!(value > prev);
            prev = value;
        }
        let scaled = ModeIIIFactor::ScaledInverseBeta { scale: 0.7 };
        assert!((scaled.eval(v, &m).unwrap() - 1.4).abs() < 1e-12);
    }

    #[test]
    fn log_derivative_mode_iii_closed_form() {
        let m = steel();
        let c_r = rayleigh_speed(&m);
        for i in 1..50 {
            let v = c_r * i as f64 / 50.0;
            let beta_sq = 1.0 - v * v;
            let exact = v / beta_sq;
            let numeric = f_log_derivative(EnergyFactor::III, v, &m).unwrap();
            assert!(
                (numeric - exact).abs() < 1e-8 * exact.abs().max(1.0),
                "v = {v}: {numeric} vs {exact}"
            );
        }
    }

    #[test]
    fn central_difference_is_second_order() {
        let f = |x: f64| x.sin().exp();
        let exact = 0.7f64.cos() * 0.7f64.sin().exp();
        let e1 = (central_difference(f, 0.7, 1e-2) - exact).abs();
        let e2 = (central_difference(f, 0.7, 5e-3) - exact).abs();
        let ratio = e1 / e2;
        assert!((ratio - 4.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn log_derivative_mode_i_step_halving_and_sign() {
        let m = steel();
        let c_r = rayleigh_speed(&m);
        for frac in [0.1, 0.3, 0.5, 0.69, 0.9] {
            let v = frac * c_r;
            let value = f_log_derivative(EnergyFactor::I, v, &m).unwrap();
            // Independent reference: Richardson with a quarter of the step.
            let h = 2.5e-4 * v.min(c_r - v);
            let ln_f = |x: f64| f_factor_i(x, &m).unwrap().ln();
            let d1 = central_difference(ln_f, v, h);
            let d2 = central_difference(ln_f, v, 0.5 * h);
            let reference = (4.0 * d2 - d1) / 3.0;
            assert!(
                (value - reference).abs() < 1e-8 * reference.abs(),
                "frac {frac}: {value} vs {reference}"
            );
        }
        let near = f_log_derivative(EnergyFactor::I, 0.999 * c_r, &m).unwrap();
        assert!(near > 0.0);
    }

    #[test]
    fn coefficient_small_speed_limits() {
        for nu in [0.2, 0.3, 0.4] {
            let m = MaterialParams::new(nu, 1.0).unwrap();
            let limits = coefficient_limits(&m);
            let at = coefficient_functions(1e-4, &m).unwrap();
            for (x, y) in [
                (at.theta13, limits.theta13),
                (at.omega13, limits.omega13),
                (at.omega23, limits.omega23),
                (at.sigma11, limits.sigma11),
                (at.sigma12, limits.sigma12),
            ] {
                assert!((x - y).abs() < 1e-6, "nu {nu}: {x} vs {y}");
            }
            let inv_a2 = 1.0 / (m.a() * m.a());
            assert!((limits.sigma12 + inv_a2 / (1.0 - inv_a2)).abs() < 1e-14);
        }
    }

    #[test]
    fn coefficients_match_literal_formulae() {
        let m = steel();
        let v = 0.69;
        let a2 = m.a() * m.a();
        let alpha = (1.0 - v * v / a2).sqrt();
        let beta = (1.0 - v * v).sqrt();
        let r = naive_r(v, &m);
        let b2 = beta * beta;
        let omega13 = (alpha - beta) / r * (1.0 + b2) * (alpha + 2.0 * beta) - 2.0;
        let omega23 = 2.0 * 0.3 / r * (1.0 + b2) * (alpha * alpha - b2) - 1.0;
        let sigma11 = -(4.0 * alpha * beta - (1.0 + 2.0 * alpha * alpha - b2) * (1.0 + b2)) / r;
        let sigma12 = -2.0 * (1.0 + b2 - 2.0 * alpha * beta) / r;
        let theta13 = sigma11 + v * v / 2.0 * sigma12;
        let c = coefficient_functions(v, &m).unwrap();
        for (x, y) in [
            (c.omega13, omega13),
            (c.omega23, omega23),
            (c.sigma11, sigma11),
            (c.sigma12, sigma12),
            (c.theta13, theta13),
        ] {
            assert!(x.is_finite());
            assert!((x - y).abs() < 1e-12 * y.abs().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn coefficient_domain() {
        let m = steel();
        assert!(coefficient_functions(-1.0, &m).is_err());
        assert!(coefficient_functions(rayleigh_speed(&m), &m).is_err());
        assert_eq!(
            coefficient_functions(1e-8, &m).unwrap(),
            coefficient_limits(&m)
        );
    }

    #[test]
    fn load_state_derived_quantities() {
        let m = steel();
        let load = LoadState::new(&m, 0.5, 2.0, 1.0, 0.0, 0.0, 4.0).unwrap();
        assert!((load.m() - (std::f64::consts::PI / 2.0).sqrt() * 2.0).abs() < 1e-15);
        assert_eq!(load.k0(), 0.5);
        assert!(LoadState::new(&m, 0.95, 1.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(LoadState::new(&m, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }
}
