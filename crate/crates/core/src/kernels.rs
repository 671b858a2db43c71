//! Fourier symbols `Q̄ᵢⱼ(ω, k₂)` of the crack-face convolution matrix.
//!
//! Every provider honours three structural contracts:
//!
//! * positive homogeneity of degree one, `Q̄(sω, sk₂) = s·Q̄(ω, k₂)` for `s > 0`;
//! * conjugate symmetry, `Q̄(−ω̄, −k₂) = conj Q̄(ω, k₂)`;
//! * block-diagonal structure: the in-plane shear block `{11, 12, 21, 22}`
//!   and the scalar opening entry `33`; all mixed entries vanish.
//!
//! Square roots use the principal branch. On its cut (real `ω` with
//! `|ω| > v₀|k₂|`) the value is the limit from `Im ω < 0`, the decaying
//! side, which keeps real-ray values conjugate-symmetric and continuous
//! across `k₂ = 0`. Tables store ray angles in `[0, π)` only and serve the
//! other half-plane by conjugate reflection.

use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of ray angles in a kernel table.
pub const MIN_TABLE_ANGLES: usize = 64;

/// The five entries of `Q̄` that may be non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockComponent {
    Q11,
    Q12,
    Q21,
    Q22,
    Q33,
}

impl BlockComponent {
    pub const ALL: [BlockComponent; 5] = [
        BlockComponent::Q11,
        BlockComponent::Q12,
        BlockComponent::Q21,
        BlockComponent::Q22,
        BlockComponent::Q33,
    ];

    /// Maps a one-based index pair onto a block entry; `None` for the
    /// structurally zero entries.
    pub fn from_indices(i: usize, j: usize) -> Result<Option<Self>> {
        if !(1..=3).contains(&i) || !(1..=3).contains(&j) {
            return Err(Error::Range(format!("component ({i},{j}) outside 1..=3")));
        }
        Ok(match (i, j) {
            (1, 1) => Some(Self::Q11),
            (1, 2) => Some(Self::Q12),
            (2, 1) => Some(Self::Q21),
            (2, 2) => Some(Self::Q22),
            (3, 3) => Some(Self::Q33),
            _ => None,
        })
    }

    pub fn indices(self) -> (usize, usize) {
        match self {
            Self::Q11 => (1, 1),
            Self::Q12 => (1, 2),
            Self::Q21 => (2, 1),
            Self::Q22 => (2, 2),
            Self::Q33 => (3, 3),
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BlockComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.indices();
        write!(f, "Q{i}{j}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Capability {
    /// Real `ω` only.
    RealRay,
    /// Arbitrary complex `ω`.
    ComplexPlane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProviderKind {
    Synthetic,
    Tabulated,
    Reference,
}

impl fmt::Display for ProviderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProviderKind::Synthetic => "synthetic",
            ProviderKind::Tabulated => "tabulated",
            ProviderKind::Reference => "reference",
        })
    }
}

/// `c·√(v₀²k₂² − ω²) + d·iω` on the principal square-root branch.
///
/// Conjugate-symmetric when `c` and `d` are real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchTerm {
    pub c: Complex64,
    pub d: Complex64,
    pub v0: f64,
}

impl BranchTerm {
    pub const ZERO: BranchTerm = BranchTerm {
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(0.0, 0.0),
        v0: 1.0,
    };

    pub fn new(c: f64, d: f64, v0: f64) -> Self {
        Self {
            c: Complex64::new(c, 0.0),
            d: Complex64::new(d, 0.0),
            v0,
        }
    }

    pub fn eval(&self, omega: Complex64, k2: f64) -> Complex64 {
        self.c * sonic_root(self.v0, omega, k2) + self.d * Complex64::i() * omega
    }

    fn validate(&self, name: BlockComponent) -> Result<()> {
        let finite = [self.c.re, self.c.im, self.d.re, self.d.im, self.v0]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::invalid(
                "synthetic",
                format!("{name}: non-finite parameter"),
            ));
        }
        if !(self.v0 > 0.0) {
            return Err(Error::invalid(
                "synthetic",
                format!("{name}: branch speed v0 = {} must be positive", self.v0),
            ));
        }
        Ok(())
    }
}

/// `√(v₀²k₂² − ω²)`, principal branch, approached from `Im ω < 0` on the cut.
pub fn sonic_root(v0: f64, omega: Complex64, k2: f64) -> Complex64 {
    let radicand = Complex64::new(v0 * v0 * k2 * k2, 0.0) - omega * omega;
    if radicand.im == 0.0 && radicand.re < 0.0 {
        // Only reachable for real ω.
        return Complex64::new(0.0, omega.re.signum() * (-radicand.re).sqrt());
    }
    radicand.sqrt()
}

/// Parameters of the synthetic provider, one [`BranchTerm`] per block entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticParams {
    pub q11: BranchTerm,
    pub q12: BranchTerm,
    pub q21: BranchTerm,
    pub q22: BranchTerm,
    pub q33: BranchTerm,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        Self::uniform(BranchTerm::ZERO)
    }
}

impl SyntheticParams {
    pub fn uniform(term: BranchTerm) -> Self {
        Self {
            q11: term,
            q12: term,
            q21: term,
            q22: term,
            q33: term,
        }
    }

    pub fn term(&self, component: BlockComponent) -> &BranchTerm {
        match component {
            BlockComponent::Q11 => &self.q11,
            BlockComponent::Q12 => &self.q12,
            BlockComponent::Q21 => &self.q21,
            BlockComponent::Q22 => &self.q22,
            BlockComponent::Q33 => &self.q33,
        }
    }

    pub fn term_mut(&mut self, component: BlockComponent) -> &mut BranchTerm {
        match component {
            BlockComponent::Q11 => &mut self.q11,
            BlockComponent::Q12 => &mut self.q12,
            BlockComponent::Q21 => &mut self.q21,
            BlockComponent::Q22 => &mut self.q22,
            BlockComponent::Q33 => &mut self.q33,
        }
    }

    pub fn with(mut self, component: BlockComponent, term: BranchTerm) -> Self {
        *self.term_mut(component) = term;
        self
    }

    /// True when every coefficient is real, i.e. the provider is
    /// conjugate-symmetric.
    pub fn is_real(&self) -> bool {
        BlockComponent::ALL
            .iter()
            .all(|&c| self.term(c).c.im == 0.0 && self.term(c).d.im == 0.0)
    }
}

/// Closed-form kernel symbol supplied from outside the crate.
///
/// Implementations are queried only for the five block entries and never
/// at the origin; homogeneity and conjugate symmetry are theirs to honour.
pub trait KernelSymbol: fmt::Debug + Send + Sync {
    fn eval(&self, component: BlockComponent, omega: Complex64, k2: f64) -> Complex64;

    fn capability(&self) -> Capability {
        Capability::ComplexPlane
    }
}

/// Kernel values sampled on the unit circle of the `(k₂, ω)` plane.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTable {
    pub nu: f64,
    pub v_over_b: f64,
    /// Ray angles `θ = atan2(ω, k₂)` in `[0, π)`, strictly increasing.
    pub angles: Vec<f64>,
    /// One column per [`BlockComponent`], in `BlockComponent::ALL` order.
    pub entries: [Vec<Complex64>; 5],
}

impl KernelTable {
    /// Samples any real-ray evaluable provider at `n` equally spaced angles.
    pub fn sample(provider: &KernelProvider, n: usize, nu: f64, v_over_b: f64) -> Result<Self> {
        let angles: Vec<f64> = (0..n)
            .map(|j| std::f64::consts::PI * j as f64 / n as f64)
            .collect();
        let mut entries: [Vec<Complex64>; 5] = Default::default();
        for comp in BlockComponent::ALL {
            entries[comp.slot()] = angles
                .iter()
                .map(|&theta| {
                    provider.qbar_component(comp, Complex64::new(theta.sin(), 0.0), theta.cos())
                })
                .collect::<Result<_>>()?;
        }
        let table = Self {
            nu,
            v_over_b,
            angles,
            entries,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn column(&self, component: BlockComponent) -> &[Complex64] {
        &self.entries[component.slot()]
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.angles.len();
        if n < MIN_TABLE_ANGLES {
            return Err(Error::Parse {
                line: 3,
                field: "N".into(),
                reason: format!("{n} angles, at least {MIN_TABLE_ANGLES} required"),
            });
        }
        for (idx, w) in self.angles.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::Parse {
                    line: idx + 5,
                    field: "theta".into(),
                    reason: format!("angles not strictly increasing ({} then {})", w[0], w[1]),
                });
            }
        }
        for (idx, &theta) in self.angles.iter().enumerate() {
            if !(0.0..std::f64::consts::PI).contains(&theta) {
                return Err(Error::Parse {
                    line: idx + 4,
                    field: "theta".into(),
                    reason: format!("angle {theta} outside [0, π)"),
                });
            }
        }
        for comp in BlockComponent::ALL {
            let column = self.column(comp);
            if column.len() != n {
                return Err(Error::Parse {
                    line: 0,
                    field: comp.to_string(),
                    reason: format!("{} values for {n} angles", column.len()),
                });
            }
            if let Some(idx) = column
                .iter()
                .position(|z| !z.re.is_finite() || !z.im.is_finite())
            {
                return Err(Error::Parse {
                    line: idx + 4,
                    field: comp.to_string(),
                    reason: "non-finite value".into(),
                });
            }
        }
        Ok(())
    }

    /// Parses the whitespace-separated text format: `nu`, `V_over_b`, the
    /// angle count `N`, then `N` rows of `θ` followed by real and imaginary
    /// parts of Q11, Q12, Q21, Q22, Q33. Blank lines and `#` comments are
    /// skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let mut header = |field: &str| -> Result<(usize, String)> {
            lines
                .next()
                .map(|(n, l)| (n, l.to_string()))
                .ok_or_else(|| Error::Parse {
                    line: 0,
                    field: field.into(),
                    reason: "unexpected end of file".into(),
                })
        };
        let (line, nu_text) = header("nu")?;
        let nu = parse_f64(&nu_text, line, "nu")?;
        let (line, v_text) = header("V_over_b")?;
        let v_over_b = parse_f64(&v_text, line, "V_over_b")?;
        let (line, n_text) = header("N")?;
        let n: usize = n_text.parse().map_err(|_| Error::Parse {
            line,
            field: "N".into(),
            reason: format!("`{n_text}` is not a count"),
        })?;
        if n < MIN_TABLE_ANGLES {
            return Err(Error::Parse {
                line,
                field: "N".into(),
                reason: format!("{n} angles, at least {MIN_TABLE_ANGLES} required"),
            });
        }

        const FIELDS: [&str; 11] = [
            "theta", "Re(Q11)", "Im(Q11)", "Re(Q12)", "Im(Q12)", "Re(Q21)", "Im(Q21)", "Re(Q22)",
            "Im(Q22)", "Re(Q33)", "Im(Q33)",
        ];
        let mut angles = Vec::with_capacity(n);
        let mut entries: [Vec<Complex64>; 5] = Default::default();
        let mut prev: Option<(usize, f64)> = None;
        for row in 0..n {
            let (line, text) = lines.next().ok_or_else(|| Error::Parse {
                line: 0,
                field: "theta".into(),
                reason: format!("expected {n} rows, found {row}"),
            })?;
            let tokens: Vec<&str> = text.split_whitespace().collect();
            if tokens.len() != FIELDS.len() {
                let field = FIELDS.get(tokens.len()).copied().unwrap_or("row");
                return Err(Error::Parse {
                    line,
                    field: field.into(),
                    reason: format!("expected {} columns, found {}", FIELDS.len(), tokens.len()),
                });
            }
            let values = tokens
                .iter()
                .zip(FIELDS)
                .map(|(tok, field)| parse_f64(tok, line, field))
                .collect::<Result<Vec<f64>>>()?;
            let theta = values[0];
            if let Some((_, last)) = prev {
                if !(theta > last) {
                    return Err(Error::Parse {
                        line,
                        field: "theta".into(),
                        reason: format!("angles not strictly increasing ({last} then {theta})"),
                    });
                }
            }
            if !(0.0..std::f64::consts::PI).contains(&theta) {
                return Err(Error::Parse {
                    line,
                    field: "theta".into(),
                    reason: format!("angle {theta} outside [0, π)"),
                });
            }
            prev = Some((line, theta));
            angles.push(theta);
            for (slot, column) in entries.iter_mut().enumerate() {
                column.push(Complex64::new(values[1 + 2 * slot], values[2 + 2 * slot]));
            }
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                field: "row".into(),
                reason: format!("more than the declared {n} rows"),
            });
        }
        let table = Self {
            nu,
            v_over_b,
            angles,
            entries,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:.16e}\n{:.16e}\n{}\n",
            self.nu,
            self.v_over_b,
            self.angles.len()
        ));
        for (row, theta) in self.angles.iter().enumerate() {
            out.push_str(&format!("{theta:.16e}"));
            for comp in BlockComponent::ALL {
                let z = self.column(comp)[row];
                out.push_str(&format!(" {:.16e} {:.16e}", z.re, z.im));
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn parse_f64(text: &str, line: usize, field: &str) -> Result<f64> {
    let value: f64 = text.trim().parse().map_err(|_| Error::Parse {
        line,
        field: field.into(),
        reason: format!("`{text}` is not a number"),
    })?;
    if !value.is_finite() {
        return Err(Error::Parse {
            line,
            field: field.into(),
            reason: "non-finite value".into(),
        });
    }
    Ok(value)
}

#[derive(Debug, Clone)]
struct TabulatedKernel {
    table: KernelTable,
    interpolate: bool,
}

impl TabulatedKernel {
    /// Value on the unit circle at `theta ∈ [0, π)`.
    fn unit_value(&self, comp: BlockComponent, theta: f64) -> Result<Complex64> {
        let angles = &self.table.angles;
        let column = self.table.column(comp);
        let n = angles.len();
        let idx = angles.partition_point(|&a| a < theta);
        if idx < n && angles[idx] == theta {
            return Ok(column[idx]);
        }
        if !self.interpolate {
            return Err(Error::Range(format!(
                "ray angle {theta} is not a stored angle and interpolation is disabled"
            )));
        }
        // Periodic continuation: the value at θ + π is the conjugate of the value at θ.
        let pi = std::f64::consts::PI;
        let (t0, v0, t1, v1) = if idx == 0 {
            (
                angles[n - 1] - pi,
                column[n - 1].conj(),
                angles[0],
                column[0],
            )
        } else if idx == n {
            (
                angles[n - 1],
                column[n - 1],
                angles[0] + pi,
                column[0].conj(),
            )
        } else {
            (angles[idx - 1], column[idx - 1], angles[idx], column[idx])
        };
        let w = (theta - t0) / (t1 - t0);
        Ok(v0 + (v1 - v0) * w)
    }

    fn eval(&self, comp: BlockComponent, omega: f64, k2: f64) -> Result<Complex64> {
        let pi = std::f64::consts::PI;
        let radius = omega.hypot(k2);
        let theta = omega.atan2(k2);
        let (theta, reflect) = if theta < 0.0 {
            (theta + pi, true)
        } else if theta >= pi {
            (theta - pi, true)
        } else {
            (theta, false)
        };
        // Rounding in θ + π can land exactly on π.
        let (theta, reflect) = if theta >= pi {
            (0.0, !reflect)
        } else {
            (theta, reflect)
        };
        let unit = self.unit_value(comp, theta)?;
        let unit = if reflect { unit.conj() } else { unit };
        Ok(unit * radius)
    }
}

#[derive(Debug, Clone)]
enum Source {
    Synthetic(SyntheticParams),
    Tabulated(TabulatedKernel),
    Reference(Arc<dyn KernelSymbol>),
}

/// Evaluator of `Q̄` for one material and crack speed.
#[derive(Debug, Clone)]
pub struct KernelProvider {
    source: Source,
    nu: Option<f64>,
    v_over_b: Option<f64>,
}

/// Complex-plane provider whose in-block entries are [`BranchTerm`]s.
pub fn make_synthetic(params: SyntheticParams) -> Result<KernelProvider> {
    for comp in BlockComponent::ALL {
        params.term(comp).validate(comp)?;
    }
    Ok(KernelProvider {
        source: Source::Synthetic(params),
        nu: None,
        v_over_b: None,
    })
}

/// Real-ray provider backed by a kernel table file.
pub fn load_table(path: impl AsRef<Path>) -> Result<KernelProvider> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(KernelProvider::from_table(KernelTable::parse(&text)?))
}

impl KernelProvider {
    pub fn from_table(table: KernelTable) -> Self {
        let (nu, v_over_b) = (table.nu, table.v_over_b);
        KernelProvider {
            source: Source::Tabulated(TabulatedKernel {
                table,
                interpolate: true,
            }),
            nu: Some(nu),
            v_over_b: Some(v_over_b),
        }
    }

    /// Provider backed by externally supplied closed forms.
    pub fn reference(symbol: Arc<dyn KernelSymbol>) -> Self {
        KernelProvider {
            source: Source::Reference(symbol),
            nu: None,
            v_over_b: None,
        }
    }

    /// Tags the provider with the material and speed its symbols belong to.
    pub fn at_speed(mut self, nu: f64, v_over_b: f64) -> Self {
        self.nu = Some(nu);
        self.v_over_b = Some(v_over_b);
        self
    }

    /// Restricts a tabulated provider to its stored angles.
    pub fn without_interpolation(mut self) -> Self {
        if let Source::Tabulated(tab) = &mut self.source {
            tab.interpolate = false;
        }
        self
    }

    pub fn kind(&self) -> ProviderKind {
        match self.source {
            Source::Synthetic(_) => ProviderKind::Synthetic,
            Source::Tabulated(_) => ProviderKind::Tabulated,
            Source::Reference(_) => ProviderKind::Reference,
        }
    }

    pub fn capability(&self) -> Capability {
        match &self.source {
            Source::Synthetic(_) => Capability::ComplexPlane,
            Source::Tabulated(_) => Capability::RealRay,
            Source::Reference(symbol) => symbol.capability(),
        }
    }

    pub fn nu(&self) -> Option<f64> {
        self.nu
    }

    pub fn v_over_b(&self) -> Option<f64> {
        self.v_over_b
    }

    pub fn synthetic_params(&self) -> Option<&SyntheticParams> {
        match &self.source {
            Source::Synthetic(p) => Some(p),
            _ => None,
        }
    }

    pub fn table(&self) -> Option<&KernelTable> {
        match &self.source {
            Source::Tabulated(t) => Some(&t.table),
            _ => None,
        }
    }

    /// `Q̄ᵢⱼ(ω, k₂)` for a one-based index pair.
    pub fn qbar(&self, i: usize, j: usize, omega: Complex64, k2: f64) -> Result<Complex64> {
        match BlockComponent::from_indices(i, j)? {
            Some(comp) => self.qbar_component(comp, omega, k2),
            None => Ok(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn qbar_component(
        &self,
        component: BlockComponent,
        omega: Complex64,
        k2: f64,
    ) -> Result<Complex64> {
        if !(omega.re.is_finite() && omega.im.is_finite() && k2.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite argument ({omega}, {k2})"
            )));
        }
        if omega == Complex64::new(0.0, 0.0) && k2 == 0.0 {
            return Err(Error::Domain("Q̄ is not defined at (ω, k₂) = (0, 0)".into()));
        }
        if omega.im != 0.0 && self.capability() == Capability::RealRay {
            return Err(Error::Capability(format!(
                "{} provider evaluates real rays only, got ω = {omega}",
                self.kind()
            )));
        }
        match &self.source {
            Source::Tabulated(tab) => tab.eval(component, omega.re, k2),
            Source::Synthetic(params) => Ok(params.term(component).eval(omega, k2)),
            Source::Reference(symbol) => Ok(symbol.eval(component, omega, k2)),
        }
    }
}
