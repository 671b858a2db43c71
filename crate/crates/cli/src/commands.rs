use std::path::{Path, PathBuf};

use crackwave::dispersion::Normalization;
use crackwave::elastodyn::{
    alpha_beta, coefficient_functions, f_factor_i, rayleigh_function, rayleigh_speed,
};
use crackwave::frontsynth::{synthesize, ModalFront, Mode, Window};
use crackwave::kernels::Capability;
use crackwave::output::{fmt_num, front_to_csv, grid_to_csv, sweep_to_csv, Metadata};
use crackwave::rootfind::{grid_scan_with, newton};
use crackwave::survey::{
    attenuation_sweep, critical_speed_search, level_curve_grid, CriticalSpeedOptions, SweepOptions,
};
use crackwave::{Complex64, Error};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::failure::Failure;

fn config_metadata(cfg: &RunConfig) -> Metadata {
    Metadata::from([("config".to_string(), cfg.echo())])
}

fn config_json(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg).expect("configuration serialises")
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| Failure::io(&path, e))?;
    Ok(path)
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json value serialises");
    text.push('\n');
    text
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Elastodynamic coefficients at the configured `(ν, V)`.
pub fn coeffs(cfg: &RunConfig) -> Result<String, Failure> {
    let mat = cfg.material()?;
    let v = cfg.load_state(&mat)?.v;
    let (alpha, beta) = alpha_beta(v, &mat)?;
    let k = coefficient_functions(v, &mat)?;
    let c_r = rayleigh_speed(&mat);
    let rows: [(&str, f64); 14] = [
        ("nu", mat.nu()),
        ("V_over_b", v / mat.b()),
        ("alpha", alpha),
        ("beta", beta),
        ("R", rayleigh_function(v, &mat)?),
        ("f_I", f_factor_i(v, &mat)?),
        ("f_III", cfg.options.mode_iii.eval(v, &mat)?),
        ("theta13", k.theta13),
        ("omega13", k.omega13),
        ("omega23", k.omega23),
        ("sigma11", k.sigma11),
        ("sigma12", k.sigma12),
        ("c_R", c_r),
        ("c_R_over_b", c_r / mat.b()),
    ];
    let text = match cfg.output.format {
        Format::Csv => {
            let mut out = String::new();
            for (key, value) in config_metadata(cfg) {
                out.push_str(&format!("# {key}={value}\n"));
            }
            out.push_str("quantity,value\n");
            for (name, value) in rows {
                out.push_str(&format!("{name},{}\n", fmt_num(value)));
            }
            out
        }
        Format::Json => {
            let mut map: serde_json::Map<String, Value> = rows
                .iter()
                .map(|(n, v)| (n.to_string(), json!(v)))
                .collect();
            map.insert("config".into(), config_json(cfg));
            pretty(&Value::Object(map))
        }
    };
    Ok(text)
}

pub fn grid(cfg: &RunConfig) -> Result<String, Failure> {
    let problem = cfg.problem()?;
    let region = cfg.region()?;
    let grid = level_curve_grid(&problem, &region)?;
    let dir = &cfg.output.directory;
    let csv = write(dir, "grid.csv", &grid_to_csv(&grid, &config_metadata(cfg)))?;
    let mut report = format!("wrote {} ({} points)", csv.display(), grid.values.len());
    if cfg.output.format == Format::Json {
        let doc = json!({
            "config": config_json(cfg),
            "relation": grid.metadata.relation.to_string(),
            "V_over_b": grid.metadata.v_over_b,
            "nu": grid.metadata.nu,
            "provider": grid.metadata.provider.to_string(),
            "region": region,
            "values": grid.values,
        });
        let path = write(dir, "grid.json", &pretty(&doc))?;
        report.push_str(&format!("\nwrote {}", path.display()));
    }
    Ok(report)
}

/// Fails early when the configured kernel cannot be evaluated off the real
/// axis, rather than recording the same failure at every speed.
fn require_complex_plane(cfg: &RunConfig) -> Result<(), Failure> {
    let problem = cfg.problem()?;
    if problem.provider.capability() != Capability::ComplexPlane {
        return Err(Failure::capability(format!(
            "kernel: {} provider cannot be evaluated at complex η",
            problem.provider.kind()
        )));
    }
    Ok(())
}

pub fn sweep(cfg: &RunConfig) -> Result<String, Failure> {
    require_complex_plane(cfg)?;
    let region = cfg.region()?;
    let opts = SweepOptions {
        scan: cfg.scan,
        initial_guess: cfg
            .sweep
            .initial_guess
            .map(|[re, im]| Complex64::new(re, im)),
    };
    let family = |x: f64| cfg.problem_at(x);
    let result = attenuation_sweep(&family, &cfg.sweep.speeds, &region, &opts)
        .map_err(|e| Failure::at("sweep", e))?;
    for (v, err) in result.speeds.iter().zip(&result.errors) {
        if let Some(err) = err {
            eprintln!("warning: V/b = {v}: {err}");
        }
    }
    let dir = &cfg.output.directory;
    let csv = write(
        dir,
        "sweep.csv",
        &sweep_to_csv(&result, &config_metadata(cfg)),
    )?;
    let found = result.roots.iter().filter(|r| r.is_some()).count();
    let mut report = format!(
        "wrote {} ({found} of {} speeds with a root)",
        csv.display(),
        result.len()
    );
    if cfg.output.format == Format::Json {
        let doc = json!({ "config": config_json(cfg), "sweep": result });
        let path = write(dir, "sweep.json", &pretty(&doc))?;
        report.push_str(&format!("\nwrote {}", path.display()));
    }
    Ok(report)
}

pub fn vc(cfg: &RunConfig) -> Result<String, Failure> {
    require_complex_plane(cfg)?;
    let region = cfg.region()?;
    let vc = &cfg.vc;
    let opts = CriticalSpeedOptions {
        criterion: vc.criterion,
        scan: cfg.scan,
        coarse_steps: vc.coarse_steps,
    };
    let family = |x: f64| cfg.problem_at(x);
    let found = critical_speed_search(&family, vc.v_lo, vc.v_hi, vc.tol_v, &region, &opts)
        .map_err(|e| Failure::at("vc", e))?;
    let mat = cfg.material()?;
    let doc = json!({
        "config": config_json(cfg),
        "V_c_over_b": found,
        "c_R_over_b": rayleigh_speed(&mat) / mat.b(),
        "v_lo": vc.v_lo,
        "v_hi": vc.v_hi,
        "tol_v": vc.tol_v,
    });
    let path = write(&cfg.output.directory, "vc.json", &pretty(&doc))?;
    Ok(match found {
        Some(v) => format!("V_c/b = {v}\nwrote {}", path.display()),
        None => format!(
            "no qualifying root in [{}, {}]\nwrote {}",
            vc.v_lo,
            vc.v_hi,
            path.display()
        ),
    })
}

pub fn front(cfg: &RunConfig) -> Result<String, Failure> {
    let problem = cfg.problem()?;
    let fc = &cfg.front;
    if fc.k2.is_empty() || fc.k2.iter().any(|k| !(k.is_finite() && *k != 0.0)) {
        return Err(Failure::config(
            "front.k2: need at least one finite, nonzero wavenumber",
        ));
    }
    let root = match fc.eta_guess {
        Some([re, im]) => newton(
            |z| problem.eval(z),
            Complex64::new(re, im),
            cfg.scan.tol,
            cfg.scan.max_iter,
        )?,
        None => {
            let region = cfg.region()?;
            let roots = grid_scan_with(|z| problem.eval(z), &region, &cfg.scan)?;
            roots
                .into_iter()
                .min_by(|a, b| a.location.im.abs().total_cmp(&b.location.im.abs()))
                .ok_or_else(|| {
                    Failure::from(Error::Measurement(
                        "no dispersion root in the search region".into(),
                    ))
                })?
        }
    };
    let eta = root.location;
    let modes = fc
        .k2
        .iter()
        .map(|&k2| {
            let omega = eta * k2.abs();
            let raw = problem
                .clone()
                .with_normalization(Normalization::Raw { k2 });
            Ok(Mode {
                k2,
                amplitude: fc.amplitude.value(),
                omega,
                residual: raw.eval(omega)?.norm(),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let front = ModalFront {
        modes,
        window: Window {
            x_min: fc.x_min,
            x_max: fc.x_max,
            samples: fc.samples,
        },
        times: fc.times.clone(),
        residual_tol: fc.residual_tol,
    };
    let field = synthesize(&front).map_err(|e| Failure::at("front", e))?;
    let mut meta = config_metadata(cfg);
    meta.insert("re_eta".into(), fmt_num(eta.re));
    meta.insert("im_eta".into(), fmt_num(eta.im));
    let dir = &cfg.output.directory;
    let mut written = Vec::new();
    for (i, text) in front_to_csv(&field, &meta).iter().enumerate() {
        written.push(write(dir, &format!("front_t{i}.csv"), text)?);
    }
    if cfg.output.format == Format::Json {
        let doc = json!({
            "config": config_json(cfg),
            "eta": complex(eta),
            "x2": field.x,
            "times": field.times,
            "phi": field.values,
        });
        written.push(write(dir, "front.json", &pretty(&doc))?);
    }
    Ok(format!(
        "root η = {eta}\nwrote {} files to {}",
        written.len(),
        dir.display()
    ))
}
