//! Text formats for survey results.
//!
//! CSV files are comma separated with `.` decimals and 17 significant
//! digits. Each starts with `#`-prefixed `key=value` metadata lines,
//! followed by one column-header line and the data rows. Metadata keys are
//! written in sorted order.

use std::collections::BTreeMap;

use crate::dispersion::Relation;
use crate::error::{Error, Result};
use crate::frontsynth::FrontField;
use crate::kernels::ProviderKind;
use crate::rootfind::SearchRegion;
use crate::survey::{GridMetadata, GridSurvey, SweepResult};

pub const GRID_COLUMNS: &str = "re,im,value";
pub const SWEEP_COLUMNS: &str = "V_over_b,re_eta,im_eta,found";
pub const FRONT_COLUMNS: &str = "x2,phi";

/// Fixed 17-significant-digit scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

pub type Metadata = BTreeMap<String, String>;

/// Data rows with their one-based line numbers.
pub type Rows = Vec<(usize, Vec<String>)>;

fn write_metadata(out: &mut String, meta: &Metadata) {
    for (key, value) in meta {
        debug_assert!(!key.contains('=') && !key.contains('\n'));
        out.push_str(&format!("# {key}={}\n", value.replace('\n', " ")));
    }
}

fn grid_metadata(grid: &GridSurvey) -> Metadata {
    let m = &grid.metadata;
    let r = &grid.region;
    let mut meta = Metadata::new();
    meta.insert("relation".into(), m.relation.to_string());
    meta.insert("V_over_b".into(), fmt_num(m.v_over_b));
    meta.insert("nu".into(), fmt_num(m.nu));
    meta.insert("provider".into(), m.provider.to_string());
    meta.insert("re_min".into(), fmt_num(r.re_min));
    meta.insert("re_max".into(), fmt_num(r.re_max));
    meta.insert("im_min".into(), fmt_num(r.im_min));
    meta.insert("im_max".into(), fmt_num(r.im_max));
    meta.insert("nx".into(), r.nx.to_string());
    meta.insert("ny".into(), r.ny.to_string());
    if let Some(ts) = &m.timestamp {
        meta.insert("timestamp".into(), ts.clone());
    }
    meta
}

/// Grid as CSV; `extra` entries (e.g. a configuration echo) are merged
/// into the metadata block.
pub fn grid_to_csv(grid: &GridSurvey, extra: &Metadata) -> String {
    let mut meta = grid_metadata(grid);
    meta.extend(extra.iter().map(|(k, v)| (k.clone(), v.clone())));
    let mut out = String::new();
    write_metadata(&mut out, &meta);
    out.push_str(GRID_COLUMNS);
    out.push('\n');
    for (idx, value) in grid.values.iter().enumerate() {
        let z = grid.region.point(idx);
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_num(z.re),
            fmt_num(z.im),
            fmt_num(*value)
        ));
    }
    out
}

fn meta_err(key: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        field: key.into(),
        reason: reason.into(),
    }
}

fn meta_f64(meta: &Metadata, key: &str) -> Result<f64> {
    let text = meta
        .get(key)
        .ok_or_else(|| meta_err(key, "missing metadata key"))?;
    text.parse()
        .map_err(|_| meta_err(key, format!("`{text}` is not a number")))
}

fn meta_usize(meta: &Metadata, key: &str) -> Result<usize> {
    let text = meta
        .get(key)
        .ok_or_else(|| meta_err(key, "missing metadata key"))?;
    text.parse()
        .map_err(|_| meta_err(key, format!("`{text}` is not a count")))
}

/// Splits a CSV document into metadata, the column header and data rows
/// (with their one-based line numbers).
pub fn split_csv(text: &str) -> Result<(Metadata, String, Rows)> {
    let mut meta = Metadata::new();
    let mut header = None;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if let Some(rest) = line.strip_prefix('#') {
            let (key, value) = rest
                .trim_start()
                .split_once('=')
                .ok_or_else(|| Error::Parse {
                    line: lineno,
                    field: "metadata".into(),
                    reason: "expected key=value".into(),
                })?;
            meta.insert(key.trim().to_string(), value.to_string());
        } else if line.is_empty() {
            continue;
        } else if header.is_none() {
            header = Some(line.to_string());
        } else {
            rows.push((
                lineno,
                line.split(',').map(|s| s.trim().to_string()).collect(),
            ));
        }
    }
    let header = header.ok_or_else(|| Error::Parse {
        line: 0,
        field: "header".into(),
        reason: "missing column header".into(),
    })?;
    Ok((meta, header, rows))
}

/// Inverse of [`grid_to_csv`]; also returns the full metadata block.
pub fn grid_from_csv(text: &str) -> Result<(GridSurvey, Metadata)> {
    let (meta, header, rows) = split_csv(text)?;
    if header != GRID_COLUMNS {
        return Err(Error::Parse {
            line: 0,
            field: "header".into(),
            reason: format!("expected `{GRID_COLUMNS}`"),
        });
    }
    let relation = match meta.get("relation").map(String::as_str) {
        Some("inplane") => Relation::Inplane,
        Some("corrugation") => Relation::Corrugation,
        Some("mixed") => Relation::Mixed,
        other => return Err(meta_err("relation", format!("unknown relation {other:?}"))),
    };
    let provider = match meta.get("provider").map(String::as_str) {
        Some("synthetic") => ProviderKind::Synthetic,
        Some("tabulated") => ProviderKind::Tabulated,
        Some("reference") => ProviderKind::Reference,
        other => return Err(meta_err("provider", format!("unknown provider {other:?}"))),
    };
    let region = SearchRegion {
        re_min: meta_f64(&meta, "re_min")?,
        re_max: meta_f64(&meta, "re_max")?,
        im_min: meta_f64(&meta, "im_min")?,
        im_max: meta_f64(&meta, "im_max")?,
        nx: meta_usize(&meta, "nx")?,
        ny: meta_usize(&meta, "ny")?,
    };
    region.validate()?;
    if rows.len() != region.len() {
        return Err(Error::Parse {
            line: 0,
            field: "rows".into(),
            reason: format!(
                "{} data rows for a {}x{} grid",
                rows.len(),
                region.nx,
                region.ny
            ),
        });
    }
    let values = rows
        .iter()
        .map(|(line, cols)| {
            if cols.len() != 3 {
                return Err(Error::Parse {
                    line: *line,
                    field: "row".into(),
                    reason: "expected 3 columns".into(),
                });
            }
            cols[2].parse::<f64>().map_err(|_| Error::Parse {
                line: *line,
                field: "value".into(),
                reason: format!("`{}` is not a number", cols[2]),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let metadata = GridMetadata {
        relation,
        v_over_b: meta_f64(&meta, "V_over_b")?,
        nu: meta_f64(&meta, "nu")?,
        provider,
        timestamp: meta.get("timestamp").cloned(),
    };
    Ok((
        GridSurvey {
            region,
            values,
            metadata,
        },
        meta,
    ))
}

pub fn sweep_to_csv(sweep: &SweepResult, meta: &Metadata) -> String {
    let mut out = String::new();
    write_metadata(&mut out, meta);
    out.push_str(SWEEP_COLUMNS);
    out.push('\n');
    for (k, v) in sweep.speeds.iter().enumerate() {
        let (re, im, found) = match sweep.roots[k] {
            Some(eta) => (eta.re, eta.im, true),
            None => (f64::NAN, f64::NAN, false),
        };
        out.push_str(&format!(
            "{},{},{},{found}\n",
            fmt_num(*v),
            fmt_num(re),
            fmt_num(im)
        ));
    }
    out
}

/// One CSV per time slice, in time order.
pub fn front_to_csv(field: &FrontField, meta: &Metadata) -> Vec<String> {
    field
        .times
        .iter()
        .zip(&field.values)
        .enumerate()
        .map(|(i, (t, row))| {
            let mut m = meta.clone();
            m.insert("slice".into(), i.to_string());
            m.insert("t".into(), fmt_num(*t));
            let mut out = String::new();
            write_metadata(&mut out, &m);
            out.push_str(FRONT_COLUMNS);
            out.push('\n');
            for (x, phi) in field.x.iter().zip(row) {
                out.push_str(&format!("{},{}\n", fmt_num(*x), fmt_num(*phi)));
            }
            out
        })
        .collect()
}
