//! Map and report serialization: CSV, JSON (lossless round-trip), and PGM
//! heatmaps.

use std::f64::consts::FRAC_2_PI;
use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};
use wigtomo_core::campaign::ReconstructionReport;
use wigtomo_core::protocol::MEASURED_SIGN;
use wigtomo_core::quasiprob::{GridSpec, QuasiDistributionMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Pgm,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "pgm" => Ok(Format::Pgm),
            other => Err(format!("unknown format '{other}' (expected csv, json, or pgm)")),
        }
    }
}

/// Format with 17 significant digits in positional notation: enough for an
/// exact f64 round-trip, matching the documented file contract.
pub fn fmt_sig17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (16 - exponent).clamp(0, 400) as usize;
    let s = format!("{x:.decimals$}");
    if s.parse::<f64>() == Ok(x) {
        s
    } else {
        format!("{x:.*}", decimals + 1)
    }
}

/// CSV: header `re_alpha,im_alpha,value[,stderr]`, rows in row-major grid
/// order, coordinates in shortest round-trip form, values at 17 significant
/// digits.
pub fn write_map_csv(
    map: &QuasiDistributionMap,
    stderr: Option<&[f64]>,
    w: &mut dyn Write,
) -> io::Result<()> {
    if let Some(e) = stderr {
        writeln!(w, "re_alpha,im_alpha,value,stderr")?;
        for (i, (v, s)) in map.values.iter().zip(e.iter()).enumerate() {
            let alpha = map.grid.point(i);
            writeln!(
                w,
                "{},{},{},{}",
                alpha.re,
                alpha.im,
                fmt_sig17(*v),
                fmt_sig17(*s)
            )?;
        }
    } else {
        writeln!(w, "re_alpha,im_alpha,value")?;
        for (i, v) in map.values.iter().enumerate() {
            let alpha = map.grid.point(i);
            writeln!(w, "{},{},{}", alpha.re, alpha.im, fmt_sig17(*v))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub re: f64,
    pub im: f64,
    pub value: f64,
    pub stderr: Option<f64>,
}

/// Parse a CSV map export back into rows.
pub fn read_map_csv(text: &str) -> Result<Vec<CsvRow>, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty CSV")?;
    let has_stderr = match header {
        "re_alpha,im_alpha,value" => false,
        "re_alpha,im_alpha,value,stderr" => true,
        other => return Err(format!("unexpected CSV header '{other}'")),
    };
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let want = if has_stderr { 4 } else { 3 };
        if fields.len() != want {
            return Err(format!("line {}: expected {want} fields", lineno + 2));
        }
        let parse = |s: &str| -> Result<f64, String> {
            s.parse().map_err(|_| format!("bad number '{s}'"))
        };
        rows.push(CsvRow {
            re: parse(fields[0])?,
            im: parse(fields[1])?,
            value: parse(fields[2])?,
            stderr: if has_stderr {
                Some(parse(fields[3])?)
            } else {
                None
            },
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDoc {
    pub re_min: f64,
    pub re_max: f64,
    pub re_count: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub im_count: usize,
}

impl From<GridSpec> for GridDoc {
    fn from(g: GridSpec) -> Self {
        GridDoc {
            re_min: g.re_min,
            re_max: g.re_max,
            re_count: g.re_count,
            im_min: g.im_min,
            im_max: g.im_max,
            im_count: g.im_count,
        }
    }
}

/// JSON document for one quasiprobability map. Numeric values serialize as
/// the shortest decimal that round-trips to the same binary float, so
/// parse(export(m)) reproduces every value exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapDoc {
    pub s: f64,
    pub grid: GridDoc,
    pub dim: usize,
    pub state: String,
    pub measured_sign: f64,
    pub uncontrolled_s: bool,
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stderr: Option<Vec<f64>>,
}

impl MapDoc {
    pub fn from_map(map: &QuasiDistributionMap, stderr: Option<&[f64]>) -> Self {
        MapDoc {
            s: map.s,
            grid: map.grid.into(),
            dim: map.meta.dim,
            state: map.meta.state.clone(),
            measured_sign: MEASURED_SIGN,
            uncontrolled_s: map.meta.uncontrolled_s,
            values: map.values.clone(),
            stderr: stderr.map(|e| e.to_vec()),
        }
    }
}

/// JSON document for a reconstruction report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub reconstructed: MapDoc,
    pub reference: MapDoc,
    pub max_abs_error: f64,
    pub rms_error: f64,
}

impl ReportDoc {
    pub fn from_report(report: &ReconstructionReport) -> Self {
        ReportDoc {
            reconstructed: MapDoc::from_map(
                &report.reconstructed,
                report.stderr_map.as_deref(),
            ),
            reference: MapDoc::from_map(&report.reference, None),
            max_abs_error: report.max_abs_error,
            rms_error: report.rms_error,
        }
    }
}

pub fn write_map_json(
    map: &QuasiDistributionMap,
    stderr: Option<&[f64]>,
    w: &mut dyn Write,
) -> io::Result<()> {
    let doc = MapDoc::from_map(map, stderr);
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)
}

pub fn read_map_json(r: impl Read) -> Result<MapDoc, String> {
    serde_json::from_reader(r).map_err(|e| format!("bad map JSON: {e}"))
}

pub fn write_report_json(report: &ReconstructionReport, w: &mut dyn Write) -> io::Result<()> {
    let doc = ReportDoc::from_report(report);
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)
}

pub fn read_report_json(r: impl Read) -> Result<ReportDoc, String> {
    serde_json::from_reader(r).map_err(|e| format!("bad report JSON: {e}"))
}

/// PGM (P2, maxval 255) heatmap.
///
/// By default values map linearly from `[-2/pi, 2/pi]` (the Wigner bound) to
/// `[0, 255]`, clamped, so heatmaps of different states are visually
/// comparable; `autoscale` maps the actual value range instead. Raster rows
/// run from im_max (top) down to im_min, Re(alpha) left to right.
pub fn write_map_pgm(
    map: &QuasiDistributionMap,
    autoscale: bool,
    w: &mut dyn Write,
) -> io::Result<()> {
    let (lo, hi) = if autoscale {
        let lo = map.values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = map.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    } else {
        (-FRAC_2_PI, FRAC_2_PI)
    };
    let span = hi - lo;
    let g = &map.grid;
    writeln!(w, "P2")?;
    writeln!(
        w,
        "# s {} dim {} state {} grid {}:{}:{},{}:{}:{} rows im_max..im_min scale {}",
        map.s,
        map.meta.dim,
        map.meta.state,
        g.re_min,
        g.re_max,
        g.re_count,
        g.im_min,
        g.im_max,
        g.im_count,
        if autoscale { "auto" } else { "fixed" }
    )?;
    writeln!(w, "{} {}", g.re_count, g.im_count)?;
    writeln!(w, "255")?;
    for row_from_top in 0..g.im_count {
        let row = g.im_count - 1 - row_from_top;
        let mut line = String::new();
        for col in 0..g.re_count {
            let v = map.value_at(row, col);
            let pixel = if span > 0.0 {
                (((v - lo) / span) * 255.0).round().clamp(0.0, 255.0) as u8
            } else {
                0
            };
            if !line.is_empty() {
                line.push(' ');
            }
            line.push_str(&pixel.to_string());
            // Keep raster lines short per the format's 70-char guidance.
            if (col + 1) % 17 == 0 || col + 1 == g.re_count {
                writeln!(w, "{line}")?;
                line.clear();
            }
        }
    }
    Ok(())
}
