//! Text and image formats for far-field data, maps, curves and peak lists.
//!
//! Floating-point numbers are written in scientific notation with 17
//! significant digits, which round-trips every `f64` exactly.
//!
//! Far-field CSV:
//!
//! ```text
//! mode,n_tx,n_rx,k0
//! multistatic,36,36,1.5707963267948966e1
//! l,n,re,im
//! 0,0,<re>,<im>
//! ...
//! ```
//!
//! Mono-static files use `n_tx = n_rx = N` and rows with `l = n`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::forward::{AcquisitionMode, FarFieldData};
use crate::imaging::{IndicatorKind, IndicatorMap};
use crate::metrics::{JaccardCurve, Peak};
use crate::scene::SamplingGrid;
use crate::specialfn::Complex;

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn farfield_to_csv(data: &FarFieldData) -> String {
    let mut out = String::new();
    out.push_str("mode,n_tx,n_rx,k0\n");
    let _ = writeln!(
        out,
        "{},{},{},{}",
        data.mode().as_str(),
        data.n_tx(),
        data.n_rx(),
        fmt_f64(data.wavenumber())
    );
    out.push_str("l,n,re,im\n");
    for ((l, n), v) in data.index_pairs().zip(data.values()) {
        let _ = writeln!(out, "{l},{n},{},{}", fmt_f64(v.re), fmt_f64(v.im));
    }
    out
}

struct Lines<'a> {
    path: &'a Path,
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(path: &'a Path, text: &'a str) -> Self {
        Lines {
            path,
            inner: text.lines().enumerate(),
        }
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((i, l)) => Ok((i + 1, l.trim_end_matches('\r'))),
            None => Err(Error::parse(
                self.path,
                0,
                format!("unexpected end of file, expected {what}"),
            )),
        }
    }

    fn header(&mut self, expected: &str) -> Result<()> {
        let (line, text) = self.expect("header")?;
        if text != expected {
            return Err(Error::parse(
                self.path,
                line,
                format!("expected header `{expected}`, found `{text}`"),
            ));
        }
        Ok(())
    }
}

fn field<T: std::str::FromStr>(path: &Path, line: usize, raw: &str, name: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::parse(path, line, format!("cannot parse {name} from `{raw}`")))
}

fn split<'a>(path: &Path, line: usize, text: &'a str, n: usize) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != n {
        return Err(Error::parse(
            path,
            line,
            format!("expected {n} comma-separated fields, found {}", parts.len()),
        ));
    }
    Ok(parts)
}

pub fn farfield_from_csv(path: &Path, text: &str) -> Result<FarFieldData> {
    let mut lines = Lines::new(path, text);
    lines.header("mode,n_tx,n_rx,k0")?;
    let (line, meta) = lines.expect("metadata row")?;
    let parts = split(path, line, meta, 4)?;
    let mode: AcquisitionMode = parts[0]
        .parse()
        .map_err(|_| Error::parse(path, line, format!("unknown mode `{}`", parts[0])))?;
    let n_tx: usize = field(path, line, parts[1], "n_tx")?;
    let n_rx: usize = field(path, line, parts[2], "n_rx")?;
    let k0: f64 = field(path, line, parts[3], "k0")?;
    lines.header("l,n,re,im")?;
    let expected = match mode {
        AcquisitionMode::Monostatic => n_rx,
        AcquisitionMode::Multistatic => n_tx * n_rx,
    };
    let mut values = Vec::with_capacity(expected);
    for (i, raw) in lines.inner.by_ref() {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.is_empty() {
            continue;
        }
        let p = split(path, line, raw, 4)?;
        let l: usize = field(path, line, p[0], "l")?;
        let n: usize = field(path, line, p[1], "n")?;
        let k = values.len();
        let (el, en) = match mode {
            AcquisitionMode::Monostatic => (k, k),
            AcquisitionMode::Multistatic if n_rx > 0 => (k / n_rx, k % n_rx),
            AcquisitionMode::Multistatic => (0, 0),
        };
        if k >= expected || (l, n) != (el, en) {
            return Err(Error::parse(
                path,
                line,
                format!("unexpected index pair ({l},{n}), expected ({el},{en})"),
            ));
        }
        let re: f64 = field(path, line, p[2], "re")?;
        let im: f64 = field(path, line, p[3], "im")?;
        values.push(Complex::new(re, im));
    }
    if values.len() != expected {
        return Err(Error::parse(
            path,
            text.lines().count(),
            format!("expected {expected} data rows, found {}", values.len()),
        ));
    }
    FarFieldData::new(mode, n_tx, n_rx, k0, values).map_err(|e| Error::parse(path, 2, e.to_string()))
}

pub fn map_to_csv(map: &IndicatorMap) -> String {
    let mut out = String::from("ix,iy,x,y,value\n");
    for iy in 0..map.grid.ny {
        for ix in 0..map.grid.nx {
            let p = map.grid.point(ix, iy);
            let _ = writeln!(
                out,
                "{ix},{iy},{},{},{}",
                fmt_f64(p.x),
                fmt_f64(p.y),
                fmt_f64(map.value_at(ix, iy))
            );
        }
    }
    out
}

/// Reads a map written by [`map_to_csv`], checking it against `grid`.
pub fn map_from_csv(
    path: &Path,
    text: &str,
    grid: &SamplingGrid,
    kind: IndicatorKind,
) -> Result<IndicatorMap> {
    let mut lines = Lines::new(path, text);
    lines.header("ix,iy,x,y,value")?;
    let mut values = Vec::with_capacity(grid.len());
    let tol = 1e-9 * grid.pixel;
    for (i, raw) in lines.inner.by_ref() {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.is_empty() {
            continue;
        }
        let p = split(path, line, raw, 5)?;
        let ix: usize = field(path, line, p[0], "ix")?;
        let iy: usize = field(path, line, p[1], "iy")?;
        let k = values.len();
        if k >= grid.len() || (ix, iy) != grid.coords(k) {
            return Err(Error::parse(path, line, format!("unexpected pixel ({ix},{iy})")));
        }
        let x: f64 = field(path, line, p[2], "x")?;
        let y: f64 = field(path, line, p[3], "y")?;
        let c = grid.point(ix, iy);
        if (x - c.x).abs() > tol || (y - c.y).abs() > tol {
            return Err(Error::parse(
                path,
                line,
                format!("pixel ({ix},{iy}) at ({x},{y}) does not match the configured grid"),
            ));
        }
        values.push(field::<f64>(path, line, p[4], "value")?);
    }
    if values.len() != grid.len() {
        return Err(Error::parse(
            path,
            text.lines().count(),
            format!("expected {} pixels, found {}", grid.len(), values.len()),
        ));
    }
    IndicatorMap::from_normalized(*grid, values, kind).map_err(|e| Error::parse(path, 1, e.to_string()))
}

/// Binary 8-bit PGM, top row = largest `y`.
pub fn map_to_pgm(map: &IndicatorMap) -> Vec<u8> {
    let g = &map.grid;
    let mut out = format!("P5\n{} {}\n255\n", g.nx, g.ny).into_bytes();
    for iy in (0..g.ny).rev() {
        for ix in 0..g.nx {
            let v = map.value_at(ix, iy).clamp(0.0, 1.0);
            out.push((v * 255.0).round() as u8);
        }
    }
    out
}

pub fn curve_to_csv(curve: &JaccardCurve) -> String {
    let mut out = String::from("kappa,score_percent\n");
    for (k, s) in curve.thresholds.iter().zip(&curve.scores) {
        let _ = writeln!(out, "{},{}", fmt_f64(*k), fmt_f64(*s));
    }
    out
}

pub fn curve_from_csv(path: &Path, text: &str) -> Result<JaccardCurve> {
    let mut lines = Lines::new(path, text);
    lines.header("kappa,score_percent")?;
    let mut curve = JaccardCurve {
        thresholds: Vec::new(),
        scores: Vec::new(),
    };
    for (i, raw) in lines.inner.by_ref() {
        let line = i + 1;
        let raw = raw.trim_end_matches('\r');
        if raw.is_empty() {
            continue;
        }
        let p = split(path, line, raw, 2)?;
        curve.thresholds.push(field(path, line, p[0], "kappa")?);
        curve.scores.push(field(path, line, p[1], "score")?);
    }
    Ok(curve)
}

pub fn peaks_to_csv(peaks: &[Peak]) -> String {
    let mut out = String::from("rank,x,y,value\n");
    for (rank, p) in peaks.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            rank + 1,
            fmt_f64(p.location.x),
            fmt_f64(p.location.y),
            fmt_f64(p.value)
        );
    }
    out
}
