//! Shared text format for field files.
//!
//! One header line
//!
//! ```text
//! swtorus-field v1 kind=<scalar|oneform|twoform|selfdual|spinor+|spinor-> dims=n1,n2,n3,n4 h=<float>
//! ```
//!
//! followed by one line per site in lexicographic site order; components are
//! space-separated decimals, complex components as `re,im` pairs. Floats are
//! printed in shortest round-trip form, so write/read is bit exact.

use crate::clifford::{SpinorMinus, SpinorPlus};
use crate::dirac::{SpinorMinusField, SpinorPlusField};
use crate::error::{Result, SwtError};
use crate::lattice::{Lattice, OneForm, ScalarField, SelfDualField, TwoForm};
use num_complex::Complex;
use std::fmt::Write as _;
use std::path::Path;

pub type C64 = Complex<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Scalar,
    OneForm,
    TwoForm,
    SelfDual,
    SpinorPlus,
    SpinorMinus,
}

impl FieldKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FieldKind::Scalar => "scalar",
            FieldKind::OneForm => "oneform",
            FieldKind::TwoForm => "twoform",
            FieldKind::SelfDual => "selfdual",
            FieldKind::SpinorPlus => "spinor+",
            FieldKind::SpinorMinus => "spinor-",
        }
    }

    pub fn parse(s: &str) -> Option<FieldKind> {
        Some(match s {
            "scalar" => FieldKind::Scalar,
            "oneform" => FieldKind::OneForm,
            "twoform" => FieldKind::TwoForm,
            "selfdual" => FieldKind::SelfDual,
            "spinor+" => FieldKind::SpinorPlus,
            "spinor-" => FieldKind::SpinorMinus,
            _ => return None,
        })
    }
}

fn header(kind: FieldKind, lat: &Lattice) -> String {
    let d = lat.dims();
    format!(
        "swtorus-field v1 kind={} dims={},{},{},{} h={}",
        kind.as_str(),
        d[0],
        d[1],
        d[2],
        d[3],
        lat.h()
    )
}

fn parse_header(line: &str) -> Result<(FieldKind, Lattice)> {
    let bad = |msg: String| SwtError::Snapshot { line: 1, msg };
    let mut parts = line.split_whitespace();
    if parts.next() != Some("swtorus-field") || parts.next() != Some("v1") {
        return Err(bad("expected `swtorus-field v1` header".into()));
    }
    let mut kind = None;
    let mut dims = None;
    let mut h = None;
    for tok in parts {
        if let Some(v) = tok.strip_prefix("kind=") {
            kind = Some(
                FieldKind::parse(v)
                    .ok_or_else(|| bad(format!("unknown field kind `{v}`")))?,
            );
        } else if let Some(v) = tok.strip_prefix("dims=") {
            let ns: Vec<usize> = v
                .split(',')
                .map(|s| s.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| bad(format!("bad dims `{v}`: {e}")))?;
            if ns.len() != 4 {
                return Err(bad(format!("dims must have 4 entries, got `{v}`")));
            }
            dims = Some([ns[0], ns[1], ns[2], ns[3]]);
        } else if let Some(v) = tok.strip_prefix("h=") {
            h = Some(
                v.parse::<f64>()
                    .map_err(|e| bad(format!("bad spacing `{v}`: {e}")))?,
            );
        } else {
            return Err(bad(format!("unexpected header token `{tok}`")));
        }
    }
    let kind = kind.ok_or_else(|| bad("missing kind".into()))?;
    let dims = dims.ok_or_else(|| bad("missing dims".into()))?;
    let h = h.ok_or_else(|| bad("missing h".into()))?;
    let lat = Lattice::new(dims, h).map_err(|e| bad(e.to_string()))?;
    Ok((kind, lat))
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.parse::<f64>().map_err(|e| SwtError::Snapshot {
        line,
        msg: format!("bad float `{tok}`: {e}"),
    })
}

fn parse_c64(tok: &str, line: usize) -> Result<C64> {
    let (re, im) = tok.split_once(',').ok_or_else(|| SwtError::Snapshot {
        line,
        msg: format!("expected `re,im` pair, got `{tok}`"),
    })?;
    Ok(C64::new(parse_f64(re, line)?, parse_f64(im, line)?))
}

fn fmt_c64(z: &C64) -> String {
    format!("{},{}", z.re, z.im)
}

fn read_lines(path: &Path, expect: FieldKind) -> Result<(Lattice, Vec<Vec<String>>)> {
    let content = std::fs::read_to_string(path)?;
    let mut lines = content.lines();
    let first = lines.next().ok_or(SwtError::Snapshot {
        line: 1,
        msg: "empty file".into(),
    })?;
    let (kind, lat) = parse_header(first)?;
    if kind != expect {
        return Err(SwtError::Snapshot {
            line: 1,
            msg: format!("expected kind={}, found kind={}", expect.as_str(), kind.as_str()),
        });
    }
    let mut rows = Vec::with_capacity(lat.n_sites());
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        rows.push((
            i + 2,
            line.split_whitespace().map(str::to_owned).collect::<Vec<_>>(),
        ));
    }
    if rows.len() != lat.n_sites() {
        return Err(SwtError::Snapshot {
            line: rows.len() + 1,
            msg: format!("expected {} site lines, found {}", lat.n_sites(), rows.len()),
        });
    }
    // Keep the original line numbers alongside the tokens.
    let mut out = Vec::with_capacity(rows.len());
    for (lineno, toks) in rows {
        let mut with_line = Vec::with_capacity(toks.len() + 1);
        with_line.push(lineno.to_string());
        with_line.extend(toks);
        out.push(with_line);
    }
    Ok((lat, out))
}

fn expect_tokens(row: &[String], count: usize) -> Result<usize> {
    let line: usize = row[0].parse().unwrap_or(0);
    if row.len() - 1 != count {
        return Err(SwtError::Snapshot {
            line,
            msg: format!("expected {count} components, found {}", row.len() - 1),
        });
    }
    Ok(line)
}

pub fn write_scalar(path: &Path, f: &ScalarField) -> Result<()> {
    let mut out = header(FieldKind::Scalar, &f.lat);
    for v in &f.vals {
        let _ = write!(out, "\n{}", fmt_c64(v));
    }
    out.push('\n');
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_scalar(path: &Path) -> Result<ScalarField> {
    let (lat, rows) = read_lines(path, FieldKind::Scalar)?;
    let mut vals = Vec::with_capacity(rows.len());
    for row in &rows {
        let line = expect_tokens(row, 1)?;
        vals.push(parse_c64(&row[1], line)?);
    }
    Ok(ScalarField { lat, vals })
}

pub fn write_one_form(path: &Path, f: &OneForm) -> Result<()> {
    let mut out = header(FieldKind::OneForm, &f.lat);
    for v in &f.vals {
        let _ = write!(out, "\n{} {} {} {}", v[0], v[1], v[2], v[3]);
    }
    out.push('\n');
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_one_form(path: &Path) -> Result<OneForm> {
    let (lat, rows) = read_lines(path, FieldKind::OneForm)?;
    let mut vals = Vec::with_capacity(rows.len());
    for row in &rows {
        let line = expect_tokens(row, 4)?;
        let mut v = [0.0; 4];
        for (k, slot) in v.iter_mut().enumerate() {
            *slot = parse_f64(&row[k + 1], line)?;
        }
        vals.push(v);
    }
    Ok(OneForm { lat, vals })
}

pub fn write_two_form(path: &Path, f: &TwoForm) -> Result<()> {
    let mut out = header(FieldKind::TwoForm, &f.lat);
    for v in &f.vals {
        let _ = write!(
            out,
            "\n{} {} {} {} {} {}",
            v[0], v[1], v[2], v[3], v[4], v[5]
        );
    }
    out.push('\n');
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_two_form(path: &Path) -> Result<TwoForm> {
    let (lat, rows) = read_lines(path, FieldKind::TwoForm)?;
    let mut vals = Vec::with_capacity(rows.len());
    for row in &rows {
        let line = expect_tokens(row, 6)?;
        let mut v = [0.0; 6];
        for (k, slot) in v.iter_mut().enumerate() {
            *slot = parse_f64(&row[k + 1], line)?;
        }
        vals.push(v);
    }
    Ok(TwoForm { lat, vals })
}

pub fn write_self_dual(path: &Path, f: &SelfDualField) -> Result<()> {
    let mut out = header(FieldKind::SelfDual, &f.lat);
    for v in &f.vals {
        let _ = write!(out, "\n{} {} {}", v[0], v[1], v[2]);
    }
    out.push('\n');
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_self_dual(path: &Path) -> Result<SelfDualField> {
    let (lat, rows) = read_lines(path, FieldKind::SelfDual)?;
    let mut vals = Vec::with_capacity(rows.len());
    for row in &rows {
        let line = expect_tokens(row, 3)?;
        let mut v = [0.0; 3];
        for (k, slot) in v.iter_mut().enumerate() {
            *slot = parse_f64(&row[k + 1], line)?;
        }
        vals.push(v);
    }
    Ok(SelfDualField { lat, vals })
}

pub fn write_spinor_plus(path: &Path, f: &SpinorPlusField) -> Result<()> {
    let mut out = header(FieldKind::SpinorPlus, &f.lat);
    for v in &f.vals {
        let _ = write!(out, "\n{} {}", fmt_c64(&v.z), fmt_c64(&v.w));
    }
    out.push('\n');
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_spinor_plus(path: &Path) -> Result<SpinorPlusField> {
    let (lat, rows) = read_lines(path, FieldKind::SpinorPlus)?;
    let mut vals = Vec::with_capacity(rows.len());
    for row in &rows {
        let line = expect_tokens(row, 2)?;
        vals.push(SpinorPlus::new(
            parse_c64(&row[1], line)?,
            parse_c64(&row[2], line)?,
        ));
    }
    Ok(SpinorPlusField { lat, vals })
}

pub fn write_spinor_minus(path: &Path, f: &SpinorMinusField) -> Result<()> {
    let mut out = header(FieldKind::SpinorMinus, &f.lat);
    for v in &f.vals {
        let _ = write!(out, "\n{} {}", fmt_c64(&v.z), fmt_c64(&v.w));
    }
    out.push('\n');
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_spinor_minus(path: &Path) -> Result<SpinorMinusField> {
    let (lat, rows) = read_lines(path, FieldKind::SpinorMinus)?;
    let mut vals = Vec::with_capacity(rows.len());
    for row in &rows {
        let line = expect_tokens(row, 2)?;
        vals.push(SpinorMinus::new(
            parse_c64(&row[1], line)?,
            parse_c64(&row[2], line)?,
        ));
    }
    Ok(SpinorMinusField { lat, vals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldgen;

    fn tmpdir() -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("swtorus-snap-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn spinor_round_trip_is_bit_exact() {
        let l = Lattice::new([4; 4], 0.7).unwrap();
        let psi = fieldgen::spinor_plus_gaussian(l, 3, 1.0);
        let path = tmpdir().join("psi.snap");
        write_spinor_plus(&path, &psi).unwrap();
        let back = read_spinor_plus(&path).unwrap();
        assert_eq!(psi, back);
    }

    #[test]
    fn one_form_round_trip_is_bit_exact() {
        let l = Lattice::new([4, 5, 4, 6], 0.31).unwrap();
        let a = fieldgen::one_form_gaussian(l, 4, 2.0);
        let path = tmpdir().join("a.snap");
        write_one_form(&path, &a).unwrap();
        assert_eq!(read_one_form(&path).unwrap(), a);
    }

    #[test]
    fn scalar_and_self_dual_round_trip() {
        let l = Lattice::new([4; 4], 1.25).unwrap();
        let f = fieldgen::scalar_gaussian(l, 5, 1.0);
        let path = tmpdir().join("f.snap");
        write_scalar(&path, &f).unwrap();
        assert_eq!(read_scalar(&path).unwrap(), f);

        let s = fieldgen::self_dual_band_limited(l, 6, 1, 1.0);
        let path = tmpdir().join("s.snap");
        write_self_dual(&path, &s).unwrap();
        assert_eq!(read_self_dual(&path).unwrap(), s);
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let dir = tmpdir();
        let path = dir.join("bad.snap");
        std::fs::write(
            &path,
            "swtorus-field v1 kind=scalar dims=4,4,4,4 h=1\n1,0\nnot-a-number\n",
        )
        .unwrap();
        match read_scalar(&path) {
            Err(SwtError::Snapshot { line, .. }) => assert!(line >= 2),
            other => panic!("expected snapshot error, got {other:?}"),
        }

        let path = dir.join("badkind.snap");
        std::fs::write(&path, "swtorus-field v1 kind=widget dims=4,4,4,4 h=1\n").unwrap();
        match read_scalar(&path) {
            Err(SwtError::Snapshot { line: 1, .. }) => {}
            other => panic!("expected header error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let l = Lattice::new([4; 4], 1.0).unwrap();
        let f = fieldgen::scalar_gaussian(l, 7, 1.0);
        let path = tmpdir().join("kindmix.snap");
        write_scalar(&path, &f).unwrap();
        assert!(read_one_form(&path).is_err());
    }
}
