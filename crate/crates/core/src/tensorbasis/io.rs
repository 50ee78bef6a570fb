//! Plain-text coefficient and array files.
//!
//! Coefficients: a header
//! `hyperwave-coeffs v1 <system> n=<n> p=<p> basis=<name> jmax=<m>`, then one
//! line per nonzero, `j_1 … j_n k_1 … k_n value` (hyperbolic) or
//! `m e_1 … e_n k_1 … k_n value` (isotropic).
//!
//! Arrays: a header `hyperwave-array v1 n=<n> extent=<N>`, then the `N^n`
//! values in row-major order, one per line.
//!
//! Values are written with 17 significant digits.

use std::fmt::Write as _;

use ndarray::{ArrayD, IxDyn};

use super::{check_dim, CoeffData, CoeffVector, HyperIndex, IsoIndex, System};
use crate::basis1d::BasisSpec;
use crate::error::{Error, Result};

pub const COEFF_MAGIC: &str = "hyperwave-coeffs";
pub const ARRAY_MAGIC: &str = "hyperwave-array";

fn format_p(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

pub fn write_coeffs(c: &CoeffVector) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{COEFF_MAGIC} v1 {} n={} p={} basis={} jmax={}",
        c.system().name(),
        c.dim(),
        format_p(c.p_norm()),
        c.basis_name(),
        c.max_level()
    );
    let fields = |out: &mut String, xs: &mut dyn Iterator<Item = String>| {
        for x in xs {
            out.push_str(&x);
            out.push(' ');
        }
    };
    match c.data() {
        CoeffData::Hyperbolic(d) => {
            for (idx, v) in d {
                fields(&mut out, &mut idx.levels().iter().map(|j| j.to_string()));
                fields(&mut out, &mut idx.positions().iter().map(|k| k.to_string()));
                let _ = writeln!(out, "{v:.16e}");
            }
        }
        CoeffData::Isotropic(d) => {
            for (idx, v) in d {
                let _ = write!(out, "{} ", idx.level());
                fields(&mut out, &mut idx.kind().iter().map(|e| e.to_string()));
                fields(&mut out, &mut idx.positions().iter().map(|k| k.to_string()));
                let _ = writeln!(out, "{v:.16e}");
            }
        }
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Splits `key=value` header fields into a lookup.
fn header_fields<'a>(fields: &[&'a str], line: usize) -> Result<Vec<(&'a str, &'a str)>> {
    fields
        .iter()
        .map(|f| f.split_once('=').ok_or_else(|| parse_err(line, format!("header field `{f}` is not key=value"))))
        .collect()
}

fn lookup<'a>(fields: &[(&'a str, &'a str)], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| parse_err(1, format!("header lacks `{key}=`")))
}

fn number<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T> {
    s.parse().map_err(|_| parse_err(line, format!("cannot parse {what} `{s}`")))
}

/// Parses a coefficient file written for `spec`.
///
/// A header naming a different basis is rejected with [`Error::InvalidArgument`].
pub fn parse_coeffs(text: &str, spec: &BasisSpec) -> Result<CoeffVector> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty coefficient file"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 7 || parts[0] != COEFF_MAGIC || parts[1] != "v1" {
        return Err(parse_err(1, format!("not a `{COEFF_MAGIC} v1` header")));
    }
    let system = match parts[2] {
        "hyperbolic" => System::Hyperbolic,
        "isotropic" => System::Isotropic,
        other => return Err(parse_err(1, format!("unknown system `{other}`"))),
    };
    let fields = header_fields(&parts[3..], 1)?;
    let n: usize = number(lookup(&fields, "n")?, 1, "n")?;
    check_dim(n)?;
    let p: f64 = number(lookup(&fields, "p")?, 1, "p")?;
    super::check_exponent(p)?;
    let basis = lookup(&fields, "basis")?;
    let jmax: u32 = number(lookup(&fields, "jmax")?, 1, "jmax")?;
    if basis != spec.name() {
        return Err(Error::InvalidArgument(format!(
            "coefficient file is for basis `{basis}`, expected `{}`",
            spec.name()
        )));
    }
    let mut c = CoeffVector::new(spec, system, n, jmax)?.with_p_norm(p);
    let width = match system {
        System::Hyperbolic => 2 * n + 1,
        System::Isotropic => 2 * n + 2,
    };
    for (no, line) in lines {
        let line_no = no + 1;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != width {
            return Err(parse_err(line_no, format!("expected {width} fields, found {}", f.len())));
        }
        let value: f64 = number(f[width - 1], line_no, "value")?;
        let ints = f[..width - 1]
            .iter()
            .map(|s| number::<usize>(s, line_no, "index"))
            .collect::<Result<Vec<_>>>()?;
        match system {
            System::Hyperbolic => {
                let levels: Vec<u32> = ints[..n].iter().map(|&j| j as u32).collect();
                let idx = HyperIndex::new(&levels, &ints[n..])?;
                c.insert_hyper(spec, idx, value)?;
            }
            System::Isotropic => {
                let e: Vec<u8> = ints[1..=n].iter().map(|&e| e.min(2) as u8).collect();
                let idx = IsoIndex::new(ints[0] as u32, &e, &ints[n + 1..])?;
                c.insert_iso(spec, idx, value)?;
            }
        }
    }
    Ok(c)
}

pub fn write_array(arr: &ArrayD<f64>) -> String {
    let mut out = String::new();
    let extent = arr.shape().first().copied().unwrap_or(0);
    let _ = writeln!(out, "{ARRAY_MAGIC} v1 n={} extent={extent}", arr.ndim());
    for v in arr.iter() {
        let _ = writeln!(out, "{v:.16e}");
    }
    out
}

pub fn parse_array(text: &str) -> Result<ArrayD<f64>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty array file"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != ARRAY_MAGIC || parts[1] != "v1" {
        return Err(parse_err(1, format!("not a `{ARRAY_MAGIC} v1` header")));
    }
    let fields = header_fields(&parts[2..], 1)?;
    let n: usize = number(lookup(&fields, "n")?, 1, "n")?;
    check_dim(n)?;
    let extent: usize = number(lookup(&fields, "extent")?, 1, "extent")?;
    let values = lines
        .map(|(no, l)| number::<f64>(l.trim(), no + 1, "value"))
        .collect::<Result<Vec<_>>>()?;
    let expected = extent.pow(n as u32);
    if values.len() != expected {
        return Err(Error::dims("array file values", expected, values.len()));
    }
    ArrayD::from_shape_vec(IxDyn(&vec![extent; n]), values)
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis1d::make_haar_basis;
    use crate::tensorbasis::{hyper_forward, iso_analysis};

    #[test]
    fn coefficient_round_trip() {
        let spec = make_haar_basis(0);
        let data = ArrayD::from_shape_fn(IxDyn(&[8, 8]), |p| ((p[0] * 3 + p[1]) as f64).cos());
        for c in [
            hyper_forward(&spec, 2, &data).unwrap(),
            iso_analysis(&spec, 2, &data).unwrap().rescale(0.5).unwrap(),
        ] {
            let text = write_coeffs(&c);
            let back = parse_coeffs(&text, &spec).unwrap();
            assert_eq!(back, c);
            assert_eq!(write_coeffs(&back), text);
        }
    }

    #[test]
    fn header_format() {
        let spec = make_haar_basis(0);
        let c = CoeffVector::new(&spec, System::Hyperbolic, 2, 5).unwrap();
        assert_eq!(write_coeffs(&c), "hyperwave-coeffs v1 hyperbolic n=2 p=2 basis=haar jmax=5\n");
        let c = c.rescale(f64::INFINITY).unwrap();
        let back = parse_coeffs(&write_coeffs(&c), &spec).unwrap();
        assert!(back.p_norm().is_infinite());
    }

    #[test]
    fn basis_mismatch_and_garbage() {
        let spec = make_haar_basis(0);
        let text = "hyperwave-coeffs v1 hyperbolic n=1 p=2 basis=other jmax=2\n";
        assert!(matches!(parse_coeffs(text, &spec), Err(Error::InvalidArgument(_))));
        assert!(matches!(parse_coeffs("", &spec), Err(Error::Parse { .. })));
        let text = "hyperwave-coeffs v1 hyperbolic n=1 p=2 basis=haar jmax=2\n1 0\n";
        assert!(matches!(parse_coeffs(text, &spec), Err(Error::Parse { .. })));
    }

    #[test]
    fn array_round_trip() {
        let arr = ArrayD::from_shape_fn(IxDyn(&[4, 4, 4]), |p| (p[0] + 2 * p[1] + 3 * p[2]) as f64 / 7.0);
        let text = write_array(&arr);
        assert_eq!(parse_array(&text).unwrap(), arr);
        assert!(parse_array("").is_err());
        assert!(parse_array("hyperwave-array v1 n=2 extent=2\n1\n2\n3\n").is_err());
    }
}
