use std::io::{BufRead, Write};

use super::{FeatureMatrix, FeatureVector, FEATURE_COUNT};
use crate::error::{Error, Result};

pub const FEATURE_CSV_HEADER: &str = "graph_id,label,n,m,avg_degree,diameter,avg_closeness,\
avg_betweenness,avg_clustering,spectral_radius,laplacian_trace";

/// Formats `x` with 12 significant digits, trimming trailing zeros.
/// Integral values print without a decimal point.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    let sci = format!("{x:.11e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..15).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    } else {
        let (mantissa, e) = sci.split_once('e').unwrap();
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{e}")
    }
}

pub fn write_feature_csv<W: Write>(fm: &FeatureMatrix, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{FEATURE_CSV_HEADER}")?;
    for ((id, row), &label) in fm.graph_ids.iter().zip(&fm.rows).zip(&fm.labels) {
        write!(out, "{id},{}", fm.label_map[label])?;
        for v in row.to_array() {
            write!(out, ",{}", format_real(v))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Reads a feature CSV back. Labels are remapped to contiguous ids in order
/// of first appearance.
pub fn read_feature_csv<R: BufRead>(input: R, name: &str) -> Result<FeatureMatrix> {
    let file = format!("{name} features");
    let mut lines = input.lines().enumerate();
    let header = match lines.next() {
        Some((_, Ok(h))) => h,
        Some((_, Err(e))) => return Err(Error::format(&file, 1, e.to_string())),
        None => return Err(Error::format(&file, 1, "file is empty")),
    };
    if header.trim() != FEATURE_CSV_HEADER {
        return Err(Error::format(&file, 1, format!("unexpected header {header:?}")));
    }
    let mut graph_ids = Vec::new();
    let mut raw_labels = Vec::new();
    let mut rows = Vec::new();
    for (i, line) in lines {
        let no = i + 1;
        let line = line.map_err(|e| Error::format(&file, no, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != FEATURE_COUNT + 2 {
            return Err(Error::format(
                &file,
                no,
                format!("expected {} fields, found {}", FEATURE_COUNT + 2, fields.len()),
            ));
        }
        let bad = |what: &str, s: &str| Error::format(&file, no, format!("bad {what} {s:?}"));
        graph_ids.push(fields[0].parse::<usize>().map_err(|_| bad("graph id", fields[0]))?);
        raw_labels.push(fields[1].parse::<i64>().map_err(|_| bad("label", fields[1]))?);
        let mut values = [0.0f64; FEATURE_COUNT];
        for (v, s) in values.iter_mut().zip(&fields[2..]) {
            *v = s.parse().map_err(|_| bad("value", s))?;
            if !v.is_finite() {
                return Err(bad("value", s));
            }
        }
        rows.push(FeatureVector::from_array(values));
    }
    if rows.is_empty() {
        return Err(Error::format(&file, 2, "no data rows"));
    }
    let mut label_map: Vec<i64> = Vec::new();
    let labels = raw_labels
        .iter()
        .map(|l| {
            label_map.iter().position(|m| m == l).unwrap_or_else(|| {
                label_map.push(*l);
                label_map.len() - 1
            })
        })
        .collect();
    let mut fm = FeatureMatrix::new(name, rows, labels, label_map)?;
    fm.graph_ids = graph_ids;
    Ok(fm)
}
