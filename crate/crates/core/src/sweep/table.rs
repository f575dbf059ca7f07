//! CSV and JSON output of sweep rows.
//!
//! Columns: the axes in sweep order, the output columns sorted by name,
//! then `engine`, `valid` and `note`. Reals carry 17 significant digits;
//! undefined values are written as [`NA`].

use std::collections::BTreeSet;
use std::path::Path;

use super::{Engine, ResultRow};
use crate::error::{Error, Result};

pub const NA: &str = "NA";

const META: [&str; 3] = ["engine", "valid", "note"];

fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn columns(rows: &[ResultRow]) -> Result<(Vec<String>, Vec<String>)> {
    let axes: Vec<String> = rows
        .first()
        .map(|r| r.axes.iter().map(|(n, _)| n.clone()).collect())
        .unwrap_or_default();
    let mut outputs = BTreeSet::new();
    for r in rows {
        if r.axes.len() != axes.len() || r.axes.iter().zip(&axes).any(|((n, _), a)| n != a) {
            return Err(Error::Io("rows do not share the same axes".into()));
        }
        outputs.extend(r.values.keys().cloned());
    }
    Ok((axes, outputs.into_iter().collect()))
}

pub fn write_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path.as_ref())?;
    write_csv_to(rows, file)
}

pub fn write_csv_to<W: std::io::Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let (axes, outputs) = columns(rows)?;
    let mut w = csv::Writer::from_writer(out);
    let header = axes.iter().chain(&outputs).map(String::as_str).chain(META);
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        let mut rec: Vec<String> = r.axes.iter().map(|(_, v)| fmt_real(*v)).collect();
        for o in &outputs {
            rec.push(r.value(o).map_or_else(|| NA.to_string(), fmt_real));
        }
        rec.push(r.engine.label().to_string());
        rec.push(r.valid.to_string());
        rec.push(r.note.clone());
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Read a file written by [`write_csv`]; the first `axis_count` columns are
/// taken as axes.
pub fn read_csv(path: impl AsRef<Path>, axis_count: usize) -> Result<Vec<ResultRow>> {
    let mut rd = csv::Reader::from_path(path.as_ref()).map_err(csv_err)?;
    let header: Vec<String> = rd.headers().map_err(csv_err)?.iter().map(String::from).collect();
    if header.len() < axis_count + META.len() || header[header.len() - 3..] != META {
        return Err(Error::Io("unexpected CSV header".into()));
    }
    let n_out = header.len() - axis_count - META.len();
    let parse = |s: &str| -> Result<f64> {
        s.parse().map_err(|_| Error::Io(format!("cannot parse `{s}` as a number")))
    };
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let mut axes = Vec::with_capacity(axis_count);
        for k in 0..axis_count {
            axes.push((header[k].clone(), parse(&rec[k])?));
        }
        let mut values = std::collections::BTreeMap::new();
        for k in axis_count..axis_count + n_out {
            let v = if &rec[k] == NA { None } else { Some(parse(&rec[k])?) };
            values.insert(header[k].clone(), v);
        }
        let base = axis_count + n_out;
        let engine = Engine::parse(&rec[base])
            .ok_or_else(|| Error::Io(format!("unknown engine `{}`", &rec[base])))?;
        let valid = match &rec[base + 1] {
            "true" => true,
            "false" => false,
            other => return Err(Error::Io(format!("bad validity flag `{other}`"))),
        };
        rows.push(ResultRow { axes, engine, values, valid, note: rec[base + 2].to_string() });
    }
    Ok(rows)
}

/// JSON mirror: one flat object per row with the CSV column names.
pub fn rows_to_json(rows: &[ResultRow]) -> Result<serde_json::Value> {
    let (_, outputs) = columns(rows)?;
    let list = rows
        .iter()
        .map(|r| {
            let mut m = serde_json::Map::new();
            for (n, v) in &r.axes {
                m.insert(n.clone(), serde_json::json!(v));
            }
            for o in &outputs {
                m.insert(o.clone(), r.value(o).map_or(serde_json::Value::Null, |v| serde_json::json!(v)));
            }
            m.insert("engine".into(), serde_json::json!(r.engine.label()));
            m.insert("valid".into(), serde_json::json!(r.valid));
            m.insert("note".into(), serde_json::json!(r.note));
            serde_json::Value::Object(m)
        })
        .collect();
    Ok(serde_json::Value::Array(list))
}

pub fn write_json(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    let v = rows_to_json(rows)?;
    let text = serde_json::to_string_pretty(&v).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(path.as_ref(), text)?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn row(x: f64, g: Option<f64>) -> ResultRow {
        let mut values = BTreeMap::new();
        values.insert("g2_a1".to_string(), g);
        values.insert("csi".to_string(), Some(1.0 / 3.0));
        ResultRow { axes: vec![("delta".into(), x)], engine: Engine::Master, values, valid: true, note: String::new() }
    }

    #[test]
    fn round_trip_and_column_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        let mut rows = vec![row(-0.1, Some(0.123456789012345678)), row(0.7, None)];
        rows[1].valid = false;
        rows[1].note = "master: solver failed, badly".into();
        write_csv(&rows, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("delta,csi,g2_a1,engine,valid,note\n"));
        assert!(text.contains(",NA,"));
        assert_eq!(read_csv(&path, 1).unwrap(), rows);
    }

    #[test]
    fn empty_rows_give_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        write_csv(&[], &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "engine,valid,note\n");
        assert!(read_csv(&path, 0).unwrap().is_empty());
    }

    #[test]
    fn json_uses_csv_names() {
        let v = rows_to_json(&[row(0.5, None)]).unwrap();
        let o = v[0].as_object().unwrap();
        for k in ["delta", "csi", "g2_a1", "engine", "valid", "note"] {
            assert!(o.contains_key(k), "{k}");
        }
        assert!(o["g2_a1"].is_null());
    }
}
