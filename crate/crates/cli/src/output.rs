use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use tempfile::NamedTempFile;

use crate::CliError;

/// Rows as ordered JSON objects; every row carries the same keys.
#[derive(Debug, Default, Clone)]
pub struct Table {
    pub rows: Vec<Map<String, Value>>,
}

impl Table {
    pub fn push(&mut self, row: &impl Serialize) -> Result<(), CliError> {
        match serde_json::to_value(row)? {
            Value::Object(map) => {
                self.rows.push(map);
                Ok(())
            }
            other => Err(CliError::Internal(format!("row serialised to non-object {other}"))),
        }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(first) = self.rows.first() {
            w.write_record(first.keys())?;
        }
        for row in &self.rows {
            w.write_record(row.values().map(cell))?;
        }
        w.into_inner().map_err(|e| CliError::Internal(e.to_string()))
    }

    pub fn to_json(&self) -> Result<Vec<u8>, CliError> {
        let mut bytes = serde_json::to_vec_pretty(&self.rows)?;
        bytes.push(b'\n');
        Ok(bytes)
    }
}

/// Plain decimal inside `[1e-3, 1e6]`, scientific outside, shortest round-trip digits.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".into()
    } else if !x.is_finite() {
        match (x.is_nan(), x > 0.0) {
            (true, _) => "NaN".into(),
            (false, true) => "inf".into(),
            (false, false) => "-inf".into(),
        }
    } else if (1e-3..=1e6).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_i64(), n.as_u64(), n.as_f64()) {
            (Some(i), _, _) => i.to_string(),
            (_, Some(u), _) => u.to_string(),
            (_, _, Some(f)) => format_float(f),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
    }
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    out.with_file_name(name)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_cells() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(0.25), "0.25");
        assert_eq!(format_float(1e6), "1000000");
        assert_eq!(format_float(2.5e6), "2.5e6");
        assert_eq!(format_float(1e-3), "0.001");
        assert_eq!(format_float(-4.2e-4), "-4.2e-4");
        assert_eq!(format_float(f64::NAN), "NaN");
    }

    #[test]
    fn csv_keeps_field_order() {
        #[derive(Serialize)]
        struct Row {
            zeta: u32,
            alpha: f64,
        }
        let mut t = Table::default();
        t.push(&Row { zeta: 1, alpha: 1e-7 }).unwrap();
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(text, "zeta,alpha\n1,1e-7\n");
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("out/a.csv")), PathBuf::from("out/a.csv.meta.json"));
    }
}
