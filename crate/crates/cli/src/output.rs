use crate::{Common, Format};
use serde_json::Value;
use std::io::Write;
use wehrl::functionals::ResultRecord;
use wehrl::{Estimate, Result};

/// Writes `text` to `--out` or standard output.
pub fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// `# config: {...}` header line echoing the resolved configuration.
pub fn config_line(config: &Value) -> Result<String> {
    Ok(format!("# config: {}\n", serde_json::to_string(config)?))
}

/// CSV with a config header, a column header and string rows.
pub fn csv_table(config: &Value, header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is UTF-8");
    Ok(config_line(config)? + &body)
}

pub fn num(x: f64) -> String {
    format!("{x:.15e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// The standard error column: a number or `exact`.
pub fn stderr_cell(e: &Estimate) -> String {
    match e.stderr {
        Some(s) => num(s),
        None => "exact".into(),
    }
}

/// Emits one functional evaluation as JSON or a one-row CSV.
pub fn single(common: &Common, record: &ResultRecord) -> Result<()> {
    let text = match common.format {
        Format::Json => record.to_json()? + "\n",
        Format::Csv => {
            let estimate = Estimate {
                value: record.value,
                stderr: record.stderr,
            };
            let argmax = record
                .argmax
                .as_ref()
                .map(|v| v.iter().map(|x| num(*x)).collect::<Vec<_>>().join(" "))
                .unwrap_or_default();
            csv_table(
                &record.config,
                &["functional", "value", "stderr", "method", "argmax"],
                &[vec![
                    record.functional.clone(),
                    num(record.value),
                    stderr_cell(&estimate),
                    record.method.map(|m| m.label().to_string()).unwrap_or_default(),
                    argmax,
                ]],
            )?
        }
    };
    emit(common, &text)
}
