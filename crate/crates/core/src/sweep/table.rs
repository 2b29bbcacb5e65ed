use std::fmt::Write as _;
use std::path::Path;

use super::SweepResult;
use crate::error::{Error, Result};

pub const TABLE_HEADER: &str = "k,rmse,r_squared,sse,mse,ssr,sst";

/// Positional notation with 12 significant digits. Zero prints as
/// `0.000000000000`.
pub fn format_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0.000000000000".to_string();
    }
    // exponent of the value after rounding to 12 digits
    let sci = format!("{v:.11e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .expect("float exponent");
    let decimals = (11 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn render_table(result: &SweepResult) -> String {
    let mut out = String::with_capacity(64 * (result.rows.len() + 1));
    out.push_str(TABLE_HEADER);
    out.push('\n');
    for row in &result.rows {
        let r = &row.report;
        let r2 = r.r_squared.map(format_sig12).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.k,
            format_sig12(r.rmse),
            r2,
            format_sig12(r.sse),
            format_sig12(r.mse),
            format_sig12(r.ssr),
            format_sig12(r.sst),
        );
    }
    out
}

pub fn emit_table<P: AsRef<Path>>(result: &SweepResult, path: P) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, render_table(result)).map_err(|e| Error::io(path, e))
}
