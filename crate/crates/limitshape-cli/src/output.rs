use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

/// Stdout or a file, buffered.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// `# limitshape <version> unix_time=<secs> config=<json>`, the one line of
/// a CSV output that differs between reruns.
pub fn header_line(config_json: &str) -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("# limitshape {} unix_time={secs} config={config_json}", env!("CARGO_PKG_VERSION"))
}

/// Ten decimals, about the accuracy of the surface bisection, with
/// trailing zeros dropped: `0.5`, not `0.49999999999999994`.
pub fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}
