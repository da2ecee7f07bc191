//! Runs the solver over a directory of `.gr` files and tabulates the results.

use std::fs;
use std::io;
use std::path::Path;
use std::time::Instant;

use crate::cancel::CancelToken;
use crate::certificate::verify_certificate;
use crate::io::parse_gr;
use crate::solve::{solve, SolveConfig};

pub const CSV_HEADER: [&str; 11] =
    ["instance", "n", "m", "best_lb", "best_ub", "t_lb", "t_ub", "solved", "cert_size", "cert_verify_ms", "error"];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    pub n: usize,
    pub m: usize,
    pub best_lb: usize,
    pub best_ub: usize,
    pub t_lb: f64,
    pub t_ub: f64,
    pub solved: bool,
    /// Vertex count of the certificate minor.
    pub cert_size: usize,
    pub cert_verify_ms: f64,
    pub error: String,
}

impl BenchRow {
    fn record(&self) -> [String; 11] {
        [
            self.instance.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.best_lb.to_string(),
            self.best_ub.to_string(),
            format!("{:.3}", self.t_lb),
            format!("{:.3}", self.t_ub),
            self.solved.to_string(),
            self.cert_size.to_string(),
            format!("{:.3}", self.cert_verify_ms),
            self.error.clone(),
        ]
    }
}

/// Solves one instance file. Read, parse, and verification failures end up
/// in the `error` column.
pub fn bench_file(path: &Path, config: &SolveConfig) -> BenchRow {
    let instance = path.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let mut row = BenchRow { instance, ..BenchRow::default() };
    let g = match fs::read_to_string(path).map_err(|e| e.to_string()).and_then(|t| parse_gr(&t).map_err(|e| e.to_string())) {
        Ok(g) => g,
        Err(e) => {
            row.error = e;
            return row;
        }
    };
    let r = solve(&g, config);
    row.n = r.n;
    row.m = r.m;
    row.best_lb = r.lower;
    row.best_ub = r.upper;
    row.t_lb = r.lower_time().as_secs_f64();
    row.t_ub = r.upper_time().as_secs_f64();
    row.solved = r.solved();
    row.cert_size = r.certificate.vertex_count();
    let t = Instant::now();
    let verdict = verify_certificate(&g, &r.certificate, &CancelToken::new());
    row.cert_verify_ms = t.elapsed().as_secs_f64() * 1000.0;
    if let Err(e) = verdict {
        row.error = format!("certificate: {e}");
    } else if let Err(e) = r.td.validate(&g) {
        row.error = format!("decomposition: {e}");
    }
    row
}

/// One row per `.gr` file in `dir`, in file-name order.
pub fn bench_dir(dir: &Path, config: &SolveConfig) -> io::Result<Vec<BenchRow>> {
    let mut files: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gr"))
        .collect();
    files.sort();
    Ok(files.iter().map(|p| bench_file(p, config)).collect())
}

pub fn write_csv<W: io::Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    #[test]
    fn empty_dir_gives_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let rows = bench_dir(dir.path(), &SolveConfig::default()).unwrap();
        let mut out = Vec::new();
        write_csv(&rows, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), format!("{}\n", CSV_HEADER.join(",")));
    }

    #[test]
    fn rows_for_good_and_bad_files() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("a.gr"), "p tw 4 4\n1 2\n2 3\n3 4\n4 1\n").unwrap();
        fs::write(dir.path().join("b.gr"), "p tw 2 1\n1 1\n").unwrap();
        fs::write(dir.path().join("notes.txt"), "x").unwrap();
        let cfg = SolveConfig { serial: true, timeout: Some(Duration::from_secs(10)), ..SolveConfig::default() };
        let rows = bench_dir(dir.path(), &cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].solved && rows[0].best_lb == 2 && rows[0].error.is_empty());
        assert!(rows[1].error.contains("self-loop"));
    }
}
