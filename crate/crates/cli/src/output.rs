use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use pentamotion::kinematics::Vec3;
use serde::Serialize;

use crate::CliError;

/// 17 significant digits, enough to round-trip an `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("cannot write {}: {e}", path.display()))
}

pub struct OutDir(PathBuf);

impl OutDir {
    pub fn create(dir: PathBuf) -> Result<Self, CliError> {
        std::fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
        Ok(Self(dir))
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }

    pub fn write_csv(&self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        let mut w = csv::Writer::from_path(&path).map_err(|e| io_err(&path, e))?;
        w.write_record(header).map_err(|e| io_err(&path, e))?;
        for row in rows {
            w.write_record(row).map_err(|e| io_err(&path, e))?;
        }
        w.flush().map_err(|e| io_err(&path, e))?;
        Ok(path)
    }

    /// Quad mesh over a grid whose rows are generators.
    pub fn write_obj(&self, name: &str, grid: &[Vec<Vec3<f64>>]) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        let mut s = String::from("# ruled surface: rows are generators\n");
        for p in grid.iter().flatten() {
            let _ = writeln!(s, "v {} {} {}", num(p.x), num(p.y), num(p.z));
        }
        let cols = grid.first().map_or(0, Vec::len);
        for j in 0..grid.len().saturating_sub(1) {
            for k in 0..cols.saturating_sub(1) {
                // OBJ indices are 1-based
                let a = j * cols + k + 1;
                let b = (j + 1) * cols + k + 1;
                let _ = writeln!(s, "f {a} {} {} {b}", a + 1, b + 1);
            }
        }
        std::fs::write(&path, s).map_err(|e| io_err(&path, e))?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let path = self.path(name);
        std::fs::write(&path, to_json(value)? + "\n").map_err(|e| io_err(&path, e))?;
        Ok(path)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(format!("cannot serialize report: {e}")))
}
