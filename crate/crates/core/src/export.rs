//! File output helpers shared by the library and the CLI.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::error::Result;

/// Round-trippable float formatting used in every CSV.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn create_buffered(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut out = create_buffered(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// `<path>.<suffix>`, keeping the original extension.
pub fn sidecar_path(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

#[derive(Serialize)]
struct RunSidecar<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    unix_time: u64,
    config: &'a C,
}

/// Writes `<out>.run.json` with the resolved configuration and version.
/// Timestamps live only here so payload files stay reproducible.
pub fn write_run_sidecar<C: Serialize>(out: &Path, command: &str, config: &C) -> Result<PathBuf> {
    let path = sidecar_path(out, "run.json");
    let unix_time = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    write_json(
        &path,
        &RunSidecar {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            unix_time,
            config,
        },
    )?;
    Ok(path)
}
