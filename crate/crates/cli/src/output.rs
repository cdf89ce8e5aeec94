use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use ghz_core::device::{load_device, DeviceParams, PAPER_DEVICE_JSON, PERFECT_DETECTION_JSON};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::Common;

/// Exit code 2 for usage and config problems, 1 for everything else.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Numerical(m) => f.write_str(m),
        }
    }
}

impl From<ghz_core::Error> for Failure {
    fn from(e: ghz_core::Error) -> Self {
        use ghz_core::Error::*;
        match e {
            Config(_) | InvalidArgument(_) | UnknownLabel(_) | InvalidDimension { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numerical(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Numerical(format!("csv: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Numerical(format!("json: {e}"))
    }
}

/// Fixed 17-significant-digit rendering used in every CSV cell.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    argv: Vec<String>,
    config: &'a str,
    config_sha256: &'a str,
    seed: Option<u64>,
    dims: [usize; 5],
    threads: usize,
    wall_time_s: f64,
    outputs: &'a [String],
    summary: &'a serde_json::Map<String, serde_json::Value>,
    version: &'static str,
}

pub struct Run {
    started: Instant,
    pub device: DeviceParams,
    config: String,
    config_hash: String,
    outputs: Vec<String>,
    pub seed: Option<u64>,
    pub summary: serde_json::Map<String, serde_json::Value>,
}

impl Run {
    pub fn start(common: &Common) -> Result<Self, Failure> {
        let started = Instant::now();
        let text = match common.config.as_str() {
            "paper_device" => PAPER_DEVICE_JSON.to_string(),
            "perfect_detection" => PERFECT_DETECTION_JSON.to_string(),
            path => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("config `{path}`: {e}")))?,
        };
        let device = load_device(&text)?;
        if common.dim < 2 {
            return Err(Failure::Usage(format!("--dim {} must be >= 2", common.dim)));
        }
        let config_hash = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        Ok(Self {
            started,
            device,
            config: common.config.clone(),
            config_hash,
            outputs: Vec::new(),
            seed: None,
            summary: serde_json::Map::new(),
        })
    }

    fn sink(&mut self, path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
        Ok(match path {
            Some(p) => {
                self.outputs.push(p.display().to_string());
                Box::new(File::create(p)?)
            }
            None => {
                self.outputs.push("<stdout>".into());
                Box::new(io::stdout().lock())
            }
        })
    }

    pub fn write_csv(&mut self, path: Option<&Path>, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), Failure> {
        let mut w = csv::Writer::from_writer(self.sink(path)?);
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json(&mut self, path: Option<&Path>, value: &impl Serialize) -> Result<(), Failure> {
        let mut w = self.sink(path)?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        Ok(())
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        if let Ok(v) = serde_json::to_value(value) {
            self.summary.insert(key.to_string(), v);
        }
    }

    pub fn finish(self, common: &Common) -> Result<(), Failure> {
        let argv: Vec<String> = std::env::args().collect();
        let manifest = Manifest {
            command: argv.get(1).map(String::as_str).unwrap_or(""),
            argv: argv.clone(),
            config: &self.config,
            config_sha256: &self.config_hash,
            seed: self.seed,
            dims: [2, 2, 2, common.dim, common.dim],
            threads: rayon::current_num_threads(),
            wall_time_s: self.started.elapsed().as_secs_f64(),
            outputs: &self.outputs,
            summary: &self.summary,
            version: env!("CARGO_PKG_VERSION"),
        };
        let text = serde_json::to_string_pretty(&manifest)?;
        match &common.manifest {
            Some(p) => std::fs::write(p, text + "\n")?,
            None => eprintln!("{text}"),
        }
        Ok(())
    }
}
