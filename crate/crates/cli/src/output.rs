//! Output sinks and the run manifest.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use serde::Serialize;

/// Writes named outputs into a directory, or to standard output when there is none.
pub struct Sink {
    dir: Option<PathBuf>,
    written: Vec<String>,
}

impl Sink {
    pub fn new(dir: Option<PathBuf>) -> io::Result<Self> {
        if let Some(d) = &dir {
            std::fs::create_dir_all(d)?;
        }
        Ok(Sink { dir, written: Vec::new() })
    }

    pub fn has_dir(&self) -> bool {
        self.dir.is_some()
    }

    pub fn open(&mut self, name: &str) -> io::Result<Box<dyn Write>> {
        match &self.dir {
            Some(d) => {
                self.written.push(name.to_string());
                Ok(Box::new(BufWriter::new(File::create(d.join(name))?)))
            }
            None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        }
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> io::Result<()> {
        let mut w = self.open(name)?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()
    }

    /// Echoes the resolved configuration. Goes to `manifest.json` in the output
    /// directory, or to standard error as one line.
    pub fn finish<C: Serialize>(self, command: &str, seed: Option<u64>, threads: Option<usize>, config: &C) -> io::Result<()> {
        let manifest = Manifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            threads,
            config,
            outputs: &self.written,
        };
        match &self.dir {
            Some(d) => {
                let mut w = BufWriter::new(File::create(d.join("manifest.json"))?);
                serde_json::to_writer_pretty(&mut w, &manifest)?;
                writeln!(w)?;
                w.flush()
            }
            None => {
                eprintln!("manifest: {}", serde_json::to_string(&manifest)?);
                Ok(())
            }
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    command: &'a str,
    version: &'a str,
    seed: Option<u64>,
    threads: Option<usize>,
    config: &'a C,
    outputs: &'a [String],
}

/// Shortest round-trip form, scientific outside `[1e-4, 1e15)`, with `-0` printed as `0`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_string()
    } else if a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}
