use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

/// A rendered report ready to be written.
pub struct Report {
    /// File name stem used with the output directory.
    pub stem: String,
    pub body: String,
    pub pass: bool,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Runs `fill` against a CSV writer and returns the text.
pub fn to_csv(fill: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    fill(&mut w).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8")
}

pub struct Destination {
    out: Option<PathBuf>,
    out_dir: Option<PathBuf>,
}

impl Destination {
    pub fn new(out: Option<PathBuf>, out_dir: Option<PathBuf>) -> Self {
        Self { out, out_dir }
    }

    pub fn write(&self, report: &Report, format: Format) -> io::Result<()> {
        let path = match (&self.out, &self.out_dir) {
            (Some(p), _) => Some(p.clone()),
            (None, Some(dir)) => {
                fs::create_dir_all(dir)?;
                Some(dir.join(format!("{}.{}", report.stem, format.extension())))
            }
            (None, None) => None,
        };
        match path {
            Some(p) => {
                fs::write(&p, &report.body)?;
                eprintln!("wrote {}", p.display());
                Ok(())
            }
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(report.body.as_bytes())?;
                stdout.flush()
            }
        }
    }
}
