use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::{Format, Globals};

pub fn sink(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub fn load<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Arguments from `--config` when given, otherwise from the command line.
pub fn resolve<T: DeserializeOwned>(cli: T, g: &Globals) -> anyhow::Result<T> {
    match &g.config {
        Some(p) => load(p),
        None => Ok(cli),
    }
}

pub fn write_json<T: Serialize>(value: &T, g: &Globals) -> anyhow::Result<()> {
    let mut w = sink(g.out.as_deref())?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn write_csv<T: Serialize>(rows: &[T], headers: &[&str], g: &Globals) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(sink(g.out.as_deref())?);
    if rows.is_empty() {
        w.write_record(headers)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// JSON gets the whole document, CSV only the rows.
pub fn emit<D: Serialize, R: Serialize>(doc: &D, rows: &[R], headers: &[&str], g: &Globals) -> anyhow::Result<()> {
    match g.format {
        Format::Json => write_json(doc, g),
        Format::Csv => write_csv(rows, headers, g),
    }
}
