//! Plain-text formats.
//!
//! Edge list: a header line `n <node_count>` followed by one `u v` pair per
//! line, 0-based. Blank lines and lines starting with `#` are skipped.
//! Duplicate and reversed pairs collapse on read.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use episim_core::epidemics::{Event, RunOutcome};
use episim_core::{Graph, GraphError};

pub const CSV_HEADER: &str = "seed,model,extinction_time,censored,eventual_infected,event_count";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: expected header `n <node_count>`")]
    Header { line: usize },
    #[error("line {line}: expected `<u> <v>`, found {text:?}")]
    Edge { line: usize, text: String },
    #[error("empty edge list")]
    Empty,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Graph, FormatError> {
    let mut node_count = None;
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut parts = text.split_whitespace();
        match node_count {
            None => {
                let n = match (parts.next(), parts.next().map(str::parse::<usize>), parts.next()) {
                    (Some("n"), Some(Ok(n)), None) => n,
                    _ => return Err(FormatError::Header { line: idx + 1 }),
                };
                node_count = Some(n);
            }
            Some(_) => {
                let bad = || FormatError::Edge { line: idx + 1, text: text.to_owned() };
                let u = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                let v = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
                if parts.next().is_some() {
                    return Err(bad());
                }
                edges.push((u, v));
            }
        }
    }
    let n = node_count.ok_or(FormatError::Empty)?;
    Ok(Graph::from_edges(n, edges)?)
}

pub fn load_edge_list(path: &Path) -> Result<Graph, FormatError> {
    read_edge_list(BufReader::new(File::open(path)?))
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> io::Result<()> {
    writeln!(w, "n {}", g.node_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// `<time> <KIND> <node>`.
pub fn write_event<W: Write>(mut w: W, e: &Event) -> io::Result<()> {
    writeln!(w, "{} {} {}", e.time, e.kind.label(), e.node)
}

pub fn write_outcomes_csv<W: Write>(mut w: W, outcomes: &[RunOutcome]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in outcomes {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.seed,
            r.model.name(),
            r.extinction_time,
            r.censored,
            r.eventual_infected,
            r.event_count
        )?;
    }
    Ok(())
}

pub fn save_outcomes_csv(path: &Path, outcomes: &[RunOutcome]) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_outcomes_csv(&mut w, outcomes)?;
    w.flush()
}
