//! CSV ingestion: turning a real return or price series into a pattern.
//!
//! The series enters the model as a single deterministic block, which the
//! gain measure then treats as repeating; that periodicity assumption is
//! spelled out in the provenance string carried by the emitted pattern
//! file. Cells are parsed as exact decimals — `0.4` becomes `2/5`, no
//! float ever appears.

use std::path::{Path, PathBuf};

use patmark_core::{DeterministicPattern, Rat};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSel {
    /// Header name, requires a header row.
    Name(String),
    /// 0-based index.
    Index(usize),
}

impl ColumnSel {
    pub fn parse(text: &str) -> ColumnSel {
        match text.parse::<usize>() {
            Ok(i) => ColumnSel::Index(i),
            Err(_) => ColumnSel::Name(text.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IngestMode {
    /// Column holds prices; first differences become the returns.
    Prices,
    /// Column already holds returns.
    Returns,
}

#[derive(Debug, Clone)]
pub struct IngestSpec {
    pub path: PathBuf,
    pub column: ColumnSel,
    pub mode: IngestMode,
    /// Snap each return to the nearest multiple (ties away from zero).
    pub quantum: Option<Rat>,
    pub has_header: bool,
}

#[derive(Debug)]
pub struct IngestOutcome {
    pub pattern: DeterministicPattern,
    pub provenance: String,
    /// First price of the series in prices mode, for exact reconstruction.
    pub first_price: Option<Rat>,
}

pub fn ingest(spec: &IngestSpec) -> Result<IngestOutcome, CliError> {
    if let Some(q) = &spec.quantum {
        if q.is_zero() {
            return Err(CliError::Validation("quantum must be nonzero".to_string()));
        }
    }
    let series = read_column(&spec.path, &spec.column, spec.has_header)?;
    if series.is_empty() {
        return Err(CliError::Validation(format!(
            "{}: selected column holds no values",
            spec.path.display()
        )));
    }

    let (returns, first_price) = match spec.mode {
        IngestMode::Returns => (series, None),
        IngestMode::Prices => {
            if series.len() < 2 {
                return Err(CliError::Validation(
                    "prices mode needs at least two rows to difference".to_string(),
                ));
            }
            let first = series[0].clone();
            let diffs = series.windows(2).map(|w| &w[1] - &w[0]).collect();
            (diffs, Some(first))
        }
    };

    let returns: Vec<Rat> = match &spec.quantum {
        None => returns,
        Some(q) => returns
            .iter()
            .map(|r| &(r / q).round_ties_away() * q)
            .collect(),
    };

    let provenance = format!(
        "ingested from {} column {} mode {}{}; the series is one block that the gain \
         measure treats as repeating",
        spec.path.display(),
        match &spec.column {
            ColumnSel::Name(n) => n.clone(),
            ColumnSel::Index(i) => format!("#{i}"),
        },
        match spec.mode {
            IngestMode::Prices => "prices",
            IngestMode::Returns => "returns",
        },
        match &spec.quantum {
            Some(q) => format!(" quantum {q}"),
            None => String::new(),
        },
    );

    let pattern = DeterministicPattern::new(returns)
        .map_err(|_| CliError::Validation("differenced series is empty".to_string()))?;
    Ok(IngestOutcome {
        pattern,
        provenance,
        first_price,
    })
}

fn read_column(path: &Path, column: &ColumnSel, has_header: bool) -> Result<Vec<Rat>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;

    let index = match column {
        ColumnSel::Index(i) => *i,
        ColumnSel::Name(name) => {
            if !has_header {
                return Err(CliError::Usage(
                    "selecting a column by name requires a header row".to_string(),
                ));
            }
            let headers = reader
                .headers()
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| {
                    CliError::Validation(format!(
                        "{}: no column named `{name}` (have: {})",
                        path.display(),
                        headers.iter().collect::<Vec<_>>().join(", ")
                    ))
                })?
        }
    };

    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let row_number = row + 1 + usize::from(has_header);
        let cell = record.get(index).ok_or_else(|| {
            CliError::Validation(format!(
                "{}: row {row_number} has no column {index}",
                path.display()
            ))
        })?;
        let cell = cell.trim();
        if cell.is_empty() {
            continue;
        }
        let value: Rat = cell.parse().map_err(|e| {
            CliError::Validation(format!(
                "{}: row {row_number}: non-numeric cell `{cell}`: {e}",
                path.display()
            ))
        })?;
        values.push(value);
    }
    Ok(values)
}
