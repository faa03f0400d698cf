//! Contingency tables, the homogeneity model and residual tables.
//!
//! Columns are the groups whose totals are fixed by the sampling design; rows
//! are the categories whose proportions are compared across columns.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest grand total accepted. Keeps every `row_total * col_total` product
/// inside `u64`.
pub const MAX_TOTAL: u64 = u32::MAX as u64;

/// Dense row-major matrix of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Grid {
    pub(crate) fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..rows {
            for k in 0..cols {
                data.push(f(j, k));
            }
        }
        Grid { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_nested(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|j| self.row(j).to_vec()).collect()
    }
}

impl Serialize for Grid {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_nested().serialize(serializer)
    }
}

/// Validated r×s table of nonnegative counts with cached margins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
    row_totals: Vec<u64>,
    col_totals: Vec<u64>,
    total: u64,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl ContingencyTable {
    /// Builds a table from row-major counts.
    pub fn from_counts(rows: usize, cols: usize, counts: Vec<u64>) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::TooSmall { rows, cols });
        }
        assert_eq!(counts.len(), rows * cols, "count vector does not match {rows}x{cols}");
        let mut row_totals = vec![0u64; rows];
        let mut col_totals = vec![0u64; cols];
        let mut total = 0u64;
        for j in 0..rows {
            for k in 0..cols {
                let c = counts[j * cols + k];
                row_totals[j] = row_totals[j].saturating_add(c);
                col_totals[k] = col_totals[k].saturating_add(c);
                total = total.saturating_add(c);
            }
        }
        if total == 0 {
            return Err(Error::ZeroTotal);
        }
        if total > MAX_TOTAL {
            return Err(Error::TotalTooLarge { total, max: MAX_TOTAL });
        }
        Ok(ContingencyTable { rows, cols, counts, row_totals, col_totals, total, row_labels: None, col_labels: None })
    }

    /// Builds a table from a list of rows. Panics on ragged input; use
    /// [`parse_table`] for untrusted data.
    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut counts = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged rows");
            counts.extend_from_slice(row);
        }
        Self::from_counts(rows.len(), cols, counts)
    }

    pub fn with_row_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rows {
            return Err(Error::LabelCount { what: "row labels", expected: self.rows, found: labels.len() });
        }
        self.row_labels = Some(labels);
        Ok(self)
    }

    pub fn with_col_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.cols {
            return Err(Error::LabelCount { what: "column labels", expected: self.cols, found: labels.len() });
        }
        self.col_labels = Some(labels);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts[row * self.cols + col]
    }

    /// Row-major counts.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn row_totals(&self) -> &[u64] {
        &self.row_totals
    }

    pub fn col_totals(&self) -> &[u64] {
        &self.col_totals
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn to_nested(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.cols).map(<[u64]>::to_vec).collect()
    }

    /// Swaps rows and columns, labels included.
    pub fn transposed(&self) -> Self {
        let mut counts = Vec::with_capacity(self.counts.len());
        for k in 0..self.cols {
            for j in 0..self.rows {
                counts.push(self.get(j, k));
            }
        }
        ContingencyTable {
            rows: self.cols,
            cols: self.rows,
            counts,
            row_totals: self.col_totals.clone(),
            col_totals: self.row_totals.clone(),
            total: self.total,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// Writes the table in the CSV layout read by [`parse_table`]. A header
    /// row is written only when column labels exist, and a label column only
    /// when row labels exist.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        if let Some(cols) = &self.col_labels {
            let mut header: Vec<&str> = Vec::with_capacity(self.cols + 1);
            if self.row_labels.is_some() {
                header.push("");
            }
            header.extend(cols.iter().map(String::as_str));
            writer.write_record(&header).expect("in-memory write");
        }
        for j in 0..self.rows {
            let mut record: Vec<String> = Vec::with_capacity(self.cols + 1);
            if let Some(labels) = &self.row_labels {
                record.push(labels[j].clone());
            }
            record.extend((0..self.cols).map(|k| self.get(j, k).to_string()));
            writer.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

/// Layout of a CSV document. The layout is never guessed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvLayout {
    pub has_header: bool,
    pub has_row_labels: bool,
    pub transpose: bool,
}

impl Default for CsvLayout {
    fn default() -> Self {
        CsvLayout { has_header: true, has_row_labels: true, transpose: false }
    }
}

impl CsvLayout {
    pub fn bare() -> Self {
        CsvLayout { has_header: false, has_row_labels: false, transpose: false }
    }
}

/// Parses a CSV contingency table.
///
/// Error coordinates refer to the data grid as written, before any transpose.
pub fn parse_table(text: &str, layout: CsvLayout) -> Result<ContingencyTable> {
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());

    let skip = usize::from(layout.has_row_labels);
    let mut col_labels: Option<Vec<String>> = None;
    let mut row_labels: Vec<String> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    let mut width: Option<usize> = None;
    let mut data_rows = 0usize;

    for (index, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| Error::Csv { line: e.position().map_or(0, |p| p.line()), message: e.to_string() })?;
        if index == 0 && layout.has_header {
            let labels: Vec<String> = record.iter().skip(skip).map(str::to_owned).collect();
            width = Some(labels.len());
            col_labels = Some(labels);
            continue;
        }
        data_rows += 1;
        let found = record.len().saturating_sub(skip);
        let expected = *width.get_or_insert(found);
        if found != expected || record.len() < skip {
            return Err(Error::Ragged { row: data_rows, expected, found });
        }
        if layout.has_row_labels {
            row_labels.push(record[0].to_owned());
        }
        for (k, cell) in record.iter().skip(skip).enumerate() {
            let value = parse_count(cell).ok_or_else(|| Error::InvalidCell {
                row: data_rows,
                col: k + 1,
                value: cell.to_owned(),
            })?;
            counts.push(value);
        }
    }

    let cols = width.unwrap_or(0);
    if data_rows < 2 || cols < 2 {
        let (rows, cols) = if layout.transpose { (cols, data_rows) } else { (data_rows, cols) };
        return Err(Error::TooSmall { rows, cols });
    }
    let mut table = ContingencyTable::from_counts(data_rows, cols, counts)?;
    if layout.has_row_labels {
        table = table.with_row_labels(row_labels)?;
    }
    if let Some(labels) = col_labels {
        table = table.with_col_labels(labels)?;
    }
    Ok(if layout.transpose { table.transposed() } else { table })
}

fn parse_count(cell: &str) -> Option<u64> {
    if cell.is_empty() || !cell.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    cell.parse().ok()
}

/// Expected count under homogeneity. The integer product is formed first so
/// that only the final division rounds.
#[inline]
pub(crate) fn expected_count(row_total: u64, col_total: u64, total: u64) -> f64 {
    (row_total * col_total) as f64 / total as f64
}

/// Expected counts `n_j. * n_.k / n` and row proportions `n_j. / n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomogeneityModel {
    pub expected: Grid,
    pub row_props: Vec<f64>,
}

impl HomogeneityModel {
    pub fn expected(&self, row: usize, col: usize) -> f64 {
        self.expected.get(row, col)
    }
}

pub fn homogeneity_model(table: &ContingencyTable) -> HomogeneityModel {
    let n = table.total();
    let expected = Grid::from_fn(table.rows(), table.cols(), |j, k| {
        expected_count(table.row_totals()[j], table.col_totals()[k], n)
    });
    let row_props = table.row_totals().iter().map(|&t| t as f64 / n as f64).collect();
    HomogeneityModel { expected, row_props }
}

/// Observed-minus-expected counts, raw and scaled by the root of the expectation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    #[serde(rename = "diff")]
    pub differences: Grid,
    pub standardized: Grid,
}

pub fn residuals(table: &ContingencyTable, model: &HomogeneityModel) -> ResidualReport {
    let differences = Grid::from_fn(table.rows(), table.cols(), |j, k| table.get(j, k) as f64 - model.expected(j, k));
    let standardized = Grid::from_fn(table.rows(), table.cols(), |j, k| {
        let e = model.expected(j, k);
        if e == 0.0 {
            0.0
        } else {
            differences.get(j, k) / e.sqrt()
        }
    });
    ResidualReport { differences, standardized }
}
