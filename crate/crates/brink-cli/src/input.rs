//! CSV ingestion: a header row, one 0/1 response column, named covariate
//! columns. The returned dataset has an intercept column of ones
//! prepended, then the covariates in the order they were named.

use std::path::Path;

use brink_core::Dataset;

use crate::CliError;

fn column_index(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize, CliError> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::MissingColumn {
            column: name.to_string(),
            path: path.to_path_buf(),
        })
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    if e.is_io_error() {
        match e.into_kind() {
            csv::ErrorKind::Io(source) => CliError::ReadInput {
                path: path.to_path_buf(),
                source,
            },
            _ => unreachable!("is_io_error guarantees an Io kind"),
        }
    } else {
        CliError::CsvSyntax {
            path: path.to_path_buf(),
            message: e.to_string(),
        }
    }
}

/// Binary responses accept the exact strings "0"/"1" or any numeral that
/// parses to exactly 0.0 or 1.0; anything else is rejected.
fn parse_response(field: &str, row: usize) -> Result<bool, CliError> {
    match field {
        "0" => return Ok(false),
        "1" => return Ok(true),
        _ => {}
    }
    match field.parse::<f64>() {
        Ok(0.0) => Ok(false),
        Ok(1.0) => Ok(true),
        _ => Err(CliError::NonBinaryResponse {
            row,
            value: field.to_string(),
        }),
    }
}

fn parse_covariate(field: &str, row: usize, column: &str) -> Result<f64, CliError> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::BadNumber {
            row,
            column: column.to_string(),
            value: field.to_string(),
        }),
    }
}

/// Reads `path` into a dataset: intercept column of ones, then the named
/// covariates. Columns not named are ignored. Rows are reported 1-based
/// (the header is row 0).
pub fn parse_csv(
    path: &Path,
    response_column: &str,
    covariate_columns: &[String],
) -> Result<Dataset, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;

    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(CliError::EmptyFile {
            path: path.to_path_buf(),
        });
    }
    let response_idx = column_index(&headers, response_column, path)?;
    let covariate_idx: Vec<(usize, &String)> = covariate_columns
        .iter()
        .map(|name| Ok((column_index(&headers, name, path)?, name)))
        .collect::<Result<_, CliError>>()?;

    let mut x: Vec<Vec<f64>> = Vec::new();
    let mut t: Vec<bool> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let row = i + 1;
        let field = |idx: usize| record.get(idx).unwrap_or("");
        t.push(parse_response(field(response_idx), row)?);
        let mut design_row = Vec::with_capacity(1 + covariate_idx.len());
        design_row.push(1.0);
        for &(idx, name) in &covariate_idx {
            design_row.push(parse_covariate(field(idx), row, name)?);
        }
        x.push(design_row);
    }
    if x.is_empty() {
        return Err(CliError::EmptyFile {
            path: path.to_path_buf(),
        });
    }

    Ok(Dataset::new(x, t)?)
}
