//! Loading JSON inputs while keeping the library's error kinds, so that for
//! example a depth of 1 inside a script still maps to its own exit code.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;
use sigforge_core::cyclo::parse_rational_literal;
use sigforge_core::cylinders::KnotSpec;
use sigforge_core::{
    BigRational, CyclotomicNumber, Error, HermitianMatrix, InfectionRecord, InfectionScript, Matrix,
    SeifertMatrix,
};

use crate::error::{CliError, CliResult};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn cyclotomic(v: &Value) -> CliResult<CyclotomicNumber> {
    match v {
        Value::String(s) => Ok(s.parse()?),
        Value::Number(n) => n
            .as_i64()
            .map(CyclotomicNumber::from_integer)
            .ok_or_else(|| Error::Parse(format!("matrix entry {n} is not an integer")).into()),
        other => Err(Error::Parse(format!("expected a cyclotomic literal, got {other}")).into()),
    }
}

/// A Hermitian matrix stored as an array of rows of cyclotomic literals or
/// integers.
pub fn hermitian_file(path: &Path) -> CliResult<HermitianMatrix> {
    let rows: Vec<Vec<Value>> = read_json(path)?;
    let rows = rows
        .iter()
        .map(|r| r.iter().map(cyclotomic).collect::<CliResult<Vec<_>>>())
        .collect::<CliResult<Vec<_>>>()?;
    Ok(HermitianMatrix::new(Matrix::from_rows(rows)?)?)
}

pub fn seifert_file(path: &Path) -> CliResult<SeifertMatrix> {
    let rows: Vec<Vec<i64>> = read_json(path)?;
    Ok(SeifertMatrix::new(rows)?)
}

pub fn knot(v: &Value) -> CliResult<KnotSpec> {
    match v {
        Value::String(name) => Ok(KnotSpec::named(name)?),
        other => {
            let rows: Vec<Vec<i64>> = serde_json::from_value(other.clone())
                .map_err(|e| Error::Parse(format!("knot must be a name or an integer matrix: {e}")))?;
            Ok(KnotSpec::Matrix(SeifertMatrix::new(rows)?))
        }
    }
}

#[derive(Deserialize)]
struct RawRecord {
    depth: i64,
    knot: Value,
    #[serde(default = "one")]
    copies: u64,
}

fn one() -> u64 {
    1
}

#[derive(Deserialize)]
struct RawScript {
    genus: u32,
    records: Vec<RawRecord>,
}

pub fn script_file(path: &Path) -> CliResult<InfectionScript> {
    let raw: RawScript = read_json(path)?;
    let records = raw
        .records
        .iter()
        .map(|r| Ok(InfectionRecord::with_copies(r.depth, knot(&r.knot)?, r.copies)?))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(InfectionScript::new(raw.genus, records)?)
}

pub fn rational(s: &str) -> CliResult<BigRational> {
    Ok(parse_rational_literal(s)?)
}
