//! Conversions between domain objects and their on-disk JSON shapes.
//!
//! Writing goes through the deterministic [`crate::json`] builder; reading
//! goes through `serde_json` so saved artifacts from any JSON producer are
//! accepted. Real matrices serialize as rows of floats, complex matrices
//! as rows of `[re, im]` pairs; a `"field"` tag on the enclosing strategy
//! object says which encoding applies.

use num_complex::Complex64;
use realgame_core::game::{ProbTable, SettingPair, N_OUTCOMES, N_SETTINGS, SETTINGS};
use realgame_core::mat::Matrix;
use realgame_core::scalar::{Field, Scalar};
use realgame_core::seesaw::{Dims, Strategy};

use crate::error::CliError;
use crate::json::{Json, ObjBuilder};

/// Scalar that knows its JSON entry encoding. The `Send + Sync` bound lets
/// strategies built from these scalars cross thread boundaries in the
/// parallel drivers.
pub trait JsonScalar: Scalar + Send + Sync {
    fn entry_to_json(self) -> Json;
    fn entry_from_json(v: &serde_json::Value) -> Result<Self, CliError>;
}

impl JsonScalar for f64 {
    fn entry_to_json(self) -> Json {
        Json::Num(self)
    }

    fn entry_from_json(v: &serde_json::Value) -> Result<Self, CliError> {
        v.as_f64()
            .ok_or_else(|| CliError::parse("real matrix entry must be a number"))
    }
}

impl JsonScalar for Complex64 {
    fn entry_to_json(self) -> Json {
        Json::Arr(vec![Json::Num(self.re), Json::Num(self.im)])
    }

    fn entry_from_json(v: &serde_json::Value) -> Result<Self, CliError> {
        let pair = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| CliError::parse("complex matrix entry must be a [re, im] pair"))?;
        let re = pair[0]
            .as_f64()
            .ok_or_else(|| CliError::parse("complex entry re part must be a number"))?;
        let im = pair[1]
            .as_f64()
            .ok_or_else(|| CliError::parse("complex entry im part must be a number"))?;
        Ok(Complex64::new(re, im))
    }
}

pub fn matrix_to_json<S: JsonScalar>(m: &Matrix<S>) -> Json {
    let mut rows = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let mut row = Vec::with_capacity(m.cols());
        for c in 0..m.cols() {
            row.push(m[(r, c)].entry_to_json());
        }
        rows.push(Json::Arr(row));
    }
    Json::Arr(rows)
}

pub fn matrix_from_json<S: JsonScalar>(
    v: &serde_json::Value,
    what: &str,
) -> Result<Matrix<S>, CliError> {
    let rows = v
        .as_array()
        .ok_or_else(|| CliError::parse(format!("{what}: matrix must be an array of rows")))?;
    let n = rows.len();
    if n == 0 {
        return Err(CliError::parse(format!("{what}: matrix has no rows")));
    }
    let mut entries = Vec::with_capacity(n * n);
    let mut cols = None;
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| CliError::parse(format!("{what}: matrix row must be an array")))?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(CliError::parse(format!("{what}: ragged matrix rows")))
            }
            _ => {}
        }
        for e in row {
            entries.push(S::entry_from_json(e)?);
        }
    }
    let cols = cols.unwrap_or(0);
    if cols == 0 {
        return Err(CliError::parse(format!("{what}: matrix has no columns")));
    }
    Matrix::from_slice(n, cols, &entries).map_err(CliError::from)
}

pub fn field_name(f: Field) -> &'static str {
    match f {
        Field::Real => "real",
        Field::Complex => "complex",
    }
}

pub fn dims_to_json(d: Dims) -> Json {
    ObjBuilder::new()
        .field("a", Json::Int(d.a as i64))
        .field("b1", Json::Int(d.b1 as i64))
        .field("b2", Json::Int(d.b2 as i64))
        .field("c", Json::Int(d.c as i64))
        .build()
}

fn usize_field(v: &serde_json::Value, key: &str, what: &str) -> Result<usize, CliError> {
    v.get(key)
        .and_then(|x| x.as_u64())
        .map(|x| x as usize)
        .ok_or_else(|| CliError::parse(format!("{what}: missing or non-integer `{key}`")))
}

pub fn dims_from_json(v: &serde_json::Value) -> Result<Dims, CliError> {
    let a = usize_field(v, "a", "dims")?;
    let b1 = usize_field(v, "b1", "dims")?;
    let b2 = usize_field(v, "b2", "dims")?;
    let c = usize_field(v, "c", "dims")?;
    Dims::new(a, b1, b2, c).map_err(CliError::from)
}

pub fn strategy_to_json<S: JsonScalar>(st: &Strategy<S>) -> Json {
    ObjBuilder::new()
        .field("field", Json::str(field_name(st.field())))
        .field("dims", dims_to_json(st.dims))
        .field(
            "alice",
            Json::Arr(st.alice.iter().map(matrix_to_json).collect()),
        )
        .field(
            "charlie",
            Json::Arr(st.charlie.iter().map(matrix_to_json).collect()),
        )
        .field(
            "bob",
            Json::Arr(st.bob.iter().map(matrix_to_json).collect()),
        )
        .field("source1", matrix_to_json(&st.source1))
        .field("source2", matrix_to_json(&st.source2))
        .build()
}

fn matrix_array<S: JsonScalar, const N: usize>(
    v: &serde_json::Value,
    key: &str,
) -> Result<[Matrix<S>; N], CliError> {
    let arr = v
        .get(key)
        .and_then(|x| x.as_array())
        .ok_or_else(|| CliError::parse(format!("strategy: missing array `{key}`")))?;
    if arr.len() != N {
        return Err(CliError::parse(format!(
            "strategy: `{key}` must hold {N} matrices, got {}",
            arr.len()
        )));
    }
    let mut out: Vec<Matrix<S>> = Vec::with_capacity(N);
    for (i, m) in arr.iter().enumerate() {
        out.push(matrix_from_json(m, &format!("{key}[{i}]"))?);
    }
    Ok(out.try_into().expect("length checked"))
}

/// Parses a strategy object previously written by [`strategy_to_json`].
/// The caller dispatches on the `"field"` tag (see [`strategy_field`]).
pub fn strategy_from_json<S: JsonScalar>(v: &serde_json::Value) -> Result<Strategy<S>, CliError> {
    let dims = dims_from_json(
        v.get("dims")
            .ok_or_else(|| CliError::parse("strategy: missing `dims`"))?,
    )?;
    let st = Strategy {
        dims,
        alice: matrix_array::<S, 3>(v, "alice")?,
        charlie: matrix_array::<S, 6>(v, "charlie")?,
        bob: matrix_array::<S, 4>(v, "bob")?,
        source1: matrix_from_json(
            v.get("source1")
                .ok_or_else(|| CliError::parse("strategy: missing `source1`"))?,
            "source1",
        )?,
        source2: matrix_from_json(
            v.get("source2")
                .ok_or_else(|| CliError::parse("strategy: missing `source2`"))?,
            "source2",
        )?,
    };
    Ok(st)
}

pub fn strategy_field(v: &serde_json::Value) -> Result<Field, CliError> {
    match v.get("field").and_then(|f| f.as_str()) {
        Some("real") => Ok(Field::Real),
        Some("complex") => Ok(Field::Complex),
        Some(other) => Err(CliError::parse(format!(
            "strategy: unknown field `{other}` (expected `real` or `complex`)"
        ))),
        None => Err(CliError::parse("strategy: missing `field` tag")),
    }
}

pub fn prob_table_to_json(p: &ProbTable) -> Json {
    let mut settings = Vec::with_capacity(N_SETTINGS);
    for (s, &(x, z)) in SETTINGS.iter().enumerate() {
        settings.push(
            ObjBuilder::new()
                .field("x", Json::Int(x as i64))
                .field("z", Json::Int(z as i64))
                .field("probs", Json::nums(p.rows()[s].iter().copied()))
                .build(),
        );
    }
    ObjBuilder::new()
        .field("settings", Json::Arr(settings))
        .build()
}

/// Accepts a table in any of the shapes this tool writes: a whole command
/// report (looks under `"table"`), a bare `{"settings": […]}` object, or a
/// plain 12×16 array in canonical setting order.
pub fn prob_table_from_json(v: &serde_json::Value) -> Result<ProbTable, CliError> {
    if let Some(inner) = v.get("table") {
        return prob_table_from_json(inner);
    }
    let mut rows = [[0.0f64; N_OUTCOMES]; N_SETTINGS];
    if let Some(settings) = v.get("settings").and_then(|s| s.as_array()) {
        if settings.len() != N_SETTINGS {
            return Err(CliError::parse(format!(
                "table: expected {N_SETTINGS} settings, got {}",
                settings.len()
            )));
        }
        let mut seen = [false; N_SETTINGS];
        for entry in settings {
            let x = usize_field(entry, "x", "table setting")? as u8;
            let z = usize_field(entry, "z", "table setting")? as u8;
            let s = SettingPair::new(x, z).map_err(CliError::from)?.index();
            if seen[s] {
                return Err(CliError::parse(format!(
                    "table: duplicate setting x={x}, z={z}"
                )));
            }
            seen[s] = true;
            let probs = entry
                .get("probs")
                .and_then(|p| p.as_array())
                .ok_or_else(|| CliError::parse("table setting: missing `probs` array"))?;
            read_row(probs, &mut rows[s])?;
        }
        return ProbTable::new(rows).map_err(CliError::from);
    }
    if let Some(outer) = v.as_array() {
        if outer.len() != N_SETTINGS {
            return Err(CliError::parse(format!(
                "table: expected {N_SETTINGS} rows, got {}",
                outer.len()
            )));
        }
        for (s, row) in outer.iter().enumerate() {
            let row = row
                .as_array()
                .ok_or_else(|| CliError::parse("table: row must be an array"))?;
            read_row(row, &mut rows[s])?;
        }
        return ProbTable::new(rows).map_err(CliError::from);
    }
    Err(CliError::parse(
        "table: expected `settings` array, `table` wrapper, or 12×16 array",
    ))
}

fn read_row(src: &[serde_json::Value], dst: &mut [f64; N_OUTCOMES]) -> Result<(), CliError> {
    if src.len() != N_OUTCOMES {
        return Err(CliError::parse(format!(
            "table row must hold {N_OUTCOMES} probabilities, got {}",
            src.len()
        )));
    }
    for (o, p) in src.iter().enumerate() {
        dst[o] = p
            .as_f64()
            .ok_or_else(|| CliError::parse("table probability must be a number"))?;
    }
    Ok(())
}
