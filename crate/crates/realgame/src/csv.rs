//! CSV encoding of probability tables — the only 2-D artifact the CLI
//! round-trips through CSV.
//!
//! Layout: one header line, then one row per measurement setting in the
//! canonical setting order. The first two columns carry the setting pair
//! (x, z); the remaining 16 columns carry P(outcome | x, z) with outcomes
//! ordered by their packed index (a·8 + b·2 + c) and labeled by the 4-bit
//! string `a b₁ b₀ c`. Floats use the same 17-significant-digit format as
//! the JSON writer, so CSV output is byte-identical across runs too.

use realgame_core::game::{ProbTable, N_OUTCOMES, N_SETTINGS, SETTINGS};

use crate::error::CliError;
use crate::json::fmt_f64;

/// Column label for a packed outcome index: 4 bits, `a b₁ b₀ c`.
fn outcome_label(o: usize) -> String {
    format!("p{:04b}", o)
}

pub fn prob_table_to_csv(p: &ProbTable) -> String {
    let mut out = String::from("x,z");
    for o in 0..N_OUTCOMES {
        out.push(',');
        out.push_str(&outcome_label(o));
    }
    out.push('\n');
    for (s, &(x, z)) in SETTINGS.iter().enumerate() {
        out.push_str(&format!("{x},{z}"));
        for o in 0..N_OUTCOMES {
            out.push(',');
            out.push_str(&fmt_f64(p.prob(s, o)));
        }
        out.push('\n');
    }
    out
}

/// Parses a table written by [`prob_table_to_csv`]. Rows may appear in any
/// order but every setting must appear exactly once, and the result must
/// satisfy the probability-table invariants (rows normalized, no negative
/// entries beyond tolerance).
pub fn prob_table_from_csv(text: &str) -> Result<ProbTable, CliError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::parse("empty CSV input"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.len() != 2 + N_OUTCOMES || cols[0] != "x" || cols[1] != "z" {
        return Err(CliError::parse(format!(
            "expected header `x,z,p0000,…,p1111` with {} columns, got {}",
            2 + N_OUTCOMES,
            cols.len()
        )));
    }
    for (o, &c) in cols[2..].iter().enumerate() {
        if c != outcome_label(o) {
            return Err(CliError::parse(format!(
                "outcome column {} is `{c}`, expected `{}`",
                o + 2,
                outcome_label(o)
            )));
        }
    }

    let mut rows = [[0.0f64; N_OUTCOMES]; N_SETTINGS];
    let mut seen = [false; N_SETTINGS];
    for line in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 + N_OUTCOMES {
            return Err(CliError::parse(format!(
                "row has {} fields, expected {}",
                fields.len(),
                2 + N_OUTCOMES
            )));
        }
        let x: u8 = fields[0]
            .parse()
            .map_err(|_| CliError::parse(format!("bad x value `{}`", fields[0])))?;
        let z: u8 = fields[1]
            .parse()
            .map_err(|_| CliError::parse(format!("bad z value `{}`", fields[1])))?;
        let s = SETTINGS
            .iter()
            .position(|&(sx, sz)| sx == x && sz == z)
            .ok_or_else(|| CliError::parse(format!("unknown setting pair x={x}, z={z}")))?;
        if seen[s] {
            return Err(CliError::parse(format!("duplicate row for x={x}, z={z}")));
        }
        seen[s] = true;
        for (o, f) in fields[2..].iter().enumerate() {
            rows[s][o] = f
                .parse()
                .map_err(|_| CliError::parse(format!("bad probability `{f}`")))?;
        }
    }
    if let Some(missing) = seen.iter().position(|&b| !b) {
        let (x, z) = SETTINGS[missing];
        return Err(CliError::parse(format!("missing row for x={x}, z={z}")));
    }
    ProbTable::new(rows).map_err(CliError::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use realgame_core::game::ideal_strategy_probs;

    #[test]
    fn csv_round_trips_the_ideal_table_exactly() {
        let p = ideal_strategy_probs().unwrap();
        let text = prob_table_to_csv(&p);
        let back = prob_table_from_csv(&text).unwrap();
        assert_eq!(back.max_abs_diff(&p), 0.0);
        assert_eq!(prob_table_to_csv(&back), text, "byte-identical re-encode");
    }

    #[test]
    fn csv_shape_is_12_rows_16_outcome_columns() {
        let p = ideal_strategy_probs().unwrap();
        let text = prob_table_to_csv(&p);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + N_SETTINGS);
        for row in &lines[1..] {
            assert_eq!(row.split(',').count(), 2 + N_OUTCOMES);
        }
    }

    #[test]
    fn rejects_missing_and_duplicate_rows() {
        let p = ideal_strategy_probs().unwrap();
        let text = prob_table_to_csv(&p);
        let mut lines: Vec<&str> = text.lines().collect();
        let dropped = lines.remove(3);
        let missing = lines.join("\n");
        assert!(prob_table_from_csv(&missing).is_err());
        lines.push(dropped);
        lines.push(dropped);
        let duplicated = lines.join("\n");
        assert!(prob_table_from_csv(&duplicated).is_err());
    }
}
