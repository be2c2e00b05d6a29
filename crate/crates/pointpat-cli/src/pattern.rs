//! The pattern file schema: a JSON object with `dimension`, `origin`,
//! and a list of `{point, multiplicity}` atoms.
//!
//! Parsing validates dimensions, multiplicities and finiteness with
//! line/field diagnostics, and coalesces duplicate points. Serialisation
//! writes the canonical (coalesced, sorted) form with shortest
//! round-trip floats, so `parse(serialize(m)) == m` exactly.

use pointpat::{CountingMeasure, MetricContext, Point};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
pub struct PatternFile {
    pub dimension: usize,
    pub origin: Vec<f64>,
    pub atoms: Vec<AtomRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AtomRecord {
    pub point: Vec<f64>,
    pub multiplicity: u64,
}

pub fn parse_pattern(text: &str) -> Result<CountingMeasure, CliError> {
    let file: PatternFile = serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("malformed pattern file: {e}")))?;
    if file.dimension == 0 {
        return Err(CliError::input("field `dimension` must be at least 1"));
    }
    if file.origin.len() != file.dimension {
        return Err(CliError::input(format!(
            "field `origin` has {} coordinates, expected {}",
            file.origin.len(),
            file.dimension
        )));
    }
    let origin = Point::new(file.origin)
        .map_err(|e| CliError::input(format!("field `origin`: {e}")))?;
    let ctx = MetricContext::new(origin);
    let mut atoms = Vec::with_capacity(file.atoms.len());
    for (index, atom) in file.atoms.into_iter().enumerate() {
        if atom.point.len() != file.dimension {
            return Err(CliError::input(format!(
                "atom {index}: point has {} coordinates, expected {}",
                atom.point.len(),
                file.dimension
            )));
        }
        if atom.multiplicity == 0 {
            return Err(CliError::input(format!(
                "atom {index}: multiplicity must be at least 1"
            )));
        }
        let point = Point::new(atom.point)
            .map_err(|e| CliError::input(format!("atom {index}: {e}")))?;
        atoms.push((point, atom.multiplicity));
    }
    CountingMeasure::new(ctx, atoms)
        .map_err(|e| CliError::input(format!("invalid pattern: {e}")))
}

pub fn serialize_pattern(measure: &CountingMeasure) -> String {
    let file = PatternFile {
        dimension: measure.ctx().dimension(),
        origin: measure.ctx().origin().coords().to_vec(),
        atoms: measure
            .atoms()
            .iter()
            .map(|(p, m)| AtomRecord { point: p.coords().to_vec(), multiplicity: *m })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("schema is serialisable");
    text.push('\n');
    text
}

pub fn load_pattern(path: &std::path::Path) -> Result<CountingMeasure, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    parse_pattern(&text)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_offset_dirac() {
        let mu = parse_pattern(
            r#"{"dimension":1,"origin":[0],"atoms":[{"point":[0.5],"multiplicity":1}]}"#,
        )
        .unwrap();
        assert_eq!(mu.total_mass(), 1);
        assert_eq!(mu.atoms()[0].0.coords(), &[0.5]);
    }

    #[test]
    fn empty_atom_list_is_the_zero_measure() {
        let mu = parse_pattern(r#"{"dimension":2,"origin":[0,0],"atoms":[]}"#).unwrap();
        assert!(mu.is_empty());
    }

    #[test]
    fn duplicate_points_coalesce() {
        let mu = parse_pattern(
            r#"{"dimension":1,"origin":[0],"atoms":[
                {"point":[1.0],"multiplicity":1},
                {"point":[1.0],"multiplicity":2}]}"#,
        )
        .unwrap();
        assert_eq!(mu.atoms().len(), 1);
        assert_eq!(mu.atoms()[0].1, 3);
    }

    #[test]
    fn diagnostics_carry_the_atom_index() {
        let err = parse_pattern(
            r#"{"dimension":1,"origin":[0],"atoms":[
                {"point":[1.0],"multiplicity":1},
                {"point":[2.0],"multiplicity":0}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("atom 1"));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = parse_pattern(
            r#"{"dimension":2,"origin":[0,0],"atoms":[{"point":[1.0],"multiplicity":1}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("expected 2"));
    }

    #[test]
    fn round_trip_is_exact() {
        let mu = parse_pattern(
            r#"{"dimension":2,"origin":[0.5,-1.0],"atoms":[
                {"point":[0.1,0.2],"multiplicity":2},
                {"point":[-3.25,7.5],"multiplicity":1}]}"#,
        )
        .unwrap();
        let again = parse_pattern(&serialize_pattern(&mu)).unwrap();
        assert_eq!(mu, again);
    }
}
