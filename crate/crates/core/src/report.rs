//! On-disk report shapes. Every report carries `schema_version`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{
    check_general_position, concurrency_map, greedy_gp_subset, group_by_slope, max_gp_subset, FamilyDecomposition, GpReport,
    LineSet,
};
use crate::grid::RichLineRecord;
use crate::line::{Line, PointR};
use crate::rational::Rational;
use crate::star::{CommutatorGraph, ComponentReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Versioned<T> {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Versioned<T> {
    pub fn new(body: T) -> Self {
        Versioned {
            schema_version: SCHEMA_VERSION,
            body,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RichLinesReport {
    pub k: usize,
    pub lines: Vec<RichLineRecord>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum LinesFile {
    Bare(Vec<Line>),
    Wrapped { lines: Vec<Line> },
}

/// Reads a line set from either a bare JSON array of lines or any object
/// with a `lines` array, such as a rich-lines report.
pub fn parse_lines(json: &str) -> Result<LineSet> {
    let file: LinesFile =
        serde_json::from_str(json).map_err(|e| Error::Precondition(format!("line file: {e}")))?;
    Ok(match file {
        LinesFile::Bare(v) | LinesFile::Wrapped { lines: v } => LineSet::new(v),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelFamilyOut {
    pub slope: Rational,
    pub lines: Vec<Line>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarFamilyOut {
    pub point: PointR,
    pub lines: Vec<Line>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub gp_core: Vec<Line>,
    pub parallel_families: Vec<ParallelFamilyOut>,
    pub star_families: Vec<StarFamilyOut>,
    pub family_count: usize,
    pub family_bound: usize,
    /// Size of a maximum general-position subset, for inputs small enough
    /// to search exhaustively.
    pub max_gp_size: Option<usize>,
}

impl DecompositionReport {
    pub fn new(lines: &LineSet, d: &FamilyDecomposition) -> Self {
        DecompositionReport {
            gp_core: d.gp_core.lines().to_vec(),
            parallel_families: d
                .parallel_families
                .iter()
                .map(|(slope, lines)| ParallelFamilyOut {
                    slope: slope.clone(),
                    lines: lines.clone(),
                })
                .collect(),
            star_families: d
                .star_families
                .iter()
                .map(|(point, lines)| StarFamilyOut {
                    point: point.clone(),
                    lines: lines.clone(),
                })
                .collect(),
            family_count: d.family_count(),
            family_bound: d.family_bound(),
            max_gp_size: max_gp_subset(lines).ok().map(|s| s.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeClass {
    pub slope: Rational,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcurrencyPoint {
    pub point: PointR,
    pub size: usize,
}

/// Parallel classes, multi-line crossings and the general-position check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub line_count: usize,
    pub slope_classes: Vec<SlopeClass>,
    /// Points on at least three lines.
    pub concurrency_points: Vec<ConcurrencyPoint>,
    pub general_position: GpReport,
    pub greedy_gp_size: usize,
}

pub fn analyze(lines: &LineSet) -> AnalysisReport {
    AnalysisReport {
        line_count: lines.len(),
        slope_classes: group_by_slope(lines)
            .into_iter()
            .filter(|(_, v)| v.len() > 1)
            .map(|(slope, v)| SlopeClass { slope, size: v.len() })
            .collect(),
        concurrency_points: concurrency_map(lines)
            .into_iter()
            .filter(|(_, v)| v.len() > 2)
            .map(|(point, v)| ConcurrencyPoint { point, size: v.len() })
            .collect(),
        general_position: check_general_position(lines),
        greedy_gp_size: greedy_gp_subset(lines).len(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorReport {
    pub graph: CommutatorGraph,
    pub components: ComponentReport,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line::line;
    use crate::rational::r;

    #[test]
    fn versioned_flattens() {
        let rep = Versioned::new(RichLinesReport { k: 3, lines: vec![] });
        assert_eq!(
            serde_json::to_string(&rep).unwrap(),
            r#"{"schema_version":1,"k":3,"lines":[]}"#
        );
    }

    #[test]
    fn lines_parse_from_either_shape() {
        let bare = r#"[{"slope":"1","intercept":"0"},{"slope":"-1","intercept":"4"}]"#;
        let wrapped = r#"{"schema_version":1,"k":3,"lines":[{"slope":"-1","intercept":"4","richness":3}]}"#;
        assert_eq!(parse_lines(bare).unwrap().len(), 2);
        assert_eq!(parse_lines(wrapped).unwrap().lines(), &[line(r(-1), r(4))]);
        assert!(parse_lines("{}").is_err());
    }

    #[test]
    fn analysis_counts() {
        let ls = LineSet::new(vec![line(r(1), r(0)), line(r(2), r(0)), line(r(3), r(0)), line(r(1), r(5))]);
        let rep = analyze(&ls);
        assert_eq!(rep.slope_classes, vec![SlopeClass { slope: r(1), size: 2 }]);
        assert_eq!(rep.concurrency_points.len(), 1);
        assert!(!rep.general_position.is_gp);
    }
}
