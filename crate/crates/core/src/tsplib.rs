//! TSPLIB95 instance reader for node-coordinate problems.
//!
//! Only the three coordinate-based metrics needed by the benchmark set are
//! supported: `EUC_2D`, `CEIL_2D` and the pseudo-Euclidean `ATT` metric.
//! Node indices in files are 1-based; everything in this crate is 0-based.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::TsplibError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeWeightType {
    #[serde(rename = "EUC_2D")]
    Euc2d,
    #[serde(rename = "CEIL_2D")]
    Ceil2d,
    #[serde(rename = "ATT")]
    Att,
}

impl EdgeWeightType {
    pub fn keyword(self) -> &'static str {
        match self {
            EdgeWeightType::Euc2d => "EUC_2D",
            EdgeWeightType::Ceil2d => "CEIL_2D",
            EdgeWeightType::Att => "ATT",
        }
    }

    /// Integer distance between two points under this metric.
    pub fn distance(self, a: (f64, f64), b: (f64, f64)) -> i64 {
        let dx = a.0 - b.0;
        let dy = a.1 - b.1;
        let sq = dx * dx + dy * dy;
        match self {
            EdgeWeightType::Euc2d => nint(sq.sqrt()),
            EdgeWeightType::Ceil2d => sq.sqrt().ceil() as i64,
            EdgeWeightType::Att => {
                let r = (sq / 10.0).sqrt();
                let t = nint(r);
                if (t as f64) < r {
                    t + 1
                } else {
                    t
                }
            }
        }
    }
}

impl fmt::Display for EdgeWeightType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for EdgeWeightType {
    type Err = TsplibError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "EUC_2D" => Ok(EdgeWeightType::Euc2d),
            "CEIL_2D" => Ok(EdgeWeightType::Ceil2d),
            "ATT" => Ok(EdgeWeightType::Att),
            other => Err(TsplibError::UnsupportedEdgeWeightType(other.to_string())),
        }
    }
}

/// TSPLIB's `nint`: `(int)(x + 0.5)`, i.e. round half up for non-negative `x`.
fn nint(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub name: String,
    pub dimension: usize,
    pub edge_weight_type: EdgeWeightType,
    pub coords: Vec<(f64, f64)>,
}

impl InstanceSpec {
    pub fn edge_weight(&self, i: usize, j: usize) -> Result<i64, TsplibError> {
        for index in [i, j] {
            if index >= self.dimension {
                return Err(TsplibError::IndexOutOfRange {
                    index,
                    dimension: self.dimension,
                });
            }
        }
        if i == j {
            return Ok(0);
        }
        Ok(self.edge_weight_type.distance(self.coords[i], self.coords[j]))
    }

    /// Canonical TSPLIB rendering. `parse_instance(to_tsplib())` reproduces `self`
    /// exactly because `f64` display output is round-trip exact.
    pub fn to_tsplib(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "NAME : {}", self.name);
        let _ = writeln!(out, "TYPE : TSP");
        let _ = writeln!(out, "DIMENSION : {}", self.dimension);
        let _ = writeln!(out, "EDGE_WEIGHT_TYPE : {}", self.edge_weight_type);
        let _ = writeln!(out, "NODE_COORD_SECTION");
        for (idx, (x, y)) in self.coords.iter().enumerate() {
            let _ = writeln!(out, "{} {} {}", idx + 1, x, y);
        }
        out.push_str("EOF\n");
        out
    }
}

/// Splits `KEY : VALUE` (or `KEY: VALUE`, or a bare `KEY`) header lines.
fn split_header(line: &str) -> (&str, &str) {
    match line.split_once(':') {
        Some((key, value)) => (key.trim(), value.trim()),
        None => (line.trim(), ""),
    }
}

pub fn parse_instance(text: &[u8]) -> Result<InstanceSpec, TsplibError> {
    let text = String::from_utf8_lossy(text);
    let mut name = None;
    let mut dimension = None;
    let mut edge_weight_type = None;
    let mut coord_lines: Option<Vec<(usize, &str)>> = None;
    let mut in_coords = false;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if in_coords {
            if line.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+') {
                coord_lines.get_or_insert_with(Vec::new).push((lineno, line));
                continue;
            }
            in_coords = false;
        }
        let (key, value) = split_header(line);
        match key {
            "NAME" => name = Some(value.to_string()),
            "TYPE" => {
                if value != "TSP" {
                    return Err(TsplibError::UnsupportedProblemType(value.to_string()));
                }
            }
            "DIMENSION" => {
                let d: usize = value.parse().map_err(|_| TsplibError::MalformedHeader {
                    line: lineno,
                    reason: format!("DIMENSION `{value}` is not a non-negative integer"),
                })?;
                dimension = Some(d);
            }
            "EDGE_WEIGHT_TYPE" => edge_weight_type = Some(value.parse::<EdgeWeightType>()?),
            "EDGE_WEIGHT_SECTION" => {
                return Err(TsplibError::UnsupportedEdgeWeightType(
                    "EXPLICIT (EDGE_WEIGHT_SECTION)".into(),
                ))
            }
            "NODE_COORD_SECTION" => {
                in_coords = true;
                coord_lines.get_or_insert_with(Vec::new);
            }
            // Informational keys that do not change the instance.
            "COMMENT" | "NODE_COORD_TYPE" | "DISPLAY_DATA_TYPE" | "CAPACITY" => {}
            other => {
                return Err(TsplibError::MalformedHeader {
                    line: lineno,
                    reason: format!("unexpected keyword `{other}`"),
                })
            }
        }
    }

    let name = name.ok_or(TsplibError::MissingField("NAME"))?;
    let dimension = dimension.ok_or(TsplibError::MissingField("DIMENSION"))?;
    let edge_weight_type = edge_weight_type.ok_or(TsplibError::MissingField("EDGE_WEIGHT_TYPE"))?;
    let coord_lines = coord_lines.ok_or(TsplibError::MissingField("NODE_COORD_SECTION"))?;
    if dimension < 2 {
        return Err(TsplibError::InvalidDimension(dimension));
    }
    if coord_lines.len() != dimension {
        return Err(TsplibError::DimensionMismatch {
            declared: dimension,
            found: coord_lines.len(),
        });
    }

    let mut coords: Vec<Option<(f64, f64)>> = vec![None; dimension];
    for (line, content) in coord_lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(TsplibError::MalformedCoord {
                line,
                reason: format!("expected `index x y`, found {} fields", fields.len()),
            });
        }
        let index: usize = fields[0].parse().map_err(|_| TsplibError::MalformedCoord {
            line,
            reason: format!("node index `{}` is not a positive integer", fields[0]),
        })?;
        if index == 0 || index > dimension {
            return Err(TsplibError::MalformedCoord {
                line,
                reason: format!("node index {index} outside 1..={dimension}"),
            });
        }
        let parse_coord = |s: &str| -> Result<f64, TsplibError> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| TsplibError::MalformedCoord {
                    line,
                    reason: format!("coordinate `{s}` is not a finite number"),
                })
        };
        let point = (parse_coord(fields[1])?, parse_coord(fields[2])?);
        if coords[index - 1].replace(point).is_some() {
            return Err(TsplibError::MalformedCoord {
                line,
                reason: format!("node {index} listed twice"),
            });
        }
    }
    // Every slot is filled: the count matched and no index repeated.
    let coords = coords.into_iter().map(|c| c.unwrap_or_default()).collect();

    Ok(InstanceSpec {
        name,
        dimension,
        edge_weight_type,
        coords,
    })
}

/// Reads a TSPLIB `.tour` file and returns the 0-based open permutation
/// (the closing return to the first city is not repeated).
pub fn parse_tour(text: &[u8]) -> Result<Vec<usize>, TsplibError> {
    let text = String::from_utf8_lossy(text);
    let mut dimension = None;
    let mut tour = Vec::new();
    let mut in_section = false;
    'lines: for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if in_section {
            for tok in line.split_whitespace() {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| TsplibError::MalformedTour(format!("bad tour entry `{tok}`")))?;
                if v == -1 {
                    break 'lines;
                }
                if v < 1 {
                    return Err(TsplibError::MalformedTour(format!("bad tour entry `{tok}`")));
                }
                tour.push(v as usize - 1);
            }
            continue;
        }
        let (key, value) = split_header(line);
        match key {
            "TOUR_SECTION" => in_section = true,
            "DIMENSION" => {
                dimension = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| TsplibError::MalformedTour(format!("bad DIMENSION `{value}`")))?,
                )
            }
            "EOF" => break,
            _ => {}
        }
    }
    if !in_section {
        return Err(TsplibError::MissingField("TOUR_SECTION"));
    }
    if let Some(d) = dimension {
        if d != tour.len() {
            return Err(TsplibError::DimensionMismatch {
                declared: d,
                found: tour.len(),
            });
        }
    }
    Ok(tour)
}
