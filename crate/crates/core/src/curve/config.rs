//! Text format for curve descriptions.
//!
//! ```text
//! # one [curve] section per shape
//! [curve]
//! kind = circle
//! center = 0.1 -0.2
//! radius = 1.0
//!
//! [curve]
//! kind = ellipse
//! center = 0 0
//! semi_axes = 2 1
//!
//! [curve]
//! kind = spline
//! # control points, one "x y" pair per line
//! 1.0 0.0
//! 0.0 1.0
//! -1.0 0.0
//! 0.0 -1.0
//!
//! [curve]
//! kind = implicit
//! bbox = -2 -2 2 2
//! resolution = 128
//! # Psi = sum of c * x^i * y^j, one "term = i j c" line per monomial
//! term = 2 0 0.5
//! term = 0 2 0.5
//! term = 0 0 -0.5
//! ```
//!
//! `#` starts a comment. Blank lines are ignored.

use std::sync::Arc;

use crate::error::ParseError;
use crate::geom::Vec2;

use super::{Polynomial, Shape};

#[derive(Default)]
struct Section {
    line: usize,
    kind: Option<String>,
    center: Option<Vec2>,
    radius: Option<f64>,
    semi_axes: Option<(f64, f64)>,
    bbox: Option<[f64; 4]>,
    resolution: Option<usize>,
    terms: Vec<(u32, u32, f64)>,
    points: Vec<Vec2>,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn floats(line: usize, s: &str, n: usize) -> Result<Vec<f64>, ParseError> {
    let v: Vec<f64> = s
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| err(line, format!("not a number: {t:?}"))))
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(err(line, format!("expected {n} numbers, got {}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(err(line, "non-finite value"));
    }
    Ok(v)
}

impl Section {
    fn into_shape(self) -> Result<Shape, ParseError> {
        let line = self.line;
        let kind = self.kind.ok_or_else(|| err(line, "section has no kind"))?;
        let missing = |what: &str| err(line, format!("{kind} needs {what}"));
        match kind.as_str() {
            "circle" => Ok(Shape::Circle {
                center: self.center.ok_or_else(|| missing("center"))?,
                radius: self.radius.ok_or_else(|| missing("radius"))?,
            }),
            "ellipse" => {
                let (a, b) = self.semi_axes.ok_or_else(|| missing("semi_axes"))?;
                Ok(Shape::Ellipse {
                    center: self.center.ok_or_else(|| missing("center"))?,
                    a,
                    b,
                })
            }
            "spline" => {
                if self.points.len() < 3 {
                    return Err(missing("at least 3 control points"));
                }
                Ok(Shape::Spline { points: self.points })
            }
            "implicit" => {
                if self.terms.is_empty() {
                    return Err(missing("at least one term"));
                }
                Ok(Shape::Implicit {
                    func: Arc::new(Polynomial::new(self.terms)),
                    bbox: self.bbox.ok_or_else(|| missing("bbox"))?,
                    resolution: self.resolution.unwrap_or(128),
                })
            }
            other => Err(err(line, format!("unknown kind {other:?}"))),
        }
    }
}

/// Parses a curve description into its shapes.
pub fn parse_curve_config(text: &str) -> Result<Vec<Shape>, ParseError> {
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            if content != "[curve]" {
                return Err(err(line, format!("unknown section {content}")));
            }
            sections.push(Section {
                line,
                ..Section::default()
            });
            continue;
        }
        let sec = sections
            .last_mut()
            .ok_or_else(|| err(line, "content before the first [curve] section"))?;
        if let Some((key, value)) = content.split_once('=') {
            let value = value.trim();
            match key.trim() {
                "kind" => sec.kind = Some(value.to_string()),
                "center" => {
                    let v = floats(line, value, 2)?;
                    sec.center = Some(Vec2::new(v[0], v[1]));
                }
                "radius" => sec.radius = Some(floats(line, value, 1)?[0]),
                "semi_axes" => {
                    let v = floats(line, value, 2)?;
                    sec.semi_axes = Some((v[0], v[1]));
                }
                "bbox" => {
                    let v = floats(line, value, 4)?;
                    sec.bbox = Some([v[0], v[1], v[2], v[3]]);
                }
                "resolution" => {
                    sec.resolution = Some(value.parse().map_err(|_| err(line, "bad resolution"))?);
                }
                "term" => {
                    let parts: Vec<&str> = value.split_whitespace().collect();
                    if parts.len() != 3 {
                        return Err(err(line, "term needs `i j coefficient`"));
                    }
                    let i: u32 = parts[0].parse().map_err(|_| err(line, "bad exponent"))?;
                    let j: u32 = parts[1].parse().map_err(|_| err(line, "bad exponent"))?;
                    let c = floats(line, parts[2], 1)?[0];
                    sec.terms.push((i, j, c));
                }
                other => return Err(err(line, format!("unknown key {other:?}"))),
            }
        } else if content == "points:" {
            continue;
        } else {
            let v = floats(line, content, 2)?;
            sec.points.push(Vec2::new(v[0], v[1]));
        }
    }
    if sections.is_empty() {
        return Err(ParseError::Invalid("no [curve] sections".into()));
    }
    sections.into_iter().map(Section::into_shape).collect()
}
