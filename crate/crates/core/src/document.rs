//! Self-checking JSON documents describing a polygon, and the textual
//! syntax for centers and angles used on the command line.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::center::{make_center, CenterKind};
use crate::error::{Error, Result};
use crate::lorentz::Vec3L;
use crate::optimize::criticality_certificate;
use crate::polygon::{develop_from, map_v, residual_norm, AngleSpec, PolygonParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    pub residual: f64,
    pub tangency_spread: f64,
    pub critical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonDocument {
    pub center: CenterKind,
    pub angles: Vec<f64>,
    pub params: PolygonParams,
    pub vertices: Vec<Vec3L>,
    pub edge_lines: Vec<Vec3L>,
    pub perimeter: f64,
    pub certificates: Certificates,
}

impl PolygonDocument {
    /// Develops `params` and records the certificates. Polygons of the
    /// closure (zero-length edges) are accepted as long as they close.
    pub fn build(kind: CenterKind, spec: &AngleSpec, params: &PolygonParams) -> Result<Self> {
        let cf = make_center(kind)?;
        let residual = residual_norm(&cf, params, spec)?;
        let polygon = develop_from(map_v(&cf, params.l0, params.theta)?, cf.gamma, &params.lengths, spec)?;
        let critical = criticality_certificate(&cf, &polygon)?.critical;
        Ok(PolygonDocument {
            center: kind,
            angles: spec.angles().to_vec(),
            params: params.clone(),
            vertices: polygon.vertices.clone(),
            edge_lines: polygon.edge_lines.clone(),
            perimeter: params.perimeter(),
            certificates: Certificates {
                residual,
                tangency_spread: cf.tangency_spread(&polygon.edge_lines)?,
                critical,
            },
        })
    }

    pub fn spec(&self) -> Result<AngleSpec> {
        AngleSpec::new(self.angles.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PolygonDocument = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        doc.center.validate()?;
        let n = doc.angles.len();
        if n == 0 || doc.params.lengths.len() != n || doc.vertices.len() != n || doc.edge_lines.len() != n {
            return Err(Error::Document(format!(
                "inconsistent sizes: {n} angles, {} lengths, {} vertices, {} edge lines",
                doc.params.lengths.len(),
                doc.vertices.len(),
                doc.edge_lines.len()
            )));
        }
        Ok(doc)
    }
}

fn parse_number(tok: &str) -> Result<f64> {
    let t = tok.trim();
    if t.eq_ignore_ascii_case("pi") || t == "π" {
        return Ok(PI);
    }
    t.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::InvalidAngles(format!("cannot parse '{tok}' as a number")))
}

/// Parses a real number written as a decimal or as a product of decimals and
/// `pi` optionally divided by such a product, e.g. `2*pi/3`, `pi/2`, `0.75`.
pub fn parse_angle_token(tok: &str) -> Result<f64> {
    let tok = tok.trim();
    if tok.is_empty() {
        return Err(Error::InvalidAngles("empty angle token".into()));
    }
    let product = |s: &str| -> Result<f64> { s.split('*').map(parse_number).product() };
    let mut parts = tok.splitn(2, '/');
    let num = product(parts.next().unwrap())?;
    match parts.next() {
        None => Ok(num),
        Some(den) => {
            let d = product(den)?;
            if d == 0.0 {
                return Err(Error::InvalidAngles(format!("division by zero in '{tok}'")));
            }
            Ok(num / d)
        }
    }
}

/// Parses a comma-separated list of angle tokens.
pub fn parse_angles(list: &str) -> Result<AngleSpec> {
    let beta = list.split(',').map(parse_angle_token).collect::<Result<Vec<f64>>>()?;
    AngleSpec::new(beta)
}

/// Parses `cusp`, `cone:<α>` or `geodesic:<r>`.
pub fn parse_center(text: &str) -> Result<CenterKind> {
    let text = text.trim();
    let (name, param) = match text.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (text, None),
    };
    let value = |p: Option<&str>| -> Result<f64> {
        let p = p.ok_or_else(|| Error::InvalidCenter(format!("'{name}' needs a parameter, e.g. {name}:1.5")))?;
        parse_angle_token(p).map_err(|_| Error::InvalidCenter(format!("cannot parse parameter '{p}'")))
    };
    let kind = match name.to_ascii_lowercase().as_str() {
        "cusp" if param.is_none() => CenterKind::Cusp,
        "cusp" => return Err(Error::InvalidCenter("a cusp takes no parameter".into())),
        "cone" => CenterKind::Cone(value(param)?),
        "geodesic" => CenterKind::Geodesic(value(param)?),
        other => return Err(Error::InvalidCenter(format!("unknown center kind '{other}'"))),
    };
    kind.validate()?;
    Ok(kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::construct_optimal;
    use approx::assert_abs_diff_eq;

    #[test]
    fn angle_tokens() {
        assert_abs_diff_eq!(parse_angle_token("2*pi/3").unwrap(), 2.0 * PI / 3.0, epsilon = 0.0);
        assert_abs_diff_eq!(parse_angle_token("pi/2").unwrap(), PI / 2.0, epsilon = 0.0);
        assert_abs_diff_eq!(parse_angle_token(" pi ").unwrap(), PI, epsilon = 0.0);
        assert_abs_diff_eq!(parse_angle_token("1.25").unwrap(), 1.25, epsilon = 0.0);
        assert_abs_diff_eq!(parse_angle_token("3*pi/2*2").unwrap(), 3.0 * PI / 4.0, epsilon = 1e-15);
        for bad in ["", "pie", "1/0", "2**pi", "inf"] {
            assert!(parse_angle_token(bad).is_err(), "{bad}");
        }
        let spec = parse_angles("2*pi/3,2*pi/3,2*pi/3").unwrap();
        assert_eq!(spec.len(), 3);
        assert!(parse_angles("pi").is_err());
        assert!(parse_angles("1.0,,2.0").is_err());
    }

    #[test]
    fn centers() {
        assert_eq!(parse_center("cusp").unwrap(), CenterKind::Cusp);
        assert_eq!(parse_center("cone:3.5").unwrap(), CenterKind::Cone(3.5));
        assert_eq!(parse_center("geodesic:pi/2").unwrap(), CenterKind::Geodesic(PI / 2.0));
        for bad in ["cusp:1", "cone", "cone:7", "geodesic:-1", "disc:1", "cone:x"] {
            assert!(parse_center(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn document_round_trip_is_exact() {
        let kind = CenterKind::Geodesic(1.3);
        let cf = make_center(kind).unwrap();
        let spec = AngleSpec::new(vec![1.0, 2.0, 1.5]).unwrap();
        let (params, _, _) = construct_optimal(&cf, &spec).unwrap();
        let doc = PolygonDocument::build(kind, &spec, &params).unwrap();
        assert!(doc.certificates.critical);
        assert!(doc.certificates.tangency_spread < 1e-9);
        let text = doc.to_json().unwrap();
        let back = PolygonDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json().unwrap(), text);
        assert!(text.contains("\"kind\": \"geodesic\""));
        assert!(PolygonDocument::from_json("{}").is_err());
    }
}
