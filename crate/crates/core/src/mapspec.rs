//! Map specifications: catalog shorthands and piecewise-linear JSON.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::NumericMap;
use crate::pwl::{Interval, PwlMap, PwlPiece, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MapSpec {
    Tent,
    Sawtooth {
        #[serde(rename = "N")]
        n: u32,
    },
    AltSawtooth {
        #[serde(rename = "N")]
        n: u32,
    },
    Logistic {
        r: f64,
    },
    OneMinusXSquared,
    Pwl {
        pieces: Vec<PieceSpec>,
    },
}

/// One piece with rationals written as `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub lo: String,
    pub hi: String,
    #[serde(default = "closed")]
    pub lo_closed: bool,
    #[serde(default)]
    pub hi_closed: bool,
    pub slope: String,
    pub intercept: String,
}

fn closed() -> bool {
    true
}

/// A spec resolved to something an engine can run on.
#[derive(Clone, Debug)]
pub enum LoadedMap {
    Exact { map: PwlMap, note: Option<&'static str> },
    Numeric(NumericMap),
}

pub const VIA_ORDER_ISOMORPHISM: &str =
    "logistic r=4 computed exactly on the tent map (via order-isomorphism)";

fn parse_rational(field: &str, index: usize, s: &str) -> Result<Rational> {
    Rational::from_str(s.trim())
        .map_err(|_| Error::Parse(format!("pieces[{index}].{field}: `{s}` is not a rational p/q")))
}

impl PieceSpec {
    fn to_piece(&self, index: usize) -> Result<PwlPiece> {
        let domain = Interval::new(
            parse_rational("lo", index, &self.lo)?,
            parse_rational("hi", index, &self.hi)?,
            self.lo_closed,
            self.hi_closed,
        );
        Ok(PwlPiece::new(
            domain,
            parse_rational("slope", index, &self.slope)?,
            parse_rational("intercept", index, &self.intercept)?,
        ))
    }

    fn from_piece(p: &PwlPiece) -> Self {
        PieceSpec {
            lo: p.domain.lo.to_string(),
            hi: p.domain.hi.to_string(),
            lo_closed: p.domain.lo_closed,
            hi_closed: p.domain.hi_closed,
            slope: p.form.slope.to_string(),
            intercept: p.form.intercept.to_string(),
        }
    }
}

impl MapSpec {
    /// Accepts a shorthand (`tent`, `sawtooth:3`, `alt_sawtooth:9`,
    /// `logistic:3.5`, `one_minus_x_squared`), inline JSON, or a path to a
    /// JSON file.
    pub fn parse(input: &str) -> Result<Self> {
        let s = input.trim();
        if s.starts_with('{') {
            return Self::from_json(s);
        }
        if let Some(spec) = Self::parse_shorthand(s)? {
            return Ok(spec);
        }
        let path = std::path::Path::new(s);
        if path.is_file() {
            let text = std::fs::read_to_string(path)?;
            return Self::from_json(&text);
        }
        Err(Error::UnknownMap(s.to_string()))
    }

    fn parse_shorthand(s: &str) -> Result<Option<Self>> {
        let (name, param) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b.trim())),
            None => (s, None),
        };
        let int_param = |p: Option<&str>| -> Result<u32> {
            p.ok_or_else(|| Error::BadParameter(format!("{name} needs :N")))?
                .parse()
                .map_err(|_| Error::BadParameter(format!("{name}: `{}` is not an integer", p.unwrap_or(""))))
        };
        let spec = match (name, param) {
            ("tent", None) => MapSpec::Tent,
            ("one_minus_x_squared", None) => MapSpec::OneMinusXSquared,
            ("sawtooth", p) => MapSpec::Sawtooth { n: int_param(p)? },
            ("alt_sawtooth", p) => MapSpec::AltSawtooth { n: int_param(p)? },
            ("logistic", Some(p)) => MapSpec::Logistic {
                r: p.parse().map_err(|_| Error::BadParameter(format!("logistic: `{p}` is not a number")))?,
            },
            ("logistic", None) => return Err(Error::BadParameter("logistic needs :r".into())),
            ("tent" | "one_minus_x_squared", Some(_)) => {
                return Err(Error::BadParameter(format!("{name} takes no parameter")))
            }
            _ => return Ok(None),
        };
        Ok(Some(spec))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!("map spec at line {}, column {}: {e}", e.line(), e.column()))
        })?;
        let field_error = |prefix: &str, e: serde_path_to_error::Error<serde_json::Error>| {
            let path = e.path().to_string();
            let path = if path == "." { prefix.to_string() } else { format!("{prefix}{path}") };
            Error::Parse(format!("map spec field `{path}`: {}", e.into_inner()))
        };
        // internally tagged enums buffer their content and lose the path, so
        // piece lists are decoded on their own
        if value.get("type").and_then(|t| t.as_str()) == Some("pwl") {
            if let Some(pieces) = value.get("pieces") {
                let pieces: Vec<PieceSpec> = serde_path_to_error::deserialize(pieces.clone())
                    .map_err(|e| field_error("pieces", e))?;
                return Ok(MapSpec::Pwl { pieces });
            }
        }
        serde_path_to_error::deserialize(value).map_err(|e| field_error("", e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("map specs always serialize")
    }

    pub fn from_pwl(map: &PwlMap) -> Self {
        MapSpec::Pwl { pieces: map.pieces().iter().map(PieceSpec::from_piece).collect() }
    }

    /// Builds the map, validating every invariant.
    pub fn resolve(&self) -> Result<LoadedMap> {
        Ok(match self {
            MapSpec::Tent => LoadedMap::Exact { map: PwlMap::tent(), note: None },
            MapSpec::Sawtooth { n } => LoadedMap::Exact { map: PwlMap::sawtooth(*n)?, note: None },
            MapSpec::AltSawtooth { n } => LoadedMap::Exact { map: PwlMap::alt_sawtooth(*n)?, note: None },
            MapSpec::Logistic { r } if *r == 4.0 => {
                LoadedMap::Exact { map: PwlMap::tent(), note: Some(VIA_ORDER_ISOMORPHISM) }
            }
            MapSpec::Logistic { r } => LoadedMap::Numeric(NumericMap::logistic(*r)?),
            MapSpec::OneMinusXSquared => LoadedMap::Numeric(NumericMap::one_minus_x_squared()),
            MapSpec::Pwl { pieces } => {
                let pieces = pieces.iter().enumerate().map(|(i, p)| p.to_piece(i)).collect::<Result<_>>()?;
                LoadedMap::Exact { map: PwlMap::new(pieces)?, note: None }
            }
        })
    }

    /// Floating-point evaluation of the same map, used for sampling.
    pub fn numeric(&self) -> Result<NumericMap> {
        match self {
            MapSpec::Logistic { r } => NumericMap::logistic(*r),
            MapSpec::OneMinusXSquared => Ok(NumericMap::one_minus_x_squared()),
            other => match other.resolve()? {
                LoadedMap::Exact { map, .. } => NumericMap::from_pwl(&map),
                LoadedMap::Numeric(m) => Ok(m),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthands() {
        assert_eq!(MapSpec::parse("tent").unwrap(), MapSpec::Tent);
        assert_eq!(MapSpec::parse("sawtooth:3").unwrap(), MapSpec::Sawtooth { n: 3 });
        assert_eq!(MapSpec::parse("alt_sawtooth:9").unwrap(), MapSpec::AltSawtooth { n: 9 });
        assert_eq!(MapSpec::parse("logistic:3.5").unwrap(), MapSpec::Logistic { r: 3.5 });
        assert!(matches!(MapSpec::parse("sawtooth:x"), Err(Error::BadParameter(_))));
        assert!(matches!(MapSpec::parse("henon"), Err(Error::UnknownMap(_))));
    }

    #[test]
    fn resolution() {
        match MapSpec::parse("tent").unwrap().resolve().unwrap() {
            LoadedMap::Exact { map, note } => {
                assert_eq!(map.pieces().len(), 2);
                assert!(note.is_none());
            }
            LoadedMap::Numeric(_) => panic!("tent is exact"),
        }
        assert!(matches!(
            MapSpec::parse("logistic:3.5").unwrap().resolve().unwrap(),
            LoadedMap::Numeric(_)
        ));
        match MapSpec::parse("logistic:4").unwrap().resolve().unwrap() {
            LoadedMap::Exact { map, note } => {
                assert_eq!(map, PwlMap::tent());
                assert_eq!(note, Some(VIA_ORDER_ISOMORPHISM));
            }
            LoadedMap::Numeric(_) => panic!("logistic:4 routes to the tent engine"),
        }
    }

    #[test]
    fn pwl_json() {
        let text = r#"{"type":"pwl","pieces":[
            {"lo":"0","hi":"1/2","hi_closed":false,"slope":"2","intercept":"0"},
            {"lo":"1/2","hi":"1","hi_closed":true,"slope":"-2","intercept":"2"}]}"#;
        match MapSpec::parse(text).unwrap().resolve().unwrap() {
            LoadedMap::Exact { map, .. } => assert_eq!(map, PwlMap::tent()),
            LoadedMap::Numeric(_) => unreachable!(),
        }
        let gap = r#"{"type":"pwl","pieces":[
            {"lo":"0","hi":"1/2","slope":"1","intercept":"0"},
            {"lo":"1/2","lo_closed":false,"hi":"1","hi_closed":true,"slope":"1","intercept":"0"}]}"#;
        let err = MapSpec::parse(gap).unwrap().resolve().unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("gap")), "{err}");

        let bad = r#"{"type":"pwl","pieces":[{"lo":"0","hi":"1","slope":"two","intercept":"0"}]}"#;
        let err = MapSpec::parse(bad).unwrap().resolve().unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("pieces[0].slope")), "{err}");

        let missing = r#"{"type":"pwl","pieces":[{"lo":"0"}]}"#;
        let err = MapSpec::parse(missing).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("pieces[0]") && m.contains("hi")), "{err}");

        let broken = "{\"type\":\"pwl\",\n\"pieces\": [}";
        let err = MapSpec::parse(broken).unwrap_err();
        assert!(matches!(err, Error::Parse(ref m) if m.contains("line 2")), "{err}");
    }

    #[test]
    fn catalog_json_forms() {
        assert_eq!(MapSpec::parse(r#"{"type":"sawtooth","N":3}"#).unwrap(), MapSpec::Sawtooth { n: 3 });
        assert_eq!(MapSpec::parse(r#"{"type":"tent"}"#).unwrap(), MapSpec::Tent);
        assert_eq!(MapSpec::Sawtooth { n: 3 }.to_json(), r#"{"type":"sawtooth","N":3}"#);
    }

    #[test]
    fn round_trip_catalog() {
        for s in ["tent", "sawtooth:2", "sawtooth:5", "alt_sawtooth:9", "logistic:3.5", "one_minus_x_squared"] {
            let spec = MapSpec::parse(s).unwrap();
            assert_eq!(MapSpec::parse(&spec.to_json()).unwrap(), spec, "{s}");
        }
        for map in [PwlMap::tent(), PwlMap::sawtooth(3).unwrap(), PwlMap::alt_sawtooth(5).unwrap()] {
            let spec = MapSpec::from_pwl(&map);
            match MapSpec::parse(&spec.to_json()).unwrap().resolve().unwrap() {
                LoadedMap::Exact { map: back, .. } => assert_eq!(back, map),
                LoadedMap::Numeric(_) => unreachable!(),
            }
        }
    }
}
