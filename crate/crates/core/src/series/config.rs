//! Plain-text `key = value` series specifications.
//!
//! ```text
//! # Bessel's series for Kepler's equation
//! family = kapteyn
//! coefficients = kepler-kapteyn
//! mean_anomaly = 0.2
//! ```
//!
//! Keys: `family`, `coefficients` (`geometric`, `kepler-lagrange`,
//! `kepler-kapteyn`, `zeta`, `random-uniform`, `explicit`), `ratio`,
//! `mean_anomaly`, `seed`, `real`, `values`, `exponents` (`natural`, `log`,
//! `explicit`), `exponent_values`, `level`. Lists are whitespace separated;
//! complex numbers are written `1.5`, `-2i` or `1.5-2i`.

use super::{Coefficients, Exponents, SeriesError, SeriesSpec};
use crate::family::{Family, UnknownFamily};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("invalid value `{value}` for `{key}`")]
    BadValue { key: String, value: String },
    #[error(transparent)]
    Family(#[from] UnknownFamily),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

const KEYS: [&str; 11] = [
    "family",
    "coefficients",
    "ratio",
    "mean_anomaly",
    "seed",
    "real",
    "values",
    "exponents",
    "exponent_values",
    "level",
    "n",
];

/// Parses `1.5`, `-2i`, `i`, `1.5-2i` or `(1.5-2i)`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    let s = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s).trim();
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(p) => (body[..p].trim().parse::<f64>().ok()?, &body[p..]),
        None => (0.0, body),
    };
    let im = match im.trim() {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t.parse::<f64>().ok()?,
    };
    Some(Complex64::new(re, im))
}

/// Inverse of [`parse_complex`], exact for finite values.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 && z.im.is_sign_positive() {
        return format!("{}", z.re);
    }
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

fn bad(key: &str, value: &str) -> ConfigError {
    ConfigError::BadValue { key: key.to_string(), value: value.to_string() }
}

fn parse_with<T>(map: &BTreeMap<String, String>, key: &'static str, f: impl Fn(&str) -> Option<T>) -> Result<Option<T>, ConfigError> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => f(v).map(Some).ok_or_else(|| bad(key, v)),
    }
}

fn require<T>(value: Option<T>, key: &'static str) -> Result<T, ConfigError> {
    value.ok_or(ConfigError::MissingKey(key))
}

/// Splits a config into its key/value table, rejecting unknown keys.
pub(crate) fn parse_table(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
        let key = key.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { line: i + 1, key });
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(ConfigError::DuplicateKey { line: i + 1, key });
        }
    }
    Ok(map)
}

impl SeriesSpec {
    /// Parses a spec; the optional `n` key is accepted and ignored here (see
    /// [`SeriesSpec::config_degree`]).
    pub fn from_config(text: &str) -> Result<Self, ConfigError> {
        let map = parse_table(text)?;
        let family: Family = require(map.get("family"), "family")?.parse()?;
        let kind = require(map.get("coefficients"), "coefficients")?.as_str();
        let real_m = |key: &'static str| -> Result<f64, ConfigError> {
            require(parse_with(&map, key, |v| v.parse::<f64>().ok().filter(|x| x.is_finite()))?, key)
        };
        let coefficients = match kind {
            "geometric" => Coefficients::Geometric { ratio: require(parse_with(&map, "ratio", parse_complex)?, "ratio")? },
            "kepler-lagrange" => Coefficients::KeplerLagrange { mean_anomaly: real_m("mean_anomaly")? },
            "kepler-kapteyn" => Coefficients::KeplerKapteyn { mean_anomaly: real_m("mean_anomaly")? },
            "zeta" => Coefficients::Zeta,
            "random-uniform" => Coefficients::RandomUniform {
                seed: require(parse_with(&map, "seed", |v| v.parse::<u64>().ok())?, "seed")?,
                real: parse_with(&map, "real", |v| v.parse::<bool>().ok())?.unwrap_or(false),
            },
            "explicit" => Coefficients::Explicit(require(
                parse_with(&map, "values", |v| v.split_whitespace().map(parse_complex).collect::<Option<Vec<_>>>())?,
                "values",
            )?),
            other => return Err(bad("coefficients", other)),
        };
        let mut spec = SeriesSpec::new(family, coefficients);
        if let Some(e) = map.get("exponents") {
            spec.exponents = match e.as_str() {
                "natural" => Exponents::Natural,
                "log" => Exponents::Log,
                "explicit" => Exponents::Explicit(require(
                    parse_with(&map, "exponent_values", |v| {
                        v.split_whitespace().map(|t| t.parse::<f64>().ok()).collect::<Option<Vec<_>>>()
                    })?,
                    "exponent_values",
                )?),
                other => return Err(bad("exponents", other)),
            };
        }
        spec.level = parse_with(&map, "level", |v| v.parse::<f64>().ok())?;
        spec.validate()?;
        Ok(spec)
    }

    /// The optional truncation index `n` of a config file.
    pub fn config_degree(text: &str) -> Result<Option<usize>, ConfigError> {
        let map = parse_table(text)?;
        parse_with(&map, "n", |v| v.parse::<usize>().ok())
    }

    pub fn to_config(&self) -> String {
        self.to_string()
    }
}

impl FromStr for SeriesSpec {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SeriesSpec::from_config(s)
    }
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "family = {}", self.family)?;
        match &self.coefficients {
            Coefficients::Geometric { ratio } => {
                writeln!(f, "coefficients = geometric")?;
                writeln!(f, "ratio = {}", format_complex(*ratio))?;
            }
            Coefficients::KeplerLagrange { mean_anomaly } => {
                writeln!(f, "coefficients = kepler-lagrange")?;
                writeln!(f, "mean_anomaly = {mean_anomaly}")?;
            }
            Coefficients::KeplerKapteyn { mean_anomaly } => {
                writeln!(f, "coefficients = kepler-kapteyn")?;
                writeln!(f, "mean_anomaly = {mean_anomaly}")?;
            }
            Coefficients::Zeta => writeln!(f, "coefficients = zeta")?,
            Coefficients::RandomUniform { seed, real } => {
                writeln!(f, "coefficients = random-uniform")?;
                writeln!(f, "seed = {seed}")?;
                writeln!(f, "real = {real}")?;
            }
            Coefficients::Explicit(v) => {
                writeln!(f, "coefficients = explicit")?;
                let list: Vec<String> = v.iter().map(|&a| format_complex(a)).collect();
                writeln!(f, "values = {}", list.join(" "))?;
            }
        }
        match &self.exponents {
            Exponents::Natural => writeln!(f, "exponents = natural")?,
            Exponents::Log => writeln!(f, "exponents = log")?,
            Exponents::Explicit(v) => {
                writeln!(f, "exponents = explicit")?;
                let list: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                writeln!(f, "exponent_values = {}", list.join(" "))?;
            }
        }
        if let Some(level) = self.level {
            writeln!(f, "level = {level}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn complex_tokens() {
        let c = Complex64::new;
        assert_eq!(parse_complex("1.5"), Some(c(1.5, 0.0)));
        assert_eq!(parse_complex("-2i"), Some(c(0.0, -2.0)));
        assert_eq!(parse_complex("i"), Some(c(0.0, 1.0)));
        assert_eq!(parse_complex("-i"), Some(c(0.0, -1.0)));
        assert_eq!(parse_complex("1.5-2i"), Some(c(1.5, -2.0)));
        assert_eq!(parse_complex("(1e-3+2.5e2i)"), Some(c(1e-3, 250.0)));
        assert_eq!(parse_complex("-1e-3-i"), Some(c(-1e-3, -1.0)));
        assert_eq!(parse_complex("x"), None);
    }

    #[test]
    fn parses_example() {
        let text = "# Bessel's series\nfamily = kapteyn\ncoefficients = kepler-kapteyn\nmean_anomaly = 0.2\nn = 25\n";
        let spec: SeriesSpec = text.parse().unwrap();
        assert_eq!(spec, SeriesSpec::kepler_kapteyn(0.2));
        assert_eq!(SeriesSpec::config_degree(text).unwrap(), Some(25));
    }

    #[test]
    fn errors() {
        assert!(matches!(SeriesSpec::from_config("family = power\nfoo = 1"), Err(ConfigError::UnknownKey { line: 2, .. })));
        assert!(matches!(SeriesSpec::from_config("family = power"), Err(ConfigError::MissingKey("coefficients"))));
        assert!(matches!(SeriesSpec::from_config("family = cubic\ncoefficients = zeta"), Err(ConfigError::Family(_))));
        assert!(matches!(SeriesSpec::from_config("garbage"), Err(ConfigError::Syntax { line: 1 })));
        assert!(matches!(
            SeriesSpec::from_config("family = power\ncoefficients = geometric\nratio = 2x"),
            Err(ConfigError::BadValue { .. })
        ));
    }

    fn arb_spec() -> impl Strategy<Value = SeriesSpec> {
        let family = prop_oneof![Just(Family::Power), Just(Family::Neumann), Just(Family::Kapteyn), Just(Family::Dirichlet)];
        let coeffs = prop_oneof![
            (-5.0f64..5.0, -5.0f64..5.0).prop_map(|(a, b)| Coefficients::Geometric { ratio: Complex64::new(a, b) }),
            (-4.0f64..4.0).prop_map(|m| Coefficients::KeplerLagrange { mean_anomaly: m }),
            (-4.0f64..4.0).prop_map(|m| Coefficients::KeplerKapteyn { mean_anomaly: m }),
            Just(Coefficients::Zeta),
            (any::<u64>(), any::<bool>()).prop_map(|(seed, real)| Coefficients::RandomUniform { seed, real }),
            prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 1..8)
                .prop_map(|v| Coefficients::Explicit(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())),
        ];
        (family, coeffs, prop::option::of(0.01f64..10.0)).prop_map(|(family, coefficients, level)| {
            let mut s = SeriesSpec::new(family, coefficients);
            s.level = level;
            s
        })
    }

    proptest! {
        #[test]
        fn config_round_trip(spec in arb_spec()) {
            let text = spec.to_config();
            let back = SeriesSpec::from_config(&text).unwrap();
            prop_assert_eq!(back, spec);
        }
    }
}
