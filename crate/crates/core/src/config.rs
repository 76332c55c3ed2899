//! Keyed-text run configuration: flat `key = value` lines with at most one
//! dotted nesting level (`section.key = value`), `#` comments, a mandatory
//! `version` key, unknown keys rejected, and positive tolerances enforced.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeff::{Coeff, Mode};
use crate::error::{Error, Result};
use crate::tangential::TangentialPoly;

/// Which front-end action to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Expand,
    Iterate,
    Match,
    Validate,
    LnCoeffs,
    Friedman,
}

/// Problem families the front end can construct.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    MinimalGraph,
    LnHalfSpace,
    LnBall,
    /// Zero right-hand side with explicitly given indicial roots (dim 0).
    Homogeneous,
}

/// Boundary-datum selection for the resonant-order free coefficient.
#[derive(Clone, Debug, PartialEq)]
pub enum DatumSpec {
    /// The exact-solution fixture for the chosen problem kind.
    Oracle,
    /// A scalar rational constant.
    Constant(BigRational),
    /// Explicit tangential monomials (exponents, coefficient).
    Poly(Vec<(Vec<u32>, BigRational)>),
}

/// Tangential boundary function for the minimal-graph family.
#[derive(Clone, Debug, PartialEq)]
pub enum PhiSpec {
    /// sqrt(1 - |y'|^2) - 1 truncated to the configured degree.
    Hemisphere,
    Zero,
    Poly(Vec<(Vec<u32>, BigRational)>),
}

/// Parsed run configuration.
#[derive(Debug)]
pub struct RunConfig {
    pub version: u32,
    pub command: Command,
    pub kind: ProblemKind,
    pub n: u32,
    pub trunc: u32,
    pub degree: u32,
    pub phi: PhiSpec,
    pub datum: DatumSpec,
    pub m_low: i64,
    pub m_high: i64,
    pub out_series: Option<String>,
    pub out_majorant: Option<String>,
    pub out_grid: Option<String>,
    pub out_slopes: Option<String>,
    pub tol_ratio: f64,
    pub tol_slope: f64,
    pub curvature_h_sum: BigRational,
    pub curvature_gauss: BigRational,
    pub curvature_lap_h: BigRational,
    pub friedman_a0: f64,
    pub friedman_a1: f64,
    pub friedman_a2: f64,
    pub friedman_b0: f64,
    pub friedman_p: usize,
}

fn cfg_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| cfg_err(format!("bad rational numerator '{num}'")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| cfg_err(format!("bad rational denominator '{den}'")))?;
    if d == BigInt::from(0) {
        return Err(cfg_err("zero denominator in rational"));
    }
    Ok(BigRational::new(n, d))
}

/// Parse `2,0:-1/2 4,0:-1/8` style monomial lists.
fn parse_monomials(s: &str) -> Result<Vec<(Vec<u32>, BigRational)>> {
    let mut out = Vec::new();
    for item in s.split_whitespace() {
        let (exps, coeff) = item
            .split_once(':')
            .ok_or_else(|| cfg_err(format!("monomial '{item}' missing ':'")))?;
        let idx: Vec<u32> = exps
            .split(',')
            .map(|e| {
                e.trim()
                    .parse::<u32>()
                    .map_err(|_| cfg_err(format!("bad exponent '{e}'")))
            })
            .collect::<Result<_>>()?;
        out.push((idx, parse_rational(coeff)?));
    }
    if out.is_empty() {
        return Err(cfg_err("empty monomial list"));
    }
    Ok(out)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| cfg_err(format!("line {}: expected 'key = value'", lineno + 1)))?;
            let key = key.trim().to_string();
            if key.is_empty() || key.matches('.').count() > 1 {
                return Err(cfg_err(format!(
                    "line {}: key '{key}' (at most one dotted level)",
                    lineno + 1
                )));
            }
            if map.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(cfg_err(format!("duplicate key '{key}'")));
            }
        }

        let mut take = |k: &str| map.remove(k);

        let version: u32 = take("version")
            .ok_or_else(|| cfg_err("missing mandatory 'version' key"))?
            .parse()
            .map_err(|_| cfg_err("bad 'version' value"))?;
        if version != 1 {
            return Err(cfg_err(format!("unsupported config version {version}")));
        }
        let command = match take("command").as_deref() {
            Some("expand") => Command::Expand,
            Some("iterate") => Command::Iterate,
            Some("match") => Command::Match,
            Some("validate") => Command::Validate,
            Some("ln-coeffs") => Command::LnCoeffs,
            Some("friedman") => Command::Friedman,
            Some(other) => return Err(cfg_err(format!("unknown command '{other}'"))),
            None => return Err(cfg_err("missing 'command' key")),
        };

        let kind = match take("problem.kind").as_deref() {
            Some("minimal_graph") => ProblemKind::MinimalGraph,
            Some("ln_halfspace") => ProblemKind::LnHalfSpace,
            Some("ln_ball") => ProblemKind::LnBall,
            Some("homogeneous") => ProblemKind::Homogeneous,
            Some(other) => return Err(cfg_err(format!("unknown problem.kind '{other}'"))),
            None => {
                if matches!(command, Command::Friedman | Command::LnCoeffs) {
                    ProblemKind::LnHalfSpace // unused placeholder
                } else {
                    return Err(cfg_err("missing 'problem.kind' key"));
                }
            }
        };

        let n: u32 = take("problem.n")
            .map(|v| v.parse().map_err(|_| cfg_err("bad 'problem.n'")))
            .transpose()?
            .unwrap_or(3);
        let trunc: u32 = take("problem.k")
            .map(|v| v.parse().map_err(|_| cfg_err("bad 'problem.k'")))
            .transpose()?
            .unwrap_or(12);
        let degree: u32 = take("problem.degree")
            .map(|v| v.parse().map_err(|_| cfg_err("bad 'problem.degree'")))
            .transpose()?
            .unwrap_or(12);

        let phi = match take("problem.phi").as_deref() {
            None | Some("hemisphere") => PhiSpec::Hemisphere,
            Some("zero") => PhiSpec::Zero,
            Some(other) => return Err(cfg_err(format!("unknown problem.phi '{other}'"))),
        };
        let phi = match take("problem.phi_coeffs") {
            Some(list) => PhiSpec::Poly(parse_monomials(&list)?),
            None => phi,
        };

        let datum = match take("problem.datum").as_deref() {
            None | Some("oracle") => DatumSpec::Oracle,
            Some(v) => DatumSpec::Constant(parse_rational(v)?),
        };
        let datum = match take("problem.datum_coeffs") {
            Some(list) => DatumSpec::Poly(parse_monomials(&list)?),
            None => datum,
        };

        let m_low: i64 = take("problem.m_low")
            .map(|v| v.parse().map_err(|_| cfg_err("bad 'problem.m_low'")))
            .transpose()?
            .unwrap_or(0);
        let m_high: i64 = take("problem.m_high")
            .map(|v| v.parse().map_err(|_| cfg_err("bad 'problem.m_high'")))
            .transpose()?
            .unwrap_or(3);

        let out_series = take("output.series");
        let out_majorant = take("output.majorant");
        let out_grid = take("output.grid");
        let out_slopes = take("output.slopes");

        let mut pos_tol = |k: &str, default: f64| -> Result<f64> {
            match map.remove(k) {
                None => Ok(default),
                Some(v) => {
                    let x: f64 = v.parse().map_err(|_| cfg_err(format!("bad '{k}'")))?;
                    if x <= 0.0 || !x.is_finite() {
                        return Err(cfg_err(format!("tolerance '{k}' must be positive")));
                    }
                    Ok(x)
                }
            }
        };
        let tol_ratio = pos_tol("tolerance.ratio", 0.6)?;
        let tol_slope = pos_tol("tolerance.slope", 0.2)?;

        let curvature_h_sum = match map.remove("curvature.h_sum") {
            Some(v) => parse_rational(&v)?,
            None => BigRational::from_integer(BigInt::from(2)),
        };
        let curvature_gauss = match map.remove("curvature.gauss") {
            Some(v) => parse_rational(&v)?,
            None => BigRational::from_integer(BigInt::from(1)),
        };
        let curvature_lap_h = match map.remove("curvature.lap_h") {
            Some(v) => parse_rational(&v)?,
            None => BigRational::from_integer(BigInt::from(0)),
        };

        let mut pos_f64 = |k: &str, default: f64| -> Result<f64> {
            match map.remove(k) {
                None => Ok(default),
                Some(v) => v.parse().map_err(|_| cfg_err(format!("bad '{k}'"))),
            }
        };
        let friedman_a0 = pos_f64("friedman.a0", 1.0)?;
        let friedman_a1 = pos_f64("friedman.a1", 1.0)?;
        let friedman_a2 = pos_f64("friedman.a2", 1.0)?;
        let friedman_b0 = pos_f64("friedman.b0", 1.0)?;
        let friedman_p: usize = match map.remove("friedman.p") {
            None => 12,
            Some(v) => v.parse().map_err(|_| cfg_err("bad 'friedman.p'"))?,
        };

        if let Some((key, _)) = map.into_iter().next() {
            return Err(cfg_err(format!("unknown key '{key}'")));
        }

        Ok(RunConfig {
            version,
            command,
            kind,
            n,
            trunc,
            degree,
            phi,
            datum,
            m_low,
            m_high,
            out_series,
            out_majorant,
            out_grid,
            out_slopes,
            tol_ratio,
            tol_slope,
            curvature_h_sum,
            curvature_gauss,
            curvature_lap_h,
            friedman_a0,
            friedman_a1,
            friedman_a2,
            friedman_b0,
            friedman_p,
        })
    }

    /// Materialize an explicit monomial list as a tangential polynomial.
    pub fn monomials_to_poly(
        dim: usize,
        list: &[(Vec<u32>, BigRational)],
        degree: u32,
    ) -> Result<TangentialPoly> {
        let mut p = TangentialPoly::zero(dim, Mode::Exact);
        for (idx, c) in list {
            if idx.len() != dim {
                return Err(cfg_err(format!(
                    "monomial index length {} does not match dimension {dim}",
                    idx.len()
                )));
            }
            p.set_coeff(idx.clone(), Coeff::Rat(c.clone()));
        }
        Ok(p.truncated(degree as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "\
version = 1
command = match
problem.kind = ln_ball
problem.n = 3
problem.k = 12
";

    #[test]
    fn parses_minimal_config() {
        let c = RunConfig::parse(BASE).unwrap();
        assert_eq!(c.command, Command::Match);
        assert_eq!(c.kind, ProblemKind::LnBall);
        assert_eq!((c.n, c.trunc), (3, 12));
        assert_eq!(c.datum, DatumSpec::Oracle);
    }

    #[test]
    fn rejects_unknown_key() {
        let text = format!("{BASE}wat = 1\n");
        assert!(matches!(RunConfig::parse(&text), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_missing_version() {
        let text = "command = match\nproblem.kind = ln_ball\n";
        assert!(matches!(RunConfig::parse(text), Err(Error::Config(_))));
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let text = format!("{BASE}tolerance.ratio = 0\n");
        assert!(matches!(RunConfig::parse(&text), Err(Error::Config(_))));
    }

    #[test]
    fn parses_rationals_and_monomials() {
        let text = format!("{BASE}problem.datum = -3/7\n");
        let c = RunConfig::parse(&text).unwrap();
        assert_eq!(
            c.datum,
            DatumSpec::Constant(BigRational::new(BigInt::from(-3), BigInt::from(7)))
        );
        let mons = parse_monomials("2,0:-1/2 0,4:3").unwrap();
        assert_eq!(mons.len(), 2);
        assert_eq!(mons[0].0, vec![2, 0]);
    }
}
