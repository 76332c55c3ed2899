//! Python bindings for the series engine: problem construction, coefficient
//! matching, Picard iteration, and the auxiliary coefficient/constant
//! calculators.

use std::str::FromStr;

use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use polyhom::analytic::FExpr;
use polyhom::coeff::{Coeff, Mode};
use polyhom::engine::{match_coefficients, run_iteration, seed_expansion, MajorantConfig};
use polyhom::engine::residual as residual_series;
use polyhom::ode::SingularProblem;
use polyhom::problems::{
    hemisphere_oracle, hemisphere_phi, ln_ball_oracle, ln_local_coeffs,
    loewner_nirenberg_problem, minimal_graph_problem, LnGeometry,
};
use polyhom::series::LogSeries;
use polyhom::tangential::TangentialPoly;

fn to_py_err(e: polyhom::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn coeff_string(c: &Coeff) -> String {
    match c.as_rational() {
        Some(r) => r.to_string(),
        None => format!("{}", c.to_f64()),
    }
}

fn parse_rat(s: &str) -> PyResult<BigRational> {
    BigRational::from_str(s)
        .map_err(|_| PyValueError::new_err(format!("bad rational '{s}' (use 'p' or 'p/q')")))
}

/// A truncated expansion sum c_{i,j}(x') t^i (log t)^j.
#[pyclass]
struct Series {
    inner: LogSeries,
}

#[pymethods]
impl Series {
    /// Truncation order of the expansion.
    fn trunc(&self) -> u32 {
        self.inner.trunc()
    }

    /// Lowest t-order carrying a nonzero coefficient, or None.
    fn min_order(&self) -> Option<u32> {
        self.inner.min_order()
    }

    /// Highest log power present at order i, or None.
    fn max_log(&self, i: u32) -> Option<u32> {
        self.inner.max_log_at(i)
    }

    /// Constant (tangentially order-zero) part of coefficient (i, j) as float.
    fn coeff(&self, i: u32, j: u32) -> f64 {
        self.inner
            .coeff(i, j)
            .map(|p| p.constant_term().to_f64())
            .unwrap_or(0.0)
    }

    /// Constant part of coefficient (i, j) as an exact rational string.
    fn coeff_exact(&self, i: u32, j: u32) -> String {
        match self.inner.coeff(i, j) {
            Some(p) => coeff_string(&p.constant_term()),
            None => "0".into(),
        }
    }

    /// JSON document with every coefficient polynomial, exact.
    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json_string().map_err(to_py_err)
    }

    /// Largest (i, j, tangential index) where two expansions disagree within
    /// the jointly trusted tangential degree, or None when they agree.
    fn diff(&self, other: &Series) -> Option<String> {
        self.inner.coeff_diff(&other.inner).map(|d| format!("{d:?}"))
    }
}

/// A singular boundary-expansion problem with its boundary datum.
#[pyclass]
struct Problem {
    prob: SingularProblem,
    datum: TangentialPoly,
}

fn datum_for(
    dim: usize,
    datum: Option<&str>,
    oracle: impl FnOnce() -> PyResult<TangentialPoly>,
) -> PyResult<TangentialPoly> {
    match datum {
        None => oracle(),
        Some(s) => Ok(TangentialPoly::constant(dim, Coeff::Rat(parse_rat(s)?))),
    }
}

#[pymethods]
impl Problem {
    /// Minimal graph over the hemisphere cap in H^{n+1}; datum defaults to
    /// the exact-solution coefficient, or pass a rational string constant.
    #[staticmethod]
    #[pyo3(signature = (n, degree=12, datum=None))]
    fn minimal_graph(n: u32, degree: u32, datum: Option<&str>) -> PyResult<Problem> {
        if n < 2 {
            return Err(PyValueError::new_err("minimal_graph needs n >= 2"));
        }
        let phi = hemisphere_phi(n, degree);
        let prob = minimal_graph_problem(n, &phi).map_err(to_py_err)?;
        let datum = datum_for((n - 1) as usize, datum, || {
            Ok(hemisphere_oracle(n, degree, 2 * degree)
                .map_err(to_py_err)?
                .coeff_or_zero(n + 1, 0))
        })?;
        Ok(Problem { prob, datum })
    }

    /// Conformal blow-up profile near a flat boundary; datum defaults to 1.
    #[staticmethod]
    #[pyo3(signature = (n, datum=None))]
    fn ln_halfspace(n: u32, datum: Option<&str>) -> PyResult<Problem> {
        let prob = loewner_nirenberg_problem(n, LnGeometry::HalfSpace).map_err(to_py_err)?;
        let datum = datum_for(0, datum, || {
            Ok(TangentialPoly::constant(0, Coeff::one(Mode::Exact)))
        })?;
        Ok(Problem { prob, datum })
    }

    /// Conformal blow-up profile on the unit ball; datum defaults to the
    /// exact-profile coefficient.
    #[staticmethod]
    #[pyo3(signature = (n, datum=None))]
    fn ln_ball(n: u32, datum: Option<&str>) -> PyResult<Problem> {
        let prob = loewner_nirenberg_problem(n, LnGeometry::UnitBall).map_err(to_py_err)?;
        let datum = datum_for(0, datum, || {
            Ok(ln_ball_oracle(n, 2 * n).map_err(to_py_err)?.coeff_or_zero(n, 0))
        })?;
        Ok(Problem { prob, datum })
    }

    /// Zero right-hand side with prescribed indicial roots.
    #[staticmethod]
    #[pyo3(signature = (m_low, m_high, datum="1"))]
    fn homogeneous(m_low: i64, m_high: i64, datum: &str) -> PyResult<Problem> {
        if m_high <= m_low || m_high < 0 {
            return Err(PyValueError::new_err("need m_low < m_high, m_high >= 0"));
        }
        let prob = SingularProblem::from_roots(
            m_low,
            m_high,
            1,
            0,
            Mode::Exact,
            FExpr::Num(Coeff::zero(Mode::Exact)),
            1.0,
            1.0,
        )
        .map_err(to_py_err)?;
        let datum = TangentialPoly::constant(0, Coeff::Rat(parse_rat(datum)?));
        Ok(Problem { prob, datum })
    }

    /// Indicial roots (m_low, m_high).
    fn roots(&self) -> (i64, i64) {
        (self.prob.m_low, self.prob.m_high)
    }

    /// Seed expansion: coefficients through the resonant order plus one.
    fn expand(&self) -> PyResult<Series> {
        Ok(Series {
            inner: seed_expansion(&self.prob, &self.datum).map_err(to_py_err)?,
        })
    }

    /// Order-by-order coefficient matching through t^k.
    fn match_series(&self, k: u32) -> PyResult<Series> {
        Ok(Series {
            inner: match_coefficients(&self.prob, k, &self.datum).map_err(to_py_err)?,
        })
    }

    /// Picard iteration through t^k: returns (series, fitted decay ratio,
    /// monitor verdict).
    fn iterate(&self, k: u32) -> PyResult<(Series, f64, bool)> {
        let trace = run_iteration(&self.prob, k, &self.datum, &MajorantConfig::default())
            .map_err(to_py_err)?;
        Ok((Series { inner: trace.v }, trace.ratio, trace.majorant_pass))
    }

    /// Whether the equation residual of a candidate expansion vanishes
    /// through its truncation.
    fn residual_is_zero(&self, series: &Series) -> PyResult<bool> {
        Ok(residual_series(&self.prob, &series.inner)
            .map_err(to_py_err)?
            .is_zero())
    }
}

/// Local boundary coefficients of the conformal profile under both curvature
/// conventions; rationals passed and returned as strings.
#[pyfunction]
#[pyo3(signature = (n, h_sum, gauss=None, lap_h=None))]
fn local_coeffs(
    n: u32,
    h_sum: &str,
    gauss: Option<&str>,
    lap_h: Option<&str>,
) -> PyResult<std::collections::BTreeMap<String, String>> {
    let h = parse_rat(h_sum)?;
    let g = gauss.map(parse_rat).transpose()?;
    let l = lap_h.map(parse_rat).transpose()?;
    let lc = ln_local_coeffs(n, &h, g.as_ref(), l.as_ref());
    let mut out = std::collections::BTreeMap::new();
    out.insert("c1_sum".into(), lc.c1_sum.to_string());
    out.insert("c1_mean".into(), lc.c1_mean.to_string());
    if let Some(c) = lc.c31_sum {
        out.insert("c31_sum".into(), c.to_string());
    }
    if let Some(c) = lc.c31_mean {
        out.insert("c31_mean".into(), c.to_string());
    }
    out.insert("audit".into(), lc.audit.to_string());
    Ok(out)
}

/// Derived constants (B1, B0_tilde) of the factorial composition bound.
#[pyfunction]
fn composition_constants(a0: f64, a1: f64, a2: f64, b0: f64) -> PyResult<(f64, f64)> {
    polyhom::friedman::friedman_constants(a0, a1, a2, b0).map_err(to_py_err)
}

#[pymodule]
fn polyhom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Series>()?;
    m.add_class::<Problem>()?;
    m.add_function(wrap_pyfunction!(local_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(composition_constants, m)?)?;
    Ok(())
}
