//! Polyhomogeneous log-series: finite maps (i, j) -> c_{i,j}(x') representing
//! sum c_{i,j}(x') t^i (log t)^j, truncated at t-order K.
//!
//! The weighted antiderivative implemented here is the sole mechanism that
//! raises a log power, and only at the resonant exponent.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coeff::{ensure_same_mode, Coeff, Mode};
use crate::error::{Error, Result};
use crate::tangential::TangentialPoly;

/// Per-order cap on log powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogCapRule {
    /// No cap beyond what the arithmetic produces.
    Free,
    /// Minimal-graph structure: j <= floor((i-1)/n)  (0 at i = 0).
    MinimalGraph { n: u32 },
}

impl LogCapRule {
    pub fn cap(&self, i: u32) -> u32 {
        match self {
            LogCapRule::Free => u32::MAX,
            LogCapRule::MinimalGraph { n } => {
                if i == 0 {
                    0
                } else {
                    (i - 1) / n
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries {
    dim: usize,
    mode: Mode,
    /// truncation order K in t (log powers are not counted)
    trunc: u32,
    log_caps: LogCapRule,
    terms: BTreeMap<(u32, u32), TangentialPoly>,
}

impl LogSeries {
    pub fn new(dim: usize, mode: Mode, trunc: u32) -> Self {
        LogSeries {
            dim,
            mode,
            trunc,
            log_caps: LogCapRule::Free,
            terms: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn log_caps(&self) -> LogCapRule {
        self.log_caps
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|p| p.is_zero())
    }

    /// Lowest t-power with a nonzero coefficient. Zero placeholders kept only
    /// for their trusted-degree metadata do not count.
    pub fn min_order(&self) -> Option<u32> {
        self.terms
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(&(i, _), _)| i)
            .min()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &TangentialPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Option<&TangentialPoly> {
        self.terms.get(&(i, j))
    }

    pub fn coeff_or_zero(&self, i: u32, j: u32) -> TangentialPoly {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| TangentialPoly::zero(self.dim, self.mode))
    }

    /// Highest log power with a nonzero coefficient at order i.
    pub fn max_log_at(&self, i: u32) -> Option<u32> {
        self.terms
            .iter()
            .filter(|(&(ii, _), p)| ii == i && !p.is_zero())
            .map(|(&(_, j), _)| j)
            .max()
    }

    /// Insert (adding to any existing coefficient); silently drops orders
    /// beyond the truncation. Exact zeros are dropped, but a zero polynomial
    /// with a finite trusted degree is kept: it records that the coefficient
    /// is only known to vanish through that tangential degree.
    pub fn add_term(&mut self, i: u32, j: u32, poly: TangentialPoly) -> Result<()> {
        ensure_same_mode(self.mode, poly.mode())?;
        if poly.dim() != self.dim {
            return Err(Error::DimMismatch(self.dim, poly.dim()));
        }
        if i > self.trunc || (poly.is_zero() && poly.max_degree() == crate::tangential::UNBOUNDED) {
            return Ok(());
        }
        let cap = self.log_caps.cap(i);
        if j > cap {
            return Err(Error::LogCapViolation { i, j, cap });
        }
        let entry = match self.terms.remove(&(i, j)) {
            Some(existing) => existing.add(&poly)?,
            None => poly,
        };
        if !entry.is_zero() || entry.max_degree() != crate::tangential::UNBOUNDED {
            self.terms.insert((i, j), entry);
        }
        Ok(())
    }

    pub fn set_term(&mut self, i: u32, j: u32, poly: TangentialPoly) -> Result<()> {
        self.terms.remove(&(i, j));
        self.add_term(i, j, poly)
    }

    /// Attach a log-cap rule, verifying every stored nonzero term obeys it.
    pub fn with_log_caps(mut self, rule: LogCapRule) -> Result<Self> {
        for (&(i, j), _) in self.terms.iter().filter(|(_, p)| !p.is_zero()) {
            let cap = rule.cap(i);
            if j > cap {
                return Err(Error::LogCapViolation { i, j, cap });
            }
        }
        self.log_caps = rule;
        Ok(self)
    }

    /// Copy truncated to order k (log caps preserved).
    pub fn truncated(&self, k: u32) -> Self {
        let mut out = self.clone();
        out.trunc = k.min(self.trunc);
        out.terms.retain(|&(i, _), _| i <= out.trunc);
        out
    }

    /// Copy keeping only terms with t-order exactly i.
    pub fn order_part(&self, i: u32) -> Self {
        let mut out = self.clone();
        out.terms.retain(|&(ii, _), _| ii == i);
        out
    }

    fn compat(&self, other: &Self) -> Result<()> {
        ensure_same_mode(self.mode, other.mode)?;
        if self.dim != other.dim {
            return Err(Error::DimMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        let mut out = LogSeries::new(self.dim, self.mode, self.trunc.min(other.trunc));
        for (&(i, j), p) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(i, j, p.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for p in out.terms.values_mut() {
            *p = p.neg();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        let mut out = LogSeries::new(self.dim, self.mode, self.trunc.min(other.trunc));
        for (&(ia, ja), pa) in &self.terms {
            for (&(ib, jb), pb) in &other.terms {
                if ia + ib > out.trunc {
                    continue;
                }
                out.add_term(ia + ib, ja + jb, pa.mul(pb)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = LogSeries::new(self.dim, self.mode, self.trunc);
        if c.is_zero() {
            return out;
        }
        for (&(i, j), p) in &self.terms {
            let sp = p.scale(c);
            if !sp.is_zero() {
                out.terms.insert((i, j), sp);
            }
        }
        out
    }

    pub fn scale_int(&self, d: i64) -> Self {
        self.scale(&Coeff::from_i64(d, self.mode))
    }

    pub fn scale_poly(&self, poly: &TangentialPoly) -> Result<Self> {
        let mut out = LogSeries::new(self.dim, self.mode, self.trunc);
        for (&(i, j), p) in &self.terms {
            out.add_term(i, j, p.mul(poly)?)?;
        }
        Ok(out)
    }

    /// Multiply by t^k (orders pushed past K are dropped).
    pub fn mul_t_pow(&self, k: u32) -> Self {
        let mut out = LogSeries::new(self.dim, self.mode, self.trunc);
        for (&(i, j), p) in &self.terms {
            if i + k <= out.trunc {
                out.terms.insert((i + k, j), p.clone());
            }
        }
        out
    }

    /// Divide by t^k; errors if any stored order is below k.
    pub fn div_t(&self, k: u32) -> Result<Self> {
        let mut out = LogSeries::new(self.dim, self.mode, self.trunc.saturating_sub(k));
        for (&(i, j), p) in &self.terms {
            if i < k {
                return Err(Error::NotDivisible(k));
            }
            out.terms.insert((i - k, j), p.clone());
        }
        Ok(out)
    }

    /// d/dt, term by term; rejects bare-log terms (i = 0, j > 0).
    pub fn ddt(&self) -> Result<Self> {
        let mut out = LogSeries::new(self.dim, self.mode, self.trunc.saturating_sub(1));
        for (&(i, j), p) in &self.terms {
            if i == 0 {
                if j > 0 {
                    return Err(Error::BareLog(j));
                }
                continue;
            }
            if i as i64 - 1 >= 0 {
                out.add_term(i - 1, j, p.scale_int(i as i64))?;
                if j >= 1 {
                    out.add_term(i - 1, j - 1, p.scale_int(j as i64))?;
                }
            }
        }
        Ok(out)
    }

    /// Tangential derivative D_alpha applied to every coefficient.
    pub fn d_alpha(&self, alpha: usize) -> Self {
        let mut out = LogSeries::new(self.dim, self.mode, self.trunc);
        for (&(i, j), p) in &self.terms {
            let dp = p.d_alpha(alpha);
            if !dp.is_zero() || dp.max_degree() != crate::tangential::UNBOUNDED {
                out.terms.insert((i, j), dp);
            }
        }
        out
    }

    /// t^mu * integral_0^t rho^{1-mu} a(rho) drho, in closed form per monomial.
    ///
    /// Non-resonant t^m (log t)^j -> t^{m+2} * (log-polynomial of degree j,
    /// leading coefficient 1/(m+2-mu)); resonant (m = mu-2) ->
    /// t^mu (log t)^{j+1}/(j+1). Truncation order rises by 2.
    pub fn weighted_antideriv(&self, mu: i64) -> Result<Self> {
        self.wad_impl(mu, 2)
    }

    /// Scaled variant for a = g / t^2 (so g = t^2 * a stays order >= 0):
    /// t^mu * integral_0^t rho^{-1-mu} g(rho) drho. Orders are unchanged and
    /// resonance sits at m = mu.
    pub fn weighted_antideriv_scaled(&self, mu: i64) -> Result<Self> {
        self.wad_impl(mu, 0)
    }

    fn wad_impl(&self, mu: i64, shift: u32) -> Result<Self> {
        let mut out = LogSeries::new(self.dim, self.mode, self.trunc + shift);
        for (&(m, j), p) in &self.terms {
            if p.is_zero() {
                // Known-zero placeholder: its antiderivative is the same
                // placeholder, carrying the trusted degree forward.
                out.add_term(m + shift, j, p.clone())?;
                continue;
            }
            // d = (integration exponent) + 1; resonance exactly at d = 0.
            let d = m as i64 + shift as i64 - mu;
            if d == 0 {
                out.add_term(m + shift, j + 1, p.div_int(j as i64 + 1))?;
            } else if d > 0 {
                // integral_0^t rho^{d-1} log^j = t^d sum_{s=0}^{j} (-1)^s j!/(j-s)! log^{j-s} / d^{s+1}
                let mut perm: i64 = 1; // j!/(j-s)! (falling factorial)
                for s in 0..=j {
                    if s > 0 {
                        perm *= (j - s + 1) as i64;
                    }
                    let factor = wad_factor(self.mode, s, perm, d);
                    out.add_term(m + shift, j - s, p.scale(&factor))?;
                }
            } else {
                return Err(Error::NonIntegrable { m: m as i64, j, mu });
            }
        }
        Ok(out)
    }

    /// t^2 * L_0 applied termwise, with L_0 u = u'' + p u'/t + q u/t^2 and
    /// (p, q) determined by the indicial roots:
    /// t^2 L_0 (t^i log^j) = alpha_i t^i log^j + j beta_i t^i log^{j-1}
    ///                        + j(j-1) t^i log^{j-2},
    /// alpha_i = (i - m_low)(i - m_high), beta_i = 2i - m_low - m_high.
    pub fn l0_scaled(&self, m_low: i64, m_high: i64) -> Result<Self> {
        let mut out = LogSeries::new(self.dim, self.mode, self.trunc);
        for (&(i, j), p) in &self.terms {
            let alpha = (i as i64 - m_low) * (i as i64 - m_high);
            let beta = 2 * i as i64 - m_low - m_high;
            if alpha != 0 {
                out.add_term(i, j, p.scale_int(alpha))?;
            }
            if j >= 1 && beta != 0 {
                out.add_term(i, j - 1, p.scale_int(beta * j as i64))?;
            }
            if j >= 2 {
                out.add_term(i, j - 2, p.scale_int((j * (j - 1)) as i64))?;
            }
        }
        Ok(out)
    }

    /// Floating evaluation at tangential point x and t > 0.
    pub fn eval(&self, x: &[f64], t: f64) -> f64 {
        let lt = t.ln();
        let mut acc = 0.0;
        for (&(i, j), p) in &self.terms {
            acc += p.eval(x) * t.powi(i as i32) * lt.powi(j as i32);
        }
        acc
    }

    /// Compare stored coefficients, truncating each pair of polynomials to the
    /// common trusted tangential degree. Returns the first differing key.
    pub fn coeff_diff(&self, other: &Self) -> Option<(u32, u32)> {
        let keys: std::collections::BTreeSet<(u32, u32)> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .cloned()
            .collect();
        for (i, j) in keys {
            let a = self.coeff_or_zero(i, j);
            let b = other.coeff_or_zero(i, j);
            let deg = a.max_degree().min(b.max_degree());
            if a.truncated(deg) != b.truncated(deg) {
                return Some((i, j));
            }
        }
        None
    }

    // ----- JSON serialization (exact mode only) -----

    pub fn to_json_string(&self) -> Result<String> {
        let mut recs: Vec<TermRec> = Vec::new();
        for (&(i, j), p) in self.terms.iter().filter(|(_, p)| !p.is_zero()) {
            let mut monos = Vec::new();
            for (idx, c) in p.terms() {
                let r = c.as_rational().ok_or(Error::FloatSerialization)?;
                monos.push(MonoRec {
                    exps: idx.clone(),
                    num: r.numer().to_string(),
                    den: r.denom().to_string(),
                });
            }
            recs.push(TermRec { i, j, poly: monos });
        }
        serde_json::to_string_pretty(&recs).map_err(|e| Error::MalformedJson(e.to_string()))
    }

    /// Parse the JSON schema back into a series. The tangential dimension is
    /// read off the records; `dim_hint` disambiguates an empty document.
    pub fn from_json_str(s: &str, dim_hint: usize, trunc: u32) -> Result<Self> {
        let recs: Vec<TermRec> =
            serde_json::from_str(s).map_err(|e| Error::MalformedJson(e.to_string()))?;
        let dim = recs
            .iter()
            .flat_map(|r| r.poly.iter())
            .map(|m| m.exps.len())
            .next()
            .unwrap_or(dim_hint);
        let mut out = LogSeries::new(dim, Mode::Exact, trunc);
        for rec in recs {
            let mut poly = TangentialPoly::zero(dim, Mode::Exact);
            for m in rec.poly {
                if m.exps.len() != dim {
                    return Err(Error::MalformedJson(
                        "inconsistent multi-index lengths".into(),
                    ));
                }
                let num: BigInt = m
                    .num
                    .parse()
                    .map_err(|_| Error::MalformedJson(format!("bad numerator {}", m.num)))?;
                let den: BigInt = m
                    .den
                    .parse()
                    .map_err(|_| Error::MalformedJson(format!("bad denominator {}", m.den)))?;
                if den.is_zero() {
                    return Err(Error::MalformedJson("zero denominator".into()));
                }
                poly.set_coeff(m.exps, Coeff::Rat(BigRational::new(num, den)));
            }
            out.add_term(rec.i, rec.j, poly)?;
        }
        Ok(out)
    }
}

fn wad_factor(mode: Mode, s: u32, perm: i64, d: i64) -> Coeff {
    let sign: i64 = if s % 2 == 0 { 1 } else { -1 };
    match mode {
        Mode::Exact => {
            let num = BigInt::from(sign * perm);
            let den = BigInt::from(d).pow(s + 1);
            Coeff::Rat(BigRational::new(num, den))
        }
        Mode::Float => Coeff::F64((sign * perm) as f64 / (d as f64).powi(s as i32 + 1)),
    }
}

#[derive(Serialize, Deserialize)]
struct MonoRec {
    exps: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct TermRec {
    i: u32,
    j: u32,
    poly: Vec<MonoRec>,
}

/// Convenience: a scalar (dim 0) exact series from (i, j, num, den) tuples.
pub fn scalar_series(trunc: u32, terms: &[(u32, u32, i64, i64)]) -> LogSeries {
    let mut s = LogSeries::new(0, Mode::Exact, trunc);
    for &(i, j, n, d) in terms {
        s.add_term(i, j, TangentialPoly::constant(0, Coeff::from_ratio(n, d, Mode::Exact)))
            .expect("scalar term");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_polynomials() {
        // (1 + t)(1 - t) = 1 - t^2  [TRIVIAL]
        let a = scalar_series(5, &[(0, 0, 1, 1), (1, 0, 1, 1)]);
        let b = scalar_series(5, &[(0, 0, 1, 1), (1, 0, -1, 1)]);
        let c = a.mul(&b).unwrap();
        assert_eq!(c, scalar_series(5, &[(0, 0, 1, 1), (2, 0, -1, 1)]));
    }

    #[test]
    fn mul_log_monomials() {
        // (t log t)^2 = t^2 (log t)^2  [TRIVIAL]
        let a = scalar_series(5, &[(1, 1, 1, 1)]);
        let c = a.mul(&a).unwrap();
        assert_eq!(c, scalar_series(5, &[(2, 2, 1, 1)]));
    }

    #[test]
    fn square_with_log() {
        // (1 + t log t)^2 = 1 + 2 t log t + t^2 (log t)^2
        // [DERIVED: brute-force convolution over all term pairs]
        let a = scalar_series(5, &[(0, 0, 1, 1), (1, 1, 1, 1)]);
        let c = a.mul(&a).unwrap();
        assert_eq!(
            c,
            scalar_series(5, &[(0, 0, 1, 1), (1, 1, 2, 1), (2, 2, 1, 1)])
        );
    }

    #[test]
    fn ddt_product_rule() {
        // d/dt (t^2 log t) = 2 t log t + t  [TRIVIAL]
        let a = scalar_series(5, &[(2, 1, 1, 1)]);
        assert_eq!(a.ddt().unwrap(), scalar_series(4, &[(1, 1, 2, 1), (1, 0, 1, 1)]));
        // d/dt t^3 = 3 t^2  [TRIVIAL]
        let b = scalar_series(5, &[(3, 0, 1, 1)]);
        assert_eq!(b.ddt().unwrap(), scalar_series(4, &[(2, 0, 3, 1)]));
    }

    #[test]
    fn ddt_double_log_and_numeric_check() {
        // d/dt t^4 (log t)^2 = 4 t^3 (log t)^2 + 2 t^3 log t
        // [DERIVED: term rule, cross-checked numerically at t = 0.1]
        let a = scalar_series(6, &[(4, 2, 1, 1)]);
        let d = a.ddt().unwrap();
        assert_eq!(d, scalar_series(5, &[(3, 2, 4, 1), (3, 1, 2, 1)]));
        let t = 0.1_f64;
        let h = 1e-6;
        let fd = (a.eval(&[], t + h) - a.eval(&[], t - h)) / (2.0 * h);
        assert!((fd - d.eval(&[], t)).abs() < 1e-7);
    }

    #[test]
    fn ddt_rejects_bare_log() {
        let mut a = LogSeries::new(0, Mode::Exact, 3);
        a.add_term(0, 1, TangentialPoly::constant(0, Coeff::from_i64(1, Mode::Exact)))
            .unwrap();
        assert!(matches!(a.ddt(), Err(Error::BareLog(_))));
    }

    #[test]
    fn wad_monomial() {
        // a = t^3, mu = 0 -> t^5/5  [TRIVIAL]
        let a = scalar_series(6, &[(3, 0, 1, 1)]);
        assert_eq!(
            a.weighted_antideriv(0).unwrap(),
            scalar_series(8, &[(5, 0, 1, 5)])
        );
    }

    #[test]
    fn wad_resonant() {
        // a = t, mu = 3 -> t^3 log t  [TRIVIAL: resonance at m = mu - 2]
        let a = scalar_series(6, &[(1, 0, 1, 1)]);
        assert_eq!(
            a.weighted_antideriv(3).unwrap(),
            scalar_series(8, &[(3, 1, 1, 1)])
        );
    }

    #[test]
    fn wad_resonant_with_log() {
        // a = t^{m-2} log t, mu = m -> t^m (log t)^2 / 2, here m = 4  [TRIVIAL]
        let a = scalar_series(6, &[(2, 1, 1, 1)]);
        assert_eq!(
            a.weighted_antideriv(4).unwrap(),
            scalar_series(8, &[(4, 2, 1, 2)])
        );
    }

    #[test]
    fn wad_non_integrable() {
        let a = scalar_series(6, &[(0, 0, 1, 1)]);
        assert!(matches!(
            a.weighted_antideriv(3),
            Err(Error::NonIntegrable { .. })
        ));
    }

    #[test]
    fn wad_log_polynomial_closed_form() {
        // a = t^2 log t, mu = 0: t^0 * int rho^3 log rho = t^4 log t / 4 - t^4/16
        let a = scalar_series(6, &[(2, 1, 1, 1)]);
        assert_eq!(
            a.weighted_antideriv(0).unwrap(),
            scalar_series(8, &[(4, 1, 1, 4), (4, 0, -1, 16)])
        );
    }

    #[test]
    fn wad_is_right_inverse_of_l0() {
        // For (m_low, m_high) = (0, 4): w := wad(a, 4) - wad(a, 0) scaled by
        // 1/(m_high - m_low) satisfies t^2 L_0 w = t^2 a  (checked on a mix of
        // monomials including the resonant one).
        let (ml, mh) = (0i64, 4i64);
        let a = scalar_series(8, &[(3, 0, 3, 1), (2, 1, 1, 2), (4, 0, 7, 5)]);
        let w_high = a.weighted_antideriv(mh).unwrap();
        let w_low = a.weighted_antideriv(ml).unwrap();
        let w = w_high
            .sub(&w_low)
            .unwrap()
            .scale(&Coeff::from_ratio(1, mh - ml, Mode::Exact));
        let lhs = w.l0_scaled(ml, mh).unwrap();
        let rhs = a.mul_t_pow(2);
        assert_eq!(lhs.coeff_diff(&rhs.truncated(lhs.trunc())), None);
    }

    #[test]
    fn json_roundtrip() {
        let mut s = LogSeries::new(2, Mode::Exact, 6);
        let mut p = TangentialPoly::zero(2, Mode::Exact);
        p.set_coeff(vec![1, 2], Coeff::from_ratio(-7, 3, Mode::Exact));
        p.set_coeff(vec![0, 0], Coeff::from_i64(2, Mode::Exact));
        s.add_term(4, 1, p).unwrap();
        s.add_term(
            2,
            0,
            TangentialPoly::constant(2, Coeff::from_ratio(1, 2, Mode::Exact)),
        )
        .unwrap();
        let js = s.to_json_string().unwrap();
        let back = LogSeries::from_json_str(&js, 2, 6).unwrap();
        assert_eq!(back.coeff_diff(&s), None);
        // Determinism: serializing again is byte-identical.
        assert_eq!(js, back.to_json_string().unwrap());
    }

    #[test]
    fn numeric_cross_check_eval() {
        // Symbolic product evaluated at several t agrees with the floating
        // product of evaluations to relative 1e-9.
        let a = scalar_series(8, &[(1, 0, 1, 3), (2, 1, -4, 7), (3, 0, 2, 1)]);
        let b = scalar_series(8, &[(0, 0, 1, 1), (2, 2, 5, 11)]);
        let c = a.mul(&b).unwrap();
        for &t in &[0.3, 0.1, 0.03] {
            let direct = a.eval(&[], t) * b.eval(&[], t);
            let sym = c.eval(&[], t);
            assert!(
                (direct - sym).abs() <= 1e-9 * direct.abs().max(1.0),
                "mismatch at t = {t}"
            );
        }
    }

    #[test]
    fn minimal_graph_cap_check() {
        let rule = LogCapRule::MinimalGraph { n: 3 };
        assert_eq!(rule.cap(4), 1);
        assert_eq!(rule.cap(3), 0);
        let s = scalar_series(6, &[(4, 1, 1, 1)]);
        assert!(s.clone().with_log_caps(rule).is_ok());
        let bad = scalar_series(6, &[(3, 1, 1, 1)]);
        assert!(bad.with_log_caps(rule).is_err());
    }
}
