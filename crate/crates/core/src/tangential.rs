//! Truncated power series in the tangential variables x'.
//!
//! `max_degree` doubles as "trusted degree" metadata: tangential
//! differentiation lowers it by one and binary operations take the minimum,
//! so every polynomial records through which total degree its coefficients
//! are meaningful. Exact, untruncated data uses the `UNBOUNDED` sentinel.

use std::collections::BTreeMap;

use crate::coeff::{ensure_same_mode, Coeff, Mode};
use crate::error::{Error, Result};

/// Sentinel max_degree for data that is exact at every tangential degree.
pub const UNBOUNDED: i64 = i64::MAX;

#[derive(Clone, Debug, PartialEq)]
pub struct TangentialPoly {
    dim: usize,
    mode: Mode,
    /// trusted total degree; negative means no trustworthy content
    max_degree: i64,
    /// multi-index (length = dim) -> nonzero coefficient
    terms: BTreeMap<Vec<u32>, Coeff>,
}

fn total_degree(idx: &[u32]) -> i64 {
    idx.iter().map(|&e| e as i64).sum()
}

impl TangentialPoly {
    pub fn zero(dim: usize, mode: Mode) -> Self {
        TangentialPoly {
            dim,
            mode,
            max_degree: UNBOUNDED,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Coeff) -> Self {
        let mut p = TangentialPoly::zero(dim, c.mode());
        if !c.is_zero() {
            p.terms.insert(vec![0; dim], c);
        }
        p
    }

    /// Monomial c * x^idx.
    pub fn monomial(dim: usize, idx: Vec<u32>, c: Coeff) -> Self {
        assert_eq!(idx.len(), dim, "multi-index length must equal dim");
        let mut p = TangentialPoly::zero(dim, c.mode());
        if !c.is_zero() {
            p.terms.insert(idx, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Actual highest total degree present (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|k| total_degree(k)).max().unwrap_or(0) as u32
    }

    pub fn coeff(&self, idx: &[u32]) -> Coeff {
        self.terms
            .get(idx)
            .cloned()
            .unwrap_or_else(|| Coeff::zero(self.mode))
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&vec![0; self.dim])
    }

    pub fn set_coeff(&mut self, idx: Vec<u32>, c: Coeff) {
        assert_eq!(idx.len(), self.dim);
        assert_eq!(c.mode(), self.mode, "coefficient mode must match poly mode");
        if c.is_zero() || total_degree(&idx) > self.max_degree {
            self.terms.remove(&idx);
        } else {
            self.terms.insert(idx, c);
        }
    }

    /// Return a copy truncated to (and trusted through) `deg`; a negative
    /// `deg` clears the polynomial.
    pub fn truncated(&self, deg: i64) -> Self {
        let mut out = self.clone();
        out.max_degree = self.max_degree.min(deg);
        out.terms.retain(|k, _| total_degree(k) <= deg);
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
        let mut out = self.clone();
        out.max_degree = self.max_degree.min(other.max_degree);
        out.terms.retain(|k, _| total_degree(k) <= out.max_degree);
        for (k, v) in &other.terms {
            if total_degree(k) > out.max_degree {
                continue;
            }
            let cur = out.coeff(k);
            out.set_coeff(k.clone(), cur.add(v));
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.neg();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compat(other)?;
        let cap = self.max_degree.min(other.max_degree);
        let mut out = TangentialPoly::zero(self.dim, self.mode);
        out.max_degree = cap;
        for (ka, va) in &self.terms {
            let da = total_degree(ka);
            for (kb, vb) in &other.terms {
                if da + total_degree(kb) > cap {
                    continue;
                }
                let idx: Vec<u32> = ka.iter().zip(kb.iter()).map(|(a, b)| a + b).collect();
                let cur = out.coeff(&idx);
                out.set_coeff(idx, cur.add(&va.mul(vb)));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        assert_eq!(c.mode(), self.mode);
        let mut out = TangentialPoly::zero(self.dim, self.mode);
        out.max_degree = self.max_degree;
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v.mul(c));
        }
        out
    }

    pub fn scale_int(&self, d: i64) -> Self {
        self.scale(&Coeff::from_i64(d, self.mode))
    }

    pub fn div_int(&self, d: i64) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.div_int(d);
        }
        out
    }

    /// Partial derivative in tangential variable alpha; trusted degree drops by 1.
    pub fn d_alpha(&self, alpha: usize) -> Self {
        assert!(alpha < self.dim, "variable index out of range");
        let mut out = TangentialPoly::zero(self.dim, self.mode);
        out.max_degree = if self.max_degree == UNBOUNDED {
            UNBOUNDED
        } else {
            self.max_degree - 1
        };
        for (k, v) in &self.terms {
            let e = k[alpha];
            if e == 0 {
                continue;
            }
            let mut idx = k.clone();
            idx[alpha] = e - 1;
            if total_degree(&idx) > out.max_degree {
                continue;
            }
            let cur = out.coeff(&idx);
            out.set_coeff(idx, cur.add(&v.mul_int(e as i64)));
        }
        out
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim, "evaluation point has wrong dimension");
        let mut acc = 0.0;
        for (k, v) in &self.terms {
            let mut m = v.to_f64();
            for (e, xi) in k.iter().zip(x.iter()) {
                m *= xi.powi(*e as i32);
            }
            acc += m;
        }
        acc
    }

    /// Majorant norm sum |c_m| s^|m| — an upper bound for the sup over the
    /// complex polydisc of radius s, used by the majorant monitor.
    pub fn majorant_norm(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for (k, v) in &self.terms {
            acc += v.abs_f64() * s.powi(total_degree(k) as i32);
        }
        acc
    }

    /// Coefficients of the degree-l homogeneous part, as (multi-index, coeff).
    pub fn homogeneous_part(&self, l: u32) -> Vec<(Vec<u32>, Coeff)> {
        self.terms
            .iter()
            .filter(|(k, _)| total_degree(k) == l as i64)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }

    /// Evaluate only the degree-l homogeneous part at a point.
    pub fn eval_homogeneous(&self, l: u32, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (k, v) in self.terms.iter().filter(|(k, _)| total_degree(k) == l as i64) {
            let mut m = v.to_f64();
            for (e, xi) in k.iter().zip(x.iter()) {
                m *= xi.powi(*e as i32);
            }
            acc += m;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p_of(dim: usize, entries: &[(&[u32], i64, i64)]) -> TangentialPoly {
        let mut p = TangentialPoly::zero(dim, Mode::Exact);
        for (idx, n, d) in entries {
            p.set_coeff(idx.to_vec(), Coeff::from_ratio(*n, *d, Mode::Exact));
        }
        p
    }

    #[test]
    fn mul_truncates_and_convolves() {
        // (1 + x)(1 - x) = 1 - x^2  [TRIVIAL]
        let a = p_of(1, &[(&[0], 1, 1), (&[1], 1, 1)]);
        let b = p_of(1, &[(&[0], 1, 1), (&[1], -1, 1)]);
        let c = a.mul(&b).unwrap();
        assert_eq!(c.coeff(&[0]), Coeff::from_i64(1, Mode::Exact));
        assert!(c.coeff(&[1]).is_zero());
        assert_eq!(c.coeff(&[2]), Coeff::from_i64(-1, Mode::Exact));
    }

    #[test]
    fn trusted_degree_tracking() {
        let a = p_of(2, &[(&[2, 0], 1, 2)]).truncated(4);
        let d = a.d_alpha(0);
        assert_eq!(d.max_degree(), 3);
        assert_eq!(d.coeff(&[1, 0]), Coeff::from_i64(1, Mode::Exact));
        let prod = a.mul(&d).unwrap();
        assert_eq!(prod.max_degree(), 3);
        // x^2/2 * x = x^3/2, within the trusted degree
        assert_eq!(prod.coeff(&[3, 0]), Coeff::from_ratio(1, 2, Mode::Exact));
    }

    #[test]
    fn eval_matches_symbolic() {
        let a = p_of(2, &[(&[1, 1], 3, 1), (&[0, 2], -1, 4)]);
        let v = a.eval(&[0.5, 2.0]);
        assert!((v - (3.0 * 0.5 * 2.0 - 0.25 * 4.0)).abs() < 1e-14);
    }

    #[test]
    fn mode_mix_rejected() {
        let a = p_of(1, &[(&[1], 1, 1)]);
        let mut b = TangentialPoly::zero(1, Mode::Float);
        b.set_coeff(vec![1], Coeff::F64(2.0));
        assert!(a.add(&b).is_err());
    }
}
