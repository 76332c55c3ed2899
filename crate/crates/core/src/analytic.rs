//! Analytic composition: explicit multivariate Taylor data composed with
//! log-series arguments, plus the right-hand-side recipe AST used by the
//! problem adapters.
//!
//! Recipes evaluate directly to the scaled right-hand side G := t^2 F, which
//! keeps every intermediate series in nonnegative powers of t even for
//! problems whose F carries t^{-1} terms.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::coeff::{binomial_rational, ensure_same_mode, Coeff, Mode};
use crate::error::{Error, Result};
use crate::series::LogSeries;
use crate::tangential::TangentialPoly;

/// Explicit multivariate Taylor data: a finite sum of monomials in the
/// arguments, coeff * y_0^{e_0} ... y_{n-1}^{e_{n-1}}.
#[derive(Clone, Debug)]
pub struct AnalyticMap {
    pub num_args: usize,
    /// (exponent vector, coefficient)
    pub terms: Vec<(Vec<u32>, Coeff)>,
    /// declared convergence radius (reported in divergence errors)
    pub radius: Option<f64>,
}

impl AnalyticMap {
    pub fn new(num_args: usize) -> Self {
        AnalyticMap {
            num_args,
            terms: Vec::new(),
            radius: None,
        }
    }

    pub fn push(&mut self, exps: Vec<u32>, c: Coeff) {
        assert_eq!(exps.len(), self.num_args);
        self.terms.push((exps, c));
    }
}

/// Taylor composition F(args) truncated at the arguments' common order.
pub fn compose_analytic(map: &AnalyticMap, args: &[LogSeries]) -> Result<LogSeries> {
    assert_eq!(args.len(), map.num_args, "argument count mismatch");
    assert!(!args.is_empty(), "composition needs at least one argument");
    let dim = args[0].dim();
    let mode = args[0].mode();
    let trunc = args.iter().map(|a| a.trunc()).min().unwrap();
    for (idx, a) in args.iter().enumerate() {
        ensure_same_mode(mode, a.mode())?;
        if a.dim() != dim {
            return Err(Error::DimMismatch(dim, a.dim()));
        }
        let const_term = a
            .coeff(0, 0)
            .map(|p| p.constant_term())
            .unwrap_or_else(|| Coeff::zero(mode));
        if !const_term.is_zero() {
            let radius = match map.radius {
                Some(r) => format!(" (declared radius {r}; finite Taylor data cannot be re-centered)"),
                None => String::new(),
            };
            return Err(Error::DivergentSubstitution { arg: idx, radius });
        }
    }
    // Lazily extended power tables per argument.
    let one = constant_series(dim, mode, trunc, Coeff::one(mode));
    let mut powers: Vec<Vec<LogSeries>> = args.iter().map(|a| vec![one.clone(), a.clone()]).collect();
    let mut out = LogSeries::new(dim, mode, trunc);
    for (exps, c) in &map.terms {
        let mut acc = constant_series(dim, mode, trunc, c.clone());
        if acc.is_zero() {
            continue;
        }
        for (argi, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            while powers[argi].len() <= e as usize {
                let next = powers[argi].last().unwrap().mul(&args[argi])?;
                powers[argi].push(next);
            }
            acc = acc.mul(&powers[argi][e as usize])?;
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc)?;
    }
    Ok(out)
}

fn constant_series(dim: usize, mode: Mode, trunc: u32, c: Coeff) -> LogSeries {
    let mut s = LogSeries::new(dim, mode, trunc);
    if !c.is_zero() {
        s.add_term(0, 0, TangentialPoly::constant(dim, c)).expect("constant term");
    }
    s
}

// ----- the argument vector of eq-components -----

/// Index layout of the argument vector
/// V = (v/t, v', D_a v / t, D_a v', D_ab v, v^2/t^3, v v'/t^2, v'^2/t)
/// for tangential dimension d.
#[derive(Clone, Copy, Debug)]
pub struct ArgLayout {
    pub dim: usize,
}

impl ArgLayout {
    pub fn v_over_t(&self) -> usize {
        0
    }
    pub fn vp(&self) -> usize {
        1
    }
    pub fn dv_over_t(&self, alpha: usize) -> usize {
        2 + alpha
    }
    pub fn dvp(&self, alpha: usize) -> usize {
        2 + self.dim + alpha
    }
    pub fn d2v(&self, a: usize, b: usize) -> usize {
        2 + 2 * self.dim + a * self.dim + b
    }
    pub fn v2_over_t3(&self) -> usize {
        2 + 2 * self.dim + self.dim * self.dim
    }
    pub fn vvp_over_t2(&self) -> usize {
        self.v2_over_t3() + 1
    }
    pub fn vp2_over_t(&self) -> usize {
        self.v2_over_t3() + 2
    }
    pub fn len(&self) -> usize {
        self.v2_over_t3() + 3
    }
}

/// Lazily computed argument vector components for a given v.
pub struct ArgCtx {
    layout: ArgLayout,
    cache: Vec<Option<LogSeries>>,
    v: LogSeries,
}

impl ArgCtx {
    pub fn new(v: LogSeries) -> Self {
        let layout = ArgLayout { dim: v.dim() };
        ArgCtx {
            layout,
            cache: vec![None; layout.len()],
            v,
        }
    }

    pub fn v(&self) -> &LogSeries {
        &self.v
    }

    pub fn layout(&self) -> ArgLayout {
        self.layout
    }

    pub fn get(&mut self, idx: usize) -> Result<LogSeries> {
        if let Some(s) = &self.cache[idx] {
            return Ok(s.clone());
        }
        let lay = self.layout;
        let d = lay.dim;
        let s = if idx == lay.v_over_t() {
            self.v.div_t(1)?
        } else if idx == lay.vp() {
            self.v.ddt()?
        } else if idx >= lay.dv_over_t(0) && idx < lay.dv_over_t(0) + d {
            let a = idx - lay.dv_over_t(0);
            self.v.d_alpha(a).div_t(1)?
        } else if idx >= lay.dvp(0) && idx < lay.dvp(0) + d {
            let a = idx - lay.dvp(0);
            self.v.d_alpha(a).ddt()?
        } else if idx >= lay.d2v(0, 0) && idx < lay.d2v(0, 0) + d * d {
            let k = idx - lay.d2v(0, 0);
            self.v.d_alpha(k / d).d_alpha(k % d)
        } else if idx == lay.v2_over_t3() {
            self.v.mul(&self.v)?.div_t(3)?
        } else if idx == lay.vvp_over_t2() {
            self.v.mul(&self.v.ddt()?)?.div_t(2)?
        } else if idx == lay.vp2_over_t() {
            let vp = self.v.ddt()?;
            vp.mul(&vp)?.div_t(1)?
        } else {
            panic!("argument index {idx} out of range");
        };
        self.cache[idx] = Some(s.clone());
        Ok(s)
    }
}

// ----- right-hand-side recipe AST -----

/// Recipe for the scaled right-hand side G = t^2 F(x', t, V), built once per
/// problem instance and evaluated against any v.
#[derive(Clone, Debug)]
pub enum FExpr {
    /// Component of the argument vector (ArgLayout indexing).
    Arg(usize),
    /// t^k
    TPow(u32),
    /// function of x' only
    Poly(TangentialPoly),
    /// scalar constant
    Num(Coeff),
    Add(Vec<FExpr>),
    Mul(Vec<FExpr>),
    Neg(Box<FExpr>),
    Pow(Box<FExpr>, u32),
    /// 1/(1 + inner); inner must have no constant term
    Geom(Box<FExpr>),
    /// (1 + inner)^gamma - 1 - gamma*inner (the quadratic-and-up remainder)
    BinomTail { gamma: BigRational, inner: Box<FExpr> },
}

impl FExpr {
    pub fn eval(&self, ctx: &mut ArgCtx, trunc: u32) -> Result<LogSeries> {
        let dim = ctx.v().dim();
        let mode = ctx.v().mode();
        match self {
            FExpr::Arg(i) => Ok(ctx.get(*i)?.truncated(trunc)),
            FExpr::TPow(k) => {
                let mut s = LogSeries::new(dim, mode, trunc);
                if *k <= trunc {
                    s.add_term(*k, 0, TangentialPoly::constant(dim, Coeff::one(mode)))?;
                }
                Ok(s)
            }
            FExpr::Poly(p) => {
                let mut s = LogSeries::new(dim, mode, trunc);
                s.add_term(0, 0, p.clone())?;
                Ok(s)
            }
            FExpr::Num(c) => Ok(constant_series(dim, mode, trunc, c.clone())),
            FExpr::Add(xs) => {
                let mut acc = LogSeries::new(dim, mode, trunc);
                for x in xs {
                    acc = acc.add(&x.eval(ctx, trunc)?)?;
                }
                Ok(acc)
            }
            FExpr::Mul(xs) => {
                let mut acc = constant_series(dim, mode, trunc, Coeff::one(mode));
                for x in xs {
                    if acc.is_zero() {
                        break;
                    }
                    acc = acc.mul(&x.eval(ctx, trunc)?)?;
                }
                Ok(acc)
            }
            FExpr::Neg(x) => Ok(x.eval(ctx, trunc)?.neg()),
            FExpr::Pow(x, e) => {
                let base = x.eval(ctx, trunc)?;
                let mut acc = constant_series(dim, mode, trunc, Coeff::one(mode));
                for _ in 0..*e {
                    acc = acc.mul(&base)?;
                }
                Ok(acc)
            }
            FExpr::Geom(x) => {
                let e = x.eval(ctx, trunc)?;
                // 1/(1+e) = sum (-1)^k e^k; terminates by truncation since e
                // has positive grading in t-order plus tangential degree.
                analytic_power_series(&e, trunc, |k| {
                    if k % 2 == 0 {
                        Coeff::one(e.mode())
                    } else {
                        Coeff::from_i64(-1, e.mode())
                    }
                })
            }
            FExpr::BinomTail { gamma, inner } => {
                let e = inner.eval(ctx, trunc)?;
                let mode = e.mode();
                analytic_power_series(&e, trunc, |k| {
                    if k < 2 {
                        Coeff::zero(mode)
                    } else {
                        let b = binomial_rational(gamma, k);
                        match mode {
                            Mode::Exact => Coeff::Rat(b),
                            Mode::Float => Coeff::F64(b.to_f64().unwrap_or(f64::NAN)),
                        }
                    }
                })
            }
        }
    }
}

/// sum_k c(k) e^k for a series e with no scalar constant term. Terminates when
/// e^k truncates to zero; guarded against arguments lacking positive grading.
fn analytic_power_series(
    e: &LogSeries,
    trunc: u32,
    coeff_of: impl Fn(u32) -> Coeff,
) -> Result<LogSeries> {
    let dim = e.dim();
    let mode = e.mode();
    let const_term = e
        .coeff(0, 0)
        .map(|p| p.constant_term())
        .unwrap_or_else(|| Coeff::zero(mode));
    if !const_term.is_zero() {
        return Err(Error::DivergentSubstitution {
            arg: 0,
            radius: " (inner series of an analytic recipe node)".into(),
        });
    }
    let mut out = constant_series(dim, mode, trunc, coeff_of(0));
    let mut pw = e.clone();
    let mut k = 1u32;
    let guard = trunc + 4096;
    while !pw.is_zero() {
        let c = coeff_of(k);
        if !c.is_zero() {
            out = out.add(&pw.scale(&c))?;
        }
        k += 1;
        if k > guard {
            return Err(Error::NonTerminatingComposition);
        }
        pw = pw.mul(e)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::scalar_series;

    #[test]
    fn geometric_series_composition() {
        // F(y) = 1/(1-y), y = t -> 1 + t + ... + t^K  [TRIVIAL]
        let k = 6u32;
        let mut map = AnalyticMap::new(1);
        for e in 0..=k {
            map.push(vec![e], Coeff::from_i64(1, Mode::Exact));
        }
        let y = scalar_series(k, &[(1, 0, 1, 1)]);
        let out = compose_analytic(&map, &[y]).unwrap();
        let expect_terms: Vec<(u32, u32, i64, i64)> = (0..=k).map(|i| (i, 0, 1, 1)).collect();
        assert_eq!(out.coeff_diff(&scalar_series(k, &expect_terms)), None);
    }

    #[test]
    fn square_equals_series_mul() {
        // F(y) = y^2, y = t + t log t  [DERIVED: equals series_mul of y with itself]
        let y = scalar_series(6, &[(1, 0, 1, 1), (1, 1, 1, 1)]);
        let mut map = AnalyticMap::new(1);
        map.push(vec![2], Coeff::from_i64(1, Mode::Exact));
        let out = compose_analytic(&map, &[y.clone()]).unwrap();
        assert_eq!(out.coeff_diff(&y.mul(&y).unwrap()), None);
    }

    #[test]
    fn bilinear_product() {
        // F(y1, y2) = y1*y2 with args (t, s)  [TRIVIAL: bilinearity]
        let a = scalar_series(6, &[(1, 0, 1, 1)]);
        let b = scalar_series(6, &[(2, 0, 3, 4), (4, 0, -1, 2)]);
        let mut map = AnalyticMap::new(2);
        map.push(vec![1, 1], Coeff::from_i64(1, Mode::Exact));
        let out = compose_analytic(&map, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(out.coeff_diff(&a.mul(&b).unwrap()), None);
    }

    #[test]
    fn constant_term_rejected() {
        let y = scalar_series(6, &[(0, 0, 1, 2), (1, 0, 1, 1)]);
        let mut map = AnalyticMap::new(1);
        map.radius = Some(1.0);
        map.push(vec![1], Coeff::from_i64(1, Mode::Exact));
        assert!(matches!(
            compose_analytic(&map, &[y]),
            Err(Error::DivergentSubstitution { .. })
        ));
    }

    #[test]
    fn arg_vector_components() {
        // v = t^2 (scalar): V = (t, 2t, -, -, -, t, 2t, 4t)
        let v = scalar_series(8, &[(2, 0, 1, 1)]);
        let mut ctx = ArgCtx::new(v);
        let lay = ctx.layout();
        assert_eq!(
            ctx.get(lay.v_over_t()).unwrap().coeff_diff(&scalar_series(7, &[(1, 0, 1, 1)])),
            None
        );
        assert_eq!(
            ctx.get(lay.vp()).unwrap().coeff_diff(&scalar_series(7, &[(1, 0, 2, 1)])),
            None
        );
        assert_eq!(
            ctx.get(lay.v2_over_t3()).unwrap().coeff_diff(&scalar_series(7, &[(1, 0, 1, 1)])),
            None
        );
        assert_eq!(
            ctx.get(lay.vvp_over_t2()).unwrap().coeff_diff(&scalar_series(7, &[(1, 0, 2, 1)])),
            None
        );
        assert_eq!(
            ctx.get(lay.vp2_over_t()).unwrap().coeff_diff(&scalar_series(7, &[(1, 0, 4, 1)])),
            None
        );
    }

    #[test]
    fn geom_node_matches_rational_function() {
        // 1/(1+t) = 1 - t + t^2 - ...
        let v = scalar_series(5, &[(2, 0, 1, 1)]);
        let mut ctx = ArgCtx::new(v);
        let expr = FExpr::Geom(Box::new(FExpr::TPow(1)));
        let out = expr.eval(&mut ctx, 5).unwrap();
        let expect = scalar_series(
            5,
            &[(0, 0, 1, 1), (1, 0, -1, 1), (2, 0, 1, 1), (3, 0, -1, 1), (4, 0, 1, 1), (5, 0, -1, 1)],
        );
        assert_eq!(out.coeff_diff(&expect), None);
    }

    #[test]
    fn binom_tail_integer_exponent() {
        // (1+t)^5 - 1 - 5t = 10t^2 + 10t^3 + 5t^4 + t^5
        let v = scalar_series(5, &[(2, 0, 1, 1)]);
        let mut ctx = ArgCtx::new(v);
        let expr = FExpr::BinomTail {
            gamma: BigRational::from_integer(5.into()),
            inner: Box::new(FExpr::TPow(1)),
        };
        let out = expr.eval(&mut ctx, 5).unwrap();
        let expect = scalar_series(5, &[(2, 0, 10, 1), (3, 0, 10, 1), (4, 0, 5, 1), (5, 0, 1, 1)]);
        assert_eq!(out.coeff_diff(&expect), None);
    }
}
