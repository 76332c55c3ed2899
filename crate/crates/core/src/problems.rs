//! Problem adapters: the hyperbolic minimal-graph equation and the
//! Loewner-Nirenberg singular Yamabe problem, each brought to the normal form
//! v'' + p v'/t + q v/t^2 = F with an explicit recipe for G = t^2 F, plus
//! closed-form oracles for benchmark geometries.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::analytic::{ArgLayout, FExpr};
use crate::coeff::{binomial_rational, Coeff, Mode};
use crate::error::Result;
use crate::ode::SingularProblem;
use crate::series::LogSeries;
use crate::tangential::TangentialPoly;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// (1 - |x'|^2)^a as a tangential Taylor polynomial, truncated and trusted
/// through total degree `deg`.
pub fn binom_series_poly(a: &BigRational, dim: usize, deg: u32) -> TangentialPoly {
    let mut w = TangentialPoly::zero(dim, Mode::Exact);
    for alpha in 0..dim {
        let mut idx = vec![0u32; dim];
        idx[alpha] = 2;
        w.set_coeff(idx, Coeff::from_i64(1, Mode::Exact));
    }
    let mut acc = TangentialPoly::constant(dim, Coeff::one(Mode::Exact));
    let mut w_pow = TangentialPoly::constant(dim, Coeff::one(Mode::Exact));
    for m in 1..=(deg / 2) {
        w_pow = w_pow.mul(&w).expect("same mode");
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let c = binomial_rational(a, m) * BigRational::from_integer(BigInt::from(sign));
        acc = acc
            .add(&w_pow.scale(&Coeff::Rat(c)))
            .expect("same mode");
    }
    acc.truncated(deg as i64)
}

// ----- minimal graphs in hyperbolic space -----

/// The minimal-graph equation over a vertical plane, written for the
/// correction v = u - phi:
///
///   v'' - n v'/t = F,
///   F = -(Lap' u) + [ -v'^2 (Lap' u) + n v'^3 / t + Qt ] / E,
///
/// with Lap' u = Lap' phi + Lap' v, E = 1 + |D' u|^2 (tangential gradient
/// only), and Qt = sum_{ab} u_a u_b u_ab + 2 sum_a u_a v' (D_a v').
/// Indicial roots (0, n+1); coefficients below t^2 are forced to vanish.
///
/// `phi` must carry a finite trusted degree (truncate analytic boundary data
/// before passing it in); all derived tangential data inherits it.
pub fn minimal_graph_problem(n: u32, phi: &TangentialPoly) -> Result<SingularProblem> {
    assert!(n >= 2, "need at least one tangential variable");
    let dim = (n - 1) as usize;
    assert_eq!(phi.dim(), dim, "boundary data dimension mismatch");
    assert!(
        phi.max_degree() != crate::tangential::UNBOUNDED,
        "boundary data must carry a finite trusted degree"
    );
    let mode = phi.mode();
    let lay = ArgLayout { dim };

    // u_a = phi_a + t * (D_a v / t)
    let u_a: Vec<FExpr> = (0..dim)
        .map(|a| {
            FExpr::Add(vec![
                FExpr::Poly(phi.d_alpha(a)),
                FExpr::Mul(vec![FExpr::TPow(1), FExpr::Arg(lay.dv_over_t(a))]),
            ])
        })
        .collect();

    // Lap' u = Lap' phi + sum_a D_aa v
    let mut lap_terms = vec![FExpr::Poly({
        let mut l = TangentialPoly::zero(dim, mode);
        for a in 0..dim {
            l = l.add(&phi.d_alpha(a).d_alpha(a))?;
        }
        l
    })];
    for a in 0..dim {
        lap_terms.push(FExpr::Arg(lay.d2v(a, a)));
    }
    let lap_u = FExpr::Add(lap_terms);

    // E - 1 = |D' u|^2
    let e_minus_1 = FExpr::Add(u_a.iter().map(|ua| FExpr::Pow(Box::new(ua.clone()), 2)).collect());

    // Qt = sum_{ab} u_a u_b (phi_ab + D_ab v) + 2 sum_a u_a v' D_a v'
    let mut qt_terms = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            qt_terms.push(FExpr::Mul(vec![
                u_a[a].clone(),
                u_a[b].clone(),
                FExpr::Add(vec![
                    FExpr::Poly(phi.d_alpha(a).d_alpha(b)),
                    FExpr::Arg(lay.d2v(a, b)),
                ]),
            ]));
        }
        qt_terms.push(FExpr::Mul(vec![
            FExpr::Num(Coeff::from_i64(2, mode)),
            u_a[a].clone(),
            FExpr::Arg(lay.vp()),
            FExpr::Arg(lay.dvp(a)),
        ]));
    }
    let qt = FExpr::Add(qt_terms);

    // G = t^2 F
    let rhs = FExpr::Add(vec![
        FExpr::Neg(Box::new(FExpr::Mul(vec![FExpr::TPow(2), lap_u.clone()]))),
        FExpr::Mul(vec![
            FExpr::Geom(Box::new(e_minus_1)),
            FExpr::Add(vec![
                FExpr::Neg(Box::new(FExpr::Mul(vec![
                    FExpr::TPow(2),
                    FExpr::Pow(Box::new(FExpr::Arg(lay.vp())), 2),
                    lap_u,
                ]))),
                FExpr::Mul(vec![
                    FExpr::Num(Coeff::from_i64(n as i64, mode)),
                    FExpr::TPow(1),
                    FExpr::Pow(Box::new(FExpr::Arg(lay.vp())), 3),
                ]),
                FExpr::Mul(vec![FExpr::TPow(2), qt]),
            ]),
        ]),
    ]);

    SingularProblem::from_roots(0, (n + 1) as i64, 2, dim, mode, rhs, 1.0, 0.5)
}

/// Boundary data of the unit-hemisphere graph: phi = (1 - |y'|^2)^{1/2},
/// truncated at tangential degree `deg`.
pub fn hemisphere_phi(n: u32, deg: u32) -> TangentialPoly {
    binom_series_poly(&rat(1, 2), (n - 1) as usize, deg)
}

/// Exact correction for the unit-hemisphere graph:
/// v = sum_{k>=1} C(1/2, k) (-1)^k (1 - |y'|^2)^{(1-2k)/2} t^{2k},
/// tangential data truncated at degree `deg`.
pub fn hemisphere_oracle(n: u32, deg: u32, trunc: u32) -> Result<LogSeries> {
    let dim = (n - 1) as usize;
    let mut v = LogSeries::new(dim, Mode::Exact, trunc);
    let half = rat(1, 2);
    for k in 1..=(trunc / 2) {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let c = binomial_rational(&half, k) * BigRational::from_integer(BigInt::from(sign));
        let body = binom_series_poly(&rat(1 - 2 * k as i64, 2), dim, deg);
        v.add_term(2 * k, 0, body.scale(&Coeff::Rat(c)))?;
    }
    Ok(v)
}

// ----- the Loewner-Nirenberg problem -----

/// Reference geometries with a one-dimensional (radial) profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LnGeometry {
    /// flat boundary: Delta d = 0
    HalfSpace,
    /// unit ball: Delta d = -(n-1)/(1-d)
    UnitBall,
}

/// The Loewner-Nirenberg correction v (u = d^{-(n-2)/2}(1+v)) along the
/// normal of a reference geometry:
///
///   v'' - (n-2) v'/t - n v/t^2 = F,
///   t^2 F = -t^2 (Delta d) v' + (n-2)/2 * t (Delta d)(1+v)
///           + n(n-2)/4 * [(1+v)^g - 1 - g v],  g = (n+2)/(n-2).
///
/// Indicial roots (-1, n); the expansion starts at order 1.
pub fn loewner_nirenberg_problem(n: u32, geometry: LnGeometry) -> Result<SingularProblem> {
    assert!(n >= 3, "the conformal exponent needs n >= 3");
    let mode = Mode::Exact;
    let gamma = rat((n + 2) as i64, (n - 2) as i64);
    let v_expr = FExpr::Mul(vec![FExpr::TPow(1), FExpr::Arg(0)]); // t * (v/t)
    let mut terms = vec![FExpr::Mul(vec![
        FExpr::Num(Coeff::from_ratio((n * (n - 2)) as i64, 4, mode)),
        FExpr::BinomTail {
            gamma,
            inner: Box::new(v_expr.clone()),
        },
    ])];
    if geometry == LnGeometry::UnitBall {
        // Delta d = -(n-1)/(1-t) = -(n-1) * 1/(1 + (-t))
        let delta_d = FExpr::Mul(vec![
            FExpr::Num(Coeff::from_i64(-((n - 1) as i64), mode)),
            FExpr::Geom(Box::new(FExpr::Neg(Box::new(FExpr::TPow(1))))),
        ]);
        terms.push(FExpr::Neg(Box::new(FExpr::Mul(vec![
            FExpr::TPow(2),
            delta_d.clone(),
            FExpr::Arg(1), // v'
        ]))));
        terms.push(FExpr::Mul(vec![
            FExpr::Num(Coeff::from_ratio((n - 2) as i64, 2, mode)),
            FExpr::TPow(1),
            delta_d,
            FExpr::Add(vec![FExpr::Num(Coeff::one(mode)), v_expr]),
        ]));
    }
    SingularProblem::from_roots(-1, n as i64, 1, 0, mode, FExpr::Add(terms), 1.0, 0.5)
}

/// Exact unit-ball profile: 1 + v = (1 - d/2)^{-(n-2)/2}.
pub fn ln_ball_oracle(n: u32, trunc: u32) -> Result<LogSeries> {
    let mut v = LogSeries::new(0, Mode::Exact, trunc);
    let a = rat(-((n - 2) as i64), 2);
    for k in 1..=trunc {
        let c = binomial_rational(&a, k) * rat(-1, 2).pow(k as i32);
        v.add_term(k, 0, TangentialPoly::constant(0, Coeff::Rat(c)))?;
    }
    Ok(v)
}

/// Local boundary coefficients of the Loewner-Nirenberg expansion from
/// curvature data, with both mean-curvature conventions reported.
///
/// Inputs use the *sum* convention H_sum = kappa_1 + ... + kappa_{n-1}
/// (so H_sum = n-1 on the unit sphere); H_mean = H_sum/(n-1).
#[derive(Clone, Debug)]
pub struct LnLocalCoeffs {
    /// c_1 computed as (n-2) H / (4(n-1)) with H in the sum convention
    pub c1_sum: BigRational,
    /// the same formula fed the mean convention instead
    pub c1_mean: BigRational,
    /// c_{3,1} = -1/16 (Lap_b H + 2H(H^2 - K)) with H in the sum convention (n = 3 only)
    pub c31_sum: Option<BigRational>,
    /// the same formula fed the mean convention (n = 3 only)
    pub c31_mean: Option<BigRational>,
    /// which convention each printed formula must use to match the exact
    /// unit-ball profile
    pub audit: &'static str,
}

pub fn ln_local_coeffs(
    n: u32,
    h_sum: &BigRational,
    gauss_k: Option<&BigRational>,
    lap_h_sum: Option<&BigRational>,
) -> LnLocalCoeffs {
    let nm1 = BigRational::from_integer(BigInt::from((n - 1) as i64));
    let h_mean = h_sum / &nm1;
    let factor = rat((n - 2) as i64, 4 * (n - 1) as i64);
    let c1_sum = &factor * h_sum;
    let c1_mean = &factor * &h_mean;
    let (c31_sum, c31_mean) = if n == 3 {
        let two = BigRational::from_integer(BigInt::from(2));
        let c31_of = |h: &BigRational, lap_h: &BigRational, k: &BigRational| {
            let inner = lap_h + &two * h * (h * h - k);
            -inner / BigRational::from_integer(BigInt::from(16))
        };
        match (gauss_k, lap_h_sum) {
            (Some(k), Some(lh)) => (
                Some(c31_of(h_sum, lh, k)),
                Some(c31_of(&h_mean, &(lh / &nm1), k)),
            ),
            _ => (None, None),
        }
    } else {
        (None, None)
    };
    LnLocalCoeffs {
        c1_sum,
        c1_mean,
        c31_sum,
        c31_mean,
        audit: "c1 formula matches the exact ball profile with H in the sum convention; \
                the c_{3,1} formula matches it (vanishing on the ball) only with H in the \
                mean convention",
    }
}

/// The first forced logarithm coefficient c_{m_high,1} of an expansion -- the
/// obstruction to log-free boundary regularity.
pub fn log_obstruction(v: &LogSeries, m_high: i64) -> TangentialPoly {
    v.coeff_or_zero(m_high as u32, 1)
}
