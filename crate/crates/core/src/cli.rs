//! Deterministic command-line front end: load a keyed-text run
//! configuration, construct the problem, run the requested action, and emit
//! machine-readable artifacts (series JSON, CSV tables, textual reports).
//!
//! Exit codes: 0 success, 2 configuration error, 3 mathematical domain error,
//! 4 validation failure (decay/slope/bound outside tolerance).

use num_rational::BigRational;

use crate::coeff::{Coeff, Mode};
use crate::config::{Command, DatumSpec, PhiSpec, ProblemKind, RunConfig};
use crate::engine::{match_coefficients, run_iteration, seed_expansion, MajorantConfig};
use crate::error::{Error, Result};
use crate::friedman::{
    a_ik_bound, friedman_constants, standard_cases, verify_composition_bound, z_power_coeffs,
};
use crate::ode::SingularProblem;
use crate::problems::{
    hemisphere_oracle, hemisphere_phi, ln_ball_oracle, ln_local_coeffs, loewner_nirenberg_problem,
    minimal_graph_problem, LnGeometry,
};
use crate::series::LogSeries;
use crate::tangential::TangentialPoly;
use crate::validate::{
    fd_solve_richardson, remainder_slopes, remainder_table_csv, series_growth_fit, GridSpec,
    RadialOde,
};

/// Entry point used by the binary: parse argv, run, map errors to exit codes.
pub fn run_cli() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    if args.len() != 2 {
        eprintln!("usage: {} <config-file>", args.first().map(String::as_str).unwrap_or("polyhom"));
        return 2;
    }
    let text = match std::fs::read_to_string(&args[1]) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read config '{}': {e}", args[1]);
            return 2;
        }
    };
    match run_config_text(&text) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit-code policy: 2 for configuration/IO problems, 4 for tolerance
/// failures, 3 for every mathematical domain error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Io(_) | Error::MalformedJson(_) => 2,
        Error::Validation(_) => 4,
        _ => 3,
    }
}

/// Run a parsed-from-text configuration (separated from argv handling so the
/// whole pipeline is testable in-process).
pub fn run_config_text(text: &str) -> Result<()> {
    let cfg = RunConfig::parse(text)?;
    run(&cfg)
}

/// A constructed problem together with its resolved boundary datum.
pub struct BuiltProblem {
    pub prob: SingularProblem,
    pub datum: TangentialPoly,
}

/// Construct the problem and datum a configuration describes.
pub fn build_problem(cfg: &RunConfig) -> Result<BuiltProblem> {
    match cfg.kind {
        ProblemKind::MinimalGraph => {
            if cfg.n < 2 {
                return Err(Error::Config("minimal_graph requires n >= 2".into()));
            }
            let dim = (cfg.n - 1) as usize;
            let phi = match &cfg.phi {
                PhiSpec::Hemisphere => hemisphere_phi(cfg.n, cfg.degree),
                PhiSpec::Zero => {
                    TangentialPoly::zero(dim, Mode::Exact).truncated(cfg.degree as i64)
                }
                PhiSpec::Poly(list) => RunConfig::monomials_to_poly(dim, list, cfg.degree)?,
            };
            let prob = minimal_graph_problem(cfg.n, &phi)?;
            let datum = match &cfg.datum {
                DatumSpec::Oracle => hemisphere_oracle(cfg.n, cfg.degree, cfg.trunc)?
                    .coeff_or_zero(cfg.n + 1, 0),
                DatumSpec::Constant(c) => {
                    TangentialPoly::constant(dim, Coeff::Rat(c.clone()))
                }
                DatumSpec::Poly(list) => RunConfig::monomials_to_poly(dim, list, cfg.degree)?,
            };
            Ok(BuiltProblem { prob, datum })
        }
        ProblemKind::LnHalfSpace | ProblemKind::LnBall => {
            if cfg.n < 3 {
                return Err(Error::Config(
                    "the conformal problems require n >= 3".into(),
                ));
            }
            let geometry = if cfg.kind == ProblemKind::LnBall {
                LnGeometry::UnitBall
            } else {
                LnGeometry::HalfSpace
            };
            let prob = loewner_nirenberg_problem(cfg.n, geometry)?;
            let datum = match &cfg.datum {
                DatumSpec::Oracle => match geometry {
                    LnGeometry::UnitBall => {
                        ln_ball_oracle(cfg.n, cfg.trunc)?.coeff_or_zero(cfg.n, 0)
                    }
                    // No closed-form fixture on the half space; the natural
                    // normalized datum is 1.
                    LnGeometry::HalfSpace => {
                        TangentialPoly::constant(0, Coeff::one(Mode::Exact))
                    }
                },
                DatumSpec::Constant(c) => TangentialPoly::constant(0, Coeff::Rat(c.clone())),
                DatumSpec::Poly(_) => {
                    return Err(Error::Config(
                        "scalar problems take a scalar datum, not a monomial list".into(),
                    ))
                }
            };
            Ok(BuiltProblem { prob, datum })
        }
        ProblemKind::Homogeneous => {
            if cfg.m_high <= cfg.m_low || cfg.m_high < 0 {
                return Err(Error::Config(
                    "homogeneous problems need m_low < m_high and m_high >= 0".into(),
                ));
            }
            let prob = SingularProblem::from_roots(
                cfg.m_low,
                cfg.m_high,
                1,
                0,
                Mode::Exact,
                crate::analytic::FExpr::Num(Coeff::zero(Mode::Exact)),
                1.0,
                1.0,
            )?;
            let datum = match &cfg.datum {
                DatumSpec::Oracle => TangentialPoly::constant(0, Coeff::one(Mode::Exact)),
                DatumSpec::Constant(c) => TangentialPoly::constant(0, Coeff::Rat(c.clone())),
                DatumSpec::Poly(_) => {
                    return Err(Error::Config(
                        "homogeneous problems take a scalar datum".into(),
                    ))
                }
            };
            Ok(BuiltProblem { prob, datum })
        }
    }
}

fn write_artifact(path: &Option<String>, what: &str, content: &str) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, content)?;
            println!("{what}: wrote {p}");
            Ok(())
        }
        None => {
            println!("{what}:");
            println!("{content}");
            Ok(())
        }
    }
}

fn run(cfg: &RunConfig) -> Result<()> {
    match cfg.command {
        Command::Expand => {
            let bp = build_problem(cfg)?;
            let series = seed_expansion(&bp.prob, &bp.datum)?;
            write_artifact(&cfg.out_series, "series", &series.to_json_string()?)
        }
        Command::Match => {
            let bp = build_problem(cfg)?;
            let series = match_coefficients(&bp.prob, cfg.trunc, &bp.datum)?;
            write_artifact(&cfg.out_series, "series", &series.to_json_string()?)
        }
        Command::Iterate => {
            let bp = build_problem(cfg)?;
            if (cfg.trunc as i64) <= bp.prob.m_high {
                return Err(Error::Config(format!(
                    "problem.k = {} must exceed the resonant order {}",
                    cfg.trunc, bp.prob.m_high
                )));
            }
            let mcfg = MajorantConfig {
                ratio_threshold: cfg.tol_ratio,
                ..MajorantConfig::default()
            };
            let trace = run_iteration(&bp.prob, cfg.trunc, &bp.datum, &mcfg)?;
            write_artifact(&cfg.out_series, "series", &trace.v.to_json_string()?)?;
            write_artifact(&cfg.out_majorant, "majorant trace", &trace.trace_csv())?;
            println!(
                "decay: ratio {:.6} threshold {:.3} verdict {}",
                trace.ratio,
                cfg.tol_ratio,
                if trace.majorant_pass { "PASS" } else { "FAIL" }
            );
            if !trace.majorant_pass {
                return Err(Error::Validation(format!(
                    "majorant ratio {:.6} above threshold {:.3}",
                    trace.ratio, cfg.tol_ratio
                )));
            }
            Ok(())
        }
        Command::Validate => run_validate(cfg),
        Command::LnCoeffs => {
            if cfg.n < 3 {
                return Err(Error::Config(
                    "local coefficients are defined for n >= 3".into(),
                ));
            }
            let lc = ln_local_coeffs(
                cfg.n,
                &cfg.curvature_h_sum,
                Some(&cfg.curvature_gauss),
                Some(&cfg.curvature_lap_h),
            );
            println!("c1 (H = sum of principal curvatures)  = {}", lc.c1_sum);
            println!("c1 (H = mean curvature)               = {}", lc.c1_mean);
            match (&lc.c31_sum, &lc.c31_mean) {
                (Some(s), Some(m)) => {
                    println!("c31 (H = sum of principal curvatures) = {s}");
                    println!("c31 (H = mean curvature)              = {m}");
                }
                _ => println!("c31: defined only for n = 3"),
            }
            println!("audit: {}", lc.audit);
            Ok(())
        }
        Command::Friedman => run_friedman(cfg),
    }
}

fn run_validate(cfg: &RunConfig) -> Result<()> {
    let grid = GridSpec {
        t_min: 1e-4,
        t_max: 0.5,
        points: 2000,
    };
    let (ode, exact, partial, ks, expected): (
        RadialOde,
        Box<dyn Fn(f64) -> f64>,
        Box<dyn Fn(u32, f64) -> f64>,
        Vec<u32>,
        Vec<f64>,
    ) = match cfg.kind {
        ProblemKind::MinimalGraph => {
            let exact = |t: f64| (1.0 - t * t).sqrt();
            let partial = |k: u32, t: f64| {
                let w = t * t;
                let mut acc = 0.0;
                let mut c = 1.0;
                for m in 0..=(k / 2) {
                    if m > 0 {
                        c *= (0.5 - (m - 1) as f64) / m as f64;
                    }
                    acc += c * (-w).powi(m as i32);
                }
                acc
            };
            (
                RadialOde::CircleSlice,
                Box::new(exact),
                Box::new(partial),
                vec![2, 4],
                vec![4.0, 6.0],
            )
        }
        ProblemKind::LnBall => {
            let m = (cfg.n - 2) as f64;
            let exact = move |t: f64| (1.0 - t / 2.0).powf(-m / 2.0);
            let oracle = ln_ball_oracle(cfg.n, cfg.trunc.max(8))?;
            let coeffs: Vec<f64> = (0..=cfg.trunc.max(8))
                .map(|i| {
                    oracle
                        .coeff(i, 0)
                        .map(|p| p.coeff(&[]).to_f64())
                        .unwrap_or(0.0)
                })
                .collect();
            let partial = move |k: u32, t: f64| {
                let mut acc = 1.0; // y = 1 + v
                for (i, &c) in coeffs.iter().enumerate().take(k as usize + 1) {
                    acc += c * t.powi(i as i32);
                }
                acc
            };
            (
                RadialOde::BallConformal { n: cfg.n },
                Box::new(exact),
                Box::new(partial),
                vec![2, 3],
                vec![3.0, 4.0],
            )
        }
        _ => {
            return Err(Error::Config(
                "validate supports problem.kind minimal_graph or ln_ball".into(),
            ))
        }
    };

    let sol = fd_solve_richardson(&ode, exact(grid.t_min), exact(grid.t_max), &grid)?;
    let max_err = sol
        .grid
        .iter()
        .zip(&sol.values)
        .map(|(&t, &u)| (u - exact(t)).abs())
        .fold(0.0f64, f64::max);
    println!("fd max error vs exact: {max_err:.3e} (residual {:.3e})", sol.residual_norm);
    if max_err > 1e-8 {
        return Err(Error::Validation(format!(
            "finite-difference error {max_err:.3e} above 1e-8"
        )));
    }

    write_artifact(&cfg.out_grid, "grid table", &remainder_table_csv(&sol, &partial, &ks))?;

    let fits = remainder_slopes(&sol, &partial, &ks, 1e-8)?;
    let mut table = String::from("k,slope,expected,points\n");
    let mut ok = true;
    for (fit, &exp) in fits.iter().zip(&expected) {
        match fit.slope {
            Some(s) => {
                table.push_str(&format!("{},{:.6},{:.1},{}\n", fit.k, s, exp, fit.points));
                if (s - exp).abs() > cfg.tol_slope {
                    ok = false;
                }
            }
            None => {
                table.push_str(&format!("{},rejected,{:.1},{}\n", fit.k, exp, fit.points));
                ok = false;
            }
        }
    }
    write_artifact(&cfg.out_slopes, "slope table", &table)?;

    if cfg.kind == ProblemKind::MinimalGraph {
        let bp = build_problem(cfg)?;
        let series = match_coefficients(&bp.prob, cfg.trunc.min(6), &bp.datum)?;
        let fit = series_growth_fit(&series, 2, 0)?;
        println!("tangential growth: B {:.4} radius {:.4}", fit.b, fit.radius);
    }

    if !ok {
        return Err(Error::Validation("remainder slope outside tolerance".into()));
    }
    println!("slopes within +/-{:.2} of oracle exponents", cfg.tol_slope);
    Ok(())
}

fn run_friedman(cfg: &RunConfig) -> Result<()> {
    let (b1, b0t) = friedman_constants(
        cfg.friedman_a0,
        cfg.friedman_a1,
        cfg.friedman_a2,
        cfg.friedman_b0,
    )?;
    println!(
        "constants: A0 {} A1 {} A2 {} B0 {} -> B1 {} B0~ {}",
        cfg.friedman_a0, cfg.friedman_a1, cfg.friedman_a2, cfg.friedman_b0, b1, b0t
    );

    // Exact coefficient-bound table at B1 = 16.
    let b0r = BigRational::from_integer(1.into());
    let b1r = BigRational::from_integer(16.into());
    let mut worst: Option<(usize, usize, BigRational)> = None;
    for i in 1..20usize {
        for (k, a) in z_power_coeffs(i, 20, &b0r, &b1r)? {
            if k > i {
                let bound = a_ik_bound(i, k);
                if &a > &bound {
                    return Err(Error::Validation(format!(
                        "coefficient bound violated at (i, k) = ({i}, {k})"
                    )));
                }
                let slack = &bound - &a;
                if worst.as_ref().map(|(_, _, w)| &slack < w).unwrap_or(true) {
                    worst = Some((i, k, slack));
                }
            }
        }
    }
    let (wi, wk, _) = worst.unwrap();
    println!("coefficient bound a_ik <= 3^(i-1)/((k-i+1)(k-i)): holds exactly for 1 <= i < k <= 20 (tightest at i {wi}, k {wk})");

    let p_max = cfg.friedman_p.min(12);
    for case in standard_cases() {
        for p in 2..=p_max {
            let rep = verify_composition_bound(&case, p)?;
            if p == p_max || p == 6 {
                println!(
                    "case '{}' p {}: |d^p| {:.6e} bound {:.6e} margin {:.3e} hypothesis {}",
                    rep.name,
                    rep.p,
                    rep.lhs,
                    rep.bound,
                    rep.margin,
                    if rep.hypothesis_ok { "ok" } else { "VIOLATED" }
                );
            }
            if !rep.hypothesis_ok {
                return Err(Error::Validation(format!(
                    "test family '{}' violates the hypothesis constants",
                    rep.name
                )));
            }
            if rep.margin < 1.0 {
                return Err(Error::Validation(format!(
                    "composition bound violated for '{}' at p = {p}",
                    rep.name
                )));
            }
        }
    }
    println!("composition bound holds on all shipped families through p = {p_max}");
    Ok(())
}

/// Convenience for tests: run `match` and return the series for a config.
pub fn match_series_for(cfg: &RunConfig) -> Result<LogSeries> {
    let bp = build_problem(cfg)?;
    match_coefficients(&bp.prob, cfg.trunc, &bp.datum)
}

/// Convenience for tests: run the Picard iteration for a config.
pub fn iteration_for(cfg: &RunConfig) -> Result<crate::engine::IterationTrace> {
    let bp = build_problem(cfg)?;
    let mcfg = MajorantConfig {
        ratio_threshold: cfg.tol_ratio,
        ..MajorantConfig::default()
    };
    run_iteration(&bp.prob, cfg.trunc, &bp.datum, &mcfg)
}
