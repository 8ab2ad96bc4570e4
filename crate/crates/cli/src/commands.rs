use qrd_core::eigensolver::ground_state_at;
use qrd_core::pipeline::solve_many;
use qrd_core::{
    bogoliubov_frequencies, chain_modes, classify, collapse_spread, collapse_transform,
    converged_ground_state, coupling_for_v, critical_coupling, default_schedule, loglog_fit,
    lowest_eigenpairs, photon_number, quadrature_moment, ConvergenceOptions, DimerModel,
    FockTruncation, Frequency, HamiltonianSpec, Mode, ModelParams, Phase, PointOptions, RawMoment,
    SystemShape,
};
use serde_json::{json, Value};

use crate::args::*;
use crate::error::CliError;
use crate::output::{emit, num, Csv};

fn freq(f: Frequency) -> String {
    match f {
        Frequency::Real(v) => num(v),
        Frequency::Imaginary(v) => format!("{}i", num(v)),
    }
}

fn to_json(v: &Value) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn point_options(ed: &SweepEd) -> Result<PointOptions, CliError> {
    if ed.nmax < 24 {
        return Err(CliError::Usage(
            "--nmax must be at least 24 for the cutoff schedule".into(),
        ));
    }
    if !(ed.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    Ok(PointOptions {
        model: match ed.model {
            ModelArg::Full => DimerModel::Full,
            ModelArg::Effective => DimerModel::Effective,
        },
        qubits: ed.dicke_n,
        convergence: ConvergenceOptions {
            tol: ed.tol,
            schedule: default_schedule(ed.nmax),
            allow_unstable: ed.allow_unstable,
            residual_tol: None,
            track_order_parameter: true,
        },
    })
}

pub fn bogoliubov(a: &BogoliubovArgs) -> Result<(), CliError> {
    if !(a.omega_r > 0.0 && a.omega_r.is_finite()) {
        return Err(CliError::Usage("--omega-r must be positive".into()));
    }
    let s = bogoliubov_frequencies(a.omega_r, a.d, a.j);
    let text = match a.common.format.unwrap_or(Format::Text) {
        Format::Text => format!(
            "eps+ {} eps- {} {}\n",
            freq(s.eps_plus),
            freq(s.eps_minus),
            if s.stable { "stable" } else { "unstable" }
        ),
        Format::Csv => {
            let mut c = Csv::new(&["eps_plus", "eps_minus", "stable", "ground_energy"]);
            c.row([
                freq(s.eps_plus),
                freq(s.eps_minus),
                s.stable.to_string(),
                s.ground_energy(a.omega_r).map(num).unwrap_or_default(),
            ]);
            c.into_string()
        }
        Format::Json => to_json(&json!({
            "omega_r": a.omega_r,
            "d": a.d,
            "j": a.j,
            "eps_plus": s.eps_plus,
            "eps_minus": s.eps_minus,
            "stable": s.stable,
            "ground_energy": s.ground_energy(a.omega_r),
        }))?,
    };
    emit(&text, a.common.out.as_deref())
}

pub fn phase_diagram(a: &PhaseDiagramArgs) -> Result<(), CliError> {
    let mut grid = Vec::new();
    for g in a.gtilde.values() {
        for j in a.jtilde.values() {
            for d in a.dtilde.values() {
                grid.push((g, j, d));
            }
        }
    }
    if grid.iter().any(|&(g, _, _)| g < 0.0) {
        return Err(CliError::Usage("g~ must be non-negative".into()));
    }
    let with_ed = a.mode != SweepMode::Meanfield;
    let classes: Vec<_> = grid.iter().map(|&(g, j, d)| classify(g, j, d)).collect();
    let mut ed_rows = vec![None; grid.len()];
    let mut failures = Vec::new();
    if with_ed {
        if !a.ed.allow_unstable {
            if let Some(i) = classes
                .iter()
                .position(|c| c.classification == Phase::Unstable)
            {
                let (g, j, d) = grid[i];
                return Err(qrd_core::Error::Unstable(format!(
                    "ED requested at g~ = {g}, J~ = {j}, D~ = {d}; pass --allow-unstable to probe it"
                ))
                .into());
            }
        }
        let opts = point_options(&a.ed)?;
        let points: Vec<_> = grid.iter().map(|&(g, j, d)| (g, j, d, a.eta)).collect();
        for (i, r) in solve_many(&points, &opts).into_iter().enumerate() {
            match r {
                Ok(p) => ed_rows[i] = Some(p),
                Err(e) => {
                    let (g, j, d) = grid[i];
                    failures.push(format!("g~ = {g}, J~ = {j}, D~ = {d}: {e}"));
                }
            }
        }
    }

    let text = match a.common.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let rows: Vec<Value> = grid
                .iter()
                .zip(&classes)
                .zip(&ed_rows)
                .map(|((&(g, j, d), c), ed)| {
                    json!({
                        "g_tilde": g, "j_tilde": j, "d_tilde": d,
                        "phase": c.classification.as_str(),
                        "lambda_minus": c.lambda_minus,
                        "g_c": c.g_c,
                        "order_parameter_mf": c.order_parameter_mf,
                        "x_minus_sq_ed": ed.map(|p| p.x_minus_sq),
                        "n_max": ed.map(|p| p.n_max),
                    })
                })
                .collect();
            to_json(&json!({ "eta": with_ed.then_some(a.eta), "rows": rows }))?
        }
        _ => {
            let mut c = Csv::new(&[
                "g_tilde",
                "j_tilde",
                "d_tilde",
                "phase",
                "lambda_minus",
                "g_c",
                "order_parameter_mf",
                "x_minus_sq_ed",
                "n_max",
            ]);
            for ((&(g, j, d), cl), ed) in grid.iter().zip(&classes).zip(&ed_rows) {
                c.row([
                    num(g),
                    num(j),
                    num(d),
                    cl.classification.as_str().to_string(),
                    num(cl.lambda_minus),
                    cl.g_c.map(num).unwrap_or_default(),
                    num(cl.order_parameter_mf),
                    ed.map(|p| num(p.x_minus_sq)).unwrap_or_default(),
                    ed.map(|p| p.n_max.to_string()).unwrap_or_default(),
                ]);
            }
            c.into_string()
        }
    };
    emit(&text, a.common.out.as_deref())?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::PointsFailed(failures))
    }
}

pub fn scaling(a: &ScalingArgs) -> Result<(), CliError> {
    if a.eta.is_empty() || a.eta.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(CliError::Usage("--eta needs positive values".into()));
    }
    critical_coupling(a.jtilde, a.dtilde).ok_or(qrd_core::Error::NoCriticalPoint {
        j_tilde: a.jtilde,
        d_tilde: a.dtilde,
    })?;
    let opts = point_options(&a.ed)?;
    let vs = a.v_range.values();
    let mut jobs = Vec::new();
    for &eta in &a.eta {
        for &v in &vs {
            jobs.push((eta, v, coupling_for_v(v, a.jtilde, a.dtilde, eta)?));
        }
    }
    let points: Vec<_> = jobs
        .iter()
        .map(|&(eta, _, g)| (g, a.jtilde, a.dtilde, eta))
        .collect();
    let n = a.n as usize;

    struct Row {
        eta: f64,
        g: f64,
        v: f64,
        raw: f64,
        bare: f64,
        scaled: f64,
        n_max: usize,
    }
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (&(eta, v, g), r) in jobs.iter().zip(solve_many(&points, &opts)) {
        match r {
            Ok(p) => {
                let raw = p.x_minus_moments[n - 1];
                let sp = collapse_transform(&RawMoment {
                    eta,
                    g_tilde: g,
                    j_tilde: a.jtilde,
                    d_tilde: a.dtilde,
                    n: a.n,
                    value: raw,
                })?;
                rows.push(Row {
                    eta,
                    g,
                    v: sp.v,
                    raw,
                    bare: raw * (2.0 * eta).powi(a.n as i32),
                    scaled: sp.scaled_value,
                    n_max: p.n_max,
                });
            }
            Err(e) => failures.push(format!("eta = {eta}, v = {v}, g~ = {g}: {e}")),
        }
    }

    // Exponent fits use the v = 0 column, i.e. the critical coupling itself.
    let at_critical: Vec<&Row> = rows.iter().filter(|r| r.v.abs() < 1e-12).collect();
    let fit = |f: fn(&Row) -> f64| {
        if at_critical.len() >= 3 {
            let pts: Vec<(f64, f64)> = at_critical.iter().map(|r| (r.eta, f(r))).collect();
            loglog_fit(&pts).ok()
        } else {
            None
        }
    };
    let slope_scaled = fit(|r| r.raw);
    let slope_bare = fit(|r| r.bare);
    let curves: Vec<Vec<(f64, f64)>> = a
        .eta
        .iter()
        .map(|&eta| {
            rows.iter()
                .filter(|r| r.eta == eta)
                .map(|r| (r.v, r.scaled))
                .collect()
        })
        .filter(|c: &Vec<(f64, f64)>| c.len() >= 2)
        .collect();
    let spread = if curves.len() >= 2 {
        let grid: Vec<f64> = Axis {
            start: a.v_range.start,
            stop: a.v_range.stop,
            count: 41,
            log: false,
        }
        .values();
        collapse_spread(&curves, &grid).ok()
    } else {
        None
    };
    let summary = json!({
        "n": a.n,
        "j_tilde": a.jtilde,
        "d_tilde": a.dtilde,
        "qubits_per_cavity": a.ed.dicke_n,
        "model": match a.ed.model { ModelArg::Full => "full", ModelArg::Effective => "effective" },
        "slope_scaled": slope_scaled.map(|f| f.slope),
        "slope_bare": slope_bare.map(|f| f.slope),
        "collapse_spread": spread.map(|s| s.max_spread),
        "collapse_worst_v": spread.map(|s| s.at_v),
        "failed_points": failures.len(),
    });

    let text = match a.common.format.unwrap_or(Format::Csv) {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "eta": r.eta, "g_tilde": r.g, "v": r.v, "raw": r.raw,
                        "raw_bare": r.bare, "scaled": r.scaled, "n_max": r.n_max,
                    })
                })
                .collect();
            to_json(&json!({ "rows": rows, "summary": summary }))?
        }
        _ => {
            let mut c = Csv::new(&["eta", "g_tilde", "v", "raw", "raw_bare", "scaled", "n_max"]);
            for r in &rows {
                c.row([
                    num(r.eta),
                    num(r.g),
                    num(r.v),
                    num(r.raw),
                    num(r.bare),
                    num(r.scaled),
                    r.n_max.to_string(),
                ]);
            }
            c.comment(&serde_json::to_string(&summary)?);
            c.into_string()
        }
    };
    emit(&text, a.common.out.as_deref())?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::PointsFailed(failures))
    }
}

pub fn chain_modes_cmd(a: &ChainModesArgs) -> Result<(), CliError> {
    let m = chain_modes(a.gtilde, a.jtilde, a.dtilde, a.sites, a.boundary.into())?;
    let text = match a.common.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&serde_json::to_value(&m)?)?,
        Format::Csv => {
            let mut c = Csv::new(&["k", "cos_k", "lambda"]);
            for (k, l) in m.quasimomenta.iter().zip(&m.lambdas) {
                c.row([num(*k), num(k.cos()), num(*l)]);
            }
            c.into_string()
        }
        Format::Text => {
            let mut s = format!(
                "sites {} boundary {} j_eff {} min_lambda {}\n",
                m.sites,
                match m.boundary {
                    qrd_core::Boundary::Open => "open",
                    qrd_core::Boundary::Periodic => "periodic",
                },
                num(m.j_eff),
                num(m.min_lambda)
            );
            for (k, l) in m.quasimomenta.iter().zip(&m.lambdas) {
                s += &format!("k {} cos_k {} lambda {}\n", num(*k), num(k.cos()), num(*l));
            }
            s
        }
    };
    emit(&text, a.common.out.as_deref())
}

fn ed_params(a: &EdArgs) -> Result<ModelParams, CliError> {
    let dimensionless =
        a.gtilde.is_some() || a.jtilde.is_some() || a.dtilde.is_some() || a.eta.is_some();
    let bare = a.omega_r.is_some()
        || a.omega_q.is_some()
        || a.g.is_some()
        || a.d.is_some()
        || a.j.is_some();
    if dimensionless && bare {
        return Err(CliError::Usage(
            "give either bare (--omega-r --omega-q --g --d --j) or dimensionless (--gtilde --jtilde --dtilde --eta) parameters".into(),
        ));
    }
    let p = if dimensionless {
        let eta = a.eta.ok_or_else(|| {
            CliError::Usage("--eta is required with dimensionless parameters".into())
        })?;
        qrd_core::Dimensionless {
            g_tilde: a.gtilde.unwrap_or(0.0),
            j_tilde: a.jtilde.unwrap_or(0.0),
            d_tilde: a.dtilde,
            eta,
        }
        .to_bare(1.0)?
    } else {
        ModelParams::new(
            a.omega_r.unwrap_or(1.0),
            a.omega_q.unwrap_or(1.0),
            a.g.unwrap_or(0.0),
            a.d.unwrap_or(0.0),
            a.j.unwrap_or(0.0),
        )?
    };
    Ok(p)
}

pub fn ed(a: &EdArgs) -> Result<(), CliError> {
    let params = ed_params(a)?;
    let shape = SystemShape::new(a.sites, a.dicke_n, a.boundary.into())?;
    let spec = match a.model {
        EdModelArg::Full if a.dicke_n > 1 && a.sites != 2 => {
            return Err(CliError::Usage(
                "Dicke cavities are only available for the dimer".into(),
            ))
        }
        EdModelArg::Full => HamiltonianSpec::full(params, shape),
        EdModelArg::Effective if a.dicke_n > 1 => {
            return Err(CliError::Usage(
                "the effective model needs one qubit per cavity".into(),
            ))
        }
        EdModelArg::Effective => HamiltonianSpec::effective(params, shape),
        EdModelArg::Quadratic if a.sites != 2 || a.dicke_n != 1 => {
            return Err(CliError::Usage(
                "the quadratic model is a two-cavity model".into(),
            ))
        }
        EdModelArg::Quadratic => HamiltonianSpec::quadratic(params),
    };
    if !(a.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    if !spec.is_stable() && !a.allow_unstable {
        return Err(qrd_core::Error::Unstable(format!(
            "{params:?} has unbounded bosonic modes; pass --allow-unstable to probe the divergence"
        ))
        .into());
    }

    let unit = spec.energy_unit();
    let (state, n_max, residual, history, partner) = match a.nmax {
        Cutoff::Fixed(n) => {
            let trunc = FockTruncation::new(n)?;
            let resid = 1e-2 * a.tol * params.omega_r / unit;
            let (s, r, p) = ground_state_at(&spec, trunc, resid, 100.0 * a.tol)?;
            let e = s.energy;
            (s, n, r, vec![(n, e)], p)
        }
        Cutoff::Auto => {
            if a.max_nmax < 24 {
                return Err(CliError::Usage("--max-nmax must be at least 24".into()));
            }
            let c = converged_ground_state(
                &spec,
                &ConvergenceOptions {
                    tol: a.tol,
                    schedule: default_schedule(a.max_nmax),
                    allow_unstable: a.allow_unstable,
                    residual_tol: None,
                    track_order_parameter: true,
                },
            )?;
            (c.state, c.n_max, c.residual, c.history, c.partner)
        }
    };
    let eigenvalues = match a.k {
        Some(k) => {
            let op = spec.build(FockTruncation::new(n_max)?)?;
            let s = lowest_eigenpairs(&op, k, 1e-10)?;
            Some(s.eigenvalues.iter().map(|e| e * unit).collect::<Vec<_>>())
        }
        None => None,
    };
    let dimer = a.sites == 2;
    let photons = (0..a.sites)
        .map(|i| photon_number(&state, i))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = json!({
        "model": spec.kind,
        "params": params,
        "dimensionless": params.dimensionless(),
        "shape": spec.shape,
        "n_max": n_max,
        "energy": state.energy * unit,
        "parity": state.parity,
        "x_minus_sq": if dimer { Some(quadrature_moment(&state, Mode::Minus, 2)?) } else { None },
        "x_plus_sq": if dimer { Some(quadrature_moment(&state, Mode::Plus, 2)?) } else { None },
        "photons": photons,
        "residual": residual,
        "history": history.iter().map(|(n, e)| json!([n, e * unit])).collect::<Vec<_>>(),
        "partner": partner.map(|p| json!({ "energy": p.energy * unit, "parity": p.parity })),
        "eigenvalues": eigenvalues,
    });
    emit(&to_json(&summary)?, a.common.out.as_deref())
}
