//! Command handlers.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use pottsmf_core::error::Error as CoreError;
use pottsmf_core::exact::{empirical_law, log_partition, PottsModel};
use pottsmf_core::graphon::{
    cut_distance_blocks, cut_norm_exact, f_sup, read_graphon, StepGraphon,
};
use pottsmf_core::limits::{bipartite_limit, cw_limit, cw_magnetization, ldp_minimizers};
use pottsmf_core::matrix::{
    generate, l1_condition, read_matrix, spectral_diagnostics, write_matrix, CouplingMatrix,
    EnsembleSpec,
};
use pottsmf_core::meanfield::{mf_gap, mf_solve, SolveSchedule};

use crate::args::{
    Cli, Command, FieldArgs, GraphonCommand, GraphonSourceArgs, LimitCommand, ModelArgs, SourceArgs,
};
use crate::report::{csv_table, RunReport};

pub enum CliError {
    Argument(String),
    Core(CoreError),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn message(&self) -> String {
        match self {
            CliError::Argument(msg) => msg.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }

    /// 2 = argument error, 3 = cap exceeded, 4 = I/O or parse error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Argument(_) => 2,
            CliError::Core(e) => match e {
                CoreError::CapExceeded { .. } => 3,
                CoreError::Io(_)
                | CoreError::Parse { .. }
                | CoreError::AsymmetricInput { .. }
                | CoreError::DuplicateEntry { .. } => 4,
                CoreError::InvalidParameter(_) | CoreError::NonzeroDiagonal { .. } => 2,
                CoreError::EigenNoConvergence { .. } => 1,
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> CliResult<RunReport> {
    match &cli.command {
        Command::Gen { source, out } => cmd_gen(cli, source, out),
        Command::Diagnose {
            source,
            eps,
            delta,
            mf_threshold,
            l1_cap,
        } => cmd_diagnose(cli, source, *eps, *delta, *mf_threshold, *l1_cap),
        Command::Exact { source, model } => cmd_exact(cli, source, model),
        Command::Mf { source, model } => cmd_mf(cli, source, model),
        Command::Compare { source, model } => cmd_compare(cli, source, model),
        Command::Limit { which } => cmd_limit(cli, which),
        Command::Concentration {
            source,
            model,
            window,
        } => cmd_concentration(cli, source, model, *window),
        Command::Graphon { which } => cmd_graphon(cli, which),
    }
}

// ---------------------------------------------------------------------------
// argument resolution

fn parse_n_list(text: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Argument(format!("bad vertex count `{tok}`")))
        })
        .collect()
}

fn parse_f64_list(text: &str, what: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Argument(format!("bad {what} entry `{tok}`")))
        })
        .collect()
}

fn require<T: Copy>(value: Option<T>, flag: &str, ensemble: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Argument(format!("--{flag} is required for {ensemble}")))
}

fn reject_n(n: Option<usize>, msg: &str) -> CliResult<()> {
    if n.is_some() {
        return Err(CliError::Argument(msg.into()));
    }
    Ok(())
}

/// True when the ensemble is parametrized by a vertex count that `compare`
/// may sweep.
fn sweepable(name: &str) -> bool {
    matches!(
        name,
        "complete" | "regular-circulant" | "erdos-renyi" | "star" | "sk" | "hopfield"
    )
}

fn ensemble_spec(
    name: &str,
    n: Option<usize>,
    source: &SourceArgs,
    seed: u64,
) -> CliResult<EnsembleSpec> {
    match name {
        "complete" => Ok(EnsembleSpec::Complete {
            n: require(n, "n", name)?,
        }),
        "regular-circulant" => Ok(EnsembleSpec::RegularCirculant {
            n: require(n, "n", name)?,
            d: require(source.d, "d", name)?,
        }),
        "hypercube" => {
            reject_n(n, "hypercube is sized by --d, not --n")?;
            Ok(EnsembleSpec::Hypercube {
                d: require(source.d, "d", name)?,
            })
        }
        "erdos-renyi" => Ok(EnsembleSpec::ErdosRenyi {
            n: require(n, "n", name)?,
            p: require(source.p, "p", name)?,
            seed,
        }),
        "complete-bipartite" => {
            reject_n(n, "complete-bipartite is sized by --a and --b, not --n")?;
            Ok(EnsembleSpec::CompleteBipartite {
                a: require(source.a, "a", name)?,
                b: require(source.b, "b", name)?,
            })
        }
        "bipartite-circulant" => {
            reject_n(n, "bipartite-circulant is sized by --a, --b, --c, not --n")?;
            Ok(EnsembleSpec::BipartiteCirculant {
                a: require(source.a, "a", name)?,
                b: require(source.b, "b", name)?,
                c: require(source.c, "c", name)?,
            })
        }
        "star" => Ok(EnsembleSpec::Star {
            n: require(n, "n", name)?,
            scaled: !source.raw,
        }),
        "sk" => Ok(EnsembleSpec::Sk {
            n: require(n, "n", name)?,
            seed,
        }),
        "hopfield" => Ok(EnsembleSpec::Hopfield {
            n: require(n, "n", name)?,
            m: require(source.m, "m", name)?,
            seed,
        }),
        other => Err(CliError::Argument(format!("unknown ensemble `{other}`"))),
    }
}

/// Single coupling matrix plus its JSON echo.
fn resolve_matrix(cli: &Cli, source: &SourceArgs) -> CliResult<(CouplingMatrix, Value)> {
    if let Some(path) = &source.matrix {
        let a = read_matrix(path)?;
        let echo = json!({ "matrix": path.display().to_string() });
        return Ok((a, echo));
    }
    let name = source
        .ensemble
        .as_deref()
        .ok_or_else(|| CliError::Argument("one of --ensemble or --matrix is required".into()))?;
    let n = match &source.n {
        Some(text) => {
            let list = parse_n_list(text)?;
            if list.len() != 1 {
                return Err(CliError::Argument(
                    "this command takes a single --n; sweeps belong to `compare`".into(),
                ));
            }
            Some(list[0])
        }
        None => None,
    };
    let spec = ensemble_spec(name, n, source, cli.seed)?;
    let a = generate(&spec)?;
    let echo = source_echo(name, &a, source, cli.seed);
    Ok((a, echo))
}

fn source_echo(name: &str, a: &CouplingMatrix, source: &SourceArgs, seed: u64) -> Value {
    let mut echo = serde_json::Map::new();
    echo.insert("ensemble".into(), json!(name));
    echo.insert("n".into(), json!(a.n()));
    if let Some(d) = source.d {
        echo.insert("d".into(), json!(d));
    }
    if let Some(p) = source.p {
        echo.insert("p".into(), json!(p));
    }
    if let Some(v) = source.a {
        echo.insert("a".into(), json!(v));
    }
    if let Some(v) = source.b {
        echo.insert("b".into(), json!(v));
    }
    if let Some(v) = source.c {
        echo.insert("c".into(), json!(v));
    }
    if let Some(v) = source.m {
        echo.insert("m".into(), json!(v));
    }
    if source.raw {
        echo.insert("raw".into(), json!(true));
    }
    if matches!(name, "erdos-renyi" | "sk" | "hopfield") {
        echo.insert("seed".into(), json!(seed));
    }
    Value::Object(echo)
}

fn resolve_field(field: &FieldArgs, q: usize) -> CliResult<Vec<f64>> {
    if let Some(b) = field.b_field {
        let mut h = vec![0.0; q];
        h[0] = b;
        return Ok(h);
    }
    if let Some(text) = &field.h {
        let h = parse_f64_list(text, "field")?;
        if h.len() != q {
            return Err(CliError::Argument(format!(
                "--h has {} entries, expected {q}",
                h.len()
            )));
        }
        return Ok(h);
    }
    Ok(vec![0.0; q])
}

/// (J flat, h, echo fields).
fn resolve_couplings(model: &ModelArgs) -> CliResult<(Vec<f64>, Vec<f64>, Value)> {
    let q = model.q;
    if q < 2 {
        return Err(CliError::Argument(format!("--q must be >= 2, got {q}")));
    }
    let mut echo = serde_json::Map::new();
    echo.insert("q".into(), json!(q));
    let j = if let Some(path) = &model.j_file {
        let m = read_matrix(path)?;
        if m.n() != q {
            return Err(CliError::Argument(format!(
                "--J file is {0}x{0}, expected {q}x{q}",
                m.n()
            )));
        }
        echo.insert("J".into(), json!(path.display().to_string()));
        let mut flat = vec![0.0; q * q];
        for r in 0..q {
            for s in 0..q {
                flat[r * q + s] = m.get(r, s);
            }
        }
        flat
    } else {
        let beta = model
            .beta
            .ok_or_else(|| CliError::Argument("one of --beta or --J is required".into()))?;
        echo.insert("beta".into(), json!(beta));
        let mut flat = vec![0.0; q * q];
        for r in 0..q {
            flat[r * q + r] = beta;
        }
        flat
    };
    let h = resolve_field(&model.field, q)?;
    echo.insert("h".into(), json!(h));
    Ok((j, h, Value::Object(echo)))
}

/// Build the Potts model, zeroing any diagonal mass first (reported).
fn build_model(
    a: CouplingMatrix,
    j: Vec<f64>,
    h: Vec<f64>,
    q: usize,
) -> CliResult<(PottsModel, f64)> {
    let (clean, dropped) = a.without_diagonal();
    if dropped > 0.0 {
        eprintln!("warning: zeroed diagonal mass {dropped} before the variational solve");
    }
    let model = PottsModel::new(clean, q, j, h)?;
    Ok((model, dropped))
}

fn schedule(cli: &Cli, q: usize) -> SolveSchedule {
    SolveSchedule {
        max_sweeps: cli.max_sweeps,
        tol: cli.tol,
        restarts: cli.restarts.unwrap_or(q + 3),
        damping: cli.damping,
        seed: cli.seed,
    }
}

fn schedule_echo(s: &SolveSchedule) -> Value {
    json!({
        "max_sweeps": s.max_sweeps,
        "tol": s.tol,
        "restarts": s.restarts,
        "damping": s.damping,
        "seed": s.seed,
    })
}

fn merge(base: Value, extra: Value) -> Value {
    let mut map = match base {
        Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("source".into(), other);
            m
        }
    };
    if let Value::Object(extra) = extra {
        for (k, v) in extra {
            map.insert(k, v);
        }
    }
    Value::Object(map)
}

fn write_csv(cli: &Cli, text: Option<String>) -> CliResult<()> {
    match (&cli.csv, text) {
        (Some(path), Some(text)) => {
            fs::write(path, text).map_err(|e| CliError::Core(CoreError::Io(e)))?;
            Ok(())
        }
        (Some(_), None) => Err(CliError::Argument(
            "--csv is not supported for this command".into(),
        )),
        _ => Ok(()),
    }
}

fn fmt(v: f64) -> String {
    v.to_string()
}

// ---------------------------------------------------------------------------
// commands

fn cmd_gen(cli: &Cli, source: &SourceArgs, out: &Path) -> CliResult<RunReport> {
    let (a, echo) = resolve_matrix(cli, source)?;
    write_matrix(out, &a)?;
    write_csv(cli, None)?;
    let results = json!({
        "n": a.n(),
        "scaling": a.scaling(),
        "out": out.display().to_string(),
    });
    Ok(RunReport::new("gen", echo, results))
}

fn cmd_diagnose(
    cli: &Cli,
    source: &SourceArgs,
    eps: f64,
    delta: f64,
    mf_threshold: f64,
    l1_cap: usize,
) -> CliResult<RunReport> {
    let (a, echo) = resolve_matrix(cli, source)?;
    let diag = spectral_diagnostics(&a, eps, delta)?;
    let l1 = l1_condition(&a, l1_cap);
    let meets = diag.trace_sq_over_n <= mf_threshold;
    let inputs = merge(
        echo,
        json!({ "eps": eps, "delta": delta, "mf_threshold": mf_threshold, "l1_cap": l1_cap }),
    );
    let results = json!({
        "n": a.n(),
        "scaling": a.scaling(),
        "trace_sq_over_n": diag.trace_sq_over_n,
        "lambda_max_abs": diag.lambda_max_abs,
        "n_big": diag.n_big,
        "level_set_sizes": diag.level_set_sizes,
        "net_log_size_bound": diag.net_log_size_bound,
        "eigenvalues": diag.eigenvalues,
        "row_sum_mean": diag.row_sum_mean,
        "row_sum_deviation_fraction": diag.row_sum_deviation_fraction,
        "l1_bound": l1.bound,
        "l1_exact": l1.exact,
        // a finite-n reading of the trace condition, not the asymptotic one
        "meets_mean_field_heuristic": meets,
    });
    write_csv(cli, None)?;
    Ok(RunReport::new("diagnose", inputs, results))
}

fn cmd_exact(cli: &Cli, source: &SourceArgs, model_args: &ModelArgs) -> CliResult<RunReport> {
    let (a, source_echo) = resolve_matrix(cli, source)?;
    let (j, h, model_echo) = resolve_couplings(model_args)?;
    let (model, dropped) = build_model(a, j, h, model_args.q)?;
    let phi = log_partition(&model, cli.cap)?;
    let inputs = merge(source_echo, merge(model_echo, json!({ "cap": cli.cap })));
    let results = json!({
        "n": model.n(),
        "q": model.q(),
        "phi": phi,
        "phi_per_site": phi / model.n() as f64,
        "dropped_diagonal_mass": dropped,
    });
    write_csv(cli, None)?;
    Ok(RunReport::new("exact", inputs, results))
}

fn cmd_mf(cli: &Cli, source: &SourceArgs, model_args: &ModelArgs) -> CliResult<RunReport> {
    let (a, source_echo) = resolve_matrix(cli, source)?;
    let (j, h, model_echo) = resolve_couplings(model_args)?;
    let (model, dropped) = build_model(a, j, h, model_args.q)?;
    let sched = schedule(cli, model.q());
    let result = mf_solve(&model, &sched)?;
    let inputs = merge(
        source_echo,
        merge(model_echo, json!({ "schedule": schedule_echo(&sched) })),
    );
    let results = json!({
        "n": model.n(),
        "q": model.q(),
        "value": result.value,
        "value_per_site": result.value / model.n() as f64,
        "converged": result.converged,
        "sweeps_used": result.sweeps_used,
        "restarts_tried": result.restarts_tried,
        "distinct_optima": result.distinct_optima,
        "dropped_diagonal_mass": dropped,
        "theta_star": result.theta_star.rows(),
    });
    write_csv(cli, None)?;
    Ok(RunReport::new("mf", inputs, results))
}

fn cmd_compare(cli: &Cli, source: &SourceArgs, model_args: &ModelArgs) -> CliResult<RunReport> {
    let (j, h, model_echo) = resolve_couplings(model_args)?;
    let q = model_args.q;
    let sched = schedule(cli, q);

    // one coupling matrix per requested size
    let mut inputs_echo;
    let mut matrices: Vec<CouplingMatrix> = Vec::new();
    if let Some(path) = &source.matrix {
        matrices.push(read_matrix(path)?);
        inputs_echo = json!({ "matrix": path.display().to_string() });
    } else {
        let name = source.ensemble.as_deref().ok_or_else(|| {
            CliError::Argument("one of --ensemble or --matrix is required".into())
        })?;
        if sweepable(name) {
            let text = source.n.as_deref().ok_or_else(|| {
                CliError::Argument(format!(
                    "--n (single value or sweep list) is required for {name}"
                ))
            })?;
            let sizes = parse_n_list(text)?;
            for &n in &sizes {
                matrices.push(generate(&ensemble_spec(name, Some(n), source, cli.seed)?)?);
            }
            inputs_echo = json!({ "ensemble": name, "n": sizes });
        } else {
            if source.n.is_some() {
                return Err(CliError::Argument(format!(
                    "{name} has a fixed size; drop --n"
                )));
            }
            matrices.push(generate(&ensemble_spec(name, None, source, cli.seed)?)?);
            inputs_echo = json!({ "ensemble": name });
        }
        if let Value::Object(map) = &mut inputs_echo {
            if matches!(name, "erdos-renyi" | "sk" | "hopfield") {
                map.insert("seed".into(), json!(cli.seed));
            }
            for (key, value) in [
                ("d", source.d),
                ("a", source.a),
                ("b", source.b),
                ("c", source.c),
                ("m", source.m),
            ] {
                if let Some(v) = value {
                    map.insert(key.into(), json!(v));
                }
            }
        }
    }

    let mut rows_json: Vec<Value> = Vec::new();
    let mut rows_csv: Vec<Vec<String>> = Vec::new();
    for a in matrices {
        let n = a.n();
        let (model, _dropped) = build_model(a, j.clone(), h.clone(), q)?;
        match mf_gap(&model, &sched, cli.cap) {
            Ok(gap) => {
                rows_json.push(json!({
                    "n": n,
                    "phi_per_site": gap.phi / n as f64,
                    "supm_per_site": gap.sup_m / n as f64,
                    "gap_per_site": gap.gap_per_site,
                }));
                rows_csv.push(vec![
                    n.to_string(),
                    fmt(gap.phi / n as f64),
                    fmt(gap.sup_m / n as f64),
                    fmt(gap.gap_per_site),
                ]);
            }
            Err(CoreError::CapExceeded { needed, cap }) => {
                rows_json.push(json!({
                    "n": n,
                    "skipped": format!("enumeration size {needed} exceeds cap {cap}"),
                }));
                rows_csv.push(vec![
                    n.to_string(),
                    "skipped".into(),
                    "skipped".into(),
                    "skipped".into(),
                ]);
            }
            Err(other) => return Err(other.into()),
        }
    }

    let inputs = merge(
        inputs_echo,
        merge(
            model_echo,
            json!({ "cap": cli.cap, "schedule": schedule_echo(&sched) }),
        ),
    );
    let results = json!({ "rows": rows_json });
    write_csv(
        cli,
        Some(csv_table(
            &["n", "phi_per_site", "supm_per_site", "gap_per_site"],
            &rows_csv,
        )),
    )?;
    Ok(RunReport::new("compare", inputs, results))
}

fn parse_sweep(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Argument(format!(
            "sweep must be START:STOP:POINTS, got `{text}`"
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Argument(format!("bad sweep start `{}`", parts[0])))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Argument(format!("bad sweep stop `{}`", parts[1])))?;
    let points: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Argument(format!("bad sweep point count `{}`", parts[2])))?;
    if points < 2 {
        return Err(CliError::Argument("sweep needs at least 2 points".into()));
    }
    Ok((0..points)
        .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
        .collect())
}

fn minimizer_json(set: &pottsmf_core::limits::MinimizerSet) -> Value {
    let points: Vec<Vec<f64>> = set.points.iter().map(|p| p.probs().to_vec()).collect();
    let mut obj = serde_json::Map::new();
    obj.insert("points".into(), json!(points));
    obj.insert("rate_min".into(), json!(set.rate_min));
    if set.points.iter().all(|p| p.q() == 2) {
        let mags: Vec<f64> = set
            .points
            .iter()
            .map(|p| p.magnetization().expect("two colors"))
            .collect();
        obj.insert("magnetizations".into(), json!(mags));
    }
    Value::Object(obj)
}

fn cmd_limit(cli: &Cli, which: &LimitCommand) -> CliResult<RunReport> {
    match which {
        LimitCommand::Cw {
            q,
            beta,
            field,
            beta_sweep,
        } => {
            let h = resolve_field(field, *q)?;
            let limit = cw_limit(*q, *beta, &h)?;
            let mut results = json!({
                "q": q,
                "beta": beta,
                "h": h,
                "value": limit.value,
                "argmax": minimizer_json(&limit.argmax),
            });
            let mut csv = None;
            if let Some(grid) = beta_sweep {
                let betas = parse_sweep(grid)?;
                let mut rows_json = Vec::new();
                let mut rows_csv = Vec::new();
                for &b in &betas {
                    let point = cw_limit(*q, b, &h)?;
                    rows_json.push(json!({ "beta": b, "value": point.value }));
                    rows_csv.push(vec![fmt(b), fmt(point.value)]);
                }
                results["sweep"] = json!(rows_json);
                csv = Some(csv_table(&["beta", "value"], &rows_csv));
            }
            write_csv(cli, csv)?;
            let inputs = json!({ "q": q, "beta": beta, "h": h, "beta_sweep": beta_sweep });
            Ok(RunReport::new("limit cw", inputs, results))
        }
        LimitCommand::Bipartite {
            beta,
            p,
            beta_sweep,
        } => {
            let value = bipartite_limit(*beta, *p)?;
            let sigma = pottsmf_core::limits::bipartite_sigma(*beta, *p)?;
            let sigma_flipped = pottsmf_core::limits::bipartite_sigma(*beta, 1.0 - *p)?;
            let mut results = json!({
                "beta": beta,
                "p": p,
                "value": value,
                "sigma_p": sigma,
                "sigma_1mp": sigma_flipped,
                "supercritical": beta * beta * p * (1.0 - p) > 1.0,
            });
            let mut csv = None;
            if let Some(grid) = beta_sweep {
                let betas = parse_sweep(grid)?;
                let mut rows_json = Vec::new();
                let mut rows_csv = Vec::new();
                for &b in &betas {
                    let v = bipartite_limit(b, *p)?;
                    rows_json.push(json!({ "beta": b, "value": v }));
                    rows_csv.push(vec![fmt(b), fmt(v)]);
                }
                results["sweep"] = json!(rows_json);
                csv = Some(csv_table(&["beta", "value"], &rows_csv));
            }
            write_csv(cli, csv)?;
            let inputs = json!({ "beta": beta, "p": p, "beta_sweep": beta_sweep });
            Ok(RunReport::new("limit bipartite", inputs, results))
        }
        LimitCommand::Ldp {
            q,
            beta,
            field,
            beta_sweep,
        } => {
            let h = resolve_field(field, *q)?;
            let set = ldp_minimizers(*q, *beta, &h)?;
            let mut results = json!({
                "q": q,
                "beta": beta,
                "h": h,
                "minimizers": minimizer_json(&set),
            });
            let mut csv = None;
            if let Some(grid) = beta_sweep {
                let betas = parse_sweep(grid)?;
                let mut rows_json = Vec::new();
                let mut rows_csv = Vec::new();
                for &b in &betas {
                    let point = ldp_minimizers(*q, b, &h)?;
                    rows_json.push(json!({
                        "beta": b,
                        "rate_min": point.rate_min,
                        "minimizer_count": point.points.len(),
                    }));
                    rows_csv.push(vec![
                        fmt(b),
                        fmt(point.rate_min),
                        point.points.len().to_string(),
                    ]);
                }
                results["sweep"] = json!(rows_json);
                csv = Some(csv_table(
                    &["beta", "rate_min", "minimizer_count"],
                    &rows_csv,
                ));
            }
            write_csv(cli, csv)?;
            let inputs = json!({ "q": q, "beta": beta, "h": h, "beta_sweep": beta_sweep });
            Ok(RunReport::new("limit ldp", inputs, results))
        }
    }
}

fn cmd_concentration(
    cli: &Cli,
    source: &SourceArgs,
    model_args: &ModelArgs,
    window: f64,
) -> CliResult<RunReport> {
    if model_args.q != 2 {
        return Err(CliError::Argument(
            "concentration works on the two-color model (--q 2)".into(),
        ));
    }
    if model_args.j_file.is_some() {
        return Err(CliError::Argument(
            "concentration takes --beta, not a --J file".into(),
        ));
    }
    let beta = model_args
        .beta
        .ok_or_else(|| CliError::Argument("--beta is required".into()))?;
    if beta < 0.0 {
        return Err(CliError::Argument(
            "the concentration predictions need beta >= 0".into(),
        ));
    }
    let h = resolve_field(&model_args.field, 2)?;
    let b = h[0] - h[1];

    let (a, source_echo) = resolve_matrix(cli, source)?;
    let (model, dropped) = build_model(a, vec![beta, 0.0, 0.0, beta], h.clone(), 2)?;
    let law = empirical_law(&model, cli.cap)?;
    let m_law = law.magnetization_law()?;

    let predicted: Vec<f64> = if b == 0.0 {
        if beta <= 2.0 {
            vec![0.0]
        } else {
            let m = cw_magnetization(beta / 2.0, 0.0)?;
            vec![-m, m]
        }
    } else {
        vec![cw_magnetization(beta / 2.0, b / 2.0)?]
    };

    let mass_within: f64 = m_law
        .iter()
        .filter(|(m, _)| predicted.iter().any(|loc| (m - loc).abs() <= window))
        .map(|(_, p)| p)
        .sum();

    let law_json: Vec<Value> = m_law
        .iter()
        .map(|(m, p)| json!({ "m": m, "probability": p }))
        .collect();
    let rows_csv: Vec<Vec<String>> = m_law.iter().map(|(m, p)| vec![fmt(*m), fmt(*p)]).collect();

    let inputs = merge(
        source_echo,
        json!({ "q": 2, "beta": beta, "h": h, "window": window, "cap": cli.cap }),
    );
    let results = json!({
        "n": model.n(),
        "beta": beta,
        "B": b,
        "window": window,
        "predicted_locations": predicted,
        "mass_within_window": mass_within,
        "dropped_diagonal_mass": dropped,
        "magnetization_law": law_json,
    });
    write_csv(cli, Some(csv_table(&["m", "probability"], &rows_csv)))?;
    Ok(RunReport::new("concentration", inputs, results))
}

fn resolve_graphon(cli: &Cli, source: &GraphonSourceArgs) -> CliResult<(StepGraphon, Value)> {
    if let Some(path) = &source.graphon {
        let w = read_graphon(path)?;
        return Ok((w, json!({ "graphon": path.display().to_string() })));
    }
    if let Some(path) = &source.matrix {
        let a = read_matrix(path)?;
        let w = StepGraphon::from_matrix(&a, source.times_n);
        return Ok((
            w,
            json!({ "matrix": path.display().to_string(), "times_n": source.times_n }),
        ));
    }
    let _ = cli;
    Err(CliError::Argument(
        "one of --graphon or --matrix is required".into(),
    ))
}

fn cmd_graphon(cli: &Cli, which: &GraphonCommand) -> CliResult<RunReport> {
    match which {
        GraphonCommand::Cutnorm { source } => {
            let (w, echo) = resolve_graphon(cli, source)?;
            let norms = cut_norm_exact(&w)?;
            write_csv(cli, None)?;
            let results = json!({
                "k": w.k(),
                "cut": norms.cut,
                "inf_to_1": norms.inf_to_1,
            });
            Ok(RunReport::new("graphon cutnorm", echo, results))
        }
        GraphonCommand::Fsup { source, model } => {
            let (w, echo) = resolve_graphon(cli, source)?;
            let (j, h, model_echo) = resolve_couplings(model)?;
            let sched = schedule(cli, model.q);
            let result = f_sup(&w, model.q, &j, &h, &sched)?;
            write_csv(cli, None)?;
            let inputs = merge(
                echo,
                merge(model_echo, json!({ "schedule": schedule_echo(&sched) })),
            );
            let results = json!({
                "k": w.k(),
                "q": model.q,
                "value": result.value,
                "rho_star": result.rho_star.rows(),
            });
            Ok(RunReport::new("graphon fsup", inputs, results))
        }
        GraphonCommand::Dist { first, second } => {
            let w1 = read_graphon(first)?;
            let w2 = read_graphon(second)?;
            let distance = cut_distance_blocks(&w1, &w2)?;
            write_csv(cli, None)?;
            let inputs = json!({
                "first": first.display().to_string(),
                "second": second.display().to_string(),
            });
            // an upper bound: only block permutations are searched
            let results = json!({ "k": w1.k(), "distance_upper_bound": distance });
            Ok(RunReport::new("graphon dist", inputs, results))
        }
    }
}
