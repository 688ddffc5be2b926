//! Subcommand implementations and the exit-code contract.
//!
//! Exit codes: 0 on success, 1 for usage and parse problems, 2 for numerical
//! or domain failures.  A scan whose per-row failure rate exceeds 1% exits
//! with 2 even though the output file is still written in full.

use xitau::{
    delta_method_sim, ito_sim, scan_xi, tau, tau_n_table, ExprModel, InterpolationResult,
    RootError, RootOptions, ScanRow, ScanSeries, StochasticError, TaylorError,
};

use crate::args::{
    Cli, Command, CounterexampleArgs, DeltaArgs, ItoArgs, ModelArgs, ScanArgs, TaunArgs, Variant,
    XiArgs,
};
use crate::output::{emit, fmt_float, fmt_opt_float, Metadata, Report};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unparseable expressions, inconsistent dimensions.
    Usage(String),
    /// The mathematics failed: domain violations, unresolved roots.
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(msg) | CliError::Numerical(msg) | CliError::Io(msg) => msg,
        }
    }
}

fn map_root(e: RootError) -> CliError {
    match &e {
        RootError::InvalidOptions(_)
        | RootError::InvalidParameter(_)
        | RootError::Taylor(TaylorError::DimensionMismatch { .. }) => CliError::Usage(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    }
}

fn map_stochastic(e: StochasticError) -> CliError {
    match &e {
        StochasticError::InvalidParameter(_) => CliError::Usage(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    }
}

fn map_json(e: serde_json::Error) -> CliError {
    CliError::Io(format!("cannot serialize output: {e}"))
}

fn map_io(e: std::io::Error) -> CliError {
    CliError::Io(format!("cannot write output: {e}"))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Xi(args) => cmd_xi(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Taun(args) => cmd_taun(args),
        Command::Counterexample(args) => cmd_counterexample(args),
        Command::Delta(args) => cmd_delta(args),
        Command::Ito(args) => cmd_ito(args),
    }
}

fn build_model(args: &ModelArgs) -> Result<ExprModel, CliError> {
    if args.dim == 0 {
        return Err(CliError::Usage("--dim must be at least 1".into()));
    }
    let model = ExprModel::parse(&args.function, args.dim)
        .map_err(|e| CliError::Usage(format!("cannot parse --function: {e}")))?;
    if args.center.len() != args.dim {
        return Err(CliError::Usage(format!(
            "--center has {} values but --dim is {}",
            args.center.len(),
            args.dim
        )));
    }
    Ok(model)
}

fn expect_dim(values: &[f64], dim: usize, flag: &str) -> Result<(), CliError> {
    if values.len() != dim {
        return Err(CliError::Usage(format!(
            "{flag} has {} values but --dim is {dim}",
            values.len()
        )));
    }
    Ok(())
}

fn join_plain(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn model_metadata(meta: &mut Metadata, args: &ModelArgs) {
    meta.push("function", args.function.clone());
    meta.push("dim", args.dim.to_string());
    meta.push("center", join_plain(&args.center));
    meta.push("order", args.order.to_string());
}

fn options_metadata(meta: &mut Metadata, opts: &RootOptions) {
    meta.push("scan_points", opts.scan_points.to_string());
    meta.push("tol_t", format!("{:e}", opts.t_tolerance));
    meta.push("tol_zero", format!("{:e}", opts.zero_tolerance));
}

fn seed_metadata(meta: &mut Metadata, seed: Option<u64>) {
    if let Some(seed) = seed {
        meta.push("seed", seed.to_string());
    }
}

// ---------------------------------------------------------------- xi

fn result_csv_row(result: &InterpolationResult) -> String {
    let xi = result.xi.iter().map(|&v| fmt_float(v)).collect::<Vec<_>>().join(";");
    format!(
        "{},{},{},{},{}",
        fmt_float(result.tau),
        xi,
        fmt_float(result.residual),
        result.method,
        result.iterations
    )
}

fn cmd_xi(args: XiArgs) -> Result<(), CliError> {
    let model = build_model(&args.model)?;
    expect_dim(&args.point, args.model.dim, "--point")?;
    let opts = args.tolerances.root_options();
    let result =
        tau(&model, &args.model.center, args.model.order, &args.point, &opts).map_err(map_root)?;

    let mut meta = Metadata::new();
    model_metadata(&mut meta, &args.model);
    meta.push("point", join_plain(&args.point));
    options_metadata(&mut meta, &opts);
    seed_metadata(&mut meta, args.seed);

    let csv_rows = vec![result_csv_row(&result)];
    let rows = [result];
    let report = Report {
        metadata: &meta,
        csv_header: "tau,xi,residual,method,iterations",
        csv_rows,
        rows: &rows,
    };
    let text = report.render(args.output.format).map_err(map_json)?;
    emit(&args.output, &text).map_err(map_io)
}

// ---------------------------------------------------------------- scan

fn scan_row_csv(row: &ScanRow) -> String {
    let method = match row.method {
        Some(m) => m.to_string(),
        None => "error".to_string(),
    };
    format!(
        "{},{},{},{},{},{}",
        fmt_float(row.x),
        fmt_opt_float(row.tau),
        fmt_opt_float(row.xi),
        fmt_opt_float(row.residual),
        method,
        u8::from(row.jump)
    )
}

fn scan_metadata(meta: &mut Metadata, series: &ScanSeries) {
    meta.push("rows", series.rows.len().to_string());
    meta.push("succeeded_rows", series.success_count().to_string());
    meta.push("jump_count", series.jumps.len().to_string());
    for (i, jump) in series.jumps.iter().enumerate() {
        meta.push(&format!("jump_{i}_x_left"), fmt_float(jump.x_left));
        meta.push(&format!("jump_{i}_x_right"), fmt_float(jump.x_right));
        meta.push(&format!("jump_{i}_delta_xi"), fmt_float(jump.delta_xi));
    }
    if let Some(first) = series.rows.iter().find_map(|r| r.error.as_deref()) {
        meta.push("first_row_error", first);
    }
}

/// Exit 0 only when at least 99% of the scan rows resolved.
fn scan_success_gate(series: &ScanSeries) -> Result<(), CliError> {
    let total = series.rows.len();
    let ok = series.success_count();
    if ok * 100 >= total * 99 {
        Ok(())
    } else {
        Err(CliError::Numerical(format!(
            "only {ok} of {total} scan rows resolved; see the error column"
        )))
    }
}

const SCAN_CSV_HEADER: &str = "x,tau,xi,residual,method,jump";

fn cmd_scan(args: ScanArgs) -> Result<(), CliError> {
    if args.model.dim != 1 {
        return Err(CliError::Usage("scan requires --dim 1".into()));
    }
    let model = build_model(&args.model)?;
    if args.range.len() != 2 {
        return Err(CliError::Usage("--range takes exactly two values".into()));
    }
    let range = (args.range[0], args.range[1]);
    let opts = args.tolerances.root_options();
    let series = scan_xi(&model, args.model.center[0], args.model.order, range, args.steps, &opts)
        .map_err(map_root)?;

    let mut meta = Metadata::new();
    model_metadata(&mut meta, &args.model);
    meta.push("range_lo", range.0.to_string());
    meta.push("range_hi", range.1.to_string());
    meta.push("steps", args.steps.to_string());
    options_metadata(&mut meta, &opts);
    seed_metadata(&mut meta, args.seed);
    scan_metadata(&mut meta, &series);

    let csv_rows = series.rows.iter().map(scan_row_csv).collect();
    let report =
        Report { metadata: &meta, csv_header: SCAN_CSV_HEADER, csv_rows, rows: &series.rows };
    let text = report.render(args.output.format).map_err(map_json)?;
    emit(&args.output, &text).map_err(map_io)?;
    scan_success_gate(&series)
}

// ---------------------------------------------------------------- taun

fn cmd_taun(args: TaunArgs) -> Result<(), CliError> {
    let model = build_model(&args.model)?;
    expect_dim(&args.point, args.model.dim, "--point")?;
    let opts = args.tolerances.root_options();
    let series = tau_n_table(
        &model,
        &args.model.center,
        args.model.order,
        &args.point,
        &args.n,
        args.depth,
        &opts,
    )
    .map_err(map_root)?;

    let mut meta = Metadata::new();
    model_metadata(&mut meta, &args.model);
    meta.push("point", join_plain(&args.point));
    meta.push("depth", series.depth.to_string());
    meta.push("tau", fmt_float(series.tau));
    options_metadata(&mut meta, &opts);
    seed_metadata(&mut meta, args.seed);

    let mut csv_rows: Vec<String> =
        series.entries.iter().map(|e| format!("{},{}", e.n, fmt_float(e.tau_n))).collect();
    // Last line restates the full root-search value for side-by-side reading.
    csv_rows.push(format!("limit,{}", fmt_float(series.tau)));
    let report =
        Report { metadata: &meta, csv_header: "n,tau_n", csv_rows, rows: &series.entries };
    let text = report.render(args.output.format).map_err(map_json)?;
    emit(&args.output, &text).map_err(map_io)
}

// ---------------------------------------------------------------- counterexample

struct Preset {
    variant: &'static str,
    function: &'static str,
    center: f64,
    range: (f64, f64),
    /// Location of the tangency, where xi jumps.
    x0: f64,
    expected_xi_at_zero: f64,
    expected_xi_at_x0: f64,
}

fn preset_for(variant: Variant) -> Preset {
    let x0 = 0.25f64.cbrt();
    match variant {
        Variant::Standard => Preset {
            variant: "standard",
            function: "x^3*(x+1)",
            center: -1.0,
            range: (-0.99, 1.2),
            x0,
            expected_xi_at_zero: -0.75,
            expected_xi_at_x0: -0.5,
        },
        Variant::Reflected => Preset {
            variant: "reflected",
            function: "x^4-x^3",
            center: 1.0,
            range: (-1.2, 0.99),
            x0: -x0,
            expected_xi_at_zero: 0.75,
            expected_xi_at_x0: 0.5,
        },
    }
}

fn cmd_counterexample(args: CounterexampleArgs) -> Result<(), CliError> {
    let preset = preset_for(args.variant);
    let model = ExprModel::parse(preset.function, 1).expect("built-in preset expression parses");
    let range = match &args.range {
        Some(values) => {
            if values.len() != 2 {
                return Err(CliError::Usage("--range takes exactly two values".into()));
            }
            (values[0], values[1])
        }
        None => preset.range,
    };
    let steps = args.steps.unwrap_or(2000);
    let opts = args.tolerances.root_options();
    let center = [preset.center];
    let series = scan_xi(&model, preset.center, 0, range, steps, &opts).map_err(map_root)?;

    // The headline numbers come from direct queries, not from grid rows, so
    // they hold at full precision regardless of step count.
    let probe = |x: f64| -> f64 {
        tau(&model, &center, 0, &[x], &opts).map(|r| r.xi[0]).unwrap_or(f64::NAN)
    };
    let xi_at_zero = probe(0.0);
    let xi_at_x0 = probe(preset.x0);
    let xi_left_of_x0 = probe(preset.x0 - 1e-3);
    let xi_right_of_x0 = probe(preset.x0 + 1e-3);
    let xi_just_left_of_x0 = probe(preset.x0 - 1e-4);
    let xi_just_right_of_x0 = probe(preset.x0 + 1e-4);
    // The one-sided limit away from the tangent value measures the jump; the
    // discontinuous side depends on the variant.
    let jump_magnitude = match args.variant {
        Variant::Standard => (xi_right_of_x0 - xi_at_x0).abs(),
        Variant::Reflected => (xi_at_x0 - xi_left_of_x0).abs(),
    };
    let jump_location_estimate = series
        .jumps
        .iter()
        .max_by(|a, b| a.delta_xi.abs().total_cmp(&b.delta_xi.abs()))
        .map(|j| 0.5 * (j.x_left + j.x_right));

    let mut meta = Metadata::new();
    meta.push("variant", preset.variant);
    meta.push("function", preset.function);
    meta.push("dim", "1");
    meta.push("center", preset.center.to_string());
    meta.push("order", "0");
    meta.push("range_lo", range.0.to_string());
    meta.push("range_hi", range.1.to_string());
    meta.push("steps", steps.to_string());
    options_metadata(&mut meta, &opts);
    seed_metadata(&mut meta, args.seed);
    scan_metadata(&mut meta, &series);
    meta.push_float("summary_xi_at_zero", xi_at_zero);
    meta.push_float("summary_expected_xi_at_zero", preset.expected_xi_at_zero);
    meta.push_float("summary_xi_at_x0", xi_at_x0);
    meta.push_float("summary_expected_xi_at_x0", preset.expected_xi_at_x0);
    meta.push_float("summary_xi_left_of_x0", xi_left_of_x0);
    meta.push_float("summary_xi_right_of_x0", xi_right_of_x0);
    meta.push_float("summary_xi_just_left_of_x0", xi_just_left_of_x0);
    meta.push_float("summary_xi_just_right_of_x0", xi_just_right_of_x0);
    meta.push_float("summary_jump_magnitude", jump_magnitude);
    meta.push_float("summary_expected_jump_magnitude", 0.75);
    meta.push("summary_jump_location_estimate", fmt_opt_float(jump_location_estimate));
    meta.push_float("summary_expected_jump_location", preset.x0);

    let csv_rows = series.rows.iter().map(scan_row_csv).collect();
    let report =
        Report { metadata: &meta, csv_header: SCAN_CSV_HEADER, csv_rows, rows: &series.rows };
    let text = report.render(args.output.format).map_err(map_json)?;
    emit(&args.output, &text).map_err(map_io)?;
    scan_success_gate(&series)
}

// ---------------------------------------------------------------- delta

fn cmd_delta(args: DeltaArgs) -> Result<(), CliError> {
    if args.model.order != 0 {
        return Err(CliError::Usage(
            "the delta demo is first order by construction; omit --order or pass 0".into(),
        ));
    }
    let model = build_model(&args.model)?;
    let opts = args.tolerances.root_options();
    let report =
        delta_method_sim(&model, &args.model.center, &args.n, args.samples, args.seed, &opts)
            .map_err(map_stochastic)?;

    let mut meta = Metadata::new();
    model_metadata(&mut meta, &args.model);
    meta.push("samples", report.samples.to_string());
    meta.push("seed", report.seed.to_string());
    options_metadata(&mut meta, &opts);

    let csv_rows = report
        .rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{}",
                r.n,
                r.evaluated,
                r.skipped,
                fmt_float(r.mean_gradient_deviation),
                fmt_float(r.max_residual)
            )
        })
        .collect();
    let out = Report {
        metadata: &meta,
        csv_header: "n,evaluated,skipped,mean_gradient_deviation,max_residual",
        csv_rows,
        rows: &report.rows,
    };
    let text = out.render(args.output.format).map_err(map_json)?;
    emit(&args.output, &text).map_err(map_io)
}

// ---------------------------------------------------------------- ito

fn cmd_ito(args: ItoArgs) -> Result<(), CliError> {
    let model = ExprModel::parse(&args.function, 1)
        .map_err(|e| CliError::Usage(format!("cannot parse --function: {e}")))?;
    let opts = args.tolerances.root_options();
    let report = ito_sim(&model, args.t_end, args.steps, args.paths, args.seed, &opts)
        .map_err(map_stochastic)?;

    let mut meta = Metadata::new();
    meta.push("function", args.function.clone());
    meta.push("dim", "1");
    meta.push("t_end", report.t_end.to_string());
    meta.push("steps", report.steps.to_string());
    meta.push("paths", report.paths.to_string());
    meta.push("seed", report.seed.to_string());
    meta.push_float("mean_quadratic_variation", report.mean_quadratic_variation);
    options_metadata(&mut meta, &opts);

    let csv_rows = report
        .rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{},{},{}",
                r.path,
                fmt_float(r.delta_f),
                fmt_float(r.first_order_sum),
                fmt_float(r.second_order_sum),
                fmt_float(r.residual),
                fmt_float(r.drift_comparison),
                fmt_float(r.quadratic_variation),
                r.zero_start_steps
            )
        })
        .collect();
    let out = Report {
        metadata: &meta,
        csv_header: "path,delta_f,first_order_sum,second_order_sum,residual,drift_comparison,\
                     quadratic_variation,zero_start_steps",
        csv_rows,
        rows: &report.rows,
    };
    let text = out.render(args.output.format).map_err(map_json)?;
    emit(&args.output, &text).map_err(map_io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_one_numerical_exit_two() {
        assert_eq!(CliError::Usage("bad".into()).exit_code(), 1);
        assert_eq!(CliError::Io("bad".into()).exit_code(), 1);
        assert_eq!(CliError::Numerical("bad".into()).exit_code(), 2);
    }

    #[test]
    fn root_error_mapping_follows_the_contract() {
        let usage = map_root(RootError::InvalidParameter("x".into()));
        assert_eq!(usage.exit_code(), 1);
        let numerical = map_root(RootError::NoRootFound { scan_points: 8 });
        assert_eq!(numerical.exit_code(), 2);
    }

    #[test]
    fn presets_pin_the_tangency_location() {
        let standard = preset_for(Variant::Standard);
        let reflected = preset_for(Variant::Reflected);
        assert!((standard.x0 - 0.6299605249474366).abs() < 1e-15);
        assert_eq!(standard.x0, -reflected.x0);
    }
}
